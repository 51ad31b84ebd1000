using Xunit;

namespace Fixtures.ObscureInLineSetup
{
    public class ElevenLocals
    {
        [Fact]
        public void Register_BuildsCustomer()
        {
            var street = "Main Street";
            var number = "12a";
            var city = "Springfield";
            var zip = "12345";
            var country = "US";
            var address = new Address(street, number, city, zip, country);
            var first = "Ada";
            var last = "Lovelace";
            var email = "ada@example.com";
            var request = new RegistrationRequest(first, last, email, address);
            var customer = Registrar.Register(request);
            Assert.NotNull(customer);
        }
    }
}
