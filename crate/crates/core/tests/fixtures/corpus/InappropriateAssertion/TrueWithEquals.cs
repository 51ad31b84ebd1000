using Xunit;

namespace Fixtures.InappropriateAssertion
{
    public class TrueWithEquals
    {
        [Fact]
        public void CopyConstructor_ProducesEqualInstance()
        {
            var original = new Invoice(number);
            var copy = new Invoice(original);
            Assert.True(copy.Equals(original));
        }
    }
}
