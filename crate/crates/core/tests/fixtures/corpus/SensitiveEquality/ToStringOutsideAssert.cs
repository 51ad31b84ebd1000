using Xunit;

namespace Fixtures.SensitiveEquality
{
    public class ToStringOutsideAssert
    {
        [Fact]
        public void Money_RendersText()
        {
            var money = new Money(amount, currency);
            var text = money.ToString();
            Assert.Equal(expectedText, text);
        }

        [Fact]
        public void Money_KeepsAmount()
        {
            var money = new Money(amount, currency);
            var value = money.Amount;
            Assert.Equal(amount, value);
        }
    }
}
