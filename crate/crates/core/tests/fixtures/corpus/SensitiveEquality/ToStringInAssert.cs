using Xunit;

namespace Fixtures.SensitiveEquality
{
    public class ToStringInAssert
    {
        [Fact]
        public void Money_RendersAmountAndCurrency()
        {
            var money = new Money(amount, currency);
            Assert.Equal(expectedText, money.ToString());
        }
    }
}
