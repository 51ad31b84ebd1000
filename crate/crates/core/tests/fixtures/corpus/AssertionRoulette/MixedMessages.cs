using Xunit;

namespace Fixtures.AssertionRoulette
{
    public class MixedMessages
    {
        [Fact]
        public void Withdraw_UpdatesBalanceAndHistory()
        {
            var account = new Account(openingBalance);
            account.Withdraw(amount);
            Assert.True(account.IsOpen, "account must stay open after a withdrawal");
            Assert.Equal(remaining, account.Balance);
            Assert.Single(account.History);
        }
    }
}
