using Xunit;

namespace Fixtures.MagicNumber
{
    public class LiteralExpected
    {
        [Fact]
        public void Ask_ReturnsAnswer()
        {
            var oracle = new Oracle();
            var answer = oracle.Ask(question);
            Assert.Equal(42, answer);
        }
    }
}
