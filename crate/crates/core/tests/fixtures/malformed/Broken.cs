using Xunit;

namespace Fixtures.Malformed
{
    public class Broken
    {
        [Fact]
        public void Unterminated(
        {
            var x = new Thing(;
            Assert.Equal(x, "oops
