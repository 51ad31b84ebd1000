using Xunit;

namespace Fixtures.RedundantAssertion
{
    public class MeaningfulAssertions
    {
        [Fact]
        public void Normalize_TrimsInput()
        {
            var result = Normalizer.Normalize(input);
            Assert.Equal(expected, result);
        }

        [Fact]
        public void Normalize_ReturnsNewInstance()
        {
            var result = Normalizer.Normalize(input);
            Assert.NotSame(input, result);
        }
    }
}
