using Xunit;

namespace Fixtures.AssertionRoulette
{
    public class TwoUndocumented
    {
        [Fact]
        public void Parse_SetsNameAndAge()
        {
            var expected = new Person("Ada", 36);
            var actual = PersonParser.Parse("Ada;36");
            Assert.Equal(expected.Name, actual.Name);
            Assert.Equal(expected.Age, actual.Age);
        }
    }
}
