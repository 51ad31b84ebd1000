using Xunit;

namespace Fixtures.LackOfCohesion
{
    public class SingleCase
    {
        [Fact]
        public void Parse_ReadsDocument()
        {
            var parser = new JsonParser();
            var doc = parser.Parse(text);
            Assert.NotNull(doc);
        }
    }
}
