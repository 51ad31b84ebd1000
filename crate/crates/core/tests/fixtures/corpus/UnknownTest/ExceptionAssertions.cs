using System;
using Xunit;

namespace Fixtures.UnknownTest
{
    public class ExceptionAssertions
    {
        [Fact]
        public void Parse_RejectsNull()
        {
            var parser = new Parser(options);
            Assert.Throws<ArgumentNullException>(() => parser.Parse(null));
        }

        [Fact]
        public void Parse_AcceptsEmpty()
        {
            var parser = new Parser(options);
            var error = Record.Exception(() => parser.Parse(empty));
        }
    }
}
