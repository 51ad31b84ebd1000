using System;
using Xunit;

namespace Fixtures.SensitiveEquality
{
    public class FormattedToString
    {
        [Fact]
        public void Date_UsesIsoFormat()
        {
            var date = new DateTime(year, month, day);
            Assert.Equal(expectedText, (date.ToString("yyyy-MM-dd")));
        }
    }
}
