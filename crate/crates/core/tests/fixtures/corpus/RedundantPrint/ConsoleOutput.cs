using System;
using Xunit;

namespace Fixtures.RedundantPrint
{
    public class ConsoleOutput
    {
        [Fact]
        public void Format_RendersCurrency()
        {
            var formatted = MoneyFormatter.Format(amount);
            Console.WriteLine(formatted);
            Assert.Equal(expectedText, formatted);
        }
    }
}
