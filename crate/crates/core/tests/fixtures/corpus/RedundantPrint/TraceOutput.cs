using System.Diagnostics;
using Xunit;

namespace Fixtures.RedundantPrint
{
    public class TraceOutput
    {
        [Fact]
        public void Format_RendersPercent()
        {
            var formatted = PercentFormatter.Format(ratio);
            Trace.WriteLine("dbg");
            Assert.EndsWith("%", formatted);
        }
    }
}
