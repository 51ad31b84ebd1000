using Xunit;

namespace Fixtures.EmptyTest
{
    public class CommentedOut
    {
        [Fact]
        public void Export_WritesFile()
        {
            // var exporter = new CsvExporter();
            // exporter.Export(rows, path);
            /* Assert.True(File.Exists(path)); */
        }
    }
}
