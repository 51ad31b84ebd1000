using System;
using Xunit;

namespace Fixtures.ConstructorInitialization
{
    public class DisposableSuite : IDisposable
    {
        private readonly TempDirectory _directory;

        public DisposableSuite()
        {
            _directory = new TempDirectory();
        }

        public void Dispose()
        {
            _directory.Delete();
        }

        [Fact]
        public void Create_MakesDirectory()
        {
            Assert.True(_directory.Exists);
        }
    }
}
