using Xunit;

namespace Fixtures.EmptyTest
{
    public class OneStatement
    {
        [Fact]
        public void Set_RaisesFlag()
        {
            var flag = new Flag();
            flag.Set();
            Assert.True(flag.IsSet);
        }

        [Fact]
        public void Clear_LowersFlag()
        {
            var flag = new Flag();
            flag.Clear();
            Assert.False(flag.IsSet);
        }

        [Fact]
        public void NewFlag_IsLowered() => Assert.False(new Flag().IsSet);
    }
}
