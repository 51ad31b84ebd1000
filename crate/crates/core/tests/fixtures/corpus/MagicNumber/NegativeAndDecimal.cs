using Xunit;

namespace Fixtures.MagicNumber
{
    public class NegativeAndDecimal
    {
        [Fact]
        public void Read_ReturnsAbsoluteZero()
        {
            var sensor = new Thermometer(calibration);
            var reading = sensor.Read();
            Assert.Equal(-273.15, reading.Celsius, precision: 2);
        }
    }
}
