using System;
using System.Threading;
using Xunit;

namespace Fixtures.Mixed
{
    public class OrderServiceTests
    {
        private readonly OrderService _service;
        private readonly InMemoryRepository _repository;

        public OrderServiceTests()
        {
            _repository = new InMemoryRepository();
            _service = new OrderService(_repository);
        }

        [Fact]
        public void Place_StoresOrder()
        {
            var order = new Order(customerId, items);
            _service.Place(order);
            Assert.True(_repository.Contains(order.Id), "order should be stored");
        }

        [Fact]
        public void Place_ThenCancel_MarksCancelled()
        {
            var order = new Order(customerId, items);
            _service.Place(order);
            _service.Cancel(order.Id);
            Assert.Equal(OrderStatus.Cancelled, order.Status);
            Assert.Equal(5, order.History.Count);
        }

        [Fact(Skip = "flaky on CI")]
        public void Place_RetriesAfterTimeout()
        {
            var order = new Order(customerId, items);
            Thread.Sleep(200);
            _service.Place(order);
            Console.WriteLine(order.Id);
        }
    }
}
