#include "emaviz/service/http_server.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <thread>

#include <httplib.h>

namespace emaviz::service {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      HttpRequest r;
      r.method = req.method;
      r.path = req.path;
      r.body = req.body;
      for (const auto& [k, v] : req.params) r.query.emplace(k, v);
      for (const auto& [k, v] : req.headers) {
        std::string key = k;
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        r.headers.emplace(std::move(key), v);
      }
      const auto out = service.handle(r);
      res.status = out.status;
      for (const auto& [k, v] : out.headers) res.set_header(k, v);
      res.set_content(out.body, out.content_type);
    };
    server.Get(R"(/api/.*)", handler);
    server.Post(R"(/api/.*)", handler);
    server.Put(R"(/api/.*)", handler);
    server.Delete(R"(/api/.*)", handler);
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

struct MinuteTicker::Impl {
  std::mutex mutex;
  std::condition_variable cv;
  bool stopping = false;
  std::thread thread;
};

MinuteTicker::MinuteTicker(std::function<void()> tick) : impl_(std::make_unique<Impl>()) {
  impl_->thread = std::thread([impl = impl_.get(), tick = std::move(tick)] {
    using namespace std::chrono;
    std::unique_lock lock(impl->mutex);
    while (!impl->stopping) {
      const auto next = ceil<minutes>(system_clock::now() + milliseconds(1));
      if (impl->cv.wait_until(lock, next, [impl] { return impl->stopping; })) break;
      lock.unlock();
      tick();
      lock.lock();
    }
  });
}

MinuteTicker::~MinuteTicker() { stop(); }

void MinuteTicker::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace emaviz::service
