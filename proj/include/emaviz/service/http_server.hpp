#pragma once

#include <memory>
#include <string>

#include "emaviz/service/service.hpp"

namespace emaviz::service {

/// Binds a Service to a listening socket. The HTTP library stays out of this header.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port`, or to a free port when it is 0. Returns the port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); returns false if the socket failed.
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Calls `tick` at every wall-clock minute boundary until `stop` is signalled.
class MinuteTicker {
 public:
  explicit MinuteTicker(std::function<void()> tick);
  ~MinuteTicker();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emaviz::service
