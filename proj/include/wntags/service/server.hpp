#pragma once

#include <memory>
#include <string>

#include "wntags/service/api.hpp"

namespace wntags::service {

// HTTP/1.1 front end for an Api.
class Server {
 public:
  explicit Server(Api& api);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds host:port; port 0 picks a free one. Returns the bound port.
  // Throws io_error when the address is unavailable.
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires a successful bind().
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Splits "host:port" (or ":port", or "port"). Throws invalid_argument.
std::pair<std::string, int> parse_bind_address(const std::string& address);

}  // namespace wntags::service
