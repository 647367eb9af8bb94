#include "wntags/service/server.hpp"

#include <atomic>

#include "httplib.h"
#include "wntags/util/strings.hpp"

namespace wntags::service {

struct Server::Impl {
  Api* api;
  httplib::Server http;
  bool bound = false;
};

namespace {

void forward(Api& api, const httplib::Request& in, httplib::Response& out) {
  Request req;
  req.method = in.method;
  req.path = in.path;
  for (const auto& [k, v] : in.params) req.params.emplace(k, v);
  req.body = in.body;
  req.content_type = in.get_header_value("Content-Type");
  const auto res = api.handle(req);
  out.status = res.status;
  for (const auto& [k, v] : res.headers) {
    if (k != "Content-Type") out.set_header(k, v);
  }
  out.set_content(res.body, "application/json");
}

}  // namespace

Server::Server(Api& api) : impl_(std::make_unique<Impl>()) {
  impl_->api = &api;
  // httplib also sets SO_REUSEPORT, which would let a second server share an occupied port.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  const auto handler = [this](const httplib::Request& in, httplib::Response& out) { forward(*impl_->api, in, out); };
  impl_->http.Get(".*", handler);
  impl_->http.Post(".*", handler);
  impl_->http.Put(".*", handler);
  impl_->http.Delete(".*", handler);
  impl_->http.Patch(".*", handler);
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (impl_->http.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0) {
    throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound;
}

void Server::run() {
  if (!impl_->bound) throw Error(Errc::io_error, "server is not bound");
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

std::pair<std::string, int> parse_bind_address(const std::string& address) {
  std::string host = "127.0.0.1";
  std::string_view port_text = address;
  if (const auto colon = address.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = address.substr(0, colon);
    port_text = std::string_view(address).substr(colon + 1);
  }
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  const auto port = util::parse_int<int>(port_text);
  if (!port || *port < 0 || *port > 65535) {
    throw Error(Errc::invalid_argument, "bind address '" + address + "' needs a port in [0, 65535]");
  }
  return {host, *port};
}

}  // namespace wntags::service
