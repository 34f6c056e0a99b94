#include "riskgate/sidecar/server.hpp"

#include <cstdlib>

#include <httplib.h>

#include "riskgate/core/errors.hpp"

namespace riskgate {

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, reply.content_type);
}

}  // namespace

std::string listen_address_from_env(const std::string& fallback) {
  const char* env = std::getenv("RISKGATE_ADDR");
  return env && *env ? std::string(env) : fallback;
}

std::pair<std::string, int> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size())
    throw Error(Errc::invalid_config, "address '" + address + "' must be host:port");
  std::string host = address.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(address.substr(colon + 1), &used);
    if (used != address.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(Errc::invalid_config, "address '" + address + "' has an invalid port");
  }
  if (port < 0 || port > 65535) throw Error(Errc::invalid_config, "port out of range in '" + address + "'");
  if (host.empty()) host = "0.0.0.0";
  return {host, port};
}

SidecarServer::SidecarServer(ScoringService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_score(req.body));
  });
  server_->Post("/v1/logins", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_record(req.body));
  });
  server_->Get(R"(/v1/users/([^/]+)/summary)", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.handle_summary(httplib::detail::decode_url(req.matches[1], false)));
  });
  server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    send(res, service_.handle_health());
  });
}

SidecarServer::~SidecarServer() { stop(); }

int SidecarServer::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void SidecarServer::run(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  server_->listen_after_bind();
}

void SidecarServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace riskgate
