#pragma once

#include <memory>
#include <string>
#include <thread>

#include "riskgate/sidecar/service.hpp"

namespace httplib {
class Server;
}

namespace riskgate {

// "host:port" from RISKGATE_ADDR, or the fallback.
std::string listen_address_from_env(const std::string& fallback = "127.0.0.1:8080");
// Splits "host:port"; throws InvalidConfig on malformed input.
std::pair<std::string, int> split_address(const std::string& address);

// HTTP front end for a ScoringService:
//   POST /v1/score, POST /v1/logins, GET /v1/users/{id}/summary, GET /v1/health
class SidecarServer {
 public:
  explicit SidecarServer(ScoringService& service);
  ~SidecarServer();
  SidecarServer(const SidecarServer&) = delete;
  SidecarServer& operator=(const SidecarServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws Error(io_error) when binding fails.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  ScoringService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace riskgate
