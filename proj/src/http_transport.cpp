#include <cstdlib>

#include "httplib.h"
#include "statute/error.hpp"
#include "statute/reasoner.hpp"

namespace statute {

namespace {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(const EndpointConfig& config) : config_(config) {
    const auto scheme = config.url.find("://");
    if (scheme == std::string::npos || config.url.compare(0, scheme, "http") != 0) {
      throw Error(ErrorCode::TransportFailure,
                  "endpoint must be an http:// address, got '" + config.url + "'");
    }
    const auto slash = config.url.find('/', scheme + 3);
    origin_ = config.url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config.url.substr(slash);
  }

  std::string post(const std::string& body) override {
    httplib::Client client(origin_);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (const char* token = std::getenv(config_.token_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      throw Error(ErrorCode::TransportFailure,
                  "request to " + config_.url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::TransportFailure,
                  config_.url + " answered HTTP " + std::to_string(res->status));
    }
    return res->body;
  }

 private:
  EndpointConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const EndpointConfig& config) {
  return std::make_unique<HttpTransport>(config);
}

}  // namespace statute
