#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "mpoxdash/config.hpp"

namespace mpoxdash {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request handling for the dashboard API, independent of any socket layer.
/// Every request reads one immutable snapshot (corpus, index, per-tweet
/// labels); reload() builds a new one and swaps it in, so requests already
/// running finish on the old one.
class Api {
 public:
  /// Loads lexicons, opens the corpus and builds the first snapshot.
  explicit Api(ServiceConfig config);
  ~Api();

  /// Routes `method path?params` to a handler. Unknown routes give 404,
  /// known routes with the wrong method give 405; both with a JSON body.
  ApiResponse handle(std::string_view method, std::string_view path, const QueryParams& params);

  ApiResponse health() const;
  ApiResponse stats() const;
  ApiResponse search(const QueryParams& params) const;
  ApiResponse tweet(std::string_view id) const;
  ApiResponse cluster_timeseries(const QueryParams& params) const;
  ApiResponse trends(const QueryParams& params) const;
  ApiResponse locations(const QueryParams& params) const;
  ApiResponse volume(const QueryParams& params) const;
  ApiResponse reload();

  std::string snapshot_id() const;
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct State;
  std::shared_ptr<const State> current() const;
  std::shared_ptr<const State> build_state() const;

  ServiceConfig config_;
  Labeling labeling_;
  mutable std::mutex mu_;
  std::mutex reload_mu_;
  std::shared_ptr<const State> state_;
};

/// cpp-httplib front end for an Api.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to the configured host:port. Returns false on failure.
  bool bind();
  /// Binds to an ephemeral port on `host` and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Serves until stop(). Requires a successful bind.
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mpoxdash
