#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpoxdash/analytics.hpp"
#include "mpoxdash/ingest.hpp"
#include "mpoxdash/model.hpp"

namespace mpoxdash {

struct DatasetSpec {
  std::filesystem::path path;
  std::optional<DatasetFormat> format;
  ColumnMap columns;
};

struct TopicSpec {
  ClusterLabel label;
  std::filesystem::path lexicon_path;
};

/// Everything the CLI and the HTTP service read from the JSON config file.
/// Relative paths are resolved against the config file's directory.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8080;
  std::filesystem::path corpus_path;
  std::vector<DatasetSpec> datasets;
  std::vector<std::string> keywords{"mpox"};
  std::string capture_wrapper_key{kDefaultCaptureWrapperKey};
  std::filesystem::path sentiment_lexicon_path;
  double sentiment_tau = 0.05;
  std::vector<TopicSpec> topics;
  std::size_t per_page_max = 200;
  std::string cors_origin;
  std::filesystem::path static_dir;
  unsigned label_threads = 1;
};

inline constexpr std::string_view kBindEnvVar = "MPOXDASH_BIND";

/// Throws ConfigError naming the offending key.
ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

/// Applies a `host:port` bind string. Throws ConfigError("bind").
void apply_bind(ServiceConfig& config, std::string_view host_port);

/// Checks that every path the service depends on exists. Throws ConfigError.
void check_serve_paths(const ServiceConfig& config);

/// Ingest options for one dataset entry, or config-wide defaults when
/// `dataset` is null (paths given on the command line).
IngestOptions ingest_options_for(const ServiceConfig& config, const DatasetSpec* dataset = nullptr);

struct Labeling {
  Lexicon sentiment;
  double tau;
  TopicRuleSet topics;
};

/// Loads the sentiment and topic lexicons. Throws ConfigError naming the key.
Labeling load_labeling(const ServiceConfig& config);

}  // namespace mpoxdash
