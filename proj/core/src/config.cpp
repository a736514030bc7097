#include "mpoxdash/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mpoxdash/error.hpp"

namespace mpoxdash {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

const std::string& need_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get_ref<const std::string&>();
}

std::uint64_t need_uint(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> known) {
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (auto name : known) ok = ok || name == k;
    if (!ok) throw ConfigError(prefix + k, "unknown key");
  }
}

}  // namespace

ServiceConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config", "not a JSON object");
  reject_unknown(doc, "",
                 {"bind", "corpus_path", "datasets", "keywords", "capture_wrapper_key", "sentiment", "topics",
                  "per_page_max", "cors_origin", "static_dir", "label_threads"});

  ServiceConfig cfg;
  if (doc.contains("bind")) apply_bind(cfg, need_string(doc["bind"], "bind"));

  if (!doc.contains("corpus_path")) throw ConfigError("corpus_path", "required");
  cfg.corpus_path = resolve(base_dir, need_string(doc["corpus_path"], "corpus_path"));

  if (doc.contains("keywords")) {
    const auto& kw = doc["keywords"];
    if (!kw.is_array()) throw ConfigError("keywords", "expected an array of strings");
    cfg.keywords.clear();
    for (const auto& k : kw) cfg.keywords.push_back(need_string(k, "keywords"));
    KeywordSet check(cfg.keywords);
  }

  if (doc.contains("capture_wrapper_key")) {
    cfg.capture_wrapper_key = need_string(doc["capture_wrapper_key"], "capture_wrapper_key");
    if (cfg.capture_wrapper_key.empty()) throw ConfigError("capture_wrapper_key", "must not be empty");
  }

  if (doc.contains("datasets")) {
    const auto& ds = doc["datasets"];
    if (!ds.is_array()) throw ConfigError("datasets", "expected an array");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string key = "datasets[" + std::to_string(i) + "]";
      const auto& d = ds[i];
      if (!d.is_object()) throw ConfigError(key, "expected an object");
      reject_unknown(d, key + ".", {"path", "format", "column_map"});
      DatasetSpec spec;
      if (!d.contains("path")) throw ConfigError(key + ".path", "required");
      spec.path = resolve(base_dir, need_string(d["path"], key + ".path"));
      if (d.contains("format")) {
        spec.format = source_from_string(need_string(d["format"], key + ".format"));
        if (!spec.format)
          throw ConfigError(key + ".format", "expected stream_sample, hydrated_csv or capture_ndjson");
      }
      if (d.contains("column_map")) {
        const auto& cm = d["column_map"];
        if (!cm.is_object()) throw ConfigError(key + ".column_map", "expected an object");
        std::map<std::string, std::string> overrides;
        for (const auto& [field, path] : cm.items()) overrides[field] = need_string(path, key + ".column_map." + field);
        try {
          spec.columns = ColumnMap::with_overrides(overrides);
        } catch (const ConfigError& e) {
          throw ConfigError(key + ".column_map", std::string(e.what()).substr(e.key().size() + 2));
        }
      }
      cfg.datasets.push_back(std::move(spec));
    }
  }

  if (doc.contains("sentiment")) {
    const auto& s = doc["sentiment"];
    if (!s.is_object()) throw ConfigError("sentiment", "expected an object");
    reject_unknown(s, "sentiment.", {"lexicon_path", "tau"});
    if (s.contains("lexicon_path"))
      cfg.sentiment_lexicon_path = resolve(base_dir, need_string(s["lexicon_path"], "sentiment.lexicon_path"));
    if (s.contains("tau")) {
      if (!s["tau"].is_number()) throw ConfigError("sentiment.tau", "expected a number");
      cfg.sentiment_tau = s["tau"].get<double>();
      if (!(cfg.sentiment_tau > 0)) throw ConfigError("sentiment.tau", "must be > 0");
    }
  }

  if (doc.contains("topics")) {
    const auto& ts = doc["topics"];
    if (!ts.is_array()) throw ConfigError("topics", "expected an array");
    std::set<ClusterLabel> seen;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string key = "topics[" + std::to_string(i) + "]";
      const auto& t = ts[i];
      if (!t.is_object() || !t.contains("label") || !t.contains("lexicon_path"))
        throw ConfigError(key, "expected {label, lexicon_path}");
      reject_unknown(t, key + ".", {"label", "lexicon_path"});
      auto label = cluster_label_from_string(need_string(t["label"], key + ".label"));
      if (!label || *label == ClusterLabel::uncategorized)
        throw ConfigError(key + ".label", "expected cynicism, covid_comparison, government_action or misinformation");
      if (!seen.insert(*label).second) throw ConfigError(key + ".label", "label listed twice");
      cfg.topics.push_back({*label, resolve(base_dir, need_string(t["lexicon_path"], key + ".lexicon_path"))});
    }
  }

  if (doc.contains("per_page_max")) {
    const auto v = need_uint(doc["per_page_max"], "per_page_max");
    if (v < 1 || v > 200) throw ConfigError("per_page_max", "must be between 1 and 200");
    cfg.per_page_max = v;
  }
  if (doc.contains("cors_origin")) cfg.cors_origin = need_string(doc["cors_origin"], "cors_origin");
  if (doc.contains("static_dir")) cfg.static_dir = resolve(base_dir, need_string(doc["static_dir"], "static_dir"));
  if (doc.contains("label_threads")) {
    const auto v = need_uint(doc["label_threads"], "label_threads");
    if (v < 1 || v > 256) throw ConfigError("label_threads", "must be between 1 and 256");
    cfg.label_threads = static_cast<unsigned>(v);
  }
  return cfg;
}

ServiceConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void apply_bind(ServiceConfig& config, std::string_view host_port) {
  const auto colon = host_port.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw ConfigError("bind", "expected host:port");
  const auto port_text = host_port.substr(colon + 1);
  long port = -1;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 1 ||
      port > 65535)
    throw ConfigError("bind", "port must be an integer in [1, 65535]");
  std::string host(host_port.substr(0, colon));
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  config.host = std::move(host);
  config.port = static_cast<std::uint16_t>(port);
}

void check_serve_paths(const ServiceConfig& config) {
  if (!fs::is_directory(config.corpus_path))
    throw ConfigError("corpus_path", config.corpus_path.string() + " is not a directory");
  if (config.sentiment_lexicon_path.empty()) throw ConfigError("sentiment.lexicon_path", "required");
  if (!fs::is_regular_file(config.sentiment_lexicon_path))
    throw ConfigError("sentiment.lexicon_path", config.sentiment_lexicon_path.string() + " not found");
  if (config.topics.empty()) throw ConfigError("topics", "at least one topic rule required");
  for (std::size_t i = 0; i < config.topics.size(); ++i)
    if (!fs::is_regular_file(config.topics[i].lexicon_path))
      throw ConfigError("topics[" + std::to_string(i) + "].lexicon_path",
                        config.topics[i].lexicon_path.string() + " not found");
  if (!config.static_dir.empty() && !fs::is_directory(config.static_dir))
    throw ConfigError("static_dir", config.static_dir.string() + " is not a directory");
}

IngestOptions ingest_options_for(const ServiceConfig& config, const DatasetSpec* dataset) {
  IngestOptions opts{KeywordSet(config.keywords), ColumnMap{}, std::nullopt, config.capture_wrapper_key};
  if (dataset != nullptr) {
    opts.columns = dataset->columns;
    opts.format = dataset->format;
  }
  return opts;
}

Labeling load_labeling(const ServiceConfig& config) {
  if (config.sentiment_lexicon_path.empty()) throw ConfigError("sentiment.lexicon_path", "required");
  if (config.topics.empty()) throw ConfigError("topics", "at least one topic rule required");
  auto load = [](const fs::path& path, LexiconKind kind, const std::string& key) {
    try {
      return load_lexicon(path, kind);
    } catch (const IoError& e) {
      throw ConfigError(key, e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(key, e.what());
    }
  };
  Lexicon sentiment = load(config.sentiment_lexicon_path, LexiconKind::sentiment, "sentiment.lexicon_path");
  std::vector<TopicRuleSet::Rule> rules;
  for (std::size_t i = 0; i < config.topics.size(); ++i) {
    const auto& t = config.topics[i];
    rules.emplace_back(t.label, load(t.lexicon_path, LexiconKind::topic,
                                     "topics[" + std::to_string(i) + "].lexicon_path"));
  }
  return {std::move(sentiment), config.sentiment_tau, TopicRuleSet(std::move(rules))};
}

}  // namespace mpoxdash
