#include "mpoxdash/service.hpp"

#include <charconv>
#include <iostream>

#include "httplib.h"
#include "json.hpp"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/error.hpp"
#include "mpoxdash/search.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string dump(const ordered_json& doc) { return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace); }

ApiResponse error_response(int status, const std::vector<FieldError>& errors, const std::string& snapshot_id) {
  ordered_json doc;
  doc["errors"] = ordered_json::array();
  for (const auto& e : errors) doc["errors"].push_back({{"field", e.field}, {"message", e.message}});
  doc["snapshot_id"] = snapshot_id;
  return {status, dump(doc)};
}

std::optional<std::string> first(const QueryParams& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> all_of(const QueryParams& params, const std::string& key) {
  std::vector<std::string> out;
  auto [lo, hi] = params.equal_range(key);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

struct RangeParse {
  std::optional<DateRange> range;  // absent when the corpus is empty and no bound was given
};

// Reads an inclusive day range from two params. Missing bounds default to the
// corpus's first/last day.
RangeParse read_range(const QueryParams& params, const std::string& from_key, const std::string& to_key,
                      const CorpusStats& stats, std::vector<FieldError>& errors) {
  std::optional<Day> from, to;
  bool ok = true;
  if (auto v = first(params, from_key)) {
    if (!(from = parse_day(*v))) {
      errors.push_back({from_key, "expected YYYY-MM-DD"});
      ok = false;
    }
  }
  if (auto v = first(params, to_key)) {
    if (!(to = parse_day(*v))) {
      errors.push_back({to_key, "expected YYYY-MM-DD"});
      ok = false;
    }
  }
  if (!ok) return {};
  if (!from) from = stats.date_min;
  if (!to) to = stats.date_max;
  if (!from && !to) return {};
  if (!from) from = *to;
  if (!to) to = *from;
  if (*from > *to) {
    errors.push_back({from_key, "must not be after " + to_key});
    return {};
  }
  return {DateRange(*from, *to)};
}

ordered_json encode_tweet(const Tweet& t, ClusterLabel label, const SentimentScore& sentiment) {
  ordered_json doc = ordered_json::parse(to_canonical_json(t));
  doc["cluster_label"] = std::string(to_string(label));
  doc["sentiment"] = {{"raw", sentiment.raw}, {"polarity", std::string(to_string(sentiment.polarity))}};
  return doc;
}

ordered_json encode_range(const DateRange& r) { return {{"from", format_day(r.from())}, {"to", format_day(r.to())}}; }

bool known_route(std::string_view path) {
  static constexpr std::string_view kRoutes[] = {"/api/health", "/api/stats",  "/api/search",
                                                 "/api/clusters/timeseries", "/api/trends", "/api/locations",
                                                 "/api/volume", "/api/reload"};
  for (auto r : kRoutes)
    if (r == path) return true;
  return path.rfind("/api/tweets/", 0) == 0 && path.size() > 12;
}

}  // namespace

struct Api::State {
  std::shared_ptr<const CorpusSnapshot> snapshot;
  InvertedIndex index;
  std::vector<ClusterLabel> labels;
  std::vector<SentimentScore> sentiments;
};

Api::Api(ServiceConfig config) : config_(std::move(config)), labeling_(load_labeling(config_)) {
  state_ = build_state();
}

Api::~Api() = default;

std::shared_ptr<const Api::State> Api::build_state() const {
  auto corpus = Corpus::open(config_.corpus_path);
  auto state = std::make_shared<State>();
  state->snapshot = corpus.snapshot();
  state->index = InvertedIndex(state->snapshot);
  const auto& tweets = state->snapshot->tweets();
  LexiconTopicLabeler labeler(labeling_.topics);
  state->labels = label_all(tweets, labeler, config_.label_threads);
  state->sentiments.reserve(tweets.size());
  for (const auto& t : tweets) state->sentiments.push_back(score_sentiment(t, labeling_.sentiment, labeling_.tau));
  return state;
}

std::shared_ptr<const Api::State> Api::current() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::string Api::snapshot_id() const { return current()->snapshot->id(); }

ApiResponse Api::handle(std::string_view method, std::string_view path, const QueryParams& params) {
  const auto sid = snapshot_id();
  if (!known_route(path)) return error_response(404, {{"path", "unknown route"}}, sid);
  const bool is_get = method == "GET" || method == "HEAD";
  if (path == "/api/reload") {
    if (method != "POST") return error_response(405, {{"method", "use POST"}}, sid);
    return reload();
  }
  if (!is_get) return error_response(405, {{"method", "use GET"}}, sid);

  try {
    if (path == "/api/health") return health();
    if (path == "/api/stats") return stats();
    if (path == "/api/search") return search(params);
    if (path == "/api/clusters/timeseries") return cluster_timeseries(params);
    if (path == "/api/trends") return trends(params);
    if (path == "/api/locations") return locations(params);
    if (path == "/api/volume") return volume(params);
    return tweet(path.substr(std::string_view("/api/tweets/").size()));
  } catch (const ValidationError& e) {
    return error_response(400, e.errors(), sid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << method << ' ' << path << ": " << e.what() << '\n';
    return error_response(500, {{"server", e.what()}}, sid);
  }
}

ApiResponse Api::health() const {
  const auto s = current();
  ordered_json doc;
  doc["status"] = "ok";
  doc["corpus_total"] = s->snapshot->size();
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::stats() const {
  const auto s = current();
  const auto& st = s->snapshot->stats();
  ordered_json doc;
  doc["total"] = st.total;
  doc["date_min"] = st.date_min ? ordered_json(format_day(*st.date_min)) : ordered_json(nullptr);
  doc["date_max"] = st.date_max ? ordered_json(format_day(*st.date_max)) : ordered_json(nullptr);
  doc["per_day"] = ordered_json::array();
  for (const auto& [day, n] : st.per_day) doc["per_day"].push_back({{"day", format_day(day)}, {"count", n}});
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::search(const QueryParams& params) const {
  const auto s = current();
  SearchRequest req;
  req.keywords = all_of(params, "k");
  req.combine = first(params, "combine");
  req.min_likes = first(params, "min_likes");
  req.min_replies = first(params, "min_replies");
  req.min_retweets = first(params, "min_retweets");
  req.from = first(params, "from");
  req.to = first(params, "to");
  req.sort = first(params, "sort");
  req.page = first(params, "page");
  req.per_page = first(params, "per_page");
  const Query query = validate_query(req, config_.per_page_max);
  const ResultPage page = execute(s->index, query);

  ordered_json doc;
  doc["total_matches"] = page.total_matches;
  doc["page"] = page.page;
  doc["per_page"] = page.per_page;
  doc["items"] = ordered_json::array();
  const auto& tweets = s->snapshot->tweets();
  for (DocId d : page.items) doc["items"].push_back(encode_tweet(tweets[d], s->labels[d], s->sentiments[d]));
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::tweet(std::string_view id) const {
  const auto s = current();
  const auto pos = s->snapshot->find(id);
  if (!pos) return error_response(404, {{"id", "no tweet with id '" + std::string(id) + "'"}}, s->snapshot->id());
  ordered_json doc = encode_tweet(s->snapshot->tweets()[*pos], s->labels[*pos], s->sentiments[*pos]);
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::cluster_timeseries(const QueryParams& params) const {
  const auto s = current();
  std::vector<FieldError> errors;
  const auto range = read_range(params, "from", "to", s->snapshot->stats(), errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  ordered_json doc;
  doc["points"] = ordered_json::array();
  if (range.range) {
    for (const auto& p : daily_cluster_proportions(*s->snapshot, s->labels, *range.range))
      doc["points"].push_back({{"day", format_day(p.day)},
                               {"label", std::string(to_string(p.label))},
                               {"proportion", p.proportion},
                               {"count", p.count}});
  }
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::trends(const QueryParams& params) const {
  const auto s = current();
  std::vector<FieldError> errors;
  const auto keywords = all_of(params, "k");
  if (keywords.size() != 1) errors.push_back({"k", "exactly one keyword required"});
  const auto range = read_range(params, "from", "to", s->snapshot->stats(), errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  ordered_json doc;
  auto toks = tokenize(keywords.front());
  doc["keyword"] = toks.size() == 1 ? toks.front() : keywords.front();
  doc["points"] = ordered_json::array();
  if (range.range) {
    for (const auto& p : keyword_trend(*s->snapshot, keywords.front(), *range.range))
      doc["points"].push_back({{"day", format_day(p.day)}, {"count", p.count}});
  } else if (toks.size() != 1) {
    throw ValidationError("k", "single token required");
  }
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::locations(const QueryParams& params) const {
  const auto s = current();
  std::vector<FieldError> errors;
  std::size_t top_n = 10;
  if (auto v = first(params, "top_n")) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
    if (v->empty() || ec != std::errc{} || ptr != v->data() + v->size() || n < 1)
      errors.push_back({"top_n", "must be a positive integer"});
    else
      top_n = n;
  }
  const auto range = read_range(params, "from", "to", s->snapshot->stats(), errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  LocationBreakdown lb;
  if (range.range) lb = location_breakdown(*s->snapshot, *range.range, top_n);
  ordered_json doc;
  doc["entries"] = ordered_json::array();
  for (const auto& e : lb.entries) doc["entries"].push_back({{"location", e.location}, {"count", e.count}});
  doc["none_count"] = lb.none_count;
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::volume(const QueryParams& params) const {
  const auto s = current();
  std::vector<FieldError> errors;
  auto need_day = [&](const char* key) -> std::optional<Day> {
    auto v = first(params, key);
    if (!v) {
      errors.push_back({key, "required"});
      return std::nullopt;
    }
    auto d = parse_day(*v);
    if (!d) errors.push_back({key, "expected YYYY-MM-DD"});
    return d;
  };
  const auto a_from = need_day("a_from");
  const auto a_to = need_day("a_to");
  const auto b_from = need_day("b_from");
  const auto b_to = need_day("b_to");
  if (a_from && a_to && *a_from > *a_to) errors.push_back({"a_from", "must not be after a_to"});
  if (b_from && b_to && *b_from > *b_to) errors.push_back({"b_from", "must not be after b_to"});
  if (!errors.empty()) throw ValidationError(std::move(errors));

  const auto v = volume_comparison(*s->snapshot, DateRange(*a_from, *a_to), DateRange(*b_from, *b_to));
  ordered_json doc;
  doc["period_a"] = encode_range(v.period_a);
  doc["period_b"] = encode_range(v.period_b);
  doc["count_a"] = v.count_a;
  doc["count_b"] = v.count_b;
  doc["ratio"] = v.ratio ? ordered_json(*v.ratio) : ordered_json(nullptr);
  doc["snapshot_id"] = s->snapshot->id();
  return {200, dump(doc)};
}

ApiResponse Api::reload() {
  std::lock_guard reload_lock(reload_mu_);
  std::shared_ptr<const State> fresh;
  try {
    fresh = build_state();
  } catch (const std::exception& e) {
    std::cerr << "error: reload failed: " << e.what() << '\n';
    return error_response(500, {{"corpus", e.what()}}, snapshot_id());
  }
  {
    std::lock_guard lock(mu_);
    state_ = fresh;
  }
  ordered_json doc;
  doc["status"] = "reloaded";
  doc["corpus_total"] = fresh->snapshot->size();
  doc["snapshot_id"] = fresh->snapshot->id();
  return {200, dump(doc)};
}

struct HttpServer::Impl {
  explicit Impl(Api& a) : api(a) {}
  Api& api;
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>(api)) {
  auto& srv = impl_->server;
  const auto& cfg = api.config();
  if (!cfg.static_dir.empty()) srv.set_mount_point("/", cfg.static_dir.string());

  const std::string cors = cfg.cors_origin;
  auto handler = [this, cors](const httplib::Request& req, httplib::Response& res) {
    if (!cors.empty()) {
      res.set_header("Access-Control-Allow-Origin", cors);
      res.set_header("Vary", "Origin");
    }
    if (req.method == "OPTIONS") {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
      return;
    }
    QueryParams params(req.params.begin(), req.params.end());
    const auto out = impl_->api.handle(req.method, req.path, params);
    res.status = out.status;
    res.set_content(out.body, "application/json; charset=utf-8");
  };
  srv.Get(".*", handler);
  srv.Post(".*", handler);
  srv.Put(".*", handler);
  srv.Delete(".*", handler);
  srv.Patch(".*", handler);
  srv.Options(".*", handler);
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    std::cerr << "error: " << what << '\n';
    res.status = 500;
    res.set_content(error_response(500, {{"server", what}}, "").body, "application/json; charset=utf-8");
  });
}

HttpServer::~HttpServer() = default;

bool HttpServer::bind() {
  const auto& cfg = impl_->api.config();
  return impl_->server.bind_to_port(cfg.host, cfg.port);
}

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mpoxdash
