#include "mpoxdash/analytics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "mpoxdash/error.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {
namespace {

void check_token(const std::string& name, const std::string& token, const std::string& where) {
  auto toks = tokenize(token);
  if (toks.size() != 1 || toks.front() != token)
    throw ConfigError(name, where + "'" + token + "' is not a single lowercase token");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> distinct(std::span<const std::string> tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

constexpr std::size_t kLabelCount = std::size(kAllClusterLabels);

}  // namespace

Lexicon make_lexicon(std::string name, const std::vector<std::pair<std::string, double>>& entries) {
  Lexicon lex{std::move(name), {}};
  for (const auto& [token, weight] : entries) {
    check_token(lex.name, token, "");
    if (!lex.entries.emplace(token, weight).second)
      throw ConfigError(lex.name, "duplicate token '" + token + "'");
  }
  return lex;
}

Lexicon parse_lexicon(std::istream& in, std::string name, LexiconKind kind) {
  Lexicon lex{std::move(name), {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto tab = view.find('\t');
    const std::string token(trim(view.substr(0, tab)));
    double weight = 1.0;
    if (tab == std::string_view::npos) {
      if (kind == LexiconKind::sentiment) throw ConfigError(lex.name, where + "missing weight column");
    } else {
      const auto w = trim(view.substr(tab + 1));
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (w.empty() || ec != std::errc{} || ptr != w.data() + w.size())
        throw ConfigError(lex.name, where + "bad weight '" + std::string(w) + "'");
    }
    check_token(lex.name, token, where);
    if (!lex.entries.emplace(token, weight).second)
      throw ConfigError(lex.name, where + "duplicate token '" + token + "'");
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open lexicon");
  return parse_lexicon(in, path.string(), kind);
}

TopicRuleSet::TopicRuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) throw ConfigError("topics", "at least one topic rule required");
  std::array<bool, kLabelCount> seen{};
  for (const auto& [label, lex] : rules_) {
    if (label == ClusterLabel::uncategorized) throw ConfigError("topics", "'uncategorized' cannot have a lexicon");
    auto& s = seen[static_cast<std::size_t>(label)];
    if (s) throw ConfigError("topics", "label '" + std::string(to_string(label)) + "' listed twice");
    s = true;
  }
}

SentimentScore score_sentiment(std::span<const std::string> tokens, const Lexicon& lexicon, double tau) {
  double sum = 0.0;
  for (const auto& tok : tokens) {
    auto it = lexicon.entries.find(tok);
    if (it != lexicon.entries.end()) sum += it->second;
  }
  const double raw = sum / static_cast<double>(std::max<std::size_t>(1, tokens.size()));
  return {raw, polarity_for(raw, tau)};
}

SentimentScore score_sentiment(const Tweet& tweet, const Lexicon& lexicon, double tau) {
  return score_sentiment(tokenize(tweet.text), lexicon, tau);
}

TopicExplanation explain_topic(std::span<const std::string> tokens, const TopicRuleSet& rules) {
  const auto set = distinct(tokens);
  TopicExplanation out;
  std::size_t best = 0;
  for (const auto& [label, lex] : rules.rules()) {
    TopicMatch m{label, {}};
    for (const auto& tok : set)
      if (lex.entries.count(tok)) m.terms.push_back(tok);
    if (m.terms.size() > best) {
      best = m.terms.size();
      out.label = label;
    }
    out.matches.push_back(std::move(m));
  }
  return out;
}

ClusterLabel label_topic(std::span<const std::string> tokens, const TopicRuleSet& rules) {
  return explain_topic(tokens, rules).label;
}

ClusterLabel label_topic(const Tweet& tweet, const TopicRuleSet& rules) {
  return label_topic(tokenize(tweet.text), rules);
}

std::vector<ClusterLabel> label_all(std::span<const Tweet> tweets, const TopicLabeler& labeler, unsigned threads) {
  std::vector<ClusterLabel> labels(tweets.size(), ClusterLabel::uncategorized);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tweets.size()))));
  if (threads == 1) {
    for (std::size_t i = 0; i < tweets.size(); ++i) labels[i] = labeler.label(tweets[i]);
    return labels;
  }
  const std::size_t chunk = (tweets.size() + threads - 1) / threads;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(tweets.size(), begin + chunk);
      if (begin >= end) break;
      workers.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) labels[i] = labeler.label(tweets[i]);
      });
    }
  }
  return labels;
}

std::vector<DailyClusterPoint> daily_cluster_proportions(const CorpusSnapshot& snapshot,
                                                         std::span<const ClusterLabel> labels,
                                                         const DateRange& range) {
  const auto& all = snapshot.tweets();
  const auto slice = snapshot.scan(range);
  std::vector<DailyClusterPoint> points;
  std::size_t i = slice.empty() ? 0 : static_cast<std::size_t>(slice.data() - all.data());
  const std::size_t end = i + slice.size();
  while (i < end) {
    const Day day = day_of(all[i].created_at);
    std::array<std::uint64_t, kLabelCount> counts{};
    std::uint64_t total = 0;
    for (; i < end && day_of(all[i].created_at) == day; ++i) {
      ++counts[static_cast<std::size_t>(labels[i])];
      ++total;
    }
    for (std::size_t l = 0; l < kLabelCount; ++l) {
      if (counts[l] == 0) continue;
      points.push_back({day, kAllClusterLabels[l], static_cast<double>(counts[l]) / static_cast<double>(total),
                        counts[l]});
    }
  }
  return points;
}

std::vector<DailyClusterPoint> daily_cluster_proportions(const CorpusSnapshot& snapshot, const TopicLabeler& labeler,
                                                         const DateRange& range, unsigned threads) {
  // Labels only the slice in range, then re-bases them onto snapshot positions.
  const auto slice = snapshot.scan(range);
  const auto slice_labels = label_all(slice, labeler, threads);
  std::vector<ClusterLabel> labels(snapshot.size(), ClusterLabel::uncategorized);
  if (!slice.empty()) {
    const auto offset = static_cast<std::size_t>(slice.data() - snapshot.tweets().data());
    std::copy(slice_labels.begin(), slice_labels.end(), labels.begin() + static_cast<std::ptrdiff_t>(offset));
  }
  return daily_cluster_proportions(snapshot, labels, range);
}

std::vector<TrendPoint> keyword_trend(const CorpusSnapshot& snapshot, std::string_view keyword,
                                      const DateRange& range) {
  auto toks = tokenize(keyword);
  std::vector<FieldError> errors;
  if (toks.size() != 1) errors.push_back({"k", "single token required"});
  if (range.length_days() > kMaxSeriesDays)
    errors.push_back({"range", "at most " + std::to_string(kMaxSeriesDays) + " days"});
  if (!errors.empty()) throw ValidationError(std::move(errors));

  std::vector<TrendPoint> series;
  series.reserve(static_cast<std::size_t>(range.length_days()));
  for (Day d = range.from(); d <= range.to(); d += std::chrono::days{1}) series.push_back({d, 0});
  for (const auto& t : snapshot.scan(range)) {
    const auto tweet_tokens = tokenize(t.text);
    if (std::find(tweet_tokens.begin(), tweet_tokens.end(), toks.front()) != tweet_tokens.end())
      ++series[static_cast<std::size_t>((day_of(t.created_at) - range.from()).count())].count;
  }
  return series;
}

LocationBreakdown location_breakdown(const CorpusSnapshot& snapshot, const DateRange& range, std::size_t top_n) {
  if (top_n < 1) throw ValidationError("top_n", "must be at least 1");
  LocationBreakdown out;
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& t : snapshot.scan(range)) {
    auto key = fold_and_trim(t.location);
    if (key.empty()) ++out.none_count;
    else ++counts[std::move(key)];
  }
  for (auto& [loc, n] : counts) out.entries.push_back({loc, n});
  std::sort(out.entries.begin(), out.entries.end(), [](const LocationCount& a, const LocationCount& b) {
    return a.count != b.count ? a.count > b.count : a.location < b.location;
  });
  if (out.entries.size() > top_n) out.entries.resize(top_n);
  return out;
}

VolumeComparison volume_comparison(const CorpusSnapshot& snapshot, const DateRange& period_a,
                                   const DateRange& period_b) {
  const auto& per_day = snapshot.stats().per_day;
  auto sum = [&](const DateRange& r) {
    std::uint64_t n = 0;
    for (auto it = per_day.lower_bound(r.from()); it != per_day.end() && it->first <= r.to(); ++it) n += it->second;
    return n;
  };
  VolumeComparison v{period_a, period_b, sum(period_a), sum(period_b), std::nullopt};
  if (v.count_a > 0) v.ratio = static_cast<double>(v.count_b) / static_cast<double>(v.count_a);
  return v;
}

}  // namespace mpoxdash
