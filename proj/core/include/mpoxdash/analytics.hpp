#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpoxdash/corpus.hpp"
#include "mpoxdash/model.hpp"
#include "mpoxdash/time.hpp"

namespace mpoxdash {

enum class LexiconKind { sentiment, topic };

struct Lexicon {
  std::string name;
  std::map<std::string, double> entries;  // token -> weight (1 for topics unless given)
};

/// Builds a lexicon from (token, weight) pairs. Throws ConfigError when a
/// token is not a single lowercase token or appears twice.
Lexicon make_lexicon(std::string name, const std::vector<std::pair<std::string, double>>& entries);

/// `token<TAB>weight` per line, `#` starts a comment. Topic lexicons may omit
/// the weight column; sentiment lexicons may not. Errors name the line.
Lexicon parse_lexicon(std::istream& in, std::string name, LexiconKind kind);
Lexicon load_lexicon(const std::filesystem::path& path, LexiconKind kind);

/// Ordered (label, lexicon) rules. Order is the tie-break priority.
class TopicRuleSet {
 public:
  using Rule = std::pair<ClusterLabel, Lexicon>;

  /// Throws ConfigError (key "topics") when empty, when a label repeats, or
  /// when `uncategorized` is used.
  explicit TopicRuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }

 private:
  std::vector<Rule> rules_;
};

/// Sum of matched weights (with multiplicity) over max(1, token count).
SentimentScore score_sentiment(std::span<const std::string> tokens, const Lexicon& lexicon, double tau);
SentimentScore score_sentiment(const Tweet& tweet, const Lexicon& lexicon, double tau);

struct TopicMatch {
  ClusterLabel label;
  std::vector<std::string> terms;  // distinct, sorted
};

struct TopicExplanation {
  ClusterLabel label = ClusterLabel::uncategorized;
  std::vector<TopicMatch> matches;  // one per rule, in rule order
};

/// Score per rule = number of distinct lexicon tokens present. Highest score
/// wins, earlier rule on ties, uncategorized when every score is zero.
TopicExplanation explain_topic(std::span<const std::string> tokens, const TopicRuleSet& rules);
ClusterLabel label_topic(std::span<const std::string> tokens, const TopicRuleSet& rules);
ClusterLabel label_topic(const Tweet& tweet, const TopicRuleSet& rules);

/// Anything that assigns exactly one ClusterLabel per tweet. The aggregation
/// functions only see this interface, so a model-backed labeler can be
/// dropped in without touching them. Implementations must be thread-safe.
class TopicLabeler {
 public:
  virtual ~TopicLabeler() = default;
  virtual ClusterLabel label(const Tweet& tweet) const = 0;
};

class LexiconTopicLabeler final : public TopicLabeler {
 public:
  explicit LexiconTopicLabeler(TopicRuleSet rules) : rules_(std::move(rules)) {}
  ClusterLabel label(const Tweet& tweet) const override { return label_topic(tweet, rules_); }
  const TopicRuleSet& rules() const noexcept { return rules_; }

 private:
  TopicRuleSet rules_;
};

/// Labels every tweet, splitting the work across `threads` workers. Output
/// is positionally aligned with `tweets` and independent of `threads`.
std::vector<ClusterLabel> label_all(std::span<const Tweet> tweets, const TopicLabeler& labeler, unsigned threads = 1);

struct DailyClusterPoint {
  Day day;
  ClusterLabel label;
  double proportion = 0.0;
  std::uint64_t count = 0;

  bool operator==(const DailyClusterPoint&) const = default;
};

/// For each day in range holding at least one tweet: one point per label with
/// a nonzero count, in label order. Denominator is the day's total including
/// uncategorized.
std::vector<DailyClusterPoint> daily_cluster_proportions(const CorpusSnapshot& snapshot, const TopicLabeler& labeler,
                                                         const DateRange& range, unsigned threads = 1);

/// Same aggregation over labels already computed for snapshot.tweets().
std::vector<DailyClusterPoint> daily_cluster_proportions(const CorpusSnapshot& snapshot,
                                                         std::span<const ClusterLabel> labels,
                                                         const DateRange& range);

struct TrendPoint {
  Day day;
  std::uint64_t count = 0;

  bool operator==(const TrendPoint&) const = default;
};

inline constexpr std::int64_t kMaxSeriesDays = 36'600;

/// Per-day count of tweets containing `keyword`, one point for every day in
/// range. Throws ValidationError for a keyword that is not one token or a
/// range longer than kMaxSeriesDays.
std::vector<TrendPoint> keyword_trend(const CorpusSnapshot& snapshot, std::string_view keyword,
                                      const DateRange& range);

struct LocationCount {
  std::string location;
  std::uint64_t count = 0;

  bool operator==(const LocationCount&) const = default;
};

struct LocationBreakdown {
  std::vector<LocationCount> entries;  // count desc, then location asc
  std::uint64_t none_count = 0;        // tweets with an empty location

  bool operator==(const LocationBreakdown&) const = default;
};

/// Groups case-folded, trimmed location strings. top_n must be >= 1.
LocationBreakdown location_breakdown(const CorpusSnapshot& snapshot, const DateRange& range, std::size_t top_n);

struct VolumeComparison {
  DateRange period_a;
  DateRange period_b;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  std::optional<double> ratio;  // count_b / count_a; absent when count_a == 0
};

VolumeComparison volume_comparison(const CorpusSnapshot& snapshot, const DateRange& period_a,
                                   const DateRange& period_b);

}  // namespace mpoxdash
