#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mpoxdash/time.hpp"

namespace mpoxdash {

/// The three kinds of dataset the corpus is consolidated from.
enum class Source { stream_sample, hydrated_csv, capture_ndjson };

std::string_view to_string(Source source);
std::optional<Source> source_from_string(std::string_view text);

struct Engagement {
  std::uint64_t like_count = 0;
  std::uint64_t reply_count = 0;
  std::uint64_t retweet_count = 0;

  bool operator==(const Engagement&) const = default;
};

struct Provenance {
  Source source = Source::stream_sample;
  std::string source_file;
  bool counts_imputed = false;

  bool operator==(const Provenance&) const = default;
};

/// Canonical corpus record. Build through make_tweet() so the invariants
/// (non-empty id, NFC text without NUL, ISO-representable timestamp) hold.
struct Tweet {
  std::string id;
  Timestamp created_at;
  std::string text;
  std::string author_handle;
  std::string location;
  Engagement engagement;
  std::string lang;
  Provenance provenance;

  bool operator==(const Tweet&) const = default;
};

enum class ClusterLabel { cynicism, covid_comparison, government_action, misinformation, uncategorized };

inline constexpr ClusterLabel kAllClusterLabels[] = {
    ClusterLabel::cynicism, ClusterLabel::covid_comparison, ClusterLabel::government_action,
    ClusterLabel::misinformation, ClusterLabel::uncategorized};

std::string_view to_string(ClusterLabel label);
std::optional<ClusterLabel> cluster_label_from_string(std::string_view text);

enum class Polarity { negative, neutral, positive };

std::string_view to_string(Polarity polarity);

struct SentimentScore {
  double raw = 0.0;
  Polarity polarity = Polarity::neutral;

  bool operator==(const SentimentScore&) const = default;
};

/// Classifies `raw` against a symmetric threshold tau > 0.
Polarity polarity_for(double raw, double tau);

/// Field values as pulled out of a source row, before any normalization.
/// Absent means the source had no value (missing column, JSON null, empty
/// CSV cell).
struct RawRecord {
  std::optional<std::string> id;
  std::optional<std::string> created_at;
  std::optional<std::string> text;
  std::optional<std::string> author_handle;
  std::optional<std::string> location;
  std::optional<std::string> like_count;
  std::optional<std::string> reply_count;
  std::optional<std::string> retweet_count;
  std::optional<std::string> lang;
};

/// Throws MalformedRecord on empty/absent id, unparseable timestamp, absent
/// text or a count that is not a non-negative integer. Absent counts become 0
/// and set counts_imputed.
Tweet make_tweet(const RawRecord& raw, Source source, std::string source_file);

}  // namespace mpoxdash
