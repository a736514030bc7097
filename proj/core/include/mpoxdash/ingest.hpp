#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpoxdash/model.hpp"

namespace mpoxdash {

class Corpus;

using DatasetFormat = Source;

/// Canonical fields a ColumnMap can route.
enum class Field { id, created_at, text, like_count, reply_count, retweet_count, location, author_handle, lang };

inline constexpr std::size_t kFieldCount = 9;

std::string_view to_string(Field field);
std::optional<Field> field_from_string(std::string_view text);

/// Maps canonical fields to a CSV header name or a dotted JSON path.
/// Every field defaults to its own canonical name; an optional field mapped
/// to "" is treated as absent in the source.
class ColumnMap {
 public:
  ColumnMap();

  /// Applies overrides keyed by canonical field name. Throws ConfigError
  /// (key "column_map") for unknown fields, an empty required field, or two
  /// fields sharing one source path.
  static ColumnMap with_overrides(const std::map<std::string, std::string>& overrides);

  const std::string& path(Field field) const { return paths_[static_cast<std::size_t>(field)]; }

  bool operator==(const ColumnMap&) const = default;

 private:
  std::array<std::string, kFieldCount> paths_;
};

/// Lowercased single-token keywords used for relevance filtering.
class KeywordSet {
 public:
  /// Throws ConfigError (key "keywords") on an empty set or a keyword that
  /// does not tokenize to exactly one token.
  explicit KeywordSet(const std::vector<std::string>& keywords);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  bool contains(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;  // sorted, unique
};

/// True iff some token of `text` equals a keyword.
bool is_relevant(std::string_view text, const KeywordSet& keywords);

inline constexpr std::string_view kDefaultCaptureWrapperKey = "data";

/// Decides the dataset kind from the leading bytes of a file (and its name,
/// which only matters for a `.csv` extension). Throws UnknownFormat.
DatasetFormat detect_format(std::string_view head, std::string_view file_name,
                            std::string_view wrapper_key = kDefaultCaptureWrapperKey);

/// Opens `path` and runs detect_format over its first 64 KiB.
DatasetFormat detect_file_format(const std::filesystem::path& path,
                                 std::string_view wrapper_key = kDefaultCaptureWrapperKey);

struct ParseCounts {
  std::size_t records_read = 0;
  std::size_t malformed = 0;
};

using RecordSink = std::function<void(RawRecord&&)>;

/// Streams one RawRecord per CSV row / NDJSON line into `sink`. Malformed
/// rows (bad quoting, invalid JSON, missing required field, wrong column
/// count) are counted and skipped. Blank lines are not records.
/// Throws IoError when the file cannot be opened.
ParseCounts parse_file(const std::filesystem::path& path, DatasetFormat format, const ColumnMap& columns,
                       const RecordSink& sink, std::string_view wrapper_key = kDefaultCaptureWrapperKey);

struct IngestOptions {
  KeywordSet keywords{std::vector<std::string>{"mpox"}};
  ColumnMap columns;
  std::optional<DatasetFormat> format;  // overrides detection
  std::string capture_wrapper_key{kDefaultCaptureWrapperKey};
};

struct IngestReport {
  std::string file;
  std::optional<DatasetFormat> format;  // absent for an empty file
  std::size_t records_read = 0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::size_t malformed = 0;
  std::size_t duplicates_skipped = 0;

  std::size_t appended() const noexcept { return matched - duplicates_skipped; }
  bool balanced() const noexcept {
    return records_read == matched + unmatched + malformed && duplicates_skipped <= matched;
  }

  bool operator==(const IngestReport&) const = default;
};

/// parse_file -> make_tweet -> is_relevant -> Corpus::append. Throws IoError
/// or UnknownFormat; record-level problems only show up in the counts.
IngestReport ingest_file(const std::filesystem::path& path, const IngestOptions& options, Corpus& corpus);

}  // namespace mpoxdash
