#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mpoxdash/model.hpp"
#include "mpoxdash/time.hpp"

namespace mpoxdash {

/// One line of the data file: the Tweet as a JSON object with a fixed key
/// order, no insignificant whitespace, and created_at ending in `Z`.
std::string to_canonical_json(const Tweet& tweet);

/// Inverse of to_canonical_json. Throws MalformedRecord on any deviation
/// from the canonical field set or on a field that violates a Tweet invariant.
Tweet tweet_from_canonical_json(std::string_view line);

/// Lowercase hex SHA-256 over the ids sorted bytewise, each followed by '\n'.
std::string ids_digest(const std::set<std::string>& sorted_ids);

struct CorpusStats {
  std::size_t total = 0;
  std::map<Day, std::size_t> per_day;
  std::optional<Day> date_min;
  std::optional<Day> date_max;

  bool operator==(const CorpusStats&) const = default;
};

/// Sorted by created_at, then id.
bool tweet_order(const Tweet& a, const Tweet& b);

/// Immutable point-in-time view of a corpus. Tweets are held in
/// (created_at, id) order; positions in tweets() are stable document ids.
class CorpusSnapshot {
 public:
  CorpusSnapshot() = default;
  /// Sorts `tweets`. Ids must already be unique.
  CorpusSnapshot(std::vector<Tweet> tweets, std::string digest);

  const std::vector<Tweet>& tweets() const noexcept { return tweets_; }
  std::size_t size() const noexcept { return tweets_.size(); }
  const std::string& id() const noexcept { return digest_; }
  const CorpusStats& stats() const noexcept { return stats_; }

  /// Tweets whose UTC day lies in `range`, in snapshot order.
  std::span<const Tweet> scan(const DateRange& range) const;

  /// Position of the tweet with this id, if present.
  std::optional<std::size_t> find(std::string_view id) const;

 private:
  std::vector<Tweet> tweets_;
  std::string digest_;
  CorpusStats stats_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// On-disk store: `tweets.ndjson` (append-only, one canonical tweet per line)
/// and `manifest.json` ({record_count, ids_digest, format_version}). Single
/// writer; readers take snapshots.
class Corpus {
 public:
  static constexpr std::string_view kDataFile = "tweets.ndjson";
  static constexpr std::string_view kManifestFile = "manifest.json";
  static constexpr int kFormatVersion = 1;

  /// Opens the store in `dir`, creating an empty one if the directory holds
  /// neither file. Throws StoreCorrupt when data and manifest disagree and
  /// IoError when files cannot be read.
  static Corpus open(const std::filesystem::path& dir);

  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;

  /// Writes tweets whose id is new (also within `tweets`), flushes, then
  /// rewrites the manifest. Returns the number written.
  std::size_t append(std::span<const Tweet> tweets);

  bool contains(std::string_view id) const;
  std::size_t size() const noexcept { return tweets_.size(); }
  const std::string& digest() const noexcept { return digest_; }
  const std::filesystem::path& directory() const noexcept { return dir_; }
  std::filesystem::path data_path() const { return dir_ / kDataFile; }
  std::filesystem::path manifest_path() const { return dir_ / kManifestFile; }

  std::shared_ptr<const CorpusSnapshot> snapshot() const;
  CorpusStats stats() const;
  /// Tweets in range, ordered by (created_at, id).
  std::vector<Tweet> scan(const DateRange& range) const;

 private:
  explicit Corpus(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void write_manifest() const;

  std::filesystem::path dir_;
  std::vector<Tweet> tweets_;  // append order
  std::set<std::string> ids_;
  std::string digest_;
};

}  // namespace mpoxdash
