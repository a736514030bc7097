#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mpoxdash/corpus.hpp"
#include "mpoxdash/ingest.hpp"
#include "mpoxdash/model.hpp"
#include "mpoxdash/search.hpp"

namespace mpoxdash::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path fixture(std::string_view name);

/// Column maps for the three bundled fixture files (keywords: mpox).
IngestOptions stream_fixture_options();
IngestOptions csv_fixture_options();
IngestOptions capture_fixture_options();
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

Tweet tweet(std::string id, std::string_view iso_time, std::string text, std::uint64_t likes = 0,
            std::uint64_t replies = 0, std::uint64_t retweets = 0, std::string location = {});

/// Small vocabulary with heavy overlap so random conjunctions still hit.
const std::vector<std::string>& synthetic_vocabulary();

/// Deterministic synthetic tweets spread uniformly over [first_day, first_day + days).
std::vector<Tweet> synthetic_tweets(std::size_t n, std::uint32_t seed, Day first_day, int days);

std::shared_ptr<const CorpusSnapshot> make_snapshot(std::vector<Tweet> tweets);

/// Linear-scan evaluation of the search predicate. Returns ids, sorted.
std::vector<std::string> linear_scan_ids(const CorpusSnapshot& snapshot, const Query& query);

Query random_query(std::mt19937& rng, Day first_day, int days);

/// Writes a config document into `dir` pointing at the given corpus and the
/// toy lexicons under tests/fixtures/lexicons. Returns the config path.
std::filesystem::path write_test_config(const std::filesystem::path& dir, const std::filesystem::path& corpus,
                                        std::string_view extra_json = {});

}  // namespace mpoxdash::testing
