#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/error.hpp"
#include "support.hpp"

using namespace mpoxdash;
using namespace std::chrono;
using mpoxdash::testing::TempDir;
using mpoxdash::testing::tweet;

namespace {
std::vector<Tweet> five() {
  return {tweet("1", "2024-08-14T09:00:00Z", "mpox a"), tweet("2", "2024-08-14T12:00:00Z", "mpox b"),
          tweet("3", "2024-08-15T01:00:00Z", "mpox c"), tweet("4", "2024-08-16T23:00:00Z", "mpox d"),
          tweet("5", "2024-08-16T23:30:00Z", "mpox e")};
}
}  // namespace

TEST_CASE("append writes new ids only") {
  TempDir dir;
  auto corpus = Corpus::open(dir / "c");
  CHECK(corpus.size() == 0);
  const auto batch = five();
  CHECK(corpus.append(batch) == 5);
  CHECK(corpus.append(batch) == 0);
  std::vector<Tweet> more = {batch[0], tweet("6", "2024-08-17T00:00:00Z", "mpox f"),
                             tweet("7", "2024-08-17T00:00:01Z", "mpox g"), tweet("8", "2024-08-18T00:00:00Z", "x"),
                             tweet("8", "2024-08-19T00:00:00Z", "dup within batch")};
  CHECK(corpus.append(more) == 3);
  CHECK(corpus.size() == 8);
  CHECK(corpus.contains("8"));
  CHECK_FALSE(corpus.contains("9"));
}

TEST_CASE("empty corpus has no date bounds") {
  TempDir dir;
  auto corpus = Corpus::open(dir / "c");
  const auto s = corpus.stats();
  CHECK(s.total == 0);
  CHECK_FALSE(s.date_min);
  CHECK_FALSE(s.date_max);
  CHECK(s.per_day.empty());
  CHECK(corpus.scan(DateRange::everything()).empty());
}

TEST_CASE("stats bucket by UTC day") {
  TempDir dir;
  auto corpus = Corpus::open(dir / "c");
  corpus.append(std::vector<Tweet>{tweet("a", "2024-08-14T23:59:59Z", "x"), tweet("b", "2024-08-15T00:00:01Z", "y"),
                                   tweet("c", "2024-08-15T01:30:00+02:00", "z")});
  const auto s = corpus.stats();
  CHECK(s.total == 3);
  CHECK(s.per_day.at(sys_days{2024y / 8 / 14}) == 2);
  CHECK(s.per_day.at(sys_days{2024y / 8 / 15}) == 1);
  CHECK(s.date_min == sys_days{2024y / 8 / 14});
  CHECK(s.date_max == sys_days{2024y / 8 / 15});
}

TEST_CASE("scan returns tweets in (created_at, id) order within the range") {
  TempDir dir;
  auto corpus = Corpus::open(dir / "c");
  auto batch = five();
  batch.push_back(tweet("0", "2024-08-16T23:00:00Z", "same second as 4"));
  std::reverse(batch.begin(), batch.end());
  corpus.append(batch);
  const auto all = corpus.scan(DateRange::everything());
  REQUIRE(all.size() == 6);
  CHECK(std::is_sorted(all.begin(), all.end(), tweet_order));
  CHECK(all[3].id == "0");
  CHECK(all[4].id == "4");

  const Day d{2024y / 8 / 16};
  const auto day = corpus.scan(DateRange(d, d));
  CHECK(day.size() == corpus.stats().per_day.at(d));
  CHECK(corpus.scan(DateRange(sys_days{2020y / 1 / 1}, sys_days{2020y / 1 / 2})).empty());
}

TEST_CASE("reopening a store returns the same content") {
  TempDir dir;
  std::string digest;
  CorpusStats stats;
  {
    auto corpus = Corpus::open(dir / "c");
    corpus.append(testing::synthetic_tweets(500, 3, sys_days{2024y / 5 / 1}, 30));
    digest = corpus.digest();
    stats = corpus.stats();
  }
  auto again = Corpus::open(dir / "c");
  CHECK(again.size() == 500);
  CHECK(again.digest() == digest);
  CHECK(again.stats() == stats);
  CHECK(again.snapshot()->id() == digest);
}

TEST_CASE("ids_digest is SHA-256 over newline-terminated sorted ids") {
  // printf '1\n2\n' | sha256sum
  CHECK(ids_digest({"2", "1"}) == "a6e2b7a040683432de03a18fd8a1939a2fdf82585b364bfc874bdd4095c4cae1");
  CHECK(ids_digest({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("tampering with the data file is detected") {
  TempDir dir;
  {
    auto corpus = Corpus::open(dir / "c");
    corpus.append(five());
  }
  SUBCASE("extra line") {
    std::ofstream(dir.path() / "c" / "tweets.ndjson", std::ios::app)
        << to_canonical_json(tweet("99", "2024-08-20T00:00:00Z", "x")) << "\n";
    CHECK_THROWS_AS(Corpus::open(dir / "c"), StoreCorrupt);
  }
  SUBCASE("garbage line") {
    std::ofstream(dir.path() / "c" / "tweets.ndjson", std::ios::app) << "{not json\n";
    CHECK_THROWS_AS(Corpus::open(dir / "c"), StoreCorrupt);
  }
  SUBCASE("missing manifest") {
    std::filesystem::remove(dir.path() / "c" / "manifest.json");
    CHECK_THROWS_AS(Corpus::open(dir / "c"), StoreCorrupt);
  }
  SUBCASE("wrong format version") {
    auto m = nlohmann::json::parse(testing::read_file(dir.path() / "c" / "manifest.json"));
    m["format_version"] = 2;
    testing::write_file(dir.path() / "c" / "manifest.json", m.dump());
    CHECK_THROWS_AS(Corpus::open(dir / "c"), StoreCorrupt);
  }
}

TEST_CASE("snapshot find resolves ids") {
  const auto snap = testing::make_snapshot(five());
  REQUIRE(snap->find("3"));
  CHECK(snap->tweets()[*snap->find("3")].id == "3");
  CHECK_FALSE(snap->find("nope"));
}
