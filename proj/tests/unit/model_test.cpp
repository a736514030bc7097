#include "doctest.h"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/error.hpp"
#include "mpoxdash/model.hpp"

using namespace mpoxdash;
using namespace std::chrono;

namespace {
RawRecord basic() {
  RawRecord r;
  r.id = "1";
  r.created_at = "2024-08-15T00:00:00Z";
  r.text = "mpox";
  return r;
}
}  // namespace

TEST_CASE("make_tweet imputes absent counts") {
  auto raw = basic();
  raw.reply_count = "3";
  raw.retweet_count = "4";
  const Tweet t = make_tweet(raw, Source::capture_ndjson, "cap.ndjson");
  CHECK(t.engagement.like_count == 0);
  CHECK(t.engagement.reply_count == 3);
  CHECK(t.engagement.retweet_count == 4);
  CHECK(t.provenance.counts_imputed);
  CHECK(t.provenance.source == Source::capture_ndjson);
  CHECK(t.provenance.source_file == "cap.ndjson");
  CHECK(t.created_at == sys_days{2024y / 8 / 15});
}

TEST_CASE("make_tweet keeps counts_imputed false when every count is present") {
  auto raw = basic();
  raw.like_count = "12.0";
  raw.reply_count = "0";
  raw.retweet_count = " 7 ";
  const Tweet t = make_tweet(raw, Source::hydrated_csv, "x.csv");
  CHECK_FALSE(t.provenance.counts_imputed);
  CHECK(t.engagement.like_count == 12);
  CHECK(t.engagement.retweet_count == 7);
}

TEST_CASE("make_tweet rejects malformed records") {
  auto raw = basic();
  raw.id = "";
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
  raw = basic();
  raw.id.reset();
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
  raw = basic();
  raw.created_at = "yesterday";
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
  raw = basic();
  raw.text.reset();
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
  raw = basic();
  raw.like_count = "-3";
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
  raw = basic();
  raw.like_count = "12.5";
  CHECK_THROWS_AS(make_tweet(raw, Source::stream_sample, ""), MalformedRecord);
}

TEST_CASE("make_tweet stores text in NFC without NUL") {
  auto raw = basic();
  raw.text = std::string("caf" "e\xcc\x81 \0mpox", 12);
  const Tweet t = make_tweet(raw, Source::stream_sample, "");
  CHECK(t.text == "caf\xc3\xa9 mpox");
}

TEST_CASE("make_tweet is deterministic and round-trips through the canonical format") {
  auto raw = basic();
  raw.text = "Mpox \"quoted\"\nnew line \xe2\x9c\x85";
  raw.location = "Austin, TX";
  raw.author_handle = "someone";
  raw.like_count = "5";
  raw.lang = "en";
  const Tweet a = make_tweet(raw, Source::hydrated_csv, "f.csv");
  const Tweet b = make_tweet(raw, Source::hydrated_csv, "f.csv");
  CHECK(a == b);
  CHECK(to_canonical_json(a) == to_canonical_json(b));
  CHECK(tweet_from_canonical_json(to_canonical_json(a)) == a);
}

TEST_CASE("polarity thresholds are strict") {
  CHECK(polarity_for(0.1, 0.1) == Polarity::neutral);
  CHECK(polarity_for(-0.1, 0.1) == Polarity::neutral);
  CHECK(polarity_for(0.1000001, 0.1) == Polarity::positive);
  CHECK(polarity_for(-0.5, 0.1) == Polarity::negative);
}

TEST_CASE("enum names round-trip") {
  for (auto l : kAllClusterLabels) CHECK(cluster_label_from_string(to_string(l)) == l);
  for (auto s : {Source::stream_sample, Source::hydrated_csv, Source::capture_ndjson})
    CHECK(source_from_string(to_string(s)) == s);
  CHECK_FALSE(cluster_label_from_string("other"));
}
