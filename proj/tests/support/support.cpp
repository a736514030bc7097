#include "support.hpp"

#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mpoxdash/text.hpp"

namespace mpoxdash::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "mpoxdash-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path fixture(std::string_view name) { return fs::path(MPOXDASH_FIXTURE_DIR) / name; }

void write_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Tweet tweet(std::string id, std::string_view iso_time, std::string text, std::uint64_t likes, std::uint64_t replies,
            std::uint64_t retweets, std::string location) {
  RawRecord raw;
  raw.id = std::move(id);
  raw.created_at = std::string(iso_time);
  raw.text = std::move(text);
  raw.like_count = std::to_string(likes);
  raw.reply_count = std::to_string(replies);
  raw.retweet_count = std::to_string(retweets);
  raw.location = std::move(location);
  raw.lang = "en";
  return make_tweet(raw, Source::stream_sample, "test");
}

const std::vector<std::string>& synthetic_vocabulary() {
  static const std::vector<std::string> vocab = {
      "mpox",   "vaccine", "cdc",      "who",   "hoax",    "covid",   "trust",  "cases", "rash",
      "clinic", "outbreak", "health",  "news",  "again",   "lockdown", "fake",  "emergency", "travel",
      "africa", "congo",   "austin",   "texas", "jynneos", "spread",  "virus",  "skin",  "fever",
      "pride",  "testing", "symptoms", "risk",  "doctor",  "report",  "policy", "scam",  "media"};
  return vocab;
}

std::vector<Tweet> synthetic_tweets(std::size_t n, std::uint32_t seed, Day first_day, int days) {
  std::mt19937 rng(seed);
  const auto& vocab = synthetic_vocabulary();
  // Skewed word choice: low indices are common.
  std::geometric_distribution<std::size_t> word_pick(0.12);
  std::uniform_int_distribution<int> len(2, 12);
  std::uniform_int_distribution<int> day_pick(0, days - 1);
  std::uniform_int_distribution<int> second_pick(0, 86399);
  std::geometric_distribution<std::uint64_t> likes(0.05), replies(0.3), retweets(0.15);
  static const std::vector<std::string> locations = {"", "Austin, TX", "austin, tx", "Kinshasa", "London", "  NYC "};
  std::uniform_int_distribution<std::size_t> loc_pick(0, locations.size() - 1);

  std::vector<Tweet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const int words = len(rng);
    for (int w = 0; w < words; ++w) {
      if (w) text += (rng() % 5 == 0) ? " #" : " ";
      const auto idx = std::min(word_pick(rng), vocab.size() - 1);
      text += (rng() % 4 == 0) ? std::string(1, static_cast<char>(std::toupper(vocab[idx][0]))) + vocab[idx].substr(1)
                               : vocab[idx];
    }
    Tweet t;
    t.id = std::to_string(1'700'000'000'000'000'000ULL + i * 13);
    t.created_at = Timestamp{first_day + std::chrono::days{day_pick(rng)}} + std::chrono::seconds{second_pick(rng)};
    t.text = std::move(text);
    t.author_handle = "user" + std::to_string(i % 97);
    t.location = locations[loc_pick(rng)];
    t.engagement = {likes(rng), replies(rng), retweets(rng)};
    t.lang = "en";
    t.provenance = {Source::capture_ndjson, "synthetic", false};
    out.push_back(std::move(t));
  }
  return out;
}

IngestOptions stream_fixture_options() {
  IngestOptions o;
  o.columns = ColumnMap::with_overrides({{"id", "id_str"},
                                         {"like_count", "favorite_count"},
                                         {"author_handle", "user.screen_name"},
                                         {"location", "user.location"}});
  return o;
}

IngestOptions csv_fixture_options() {
  IngestOptions o;
  o.columns = ColumnMap::with_overrides({{"id", "tweet_id"},
                                         {"created_at", "date"},
                                         {"text", "content"},
                                         {"author_handle", "username"},
                                         {"location", "user_location"},
                                         {"like_count", "likes"},
                                         {"reply_count", "replies"},
                                         {"retweet_count", "retweets"},
                                         {"lang", "language"}});
  return o;
}

IngestOptions capture_fixture_options() {
  IngestOptions o;
  o.columns = ColumnMap::with_overrides({{"like_count", "public_metrics.like_count"},
                                         {"reply_count", "public_metrics.reply_count"},
                                         {"retweet_count", "public_metrics.retweet_count"},
                                         {"author_handle", "author.username"},
                                         {"location", "author.location"}});
  return o;
}

std::shared_ptr<const CorpusSnapshot> make_snapshot(std::vector<Tweet> tweets) {
  std::set<std::string> ids;
  for (const auto& t : tweets) ids.insert(t.id);
  return std::make_shared<const CorpusSnapshot>(std::move(tweets), ids_digest(ids));
}

std::vector<std::string> linear_scan_ids(const CorpusSnapshot& snapshot, const Query& query) {
  std::vector<std::string> out;
  for (const auto& t : snapshot.tweets()) {
    const auto toks = tokenize(t.text);
    std::size_t hits = 0;
    for (const auto& k : query.keywords)
      if (std::find(toks.begin(), toks.end(), k) != toks.end()) ++hits;
    const bool keyword_ok = query.combine == Combine::all ? hits == query.keywords.size() : hits > 0;
    if (!keyword_ok) continue;
    if (t.engagement.like_count < query.min_likes) continue;
    if (t.engagement.reply_count < query.min_replies) continue;
    if (t.engagement.retweet_count < query.min_retweets) continue;
    if (query.date_range && !query.date_range->contains(t.created_at)) continue;
    out.push_back(t.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Query random_query(std::mt19937& rng, Day first_day, int days) {
  const auto& vocab = synthetic_vocabulary();
  Query q;
  std::uniform_int_distribution<std::size_t> nkw(1, 3);
  std::geometric_distribution<std::size_t> word_pick(0.15);
  const auto k = nkw(rng);
  while (q.keywords.size() < k) {
    const auto& w = vocab[std::min(word_pick(rng), vocab.size() - 1)];
    if (std::find(q.keywords.begin(), q.keywords.end(), w) == q.keywords.end()) q.keywords.push_back(w);
  }
  q.combine = rng() % 2 ? Combine::all : Combine::any;
  q.min_likes = rng() % 3 == 0 ? rng() % 40 : 0;
  q.min_replies = rng() % 4 == 0 ? rng() % 4 : 0;
  q.min_retweets = rng() % 4 == 0 ? rng() % 10 : 0;
  if (rng() % 2) {
    std::uniform_int_distribution<int> d(-5, days + 5);
    int a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    q.date_range = DateRange(first_day + std::chrono::days{a}, first_day + std::chrono::days{b});
  }
  q.sort = static_cast<SortOrder>(rng() % 3);
  q.per_page = 1 + rng() % 200;
  return q;
}

fs::path write_test_config(const fs::path& dir, const fs::path& corpus, std::string_view extra_json) {
  const auto lex = fixture("lexicons");
  std::ostringstream doc;
  doc << "{\n"
      << "  \"corpus_path\": \"" << corpus.string() << "\",\n"
      << "  \"sentiment\": {\"lexicon_path\": \"" << (lex / "sentiment.tsv").string() << "\", \"tau\": 0.1},\n"
      << "  \"topics\": [\n"
      << "    {\"label\": \"cynicism\", \"lexicon_path\": \"" << (lex / "cynicism.txt").string() << "\"},\n"
      << "    {\"label\": \"covid_comparison\", \"lexicon_path\": \"" << (lex / "covid_comparison.txt").string()
      << "\"},\n"
      << "    {\"label\": \"government_action\", \"lexicon_path\": \"" << (lex / "government_action.txt").string()
      << "\"},\n"
      << "    {\"label\": \"misinformation\", \"lexicon_path\": \"" << (lex / "misinformation.txt").string()
      << "\"}\n"
      << "  ]";
  if (!extra_json.empty()) doc << ",\n  " << extra_json;
  doc << "\n}\n";
  const auto path = dir / "config.json";
  write_file(path, doc.str());
  return path;
}

}  // namespace mpoxdash::testing
