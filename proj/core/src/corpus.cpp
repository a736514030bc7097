#include "mpoxdash/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>

#include "json.hpp"
#include "mpoxdash/error.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::array<std::string_view, 12> kCanonicalKeys = {
    "id",          "created_at",    "text", "author_handle", "location",    "like_count",
    "reply_count", "retweet_count", "lang", "source",        "source_file", "counts_imputed"};

const std::string& string_field(const ordered_json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_string()) throw MalformedRecord(std::string(key) + ": expected string");
  return v.get_ref<const std::string&>();
}

std::uint64_t count_field(const ordered_json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw MalformedRecord(std::string(key) + ": expected non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

std::string to_canonical_json(const Tweet& t) {
  ordered_json doc;
  doc["id"] = t.id;
  doc["created_at"] = format_timestamp(t.created_at);
  doc["text"] = t.text;
  doc["author_handle"] = t.author_handle;
  doc["location"] = t.location;
  doc["like_count"] = t.engagement.like_count;
  doc["reply_count"] = t.engagement.reply_count;
  doc["retweet_count"] = t.engagement.retweet_count;
  doc["lang"] = t.lang;
  doc["source"] = std::string(to_string(t.provenance.source));
  doc["source_file"] = t.provenance.source_file;
  doc["counts_imputed"] = t.provenance.counts_imputed;
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Tweet tweet_from_canonical_json(std::string_view line) {
  ordered_json doc = ordered_json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw MalformedRecord("not a JSON object");
  if (doc.size() != kCanonicalKeys.size()) throw MalformedRecord("unexpected field set");
  std::size_t i = 0;
  for (const auto& [key, value] : doc.items()) {
    if (key != kCanonicalKeys[i++]) throw MalformedRecord("unexpected field '" + key + "'");
  }

  Tweet t;
  try {
    t.id = string_field(doc, "id");
    if (t.id.empty()) throw MalformedRecord("id: empty");
    const auto& ts = string_field(doc, "created_at");
    auto parsed = parse_timestamp(ts);
    if (!parsed || format_timestamp(*parsed) != ts) throw MalformedRecord("created_at: not canonical '" + ts + "'");
    t.created_at = *parsed;
    t.text = string_field(doc, "text");
    if (nfc_normalize(t.text) != t.text) throw MalformedRecord("text: not NFC");
    t.author_handle = string_field(doc, "author_handle");
    t.location = string_field(doc, "location");
    t.engagement.like_count = count_field(doc, "like_count");
    t.engagement.reply_count = count_field(doc, "reply_count");
    t.engagement.retweet_count = count_field(doc, "retweet_count");
    t.lang = string_field(doc, "lang");
    auto source = source_from_string(string_field(doc, "source"));
    if (!source) throw MalformedRecord("source: unknown");
    t.provenance.source = *source;
    t.provenance.source_file = string_field(doc, "source_file");
    const auto& imputed = doc.at("counts_imputed");
    if (!imputed.is_boolean()) throw MalformedRecord("counts_imputed: expected boolean");
    t.provenance.counts_imputed = imputed.get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(e.what());
  }
  return t;
}

std::string ids_digest(const std::set<std::string>& sorted_ids) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  for (const auto& id : sorted_ids) {
    EVP_DigestUpdate(ctx.get(), id.data(), id.size());
    EVP_DigestUpdate(ctx.get(), "\n", 1);
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

bool tweet_order(const Tweet& a, const Tweet& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.id < b.id;
}

CorpusSnapshot::CorpusSnapshot(std::vector<Tweet> tweets, std::string digest)
    : tweets_(std::move(tweets)), digest_(std::move(digest)) {
  std::sort(tweets_.begin(), tweets_.end(), tweet_order);
  by_id_.reserve(tweets_.size());
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    by_id_.emplace(tweets_[i].id, i);
    ++stats_.per_day[day_of(tweets_[i].created_at)];
  }
  stats_.total = tweets_.size();
  if (!stats_.per_day.empty()) {
    stats_.date_min = stats_.per_day.begin()->first;
    stats_.date_max = stats_.per_day.rbegin()->first;
  }
}

std::span<const Tweet> CorpusSnapshot::scan(const DateRange& range) const {
  const Timestamp lo{range.from()};
  const Timestamp hi{range.to() + std::chrono::days{1}};
  auto first = std::lower_bound(tweets_.begin(), tweets_.end(), lo,
                                [](const Tweet& t, Timestamp ts) { return t.created_at < ts; });
  auto last = std::lower_bound(first, tweets_.end(), hi,
                               [](const Tweet& t, Timestamp ts) { return t.created_at < ts; });
  return {first, last};
}

std::optional<std::size_t> CorpusSnapshot::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

Corpus Corpus::open(const fs::path& dir) {
  Corpus corpus(dir);
  const auto data = corpus.data_path();
  const auto manifest = corpus.manifest_path();
  const bool have_data = fs::exists(data);
  const bool have_manifest = fs::exists(manifest);

  if (!have_data && !have_manifest) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string() + ": " + ec.message());
    std::ofstream touch(data, std::ios::binary | std::ios::app);
    if (!touch) throw IoError(data.string() + ": cannot create");
    corpus.digest_ = ids_digest(corpus.ids_);
    corpus.write_manifest();
    return corpus;
  }
  if (!have_data) throw StoreCorrupt(dir.string() + ": manifest without data file");
  if (!have_manifest) throw StoreCorrupt(dir.string() + ": data file without manifest");

  std::ifstream in(data, std::ios::binary);
  if (!in) throw IoError(data.string() + ": cannot open");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Tweet t;
    try {
      t = tweet_from_canonical_json(line);
    } catch (const MalformedRecord& e) {
      throw StoreCorrupt(data.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!corpus.ids_.insert(t.id).second)
      throw StoreCorrupt(data.string() + ":" + std::to_string(line_no) + ": duplicate id " + t.id);
    corpus.tweets_.push_back(std::move(t));
  }
  if (in.bad()) throw IoError(data.string() + ": read error");
  corpus.digest_ = ids_digest(corpus.ids_);

  std::ifstream min(manifest, std::ios::binary);
  if (!min) throw IoError(manifest.string() + ": cannot open");
  const auto doc = nlohmann::json::parse(min, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw StoreCorrupt(manifest.string() + ": not a JSON object");
  const auto version = doc.value("format_version", -1);
  if (version != kFormatVersion)
    throw StoreCorrupt(manifest.string() + ": unsupported format_version " + std::to_string(version));
  if (doc.value("record_count", std::uint64_t{0}) != corpus.tweets_.size() || !doc.contains("record_count"))
    throw StoreCorrupt(manifest.string() + ": record_count does not match data file");
  if (doc.value("ids_digest", std::string{}) != corpus.digest_)
    throw StoreCorrupt(manifest.string() + ": ids_digest does not match data file");
  return corpus;
}

void Corpus::write_manifest() const {
  ordered_json doc;
  doc["record_count"] = tweets_.size();
  doc["ids_digest"] = digest_;
  doc["format_version"] = kFormatVersion;
  const auto target = manifest_path();
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump() << '\n';
    out.flush();
    if (!out) throw IoError(tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError(target.string() + ": " + ec.message());
}

std::size_t Corpus::append(std::span<const Tweet> tweets) {
  std::vector<const Tweet*> fresh;
  std::set<std::string_view> pending;
  for (const auto& t : tweets) {
    if (ids_.count(t.id) || !pending.insert(t.id).second) continue;
    fresh.push_back(&t);
  }
  if (fresh.empty()) return 0;

  std::ofstream out(data_path(), std::ios::binary | std::ios::app);
  if (!out) throw IoError(data_path().string() + ": cannot open for append");
  for (const Tweet* t : fresh) out << to_canonical_json(*t) << '\n';
  out.flush();
  if (!out) throw IoError(data_path().string() + ": write failed");

  for (const Tweet* t : fresh) {
    ids_.insert(t->id);
    tweets_.push_back(*t);
  }
  digest_ = ids_digest(ids_);
  write_manifest();
  return fresh.size();
}

bool Corpus::contains(std::string_view id) const { return ids_.find(std::string(id)) != ids_.end(); }

std::shared_ptr<const CorpusSnapshot> Corpus::snapshot() const {
  return std::make_shared<const CorpusSnapshot>(tweets_, digest_);
}

CorpusStats Corpus::stats() const { return snapshot()->stats(); }

std::vector<Tweet> Corpus::scan(const DateRange& range) const {
  std::vector<Tweet> out;
  for (const auto& t : tweets_)
    if (range.contains(t.created_at)) out.push_back(t);
  std::sort(out.begin(), out.end(), tweet_order);
  return out;
}

}  // namespace mpoxdash
