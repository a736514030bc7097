#include "mpoxdash/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/csv.hpp"
#include "mpoxdash/error.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {
namespace {

using nlohmann::json;

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::size_t kAppendBatch = 2048;

constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "id", "created_at", "text", "like_count", "reply_count", "retweet_count", "location", "author_handle", "lang"};

bool required(Field f) { return f == Field::id || f == Field::created_at || f == Field::text; }

std::optional<std::string>& slot(RawRecord& r, Field f) {
  switch (f) {
    case Field::id: return r.id;
    case Field::created_at: return r.created_at;
    case Field::text: return r.text;
    case Field::like_count: return r.like_count;
    case Field::reply_count: return r.reply_count;
    case Field::retweet_count: return r.retweet_count;
    case Field::location: return r.location;
    case Field::author_handle: return r.author_handle;
    case Field::lang: return r.lang;
  }
  return r.id;
}

bool has_required(const RawRecord& r) { return r.id && r.created_at && r.text; }

std::string_view strip_bom(std::string_view s) {
  if (s.substr(0, kBom.size()) == kBom) s.remove_prefix(kBom.size());
  return s;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

bool ends_with_ci(std::string_view s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.begin(), suffix.end(), s.end() - static_cast<std::ptrdiff_t>(suffix.size()),
                    [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; });
}

const json* lookup(const json& root, std::string_view dotted) {
  const json* node = &root;
  while (!dotted.empty()) {
    const auto dot = dotted.find('.');
    const std::string key(dotted.substr(0, dot));
    if (!node->is_object()) return nullptr;
    auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
    dotted = dot == std::string_view::npos ? std::string_view{} : dotted.substr(dot + 1);
  }
  return node;
}

std::optional<std::string> scalar(const json* v) {
  if (v == nullptr) return std::nullopt;
  switch (v->type()) {
    case json::value_t::string: return v->get<std::string>();
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
    case json::value_t::number_float: return v->dump();
    case json::value_t::boolean: return v->get<bool>() ? "true" : "false";
    default: return std::nullopt;
  }
}

ParseCounts parse_csv(std::istream& in, const std::filesystem::path& path, const ColumnMap& columns,
                      const RecordSink& sink) {
  ParseCounts counts;
  CsvReader reader(in);
  std::vector<std::string> header;
  const auto status = reader.next(header);
  if (status == CsvReader::Row::end) return counts;
  if (status == CsvReader::Row::malformed) throw UnknownFormat(path.string() + ": unreadable CSV header row");
  if (!header.empty()) header.front() = std::string(strip_bom(header.front()));

  std::array<std::ptrdiff_t, kFieldCount> index{};
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& name = columns.path(static_cast<Field>(f));
    auto it = name.empty() ? header.end() : std::find(header.begin(), header.end(), name);
    index[f] = it == header.end() ? -1 : it - header.begin();
    if (index[f] < 0 && required(static_cast<Field>(f)))
      throw UnknownFormat(path.string() + ": CSV header has no column '" + name + "' for " +
                          std::string(kFieldNames[f]));
  }

  std::vector<std::string> row;
  for (;;) {
    const auto r = reader.next(row);
    if (r == CsvReader::Row::end) break;
    ++counts.records_read;
    if (r == CsvReader::Row::malformed || row.size() != header.size()) {
      ++counts.malformed;
      continue;
    }
    RawRecord record;
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      if (index[f] < 0) continue;
      auto& cell = row[static_cast<std::size_t>(index[f])];
      if (!cell.empty()) slot(record, static_cast<Field>(f)) = std::move(cell);
    }
    if (!has_required(record)) {
      ++counts.malformed;
      continue;
    }
    sink(std::move(record));
  }
  return counts;
}

ParseCounts parse_ndjson(std::istream& in, const ColumnMap& columns, const RecordSink& sink,
                         std::optional<std::string_view> wrapper_key) {
  ParseCounts counts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (first) {
      view = strip_bom(view);
      first = false;
    }
    if (blank(view)) continue;
    ++counts.records_read;
    json doc = json::parse(view, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      ++counts.malformed;
      continue;
    }
    const json* root = &doc;
    if (wrapper_key) {
      root = lookup(doc, *wrapper_key);
      if (root == nullptr || !root->is_object()) {
        ++counts.malformed;
        continue;
      }
    }
    RawRecord record;
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      const auto& p = columns.path(static_cast<Field>(f));
      if (!p.empty()) slot(record, static_cast<Field>(f)) = scalar(lookup(*root, p));
    }
    if (!has_required(record)) {
      ++counts.malformed;
      continue;
    }
    sink(std::move(record));
  }
  if (in.bad()) throw IoError("read error");
  return counts;
}

}  // namespace

std::string_view to_string(Field field) { return kFieldNames[static_cast<std::size_t>(field)]; }

std::optional<Field> field_from_string(std::string_view text) {
  for (std::size_t f = 0; f < kFieldCount; ++f)
    if (kFieldNames[f] == text) return static_cast<Field>(f);
  return std::nullopt;
}

ColumnMap::ColumnMap() {
  for (std::size_t f = 0; f < kFieldCount; ++f) paths_[f] = std::string(kFieldNames[f]);
}

ColumnMap ColumnMap::with_overrides(const std::map<std::string, std::string>& overrides) {
  ColumnMap map;
  for (const auto& [name, path] : overrides) {
    auto field = field_from_string(name);
    if (!field) throw ConfigError("column_map", "unknown field '" + name + "'");
    if (path.empty() && required(*field)) throw ConfigError("column_map", "required field '" + name + "' unmapped");
    map.paths_[static_cast<std::size_t>(*field)] = path;
  }
  std::set<std::string> seen;
  for (const auto& p : map.paths_) {
    if (p.empty()) continue;
    if (!seen.insert(p).second) throw ConfigError("column_map", "source path '" + p + "' mapped twice");
  }
  return map;
}

KeywordSet::KeywordSet(const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw ConfigError("keywords", "at least one keyword required");
  for (const auto& k : keywords) {
    auto toks = tokenize(k);
    if (toks.size() != 1) throw ConfigError("keywords", "'" + k + "' is not a single token");
    tokens_.push_back(std::move(toks.front()));
  }
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
}

bool KeywordSet::contains(std::string_view token) const {
  return std::binary_search(tokens_.begin(), tokens_.end(), token);
}

bool is_relevant(std::string_view text, const KeywordSet& keywords) {
  for (const auto& tok : tokenize(text))
    if (keywords.contains(tok)) return true;
  return false;
}

DatasetFormat detect_format(std::string_view head, std::string_view file_name, std::string_view wrapper_key) {
  head = strip_bom(head);
  const bool csv_name = ends_with_ci(file_name, ".csv");

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < head.size() && lines.size() < 32;) {
    auto nl = head.find('\n', pos);
    auto line = head.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!blank(line)) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) {
    if (csv_name) return DatasetFormat::hydrated_csv;
    throw UnknownFormat(std::string(file_name) + ": empty file");
  }

  const auto first = lines.front().find_first_not_of(" \t");
  if (lines.front()[first] == '{') {
    for (auto line : lines) {
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) continue;
      auto it = doc.find(std::string(wrapper_key));
      if (it != doc.end() && it->is_object()) return DatasetFormat::capture_ndjson;
      return DatasetFormat::stream_sample;
    }
    throw UnknownFormat(std::string(file_name) + ": no parseable JSON object in leading lines");
  }
  if (csv_name || lines.front().find(',') != std::string_view::npos) return DatasetFormat::hydrated_csv;
  throw UnknownFormat(std::string(file_name) + ": neither CSV nor newline-delimited JSON");
}

DatasetFormat detect_file_format(const std::filesystem::path& path, std::string_view wrapper_key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open");
  std::string head(64 * 1024, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  return detect_format(head, path.filename().string(), wrapper_key);
}

ParseCounts parse_file(const std::filesystem::path& path, DatasetFormat format, const ColumnMap& columns,
                       const RecordSink& sink, std::string_view wrapper_key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open");
  switch (format) {
    case DatasetFormat::hydrated_csv: return parse_csv(in, path, columns, sink);
    case DatasetFormat::stream_sample: return parse_ndjson(in, columns, sink, std::nullopt);
    case DatasetFormat::capture_ndjson: return parse_ndjson(in, columns, sink, wrapper_key);
  }
  throw UnknownFormat(path.string());
}

IngestReport ingest_file(const std::filesystem::path& path, const IngestOptions& options, Corpus& corpus) {
  IngestReport report;
  report.file = path.string();

  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError(report.file + ": not a readable file");

  DatasetFormat format;
  if (options.format) {
    format = *options.format;
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(report.file + ": cannot open");
    std::string head(64 * 1024, '\0');
    in.read(head.data(), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    if (blank(strip_bom(head)) && in.eof()) return report;
    format = detect_format(head, path.filename().string(), options.capture_wrapper_key);
  }
  report.format = format;

  std::vector<Tweet> batch;
  std::size_t appended = 0;
  auto flush = [&] {
    appended += corpus.append(batch);
    batch.clear();
  };

  std::size_t rejected = 0;
  const ParseCounts counts = parse_file(
      path, format, options.columns,
      [&](RawRecord&& raw) {
        Tweet tweet;
        try {
          tweet = make_tweet(raw, format, report.file);
        } catch (const MalformedRecord&) {
          ++rejected;
          return;
        }
        if (!is_relevant(tweet.text, options.keywords)) {
          ++report.unmatched;
          return;
        }
        ++report.matched;
        batch.push_back(std::move(tweet));
        if (batch.size() >= kAppendBatch) flush();
      },
      options.capture_wrapper_key);
  flush();

  report.records_read = counts.records_read;
  report.malformed = counts.malformed + rejected;
  report.duplicates_skipped = report.matched - appended;
  return report;
}

}  // namespace mpoxdash
