#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mpoxdash/corpus.hpp"
#include "mpoxdash/model.hpp"
#include "mpoxdash/time.hpp"

namespace mpoxdash {

using DocId = std::uint32_t;

/// Token -> postings over a snapshot, plus the per-document engagement and
/// day needed to evaluate filters without touching the tweets.
class InvertedIndex {
 public:
  struct DocMeta {
    Engagement engagement;
    Day day;
    bool operator==(const DocMeta&) const = default;
  };

  InvertedIndex() : InvertedIndex(std::make_shared<const CorpusSnapshot>()) {}
  explicit InvertedIndex(std::shared_ptr<const CorpusSnapshot> snapshot);

  /// Ascending document ids containing `token`; each document at most once.
  std::span<const DocId> postings(std::string_view token) const;

  const CorpusSnapshot& snapshot() const noexcept { return *snapshot_; }
  const std::shared_ptr<const CorpusSnapshot>& snapshot_ptr() const noexcept { return snapshot_; }
  const DocMeta& meta(DocId doc) const { return docs_[doc]; }
  std::size_t document_count() const noexcept { return docs_.size(); }
  std::size_t token_count() const noexcept { return postings_.size(); }
  std::vector<std::string> vocabulary() const;

  bool operator==(const InvertedIndex& other) const;

 private:
  std::shared_ptr<const CorpusSnapshot> snapshot_;
  std::unordered_map<std::string, std::vector<DocId>> postings_;
  std::vector<DocMeta> docs_;
};

enum class Combine { all, any };
enum class SortOrder { recency_desc, likes_desc, retweets_desc };

std::string_view to_string(Combine combine);
std::string_view to_string(SortOrder sort);

inline constexpr std::size_t kMaxKeywords = 3;
inline constexpr std::size_t kDefaultPerPage = 50;
inline constexpr std::size_t kMaxPerPage = 200;

struct Query {
  std::vector<std::string> keywords;
  Combine combine = Combine::all;
  std::uint64_t min_likes = 0;
  std::uint64_t min_replies = 0;
  std::uint64_t min_retweets = 0;
  std::optional<DateRange> date_range;
  SortOrder sort = SortOrder::recency_desc;
  std::size_t page = 1;
  std::size_t per_page = kDefaultPerPage;
};

/// Search parameters as they arrive on the wire, undecoded.
struct SearchRequest {
  std::vector<std::string> keywords;
  std::optional<std::string> combine;
  std::optional<std::string> min_likes;
  std::optional<std::string> min_replies;
  std::optional<std::string> min_retweets;
  std::optional<std::string> from;
  std::optional<std::string> to;
  std::optional<std::string> sort;
  std::optional<std::string> page;
  std::optional<std::string> per_page;
};

/// Decodes and normalizes a request. Collects every problem before throwing
/// ValidationError; field names match the wire parameters.
Query validate_query(const SearchRequest& request, std::size_t max_per_page = kMaxPerPage);

/// True iff the document satisfies the query's keyword, threshold and date
/// predicate. Exposed for callers that evaluate single documents.
bool matches(const InvertedIndex& index, DocId doc, const Query& query);

/// Every matching document, sorted per query.sort with id ascending as the
/// tie-break.
std::vector<DocId> match_all(const InvertedIndex& index, const Query& query);

struct ResultPage {
  std::size_t total_matches = 0;
  std::size_t page = 1;
  std::size_t per_page = kDefaultPerPage;
  std::vector<DocId> items;

  bool operator==(const ResultPage&) const = default;
};

ResultPage execute(const InvertedIndex& index, const Query& query);

}  // namespace mpoxdash
