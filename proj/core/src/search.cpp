#include "mpoxdash/search.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "mpoxdash/error.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {

InvertedIndex::InvertedIndex(std::shared_ptr<const CorpusSnapshot> snapshot) : snapshot_(std::move(snapshot)) {
  const auto& tweets = snapshot_->tweets();
  docs_.reserve(tweets.size());
  for (DocId doc = 0; doc < tweets.size(); ++doc) {
    const Tweet& t = tweets[doc];
    docs_.push_back({t.engagement, day_of(t.created_at)});
    for (auto& tok : tokenize(t.text)) {
      auto& list = postings_[std::move(tok)];
      if (list.empty() || list.back() != doc) list.push_back(doc);
    }
  }
}

std::span<const DocId> InvertedIndex::postings(std::string_view token) const {
  auto it = postings_.find(std::string(token));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::string> InvertedIndex::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(postings_.size());
  for (const auto& [tok, _] : postings_) out.push_back(tok);
  std::sort(out.begin(), out.end());
  return out;
}

bool InvertedIndex::operator==(const InvertedIndex& other) const {
  return snapshot_->id() == other.snapshot_->id() && postings_ == other.postings_ && docs_ == other.docs_;
}

std::string_view to_string(Combine combine) { return combine == Combine::all ? "all" : "any"; }

std::string_view to_string(SortOrder sort) {
  switch (sort) {
    case SortOrder::recency_desc: return "recency_desc";
    case SortOrder::likes_desc: return "likes_desc";
    case SortOrder::retweets_desc: return "retweets_desc";
  }
  return "?";
}

namespace {

std::optional<std::uint64_t> parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<DocId> intersect(std::vector<std::span<const DocId>> lists) {
  std::sort(lists.begin(), lists.end(), [](auto a, auto b) { return a.size() < b.size(); });
  std::vector<DocId> acc(lists.front().begin(), lists.front().end());
  for (std::size_t i = 1; i < lists.size() && !acc.empty(); ++i) {
    std::vector<DocId> next;
    std::set_intersection(acc.begin(), acc.end(), lists[i].begin(), lists[i].end(), std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

std::vector<DocId> unite(const std::vector<std::span<const DocId>>& lists) {
  std::vector<DocId> acc;
  for (auto list : lists) {
    std::vector<DocId> next;
    std::set_union(acc.begin(), acc.end(), list.begin(), list.end(), std::back_inserter(next));
    acc = std::move(next);
  }
  return acc;
}

bool passes_filters(const InvertedIndex::DocMeta& m, const Query& q) {
  return m.engagement.like_count >= q.min_likes && m.engagement.reply_count >= q.min_replies &&
         m.engagement.retweet_count >= q.min_retweets && (!q.date_range || q.date_range->contains(m.day));
}

}  // namespace

Query validate_query(const SearchRequest& request, std::size_t max_per_page) {
  std::vector<FieldError> errors;
  auto fail = [&](std::string field, std::string message) {
    FieldError e{std::move(field), std::move(message)};
    if (std::find(errors.begin(), errors.end(), e) == errors.end()) errors.push_back(std::move(e));
  };
  Query q;

  if (request.keywords.empty()) fail("keywords", "at least 1 required");
  if (request.keywords.size() > kMaxKeywords) fail("keywords", "at most 3");
  for (const auto& raw : request.keywords) {
    auto toks = tokenize(raw);
    if (toks.size() != 1) {
      fail("keywords", "single token required");
      continue;
    }
    if (std::find(q.keywords.begin(), q.keywords.end(), toks.front()) == q.keywords.end())
      q.keywords.push_back(std::move(toks.front()));
  }

  if (request.combine) {
    if (*request.combine == "all") q.combine = Combine::all;
    else if (*request.combine == "any") q.combine = Combine::any;
    else fail("combine", "must be 'all' or 'any'");
  }

  auto threshold = [&](const std::optional<std::string>& raw, const char* field, std::uint64_t& out) {
    if (!raw) return;
    if (auto v = parse_uint(*raw)) out = *v;
    else fail(field, "must be a non-negative integer");
  };
  threshold(request.min_likes, "min_likes", q.min_likes);
  threshold(request.min_replies, "min_replies", q.min_replies);
  threshold(request.min_retweets, "min_retweets", q.min_retweets);

  std::optional<Day> from, to;
  bool dates_ok = true;
  if (request.from && !(from = parse_day(*request.from))) {
    fail("from", "expected YYYY-MM-DD");
    dates_ok = false;
  }
  if (request.to && !(to = parse_day(*request.to))) {
    fail("to", "expected YYYY-MM-DD");
    dates_ok = false;
  }
  if (dates_ok && from && to && *from > *to) {
    fail("from", "must not be after to");
  } else if (dates_ok && (from || to)) {
    const auto all = DateRange::everything();
    q.date_range = DateRange(from.value_or(all.from()), to.value_or(all.to()));
  }

  if (request.sort) {
    if (*request.sort == "recency_desc") q.sort = SortOrder::recency_desc;
    else if (*request.sort == "likes_desc") q.sort = SortOrder::likes_desc;
    else if (*request.sort == "retweets_desc") q.sort = SortOrder::retweets_desc;
    else fail("sort", "must be one of recency_desc, likes_desc, retweets_desc");
  }

  if (request.page) {
    auto v = parse_uint(*request.page);
    if (!v || *v < 1) fail("page", "must be a positive integer");
    else q.page = *v;
  }
  if (request.per_page) {
    auto v = parse_uint(*request.per_page);
    if (!v || *v < 1 || *v > max_per_page) fail("per_page", "must be between 1 and " + std::to_string(max_per_page));
    else q.per_page = *v;
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));
  return q;
}

bool matches(const InvertedIndex& index, DocId doc, const Query& query) {
  if (!passes_filters(index.meta(doc), query)) return false;
  std::size_t hits = 0;
  for (const auto& k : query.keywords) {
    auto list = index.postings(k);
    if (std::binary_search(list.begin(), list.end(), doc)) ++hits;
  }
  return query.combine == Combine::all ? hits == query.keywords.size() && hits > 0 : hits > 0;
}

std::vector<DocId> match_all(const InvertedIndex& index, const Query& query) {
  if (query.keywords.empty()) return {};
  std::vector<std::span<const DocId>> lists;
  for (const auto& k : query.keywords) lists.push_back(index.postings(k));
  std::vector<DocId> candidates = query.combine == Combine::all ? intersect(lists) : unite(lists);

  std::vector<DocId> out;
  out.reserve(candidates.size());
  for (DocId d : candidates)
    if (passes_filters(index.meta(d), query)) out.push_back(d);

  const auto& tweets = index.snapshot().tweets();
  auto by_id = [&](DocId a, DocId b) { return tweets[a].id < tweets[b].id; };
  switch (query.sort) {
    case SortOrder::recency_desc:
      std::sort(out.begin(), out.end(), [&](DocId a, DocId b) {
        if (tweets[a].created_at != tweets[b].created_at) return tweets[a].created_at > tweets[b].created_at;
        return by_id(a, b);
      });
      break;
    case SortOrder::likes_desc:
      std::sort(out.begin(), out.end(), [&](DocId a, DocId b) {
        const auto la = index.meta(a).engagement.like_count, lb = index.meta(b).engagement.like_count;
        return la != lb ? la > lb : by_id(a, b);
      });
      break;
    case SortOrder::retweets_desc:
      std::sort(out.begin(), out.end(), [&](DocId a, DocId b) {
        const auto ra = index.meta(a).engagement.retweet_count, rb = index.meta(b).engagement.retweet_count;
        return ra != rb ? ra > rb : by_id(a, b);
      });
      break;
  }
  return out;
}

ResultPage execute(const InvertedIndex& index, const Query& query) {
  const auto all = match_all(index, query);
  ResultPage page;
  page.total_matches = all.size();
  page.page = query.page;
  page.per_page = query.per_page;
  // The first guard keeps (page - 1) * per_page from overflowing.
  if (query.per_page > 0 && query.page >= 1 && query.page - 1 <= all.size() / query.per_page) {
    const std::size_t offset = (query.page - 1) * query.per_page;
    const std::size_t end = std::min(all.size(), offset + query.per_page);
    if (offset < end)
      page.items.assign(all.begin() + static_cast<std::ptrdiff_t>(offset), all.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return page;
}

}  // namespace mpoxdash
