#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mpoxdash/analytics.hpp"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/search.hpp"
#include "mpoxdash/text.hpp"

namespace {

using namespace mpoxdash;
using namespace std::chrono;

const std::vector<std::string> kWords = {"mpox",   "vaccine", "cases",  "outbreak", "cdc",   "who",     "health",
                                         "trust",  "covid",   "hoax",   "news",     "clinic", "spread", "risk",
                                         "public", "men",     "travel", "fever",    "rash",  "lockdown"};

std::shared_ptr<const CorpusSnapshot> corpus(std::size_t n) {
  std::mt19937 rng(static_cast<unsigned>(n));
  std::geometric_distribution<std::uint64_t> eng(0.05);
  std::vector<Tweet> tweets;
  std::set<std::string> ids;
  const Day first{2024y / 4 / 1};
  for (std::size_t i = 0; i < n; ++i) {
    Tweet t;
    t.id = std::to_string(1'700'000'000'000'000'000ULL + i);
    t.created_at = first + days{static_cast<int>(rng() % 90)} + seconds{rng() % 86400};
    for (int w = 0; w < 12; ++w) t.text += (w ? " " : "") + kWords[rng() % kWords.size()];
    t.engagement = {eng(rng), eng(rng) / 4, eng(rng) / 2};
    ids.insert(t.id);
    tweets.push_back(std::move(t));
  }
  return std::make_shared<const CorpusSnapshot>(std::move(tweets), ids_digest(ids));
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = "Officials say #Mpox cases are RISING again; @CDC urges vaccination - thread 1/4";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_BuildIndex(benchmark::State& state) {
  const auto snap = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(InvertedIndex(snap));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Execute(benchmark::State& state) {
  static const InvertedIndex index(corpus(100'000));
  Query q;
  q.keywords = {"mpox", "vaccine", "cdc"};
  q.combine = state.range(0) ? Combine::any : Combine::all;
  q.min_likes = 5;
  q.sort = SortOrder::likes_desc;
  for (auto _ : state) benchmark::DoNotOptimize(execute(index, q));
}
BENCHMARK(BM_Execute)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_KeywordTrend(benchmark::State& state) {
  const auto snap = corpus(100'000);
  const DateRange range(sys_days{2024y / 4 / 1}, sys_days{2024y / 6 / 29});
  for (auto _ : state) benchmark::DoNotOptimize(keyword_trend(*snap, "mpox", range));
}
BENCHMARK(BM_KeywordTrend)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
