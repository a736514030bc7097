#include <benchmark/benchmark.h>

#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mpoxdash/corpus.hpp"
#include "mpoxdash/ingest.hpp"

namespace {

using namespace mpoxdash;
namespace fs = std::filesystem;

fs::path scratch() {
  std::string tmpl = (fs::temp_directory_path() / "mpoxdash-bench-XXXXXX").string();
  return fs::path(::mkdtemp(tmpl.data()));
}

void BM_IngestCsv(benchmark::State& state) {
  const auto dir = scratch();
  const auto rows = state.range(0);
  {
    std::ofstream out(dir / "in.csv");
    out << "id,created_at,text,like_count,reply_count,retweet_count,location\n";
    for (int64_t i = 0; i < rows; ++i)
      out << 1'500'000'000'000'000'000LL + i << ",2024-05-0" << 1 + i % 9 << "T12:00:00Z,\"mpox update #" << i
          << ", stay safe\"," << i % 50 << ',' << i % 7 << ',' << i % 11 << ",\"Austin, TX\"\n";
  }
  IngestOptions opts;
  int run = 0;
  for (auto _ : state) {
    auto corpus = Corpus::open(dir / ("corpus" + std::to_string(run++)));
    benchmark::DoNotOptimize(ingest_file(dir / "in.csv", opts, corpus));
  }
  state.SetItemsProcessed(state.iterations() * rows);
  fs::remove_all(dir);
}
BENCHMARK(BM_IngestCsv)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace
