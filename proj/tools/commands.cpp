#include "commands.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpoxdash/analytics.hpp"
#include "mpoxdash/config.hpp"
#include "mpoxdash/corpus.hpp"
#include "mpoxdash/error.hpp"
#include "mpoxdash/ingest.hpp"
#include "mpoxdash/search.hpp"
#include "mpoxdash/service.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct Common {
  std::string config;
  bool json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Path to the JSON config file")->required();
  cmd->add_flag("--json", c.json, "Machine-readable output on stdout");
}

bool same_file(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

bool inside(const fs::path& child, const fs::path& dir) {
  std::error_code ec;
  const auto c = fs::weakly_canonical(child, ec);
  const auto d = fs::weakly_canonical(dir, ec);
  auto [dit, cit] = std::mismatch(d.begin(), d.end(), c.begin(), c.end());
  return dit == d.end();
}

// --- ingest ------------------------------------------------------------------

struct FileOutcome {
  std::string file;
  std::optional<IngestReport> report;
  std::string error;
};

int cmd_ingest(const Common& common, const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  const ServiceConfig cfg = load_config(common.config);
  Corpus corpus = Corpus::open(cfg.corpus_path);

  std::vector<std::pair<fs::path, IngestOptions>> jobs;
  if (paths.empty()) {
    for (const auto& d : cfg.datasets) jobs.emplace_back(d.path, ingest_options_for(cfg, &d));
  } else {
    for (const auto& p : paths) {
      const DatasetSpec* match = nullptr;
      for (const auto& d : cfg.datasets)
        if (same_file(d.path, p)) match = &d;
      jobs.emplace_back(p, ingest_options_for(cfg, match));
    }
  }
  if (jobs.empty()) {
    err << "ingest: no input files (pass paths or configure datasets)\n";
    return kUsage;
  }

  std::vector<FileOutcome> outcomes;
  bool failed = false;
  for (const auto& [path, opts] : jobs) {
    FileOutcome o{path.string(), std::nullopt, {}};
    if (inside(path, corpus.directory())) {
      o.error = "refusing to ingest a file inside the corpus directory";
    } else {
      try {
        o.report = ingest_file(path, opts, corpus);
      } catch (const IoError& e) {
        o.error = e.what();
      } catch (const UnknownFormat& e) {
        o.error = e.what();
      }
    }
    if (!o.report) {
      failed = true;
      err << "ingest: " << o.file << ": " << o.error << '\n';
    }
    outcomes.push_back(std::move(o));
  }

  if (common.json) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : outcomes) {
      ordered_json row;
      row["file"] = o.file;
      if (o.report) {
        const auto& r = *o.report;
        row["status"] = "ok";
        row["format"] = r.format ? ordered_json(std::string(to_string(*r.format))) : ordered_json(nullptr);
        row["records_read"] = r.records_read;
        row["matched"] = r.matched;
        row["unmatched"] = r.unmatched;
        row["malformed"] = r.malformed;
        row["duplicates_skipped"] = r.duplicates_skipped;
        row["appended"] = r.appended();
      } else {
        row["status"] = "failed";
        row["error"] = o.error;
      }
      arr.push_back(std::move(row));
    }
    out << arr.dump(2) << '\n';
  } else {
    IngestReport total;
    out << std::left << std::setw(40) << "file" << std::setw(16) << "format" << std::right << std::setw(9) << "read"
        << std::setw(9) << "matched" << std::setw(11) << "unmatched" << std::setw(11) << "malformed" << std::setw(12)
        << "duplicates" << '\n';
    for (const auto& o : outcomes) {
      out << std::left << std::setw(40) << o.file;
      if (!o.report) {
        out << "FAILED: " << o.error << '\n';
        continue;
      }
      const auto& r = *o.report;
      out << std::setw(16) << (r.format ? std::string(to_string(*r.format)) : std::string("(empty)")) << std::right
          << std::setw(9) << r.records_read << std::setw(9) << r.matched << std::setw(11) << r.unmatched
          << std::setw(11) << r.malformed << std::setw(12) << r.duplicates_skipped << '\n';
      total.records_read += r.records_read;
      total.matched += r.matched;
      total.unmatched += r.unmatched;
      total.malformed += r.malformed;
      total.duplicates_skipped += r.duplicates_skipped;
    }
    out << std::left << std::setw(56) << "total" << std::right << std::setw(9) << total.records_read << std::setw(9)
        << total.matched << std::setw(11) << total.unmatched << std::setw(11) << total.malformed << std::setw(12)
        << total.duplicates_skipped << '\n';
    out << "corpus total: " << corpus.size() << '\n';
  }
  return failed ? kPartial : kOk;
}

// --- export ------------------------------------------------------------------

int cmd_export(const Common& common, const std::string& from, const std::string& to, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  const ServiceConfig cfg = load_config(common.config);
  auto range = DateRange::everything();
  std::optional<Day> f, t;
  if (!from.empty() && !(f = parse_day(from))) {
    err << "export: --from: expected YYYY-MM-DD\n";
    return kUsage;
  }
  if (!to.empty() && !(t = parse_day(to))) {
    err << "export: --to: expected YYYY-MM-DD\n";
    return kUsage;
  }
  try {
    range = DateRange(f.value_or(range.from()), t.value_or(range.to()));
  } catch (const InvalidRange& e) {
    err << "export: " << e.what() << '\n';
    return kUsage;
  }
  if (inside(out_path, cfg.corpus_path)) {
    err << "export: --out " << out_path << " is inside the corpus directory " << cfg.corpus_path << '\n';
    return kUsage;
  }

  const Corpus corpus = Corpus::open(cfg.corpus_path);
  const auto snapshot = corpus.snapshot();
  const auto slice = snapshot->scan(range);
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "export: cannot write " << out_path << '\n';
    return kUsage;
  }
  for (const auto& tweet : slice) file << to_canonical_json(tweet) << '\n';
  file.flush();
  if (!file) {
    err << "export: write to " << out_path << " failed\n";
    return kUsage;
  }

  if (common.json) {
    ordered_json doc;
    doc["out"] = out_path;
    doc["records"] = slice.size();
    doc["from"] = format_day(range.from());
    doc["to"] = format_day(range.to());
    out << doc.dump(2) << '\n';
  } else {
    out << "exported " << slice.size() << " tweets to " << out_path << '\n';
  }
  return kOk;
}

// --- label -------------------------------------------------------------------

int cmd_label(const Common& common, const std::optional<std::string>& id, const std::optional<std::string>& text,
              std::ostream& out, std::ostream& err) {
  const ServiceConfig cfg = load_config(common.config);
  const Labeling labeling = load_labeling(cfg);

  std::string body;
  if (id) {
    const Corpus corpus = Corpus::open(cfg.corpus_path);
    const auto snapshot = corpus.snapshot();
    const auto pos = snapshot->find(*id);
    if (!pos) {
      err << "label: unknown id " << *id << '\n';
      return kUsage;
    }
    body = snapshot->tweets()[*pos].text;
  } else {
    body = *text;
  }

  const auto tokens = tokenize(body);
  const auto topic = explain_topic(tokens, labeling.topics);
  const auto sentiment = score_sentiment(tokens, labeling.sentiment, labeling.tau);
  std::map<std::string, std::size_t> sentiment_hits;
  for (const auto& tok : tokens)
    if (labeling.sentiment.entries.count(tok)) ++sentiment_hits[tok];

  if (common.json) {
    ordered_json doc;
    if (id) doc["id"] = *id;
    doc["label"] = std::string(to_string(topic.label));
    doc["sentiment"] = {{"raw", sentiment.raw}, {"polarity", std::string(to_string(sentiment.polarity))}};
    doc["topic_matches"] = ordered_json::array();
    for (const auto& m : topic.matches)
      doc["topic_matches"].push_back({{"label", std::string(to_string(m.label))}, {"terms", m.terms}});
    doc["sentiment_terms"] = ordered_json::array();
    for (const auto& [tok, n] : sentiment_hits)
      doc["sentiment_terms"].push_back(
          {{"token", tok}, {"weight", labeling.sentiment.entries.at(tok)}, {"occurrences", n}});
    out << doc.dump(2) << '\n';
    return kOk;
  }

  out << "label: " << to_string(topic.label) << '\n';
  out << "sentiment: " << sentiment.raw << " (" << to_string(sentiment.polarity) << ", tau " << labeling.tau
      << ")\n";
  out << "topic matches:\n";
  for (const auto& m : topic.matches) {
    out << "  " << to_string(m.label) << " (" << m.terms.size() << "):";
    for (const auto& t : m.terms) out << ' ' << t;
    out << '\n';
  }
  out << "sentiment terms:";
  if (sentiment_hits.empty()) out << " none";
  for (const auto& [tok, n] : sentiment_hits) out << ' ' << tok << '(' << labeling.sentiment.entries.at(tok) << ")x" << n;
  out << '\n';
  return kOk;
}

// --- check -------------------------------------------------------------------

int cmd_check(const Common& common, std::ostream& out, std::ostream& err) {
  const ServiceConfig cfg = load_config(common.config);
  const Corpus corpus = Corpus::open(cfg.corpus_path);
  const auto snapshot = corpus.snapshot();
  const InvertedIndex index(snapshot);

  // Rebuild postings by brute force and compare token by token.
  std::map<std::string, std::vector<DocId>> expected;
  const auto& tweets = snapshot->tweets();
  for (DocId d = 0; d < tweets.size(); ++d) {
    auto toks = tokenize(tweets[d].text);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) expected[t].push_back(d);
  }
  std::size_t mismatched = 0;
  for (const auto& [tok, docs] : expected) {
    auto got = index.postings(tok);
    if (!std::equal(got.begin(), got.end(), docs.begin(), docs.end())) {
      ++mismatched;
      err << "check: postings mismatch for '" << tok << "'\n";
    }
  }
  if (expected.size() != index.token_count()) ++mismatched;

  if (common.json) {
    ordered_json doc;
    doc["snapshot_id"] = snapshot->id();
    doc["documents"] = index.document_count();
    doc["tokens"] = index.token_count();
    doc["mismatched_tokens"] = mismatched;
    doc["ok"] = mismatched == 0;
    out << doc.dump(2) << '\n';
  } else {
    out << "snapshot " << snapshot->id() << '\n'
        << "documents: " << index.document_count() << '\n'
        << "tokens: " << index.token_count() << '\n'
        << "mismatched tokens: " << mismatched << '\n'
        << (mismatched == 0 ? "index OK" : "index MISMATCH") << '\n';
  }
  return mismatched == 0 ? kOk : kPartial;
}

// --- serve -------------------------------------------------------------------

int cmd_serve(const Common& common, std::ostream& out, std::ostream& err) {
  ServiceConfig cfg = load_config(common.config);
  if (const char* bind = std::getenv(std::string(kBindEnvVar).c_str()); bind != nullptr && *bind != '\0') {
    try {
      apply_bind(cfg, bind);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(kBindEnvVar), std::string(e.what()).substr(e.key().size() + 2));
    }
  }
  check_serve_paths(cfg);

  // Block termination signals before any server thread exists so that only
  // the watcher below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Api api(cfg);
  HttpServer server(api);
  if (!server.bind()) {
    err << "serve: bind: cannot listen on " << cfg.host << ':' << cfg.port << '\n';
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    return kUsage;
  }

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  const pthread_t watcher_handle = watcher.native_handle();

  if (common.json) {
    out << ordered_json{{"listening", cfg.host + ":" + std::to_string(cfg.port)}, {"snapshot_id", api.snapshot_id()}}.dump()
        << std::endl;
  } else {
    out << "listening on http://" << cfg.host << ':' << cfg.port << " (snapshot " << api.snapshot_id() << ")"
        << std::endl;
  }
  server.run();
  pthread_kill(watcher_handle, SIGTERM);  // wakes the watcher if run() ended on its own
  watcher.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  err << "serve: shut down\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mpox tweet corpus: ingest, inspect and serve"};
  app.require_subcommand(1);
  Common common;

  auto* ingest = app.add_subcommand("ingest", "Ingest dataset files into the corpus");
  add_common(ingest, common);
  std::vector<std::string> paths;
  ingest->add_option("paths", paths, "Files to ingest (default: datasets from the config)");

  auto* exp = app.add_subcommand("export", "Write canonical NDJSON for a date range");
  add_common(exp, common);
  std::string from, to, out_path;
  exp->add_option("--from", from, "First UTC day (YYYY-MM-DD)");
  exp->add_option("--to", to, "Last UTC day (YYYY-MM-DD)");
  exp->add_option("--out", out_path, "Output file")->required();

  auto* label = app.add_subcommand("label", "Explain the topic label and sentiment of a tweet");
  add_common(label, common);
  std::optional<std::string> id, text;
  auto* input = label->add_option_group("input", "Exactly one of --id or --text");
  input->add_option("--id", id, "Tweet id from the corpus");
  input->add_option("--text", text, "Free text");
  input->require_option(1);

  auto* check = app.add_subcommand("check", "Verify the store and rebuild-check the index");
  add_common(check, common);

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  add_common(serve, common);

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return cmd_ingest(common, paths, out, err);
    if (*exp) return cmd_export(common, from, to, out_path, out, err);
    if (*label) return cmd_label(common, id, text, out, err);
    if (*check) return cmd_check(common, out, err);
    if (*serve) return cmd_serve(common, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const StoreCorrupt& e) {
    err << "corpus error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mpoxdash::cli
