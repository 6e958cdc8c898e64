// Copyright 2026 The topicgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// topicgen: topic labels from title-generation candidate spans.
//
//   topicgen extract        --corpus docs.jsonl (--dumps DIR | --surrogate) [flags]
//   topicgen analyze-spans  (--dumps DIR | --corpus docs.jsonl --surrogate) [flags]
//   topicgen evaluate       --scores scores.csv [--stat mean-diff] [--samples N]
//   topicgen surrogate-dump --corpus docs.jsonl --out DIR
//
// Exit codes: 0 success, 1 some documents failed, 2 usage or format error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topicgen/topicgen.hpp"

namespace fs = std::filesystem;
using namespace topicgen;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

std::vector<io::DocumentRecord> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus '" + path + "'");
  try {
    return io::parse_corpus(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// Writes to the file, or stdout when path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw FormatError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SurrogateFlags {
  std::int64_t steps = 5;
  std::int64_t per_step = 50;
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    app.add_option("--steps", steps, "Surrogate generation steps")->capture_default_str();
    app.add_option("--per-step", per_step, "Surrogate candidates per step")->capture_default_str();
    app.add_option("--seed", seed, "Surrogate seed")->capture_default_str();
  }

  spans::SurrogateConfig config() const {
    spans::SurrogateConfig cfg;
    cfg.steps = steps;
    cfg.per_step = per_step;
    cfg.seed = seed;
    return cfg;
  }
};

// ---------------------------------------------------------------------------

struct ExtractCmd {
  std::string corpus;
  std::string dumps;
  std::string out;
  std::string tagmap;
  bool surrogate = false;
  bool diagnostics = false;
  std::string tagger = "rules";
  double max_distance = 0.05;
  std::int64_t max_rank = 15;
  double min_overlap = 0.75;
  std::optional<std::size_t> max_topics;
  unsigned jobs = 1;
  SurrogateFlags sur;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("extract", "Extract topic labels for every document");
    app->add_option("--corpus", corpus, "Corpus file (JSON lines)")->required();
    app->add_option("--dumps", dumps, "Directory of <doc_id>.json span dumps");
    app->add_flag("--surrogate", surrogate, "Generate spans with the surrogate when no dump exists");
    app->add_option("--max-distance", max_distance, "Keep spans with distance <= this")
        ->capture_default_str();
    app->add_option("--max-rank", max_rank, "Keep spans with rank < this")->capture_default_str();
    app->add_option("--min-overlap", min_overlap, "Overlap ratio a phrase must exceed")
        ->capture_default_str();
    app->add_option("--max-topics", max_topics, "Truncate each topic list");
    app->add_option("--tagger", tagger, "POS tags: pretagged|rules")
        ->check(CLI::IsMember({"pretagged", "rules"}))
        ->capture_default_str();
    app->add_option("--tagmap", tagmap, "Fine-to-coarse tag map (tagmap.tsv)");
    app->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    app->add_option("--out", out, "Output file (default stdout)");
    app->add_flag("--diagnostics", diagnostics, "Report per-document overlap diagnostics on stderr");
    sur.add_to(*app);
    app->callback([this] { code = run(); });
  }

  int run() {
    const auto docs = read_corpus(corpus);
    PipelineConfig cfg;
    cfg.filter.max_distance = max_distance;
    cfg.filter.max_rank = max_rank;
    cfg.min_overlap_ratio = min_overlap;
    cfg.max_topics = max_topics;
    cfg.tagger = tagger == "pretagged" ? TaggerKind::kPreTagged : TaggerKind::kRules;
    if (surrogate) cfg.surrogate = sur.config();
    if (!tagmap.empty()) {
      custom_map = chunk::TagMap::load_file(tagmap);
      cfg.tag_map = &*custom_map;
    }
    if (dumps.empty() && !surrogate) throw InvalidArgument("extract needs --dumps or --surrogate");
    cfg.validate();

    DumpSource source;
    if (!dumps.empty()) source = dump_directory(dumps);
    const auto results = extract_topics(docs, source, cfg, jobs);

    Output output(out);
    int status = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (const auto* err = std::get_if<std::string>(&results[i])) {
        std::cerr << "error: " << docs[i].doc_id << ": " << *err << '\n';
        status = kExitPartial;
        continue;
      }
      const auto& r = std::get<DocumentTopics>(results[i]);
      output.stream() << io::emit_topic_line(r.output);
      if (diagnostics) {
        std::cerr << r.output.doc_id << ": phrases=" << r.n_phrases
                  << " filtered_spans=" << r.n_filtered_spans << " selected=" << r.n_selected
                  << " ratio_above_one=" << r.ratio_above_one << '\n';
      }
    }
    return status;
  }

  std::optional<chunk::TagMap> custom_map;
  int code = 0;
};

// ---------------------------------------------------------------------------

std::vector<io::SpanDump> read_dump_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<io::SpanDump> dumps;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      dumps.push_back(io::parse_span_dump(in));
    } catch (const FormatError& e) {
      throw FormatError(f.string() + ": " + e.what());
    }
  }
  return dumps;
}

struct AnalyzeCmd {
  std::string dumps;
  std::string corpus;
  std::string out;
  std::string report;
  bool surrogate = false;
  std::int64_t span_limit = 15;
  std::int64_t rank_limit = 50;
  double epsilon = 0.01;
  double knee_fraction = 0.2;
  unsigned jobs = 1;
  SurrogateFlags sur;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("analyze-spans",
                                    "Aggregate candidate distances over span index and rank");
    app->add_option("--dumps", dumps, "Directory of span dumps (*.json)");
    app->add_option("--corpus", corpus, "Corpus file, used with --surrogate");
    app->add_flag("--surrogate", surrogate, "Generate dumps for the corpus with the surrogate");
    app->add_option("--span-limit", span_limit, "Span index rows kept")->capture_default_str();
    app->add_option("--rank-limit", rank_limit, "Candidate ranks kept")->capture_default_str();
    app->add_option("--out", out, "CSV output (default stdout)");
    app->add_option("--report", report, "Write a stabilization report (JSON) to this file");
    app->add_option("--epsilon", epsilon, "Row stabilization tolerance")->capture_default_str();
    app->add_option("--knee-fraction", knee_fraction, "Knee slope fraction")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    sur.add_to(*app);
    app->callback([this] { code = run(); });
  }

  int run() {
    const analytics::SurfaceLimits limits{span_limit, rank_limit};
    analytics::DistanceSurface surface(limits);
    if (!dumps.empty()) {
      for (const auto& d : read_dump_dir(dumps)) surface.add(d);
    } else if (surrogate && !corpus.empty()) {
      const auto docs = read_corpus(corpus);
      const auto cfg = sur.config();
      const auto parts = parallel_map<analytics::DistanceSurface>(
          docs.size(), jobs, [&](std::size_t i) {
            analytics::DistanceSurface part(limits);
            part.add(spans::surrogate_generate(docs[i], cfg));
            return part;
          });
      for (const auto& p : parts) surface.merge(p);
    } else {
      throw InvalidArgument("analyze-spans needs --dumps or --corpus with --surrogate");
    }
    Output output(out);
    surface.write_csv(output.stream());
    if (!report.empty()) {
      analytics::StabilizationOptions opt;
      opt.epsilon = epsilon;
      opt.knee_fraction = knee_fraction;
      Output rep(report);
      rep.stream() << analytics::report_to_json(analytics::stabilization_report(surface, opt)).dump(2)
                   << '\n';
    }
    return 0;
  }

  int code = 0;
};

// ---------------------------------------------------------------------------

struct EvaluateCmd {
  std::string scores;
  std::string stat = "mean-diff";
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string group = "all";
  unsigned jobs = 1;
  std::string out;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("evaluate", "Score aggregation and double bootstrap");
    app->add_option("--scores", scores, "Score table (CSV)")->required();
    app->add_option("--stat", stat,
                    "mean-diff|mean-real|mean-generated|share-lower|share-equal|share-higher")
        ->capture_default_str();
    app->add_option("--samples", samples, "Bootstrap samples")->capture_default_str();
    app->add_option("--seed", seed, "Bootstrap seed")->capture_default_str();
    app->add_option("--group", group, "guardian|huffpost|all")
        ->check(CLI::IsMember({"guardian", "huffpost", "all"}))
        ->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    app->add_option("--out", out, "Output file (default stdout)");
    app->callback([this] { code = run(); });
  }

  int run() {
    std::ifstream in(scores);
    if (!in) throw FormatError("cannot open score table '" + scores + "'");
    const auto table = io::parse_score_table(in);
    const auto filter = eval::parse_filter(group);

    const auto summaries = eval::aggregate_scores(table, filter);
    const auto paired = eval::compare_pairs(table, filter);
    const auto matrix = eval::ScoreMatrix::from_table(table, filter);
    const auto result = eval::bootstrap_ci(matrix, stat, samples, seed, jobs);

    io::Json j;
    j["group"] = group;
    j["statistic"] = result.statistic;
    j["point_estimate"] = result.point_estimate;
    j["ci_low"] = result.ci_low;
    j["ci_high"] = result.ci_high;
    j["n_samples"] = result.n_samples;
    j["seed"] = result.seed;
    j["n_annotators"] = matrix.n_annotators();
    j["n_articles"] = matrix.n_articles();
    for (const auto* s : {&summaries.real, &summaries.generated}) {
      io::Json js;
      js["average"] = s->average;
      js["median"] = s->median;
      js["n_articles"] = s->n_articles;
      j["summary"][std::string(io::to_string(s->variant))] = std::move(js);
    }
    const auto shares = paired.shares();
    io::Json jp;
    jp["pairs"] = paired.pairs();
    jp["counts"] = {{"generated_lower", paired.generated_lower},
                    {"equal", paired.equal},
                    {"generated_higher", paired.generated_higher}};
    jp["shares"] = {{"generated_lower", shares[0]},
                    {"equal", shares[1]},
                    {"generated_higher", shares[2]}};
    for (const char* name : {"share-lower", "share-equal", "share-higher"}) {
      const auto ci = eval::bootstrap_ci(matrix, name, samples, seed, jobs);
      jp["ci"][name] = {ci.ci_low, ci.ci_high};
    }
    j["paired"] = std::move(jp);

    Output output(out);
    output.stream() << j.dump(2) << '\n';
    return 0;
  }

  int code = 0;
};

// ---------------------------------------------------------------------------

struct SurrogateDumpCmd {
  std::string corpus;
  std::string out;
  SurrogateFlags sur;

  void add_to(CLI::App& root) {
    auto* app = root.add_subcommand("surrogate-dump", "Write surrogate span dumps for a corpus");
    app->add_option("--corpus", corpus, "Corpus file (JSON lines)")->required();
    app->add_option("--out", out, "Output directory")->required();
    sur.add_to(*app);
    app->callback([this] { code = run(); });
  }

  int run() {
    const auto docs = read_corpus(corpus);
    fs::create_directories(out);
    const auto cfg = sur.config();
    for (const auto& doc : docs) {
      const auto path = fs::path(out) / (doc.doc_id + ".json");
      std::ofstream f(path);
      if (!f) throw FormatError("cannot write '" + path.string() + "'");
      f << io::emit_span_dump(spans::surrogate_generate(doc, cfg));
    }
    return 0;
  }

  int code = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic labels from title-generation candidate spans"};
  app.require_subcommand(1);
  ExtractCmd extract;
  AnalyzeCmd analyze;
  EvaluateCmd evaluate;
  SurrogateDumpCmd dump;
  extract.add_to(app);
  analyze.add_to(app);
  evaluate.add_to(app);
  dump.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return extract.code | analyze.code | evaluate.code | dump.code;
}
