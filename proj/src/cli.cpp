#include "faststream/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "faststream/datasets.hpp"
#include "faststream/evaluation.hpp"
#include "faststream/report.hpp"
#include "faststream/stream_engine.hpp"

namespace faststream::cli {

namespace {

struct EngineFlags {
  std::string feature = "biterm";
  std::size_t delete_interval = kDefaultDeleteInterval;
  bool stopwords = false;

  EngineConfig config() const {
    EngineConfig cfg;
    cfg.feature_kind = *parse_feature_kind(feature);
    cfg.delete_interval = delete_interval;
    cfg.remove_stopwords = stopwords;
    return cfg;
  }
};

struct InputFlags {
  std::string path;
  std::string format;  // empty: guess from extension

  DatasetFormat resolved() const {
    return format.empty() ? guess_dataset_format(path) : *parse_dataset_format(format);
  }
  LabeledDataset load() const { return load_dataset(path, resolved()); }
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
  cmd->add_option("--feature", f.feature, "Feature kind")
      ->check(CLI::IsMember({"unigram", "bigram", "biterm"}))
      ->capture_default_str();
  cmd->add_option("--delete-interval", f.delete_interval,
                  "Texts between outdated-cluster deletion passes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--remove-stopwords", f.stopwords, "Drop common English stopwords");
}

void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--input", f.path, "Labeled dataset")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", f.format, "tsv or jsonl (default: by extension)")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
}

// The manifest fully determines a run and heads every artifact.
Report engine_manifest(std::string_view subcommand, const EngineConfig& cfg) {
  Report m;
  m.set("subcommand", std::string(subcommand));
  m.set("feature", std::string(to_string(cfg.feature_kind)));
  m.set("delete_interval", static_cast<std::uint64_t>(cfg.delete_interval));
  m.set("tie_break", std::string(to_string(cfg.tie_break)));
  m.set("remove_stopwords", cfg.remove_stopwords);
  return m;
}

std::string render(const Report& manifest, const Report& body) {
  Report all;
  all.merge(manifest, "manifest.");
  all.merge(body);
  return all.str();
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s.push_back(',');
    s += std::to_string(xs[i]);
  }
  return s;
}

Report trial_body(const TrialReport& r) {
  Report body;
  body.set("trials", static_cast<std::uint64_t>(r.per_trial.size()));
  body.set("nmi_mean", r.nmi_mean);
  body.set("runtime_mean_seconds", r.runtime_mean);
  for (std::size_t t = 0; t < r.per_trial.size(); ++t) {
    const auto& tr = r.per_trial[t];
    const auto p = "trial." + std::to_string(t) + ".";
    body.set(p + "shuffle_seed", tr.shuffle_seed);
    body.set(p + "nmi", tr.nmi);
    body.set(p + "final_cluster_count", static_cast<std::uint64_t>(tr.final_cluster_count));
    body.set(p + "live_clusters", static_cast<std::uint64_t>(tr.live_clusters));
    body.set(p + "runtime_seconds", tr.runtime_seconds);
  }
  return body;
}

int cmd_cluster(const InputFlags& input, const EngineFlags& engine,
                const std::optional<std::uint64_t>& seed, const std::string& out_assignments,
                const std::string& out_summary, std::ostream& out) {
  auto ds = input.load();
  if (seed) ds = shuffle(ds, *seed);
  const auto cfg = engine.config();

  Report manifest = engine_manifest("cluster", cfg);
  manifest.set("input", input.path);
  manifest.set("format", input.resolved() == DatasetFormat::tsv ? "tsv" : "jsonl");
  manifest.set("seed", seed ? std::to_string(*seed) : std::string("none"));
  manifest.set("out_assignments", out_assignments);
  manifest.set("out_summary", out_summary);

  const auto texts = ds.texts();
  StreamEngine eng(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto records = eng.run_stream(texts);
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream assignments;
  manifest.write(assignments, "# manifest.");
  for (std::size_t i = 0; i < records.size(); ++i) {
    assignments << ds.items[i].doc_id << '\t' << to_underlying(records[i].handle) << '\t'
                << (records[i].created_new ? 1 : 0) << '\n';
  }

  Report body;
  body.set("texts", static_cast<std::uint64_t>(records.size()));
  body.set("clusters_created", static_cast<std::uint64_t>(eng.store().clusters_created()));
  body.set("final_cluster_count", static_cast<std::uint64_t>(eng.store().live_count()));
  body.set("peak_live_clusters", static_cast<std::uint64_t>(eng.peak_live_clusters()));
  body.set("deleted_clusters", eng.store().deleted_cluster_count());
  body.set("deletion_passes", static_cast<std::uint64_t>(eng.deletion_passes()));
  body.set("nmi", nmi(ds.labels(), records));
  body.set("runtime_seconds", runtime);

  write_file_atomically(out_assignments, assignments.str());
  try {
    write_file_atomically(out_summary, render(manifest, body));
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(out_assignments, ignored);
    throw;
  }
  body.write(out);
  return 0;
}

int cmd_eval(const InputFlags& input, const EngineFlags& engine, std::size_t shuffles,
             std::uint64_t seed, const std::string& norm_name, const std::string& out_report,
             std::ostream& out) {
  const auto ds = input.load();
  const auto cfg = engine.config();
  const auto norm = *parse_nmi_norm(norm_name);

  Report manifest = engine_manifest("eval", cfg);
  manifest.set("input", input.path);
  manifest.set("shuffles", static_cast<std::uint64_t>(shuffles));
  manifest.set("seed", seed);
  manifest.set("nmi_norm", norm_name);
  manifest.set("out_report", out_report);

  const auto report = run_trials(ds, cfg, shuffles, seed, norm);
  write_file_atomically(out_report, render(manifest, trial_body(report)));
  out << "nmi_mean: " << format_double(report.nmi_mean) << '\n'
      << "runtime_mean_seconds: " << format_double(report.runtime_mean) << '\n';
  return 0;
}

int cmd_sweep_di(const InputFlags& input, const EngineFlags& engine,
                 const std::vector<std::size_t>& di_values, std::size_t shuffles,
                 std::uint64_t seed, const std::string& norm_name,
                 const std::string& out_report, const std::string& out_table,
                 std::ostream& out) {
  std::set<std::size_t> unique(di_values.begin(), di_values.end());
  if (unique.size() != di_values.size()) {
    throw CLI::ValidationError("--di", "duplicate delete-interval values");
  }
  const auto ds = input.load();
  const auto norm = *parse_nmi_norm(norm_name);
  auto cfg = engine.config();

  Report manifest = engine_manifest("sweep-di", cfg);
  manifest.set("input", input.path);
  manifest.set("di_values", join_sizes(di_values));
  manifest.set("shuffles", static_cast<std::uint64_t>(shuffles));
  manifest.set("seed", seed);
  manifest.set("nmi_norm", norm_name);
  manifest.set("out_report", out_report);
  if (!out_table.empty()) manifest.set("out_table", out_table);

  Report body;
  std::ostringstream table;
  manifest.write(table, "# manifest.");
  table << "di\tnmi_mean\n";
  body.set("rows", static_cast<std::uint64_t>(di_values.size()));
  for (std::size_t i = 0; i < di_values.size(); ++i) {
    cfg.delete_interval = di_values[i];
    const auto r = run_trials(ds, cfg, shuffles, seed, norm);
    const auto p = "row." + std::to_string(i) + ".";
    body.set(p + "di", static_cast<std::uint64_t>(di_values[i]));
    body.set(p + "nmi_mean", r.nmi_mean);
    body.set(p + "runtime_mean_seconds", r.runtime_mean);
    table << di_values[i] << '\t' << format_double(r.nmi_mean) << '\n';
    out << di_values[i] << '\t' << format_double(r.nmi_mean) << '\n';
  }
  if (!out_table.empty()) write_file_atomically(out_table, table.str());
  write_file_atomically(out_report, render(manifest, body));
  return 0;
}

int cmd_build_sot(const std::string& posts, const std::string& links, std::size_t pairs,
                  std::uint64_t seed, int link_type, const std::string& out_dataset,
                  const std::string& out_summary, std::ostream& out) {
  SoBuildOptions opts;
  opts.pair_sample = pairs;
  opts.seed = seed;
  opts.duplicate_link_type = link_type;
  const auto result = build_so_dataset(posts, links, opts);

  Report manifest;
  manifest.set("subcommand", "build-sot");
  manifest.set("posts", posts);
  manifest.set("links", links);
  manifest.set("pairs", static_cast<std::uint64_t>(pairs));
  manifest.set("seed", seed);
  manifest.set("link_type", link_type);
  manifest.set("out_dataset", out_dataset);

  Report body;
  body.set("duplicate_pairs", static_cast<std::uint64_t>(result.duplicate_pairs));
  body.set("sampled_pairs", static_cast<std::uint64_t>(result.sampled_pairs));
  body.set("components_total", static_cast<std::uint64_t>(result.components_total));
  body.set("length_mean", result.length_mean);
  body.set("length_stddev", result.length_stddev);
  body.set("components", static_cast<std::uint64_t>(result.components_kept));
  body.set("texts", static_cast<std::uint64_t>(result.dataset.size()));
  body.set("members_without_title", static_cast<std::uint64_t>(result.members_without_title));
  body.set("avg_words_per_text", average_words_per_text(result.dataset));

  // The dataset itself stays plain `label<TAB>text` so it loads as input.
  std::ostringstream data;
  write_tsv(result.dataset, data);
  write_file_atomically(out_dataset, data.str());
  if (!out_summary.empty()) write_file_atomically(out_summary, render(manifest, body));
  body.write(out);
  return 0;
}

struct BenchFlags {
  std::string input;
  std::string format;
  SyntheticSpec synthetic{5000, 20, 10, 6, 1};
};

int cmd_bench(const BenchFlags& bench, const EngineFlags& engine, std::uint64_t seed,
              const std::string& out_report, std::ostream& out) {
  const auto cfg = engine.config();
  Report manifest = engine_manifest("bench", cfg);
  LabeledDataset ds;
  if (!bench.input.empty()) {
    InputFlags in{bench.input, bench.format};
    ds = in.load();
    manifest.set("input", bench.input);
  } else {
    ds = make_synthetic_dataset(bench.synthetic);
    manifest.set("input", "synthetic");
    manifest.set("synthetic.clusters", static_cast<std::uint64_t>(bench.synthetic.clusters));
    manifest.set("synthetic.texts_per_cluster",
                 static_cast<std::uint64_t>(bench.synthetic.texts_per_cluster));
    manifest.set("synthetic.vocab_per_cluster",
                 static_cast<std::uint64_t>(bench.synthetic.vocab_per_cluster));
    manifest.set("synthetic.words_per_text",
                 static_cast<std::uint64_t>(bench.synthetic.words_per_text));
    manifest.set("synthetic.seed", bench.synthetic.seed);
  }
  manifest.set("seed", seed);
  manifest.set("out_report", out_report);

  const auto cmp = compare_speed(ds, cfg, seed);
  Report body;
  body.set("texts", static_cast<std::uint64_t>(cmp.texts));
  body.set("assignments_identical", true);
  body.set("clusters_created", static_cast<std::uint64_t>(cmp.clusters_created));
  body.set("final_live_clusters", static_cast<std::uint64_t>(cmp.final_live_clusters));
  body.set("peak_live_clusters", static_cast<std::uint64_t>(cmp.peak_live_clusters));
  body.set("indexed_seconds", cmp.indexed_seconds);
  body.set("exhaustive_seconds", cmp.exhaustive_seconds);
  body.set("speedup", cmp.speedup());
  write_file_atomically(out_report, render(manifest, body));
  body.write(out);
  return 0;
}

std::vector<std::size_t> default_di_values() {
  std::vector<std::size_t> v;
  for (std::size_t d = 100; d <= 1000; d += 100) v.push_back(d);
  return v;
}

int dispatch(CLI::App& app, int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  app.require_subcommand(1);

  EngineFlags engine;
  InputFlags input;
  std::optional<std::uint64_t> cluster_seed;
  std::uint64_t seed = 0;
  std::size_t shuffles = 20;
  std::string norm = "geometric";
  std::string out_assignments, out_summary, out_report, out_table, out_dataset;

  auto* cluster = app.add_subcommand("cluster", "Cluster one stream and write assignments");
  add_input_flags(cluster, input);
  add_engine_flags(cluster, engine);
  cluster->add_option("--seed", cluster_seed, "Shuffle with this seed (default: file order)");
  cluster->add_option("--out-assignments", out_assignments, "doc_id<TAB>cluster<TAB>created_new")
      ->required();
  cluster->add_option("--out-summary", out_summary, "Run summary")->required();

  auto add_trial_flags = [&](CLI::App* cmd) {
    cmd->add_option("--shuffles", shuffles, "Independent shuffled trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd->add_option("--nmi-norm", norm, "geometric or arithmetic")
        ->check(CLI::IsMember({"geometric", "arithmetic"}))
        ->capture_default_str();
    cmd->add_option("--out-report", out_report, "Report path")->required();
  };

  auto* eval = app.add_subcommand("eval", "Average NMI and runtime over shuffled trials");
  add_input_flags(eval, input);
  add_engine_flags(eval, engine);
  add_trial_flags(eval);

  std::vector<std::size_t> di_values = default_di_values();
  auto* sweep = app.add_subcommand("sweep-di", "Evaluate a range of delete intervals");
  add_input_flags(sweep, input);
  add_engine_flags(sweep, engine);
  add_trial_flags(sweep);
  sweep->add_option("--di", di_values, "Delete intervals (comma separated)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out-table", out_table, "Optional di<TAB>nmi_mean table");

  std::string posts, links;
  std::size_t pairs = kDefaultPairSample;
  int link_type = kDuplicateLinkType;
  auto* sot = app.add_subcommand("build-sot", "Build a duplicate-question dataset from dumps");
  sot->add_option("--posts", posts, "Posts.xml")->required()->check(CLI::ExistingFile);
  sot->add_option("--links", links, "PostLinks.xml")->required()->check(CLI::ExistingFile);
  sot->add_option("--pairs", pairs, "Duplicate pairs to sample")->capture_default_str();
  sot->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  sot->add_option("--link-type", link_type, "LinkTypeId marking duplicates")
      ->capture_default_str();
  sot->add_option("--out-dataset", out_dataset, "label<TAB>text output")->required();
  sot->add_option("--out-summary", out_summary, "Optional build summary");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time indexed vs exhaustive candidate scans");
  bench_cmd->add_option("--input", bench.input, "Dataset (default: synthetic stream)")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--format", bench.format, "tsv or jsonl")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  add_engine_flags(bench_cmd, engine);
  bench_cmd->add_option("--clusters", bench.synthetic.clusters)->capture_default_str();
  bench_cmd->add_option("--texts-per-cluster", bench.synthetic.texts_per_cluster)
      ->capture_default_str();
  bench_cmd->add_option("--vocab-per-cluster", bench.synthetic.vocab_per_cluster)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--words-per-text", bench.synthetic.words_per_text)
      ->capture_default_str();
  bench_cmd->add_option("--synthetic-seed", bench.synthetic.seed)->capture_default_str();
  bench_cmd->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  bench_cmd->add_option("--out-report", out_report, "Report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (cluster->parsed()) {
      return cmd_cluster(input, engine, cluster_seed, out_assignments, out_summary, out);
    }
    if (eval->parsed()) {
      return cmd_eval(input, engine, shuffles, seed, norm, out_report, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep_di(input, engine, di_values, shuffles, seed, norm, out_report,
                          out_table, out);
    }
    if (sot->parsed()) {
      return cmd_build_sot(posts, links, pairs, seed, link_type, out_dataset, out_summary,
                           out);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench, engine, seed, out_report, out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const EquivalenceError& e) {
    err << "error: correctness bug: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Streaming short-text clustering with an inverted cluster index", "faststream"};
  return dispatch(app, argc, argv, std::cout, std::cerr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("faststream");
  for (const auto& a : args) argv.push_back(a.c_str());
  CLI::App app{"Streaming short-text clustering with an inverted cluster index", "faststream"};
  return dispatch(app, static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace faststream::cli
