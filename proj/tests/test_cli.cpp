#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "faststream/cli.hpp"
#include "faststream/datasets.hpp"
#include "faststream/report.hpp"
#include "test_support.hpp"

using namespace faststream;
namespace fs = std::filesystem;
using testing::slurp;
using testing::TempDir;
using testing::without_timing;

namespace {

const fs::path kFixtures = FASTSTREAM_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_synthetic(const TempDir& dir) {
  SyntheticSpec spec;
  spec.clusters = 6;
  spec.texts_per_cluster = 12;
  const auto path = dir / "synthetic.tsv";
  std::ofstream out(path);
  write_tsv(make_synthetic_dataset(spec), out);
  return path;
}

}  // namespace

TEST_CASE("cluster writes assignments and a summary") {
  TempDir dir;
  const auto input = write_synthetic(dir);
  const auto r = run({"cluster", "--input", input, "--seed", "3", "--out-assignments",
                      dir / "a.tsv", "--out-summary", dir / "s.txt"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto assignments = slurp(dir / "a.tsv");
  CHECK(assignments.rfind("# manifest.subcommand: cluster\n", 0) == 0);
  std::istringstream lines(assignments);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#') continue;
    CHECK(std::count(line.begin(), line.end(), '\t') == 2);
    ++rows;
  }
  CHECK(rows == 72);
  const auto summary = slurp(dir / "s.txt");
  CHECK(summary.find("manifest.feature: biterm\n") != std::string::npos);
  CHECK(summary.find("manifest.delete_interval: 500\n") != std::string::npos);
  CHECK(summary.find("texts: 72\n") != std::string::npos);
  CHECK(summary.find("nmi: ") != std::string::npos);
}

TEST_CASE("cluster on an empty input fails without artifacts") {
  TempDir dir;
  const auto input = dir / "empty.tsv";
  std::ofstream(input).close();
  const auto r = run({"cluster", "--input", input, "--out-assignments", dir / "a.tsv",
                      "--out-summary", dir / "s.txt"});
  CHECK(r.code != 0);
  CHECK(r.err.find("empty") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "a.tsv"));
  CHECK_FALSE(fs::exists(dir / "s.txt"));
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run({}).code != 0);
  CHECK(run({"cluster"}).code != 0);
  CHECK(run({"eval", "--input", "/nonexistent", "--out-report", "/tmp/x"}).code != 0);
  TempDir dir;
  const auto input = write_synthetic(dir);
  CHECK(run({"cluster", "--input", input, "--feature", "trigram", "--out-assignments",
             dir / "a", "--out-summary", dir / "s"})
            .code != 0);
  CHECK(run({"cluster", "--input", input, "--delete-interval", "0", "--out-assignments",
             dir / "a", "--out-summary", dir / "s"})
            .code != 0);
}

TEST_CASE("eval reports every trial and repeats exactly") {
  TempDir dir;
  const auto input = write_synthetic(dir);
  const std::vector<std::string> args = {"eval",    "--input",      input, "--shuffles", "3",
                                         "--seed",  "5",            "--out-report",
                                         dir / "r.txt"};
  REQUIRE(run(args).code == 0);
  const auto first = slurp(dir / "r.txt");
  REQUIRE(run(args).code == 0);
  const auto second = slurp(dir / "r.txt");
  CHECK(without_timing(first) == without_timing(second));
  CHECK(first.find("trial.2.nmi: ") != std::string::npos);
  CHECK(first.find("manifest.shuffles: 3\n") != std::string::npos);
  CHECK(first.find("manifest.nmi_norm: geometric\n") != std::string::npos);
}

TEST_CASE("sweep-di produces one row per interval") {
  TempDir dir;
  const auto input = write_synthetic(dir);
  const auto r = run({"sweep-di", "--input", input, "--di", "10,20,40", "--shuffles", "2",
                      "--out-report", dir / "r.txt", "--out-table", dir / "t.tsv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto report = slurp(dir / "r.txt");
  CHECK(report.find("rows: 3\n") != std::string::npos);
  CHECK(report.find("row.2.di: 40\n") != std::string::npos);
  const auto table = slurp(dir / "t.tsv");
  CHECK(table.find("di\tnmi_mean\n") != std::string::npos);

  CHECK(run({"sweep-di", "--input", input, "--di", "10,10", "--out-report", dir / "x"}).code !=
        0);
}

TEST_CASE("build-sot writes a loadable dataset") {
  TempDir dir;
  const auto r = run({"build-sot", "--posts", (kFixtures / "so_posts.xml").string(), "--links",
                      (kFixtures / "so_links.xml").string(), "--out-dataset", dir / "sot.tsv",
                      "--out-summary", dir / "sot.txt"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto ds = load_dataset(dir / "sot.tsv", DatasetFormat::tsv);
  CHECK(ds.size() == 4);
  CHECK(ds.labels() == std::vector<std::string>{"10", "10", "20", "20"});
  const auto summary = slurp(dir / "sot.txt");
  CHECK(summary.find("components: 2\n") != std::string::npos);
  CHECK(summary.find("components_total: 3\n") != std::string::npos);
}

TEST_CASE("bench compares scan modes on a small synthetic stream") {
  TempDir dir;
  const auto r = run({"bench", "--clusters", "20", "--texts-per-cluster", "5", "--out-report",
                      dir / "b.txt"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto report = slurp(dir / "b.txt");
  CHECK(report.find("assignments_identical: true\n") != std::string::npos);
  CHECK(report.find("texts: 100\n") != std::string::npos);
  CHECK(report.find("speedup: ") != std::string::npos);
}
