#include "faststream/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "faststream/rng.hpp"

namespace faststream {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// sum_i (n_i / N) ln(N / n_i)
double entropy(const std::vector<std::uint64_t>& counts, double n) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const auto cd = static_cast<double>(c);
    h += (cd / n) * std::log(n / cd);
  }
  return h;
}

std::vector<std::uint64_t> class_sizes(std::span<const std::uint32_t> labels) {
  std::vector<std::uint64_t> sizes;
  for (auto l : labels) {
    if (l >= sizes.size()) sizes.resize(l + 1, 0);
    ++sizes[l];
  }
  return sizes;
}

std::size_t nonzero(const std::vector<std::uint64_t>& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(),
                                                [](auto c) { return c > 0; }));
}

}  // namespace

std::string_view to_string(NmiNorm norm) {
  return norm == NmiNorm::geometric ? "geometric" : "arithmetic";
}

std::optional<NmiNorm> parse_nmi_norm(std::string_view name) {
  if (name == "geometric") return NmiNorm::geometric;
  if (name == "arithmetic") return NmiNorm::arithmetic;
  return std::nullopt;
}

double nmi(std::span<const std::uint32_t> truth,
           std::span<const std::uint32_t> predicted, NmiNorm norm) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("nmi: label sequences differ in length");
  }
  if (truth.empty()) throw std::invalid_argument("nmi: no labels");

  const auto n = static_cast<double>(truth.size());
  const auto rows = class_sizes(truth);
  const auto cols = class_sizes(predicted);

  // Sorted (row, column) keys; runs of equal keys are the contingency cells.
  // Summing in key order keeps the result independent of hashing.
  std::vector<std::uint64_t> keys(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    keys[i] = (static_cast<std::uint64_t>(truth[i]) << 32) | predicted[i];
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  for (auto k : keys) {
    if (cells.empty() || cells.back().first != k) cells.emplace_back(k, 0);
    ++cells.back().second;
  }

  const double h_true = entropy(rows, n);
  const double h_pred = entropy(cols, n);
  const double denom = norm == NmiNorm::geometric ? std::sqrt(h_true * h_pred)
                                                  : (h_true + h_pred) / 2.0;
  if (denom <= 0.0) return 0.0;

  // One nonzero cell per row and per column: the partitions are identical up
  // to renaming.
  if (cells.size() == nonzero(rows) && cells.size() == nonzero(cols)) return 1.0;

  double mi = 0.0;
  for (const auto& [key, count] : cells) {
    const auto row = rows[key >> 32];
    const auto col = cols[key & 0xFFFFFFFFULL];
    const auto c = static_cast<double>(count);
    mi += (c / n) *
          std::log((n * c) / (static_cast<double>(row) * static_cast<double>(col)));
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double nmi(std::span<const std::string> truth,
           std::span<const AssignmentRecord> predicted, NmiNorm norm) {
  std::vector<std::uint32_t> pred;
  pred.reserve(predicted.size());
  for (const auto& r : predicted) pred.push_back(to_underlying(r.handle));
  const auto t = encode_labels(truth);
  const auto p = encode_labels(std::span<const std::uint32_t>(pred));
  return nmi(t, p, norm);
}

TrialReport run_trials(const LabeledDataset& ds, const EngineConfig& config,
                       std::size_t n_shuffles, std::uint64_t seed, NmiNorm norm) {
  if (ds.empty()) throw std::invalid_argument("run_trials: empty dataset");
  if (n_shuffles == 0) throw std::invalid_argument("run_trials: need at least one shuffle");

  TrialReport report;
  report.config = config;
  report.norm = norm;
  report.seed = seed;
  for (std::size_t t = 0; t < n_shuffles; ++t) {
    TrialResult trial;
    trial.shuffle_seed = child_seed(seed, t);
    const auto shuffled = shuffle(ds, trial.shuffle_seed);
    const auto texts = shuffled.texts();

    StreamEngine engine(config);
    const auto start = Clock::now();
    const auto records = engine.run_stream(texts);
    trial.runtime_seconds = seconds_since(start);

    const auto labels = shuffled.labels();
    trial.nmi = nmi(labels, records, norm);
    trial.final_cluster_count = engine.store().clusters_created();
    trial.live_clusters = engine.store().live_count();
    report.per_trial.push_back(trial);
  }
  for (const auto& t : report.per_trial) {
    report.nmi_mean += t.nmi;
    report.runtime_mean += t.runtime_seconds;
  }
  report.nmi_mean /= static_cast<double>(n_shuffles);
  report.runtime_mean /= static_cast<double>(n_shuffles);
  return report;
}

SpeedComparison compare_speed(const LabeledDataset& ds, const EngineConfig& config,
                              std::uint64_t seed) {
  const auto texts = shuffle(ds, seed).texts();
  SpeedComparison out;
  out.texts = texts.size();

  StreamEngine indexed(config, ScanMode::indexed);
  auto start = Clock::now();
  const auto fast = indexed.run_stream(texts);
  out.indexed_seconds = seconds_since(start);

  StreamEngine exhaustive(config, ScanMode::exhaustive);
  start = Clock::now();
  const auto slow = exhaustive.run_stream(texts);
  out.exhaustive_seconds = seconds_since(start);

  for (std::size_t i = 0; i < fast.size(); ++i) {
    if (!(fast[i] == slow[i])) {
      throw EquivalenceError("indexed and exhaustive engines disagree at text " +
                             std::to_string(i));
    }
  }
  out.final_live_clusters = indexed.store().live_count();
  out.peak_live_clusters = indexed.peak_live_clusters();
  out.clusters_created = indexed.store().clusters_created();
  return out;
}

}  // namespace faststream
