#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "faststream/datasets.hpp"
#include "faststream/stream_engine.hpp"

namespace faststream {

enum class NmiNorm { geometric, arithmetic };

std::string_view to_string(NmiNorm norm);
std::optional<NmiNorm> parse_nmi_norm(std::string_view name);

// Maps labels to dense ids in first-seen order.
template <typename Label>
std::vector<std::uint32_t> encode_labels(std::span<const Label> labels);

// Mutual information of two partitions over their contingency table,
// normalized by sqrt(H_a H_b) or (H_a + H_b) / 2. Identical partitions (up to
// renaming) score exactly 1; a zero denominator scores 0. Throws
// std::invalid_argument on length mismatch or empty input.
double nmi(std::span<const std::uint32_t> truth,
           std::span<const std::uint32_t> predicted,
           NmiNorm norm = NmiNorm::geometric);

double nmi(std::span<const std::string> truth,
           std::span<const AssignmentRecord> predicted,
           NmiNorm norm = NmiNorm::geometric);

struct TrialResult {
  std::uint64_t shuffle_seed = 0;
  double nmi = 0.0;
  double runtime_seconds = 0.0;
  std::size_t final_cluster_count = 0;  // distinct predicted clusters
  std::size_t live_clusters = 0;        // live at the end of the stream
};

struct TrialReport {
  EngineConfig config;
  NmiNorm norm = NmiNorm::geometric;
  std::uint64_t seed = 0;
  std::vector<TrialResult> per_trial;
  double nmi_mean = 0.0;
  double runtime_mean = 0.0;
};

// Trial t streams shuffle(ds, child_seed(seed, t)) through a fresh engine.
// Runtime covers the engine loop only.
TrialReport run_trials(const LabeledDataset& ds, const EngineConfig& config,
                       std::size_t n_shuffles, std::uint64_t seed,
                       NmiNorm norm = NmiNorm::geometric);

struct SpeedComparison {
  double indexed_seconds = 0.0;
  double exhaustive_seconds = 0.0;
  std::size_t texts = 0;
  std::size_t final_live_clusters = 0;
  std::size_t peak_live_clusters = 0;
  std::size_t clusters_created = 0;
  double speedup() const {
    return indexed_seconds > 0.0 ? exhaustive_seconds / indexed_seconds : 0.0;
  }
};

// Thrown when the indexed and exhaustive engines disagree.
class EquivalenceError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Streams shuffle(ds, seed) through both scan modes and times each. Throws
// EquivalenceError at the first differing assignment.
SpeedComparison compare_speed(const LabeledDataset& ds, const EngineConfig& config,
                              std::uint64_t seed);

template <typename Label>
std::vector<std::uint32_t> encode_labels(std::span<const Label> labels) {
  absl::flat_hash_map<Label, std::uint32_t> ids;
  std::vector<std::uint32_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<std::uint32_t>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace faststream
