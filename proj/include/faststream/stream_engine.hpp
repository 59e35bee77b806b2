#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "faststream/cluster_store.hpp"
#include "faststream/inverted_index.hpp"
#include "faststream/text_features.hpp"

namespace faststream {

// Argmax tie-break among equal maximum scores. Only one policy exists: the
// highest stamp wins, then the highest handle.
enum class TieBreak { highest_stamp_then_handle };

std::string_view to_string(TieBreak policy);

inline constexpr std::size_t kDefaultDeleteInterval = 500;

struct EngineConfig {
  FeatureKind feature_kind = FeatureKind::biterm;
  std::size_t delete_interval = kDefaultDeleteInterval;
  TieBreak tie_break = TieBreak::highest_stamp_then_handle;
  bool remove_stopwords = false;
};

// How the engine finds clusters to score. `exhaustive` scans every live
// cluster and keeps the nonzero scores; it exists as a correctness and speed
// reference for `indexed`.
enum class ScanMode { indexed, exhaustive };

// 2 * sum_f min(n_z^f, N_t^f) / (N_t + n_z). Throws std::invalid_argument
// when both totals are zero.
double similarity(const EncodedText& tv, const ClusterFeatureVector& cf);

struct ScoredCandidate {
  ClusterHandle handle{};
  Stamp stamp = 0;
  double score = 0.0;
};

struct JoinExisting {
  ClusterHandle handle{};
  double score = 0.0;
};
struct OpenNew {};

using Decision = std::variant<OpenNew, JoinExisting>;

struct ScoreSummary {
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

ScoreSummary summarize(std::span<const ScoredCandidate> scored);

// Joins the best-scoring candidate iff its score strictly exceeds mean +
// population stddev of all candidate scores. One candidate, or all-equal
// scores, therefore always open a new cluster; so do exactly two candidates,
// because mean + stddev equals the maximum of two values.
//
// The comparison is evaluated as 2 (sum d)^2 > L sum d^2 with d_i = max - s_i,
// which is the same inequality rearranged and is exact in the cases above.
// Candidates must be in ascending handle order so that every caller sums the
// scores in the same order.
Decision decide(std::span<const ScoredCandidate> scored,
                TieBreak tie_break = TieBreak::highest_stamp_then_handle);

struct AssignmentRecord {
  std::size_t text_id = 0;
  ClusterHandle handle{};
  bool created_new = false;
  std::size_t candidate_count = 0;
  std::optional<double> max_similarity;

  bool operator==(const AssignmentRecord&) const = default;
};

struct DeletionPass {
  std::size_t texts_processed = 0;
  std::size_t live_before = 0;
  std::size_t live_after = 0;
  StoreStats stats;
};

class StreamEngine {
 public:
  explicit StreamEngine(EngineConfig config,
                        ScanMode mode = ScanMode::indexed);

  AssignmentRecord process_text(std::string_view raw);
  AssignmentRecord process_tokens(std::span<const std::string> tokens);

  std::vector<AssignmentRecord> run_stream(std::span<const std::string> texts);

  // Runs one outdated-cluster pass immediately. process_text calls this
  // whenever the processed count reaches a multiple of the delete interval.
  std::size_t delete_outdated();

  // Called after every deletion pass.
  void set_deletion_observer(std::function<void(const DeletionPass&)> observer) {
    deletion_observer_ = std::move(observer);
  }

  // Checks the index mirror and text-count conservation invariants. Returns a
  // description of the first violation found. Cost is linear in model size.
  std::optional<std::string> check_invariants() const;

  const EngineConfig& config() const { return config_; }
  ScanMode scan_mode() const { return mode_; }
  const ClusterStore& store() const { return store_; }
  const InvertedIndex& index() const { return index_; }
  const FeatureDictionary& dictionary() const { return dictionary_; }
  std::size_t texts_processed() const { return processed_; }
  std::size_t deletion_passes() const { return deletion_passes_; }
  std::size_t peak_live_clusters() const { return peak_live_; }

 private:
  AssignmentRecord assign(const EncodedText& tv);
  std::vector<ScoredCandidate> score_candidates(const EncodedText& tv) const;

  EngineConfig config_;
  ScanMode mode_;
  TokenizerOptions tokenizer_;
  FeatureDictionary dictionary_;
  ClusterStore store_;
  InvertedIndex index_;
  std::optional<ClusterHandle> previous_;
  std::size_t processed_ = 0;
  std::size_t deletion_passes_ = 0;
  std::size_t peak_live_ = 0;
  std::function<void(const DeletionPass&)> deletion_observer_;
};

}  // namespace faststream
