#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "faststream/text_features.hpp"

namespace faststream {

// Stable identifier of a cluster. Issued in increasing order and never
// reused; deletion retires a handle permanently.
enum class ClusterHandle : std::uint32_t {};

inline std::uint32_t to_underlying(ClusterHandle h) {
  return static_cast<std::uint32_t>(h);
}

// Recency stamp. The most recently created or restamped cluster carries the
// largest stamp.
using Stamp = std::uint64_t;

struct ClusterFeatureVector {
  ClusterHandle handle{};
  absl::flat_hash_map<FeatureId, std::uint32_t> features;  // n_z^f
  std::uint64_t feature_total = 0;                         // n_z
  std::uint64_t text_count = 0;                            // m_z
  Stamp stamp = 0;                                         // id_z
};

// Population statistics over the live clusters.
struct StoreStats {
  double stamp_mean = 0.0;
  double stamp_stddev = 0.0;
  double size_mean = 0.0;
  double size_stddev = 0.0;
};

class ClusterStore {
 public:
  // `stamp` must exceed every stamp issued so far.
  ClusterHandle create_cluster(const EncodedText& tv, Stamp stamp);

  // Addible property: counts accumulate, text_count grows by one, and the
  // stamp is replaced only when `new_stamp` is given.
  void add_text(ClusterHandle h, const EncodedText& tv,
                std::optional<Stamp> new_stamp);

  ClusterFeatureVector delete_cluster(ClusterHandle h);

  // Deletes a batch with a single compaction of the live list.
  std::vector<ClusterFeatureVector> delete_clusters(
      std::span<const ClusterHandle> handles);

  // Throws std::logic_error when no cluster is live.
  StoreStats stats() const;

  bool is_live(ClusterHandle h) const;
  const ClusterFeatureVector& get(ClusterHandle h) const;

  // Live handles in ascending order.
  std::span<const ClusterHandle> live_handles() const { return live_; }
  std::size_t live_count() const { return live_.size(); }
  bool empty() const { return live_.empty(); }

  std::size_t clusters_created() const { return slots_.size(); }
  std::uint64_t live_text_count() const { return live_texts_; }
  std::uint64_t deleted_cluster_count() const { return deleted_clusters_; }
  std::uint64_t deleted_text_count() const { return deleted_texts_; }

  Stamp max_stamp() const { return max_stamp_; }
  Stamp next_stamp() const { return max_stamp_ + 1; }

 private:
  ClusterFeatureVector& live_slot(ClusterHandle h);
  void issue_stamp(Stamp stamp);

  // Indexed by handle; retired handles hold nullopt.
  std::vector<std::optional<ClusterFeatureVector>> slots_;
  std::vector<ClusterHandle> live_;
  std::uint64_t live_texts_ = 0;
  std::uint64_t deleted_clusters_ = 0;
  std::uint64_t deleted_texts_ = 0;
  Stamp max_stamp_ = 0;
};

}  // namespace faststream
