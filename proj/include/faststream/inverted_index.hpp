#pragma once

#include <cstddef>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "faststream/cluster_store.hpp"
#include "faststream/text_features.hpp"

namespace faststream {

using PostingSet = absl::flat_hash_set<ClusterHandle>;

// Feature -> live clusters containing that feature. Postings have set
// semantics and empty sets are never retained.
class InvertedIndex {
 public:
  void index_text(const EncodedText& tv, ClusterHandle h);

  // Union of the postings of every feature of `tv`, ascending and unique.
  std::vector<ClusterHandle> candidates(const EncodedText& tv) const;

  // Removes cf.handle from the postings of every feature of cf.
  void purge_cluster(const ClusterFeatureVector& cf);

  const PostingSet* postings(FeatureId f) const;
  bool contains(FeatureId f, ClusterHandle h) const;

  std::size_t feature_count() const { return postings_.size(); }
  std::size_t posting_count() const;

  template <typename Fn>
  void for_each_posting(Fn&& fn) const {
    for (const auto& [f, set] : postings_) {
      for (auto h : set) fn(f, h);
    }
  }

 private:
  absl::flat_hash_map<FeatureId, PostingSet> postings_;
};

}  // namespace faststream
