#include "faststream/inverted_index.hpp"

#include <algorithm>
#include <cassert>

namespace faststream {

void InvertedIndex::index_text(const EncodedText& tv, ClusterHandle h) {
  for (const auto& fc : tv.features) postings_[fc.id].insert(h);
}

std::vector<ClusterHandle> InvertedIndex::candidates(const EncodedText& tv) const {
  std::vector<ClusterHandle> out;
  for (const auto& fc : tv.features) {
    auto it = postings_.find(fc.id);
    if (it == postings_.end()) continue;
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void InvertedIndex::purge_cluster(const ClusterFeatureVector& cf) {
  for (const auto& [f, count] : cf.features) {
    auto it = postings_.find(f);
    if (it == postings_.end()) {
      assert(false && "purging a feature that has no postings");
      continue;
    }
    [[maybe_unused]] const auto erased = it->second.erase(cf.handle);
    assert(erased == 1 && "purging a handle that is not posted");
    if (it->second.empty()) postings_.erase(it);
  }
}

const PostingSet* InvertedIndex::postings(FeatureId f) const {
  auto it = postings_.find(f);
  return it == postings_.end() ? nullptr : &it->second;
}

bool InvertedIndex::contains(FeatureId f, ClusterHandle h) const {
  const auto* set = postings(f);
  return set != nullptr && set->contains(h);
}

std::size_t InvertedIndex::posting_count() const {
  std::size_t n = 0;
  for (const auto& [f, set] : postings_) n += set.size();
  return n;
}

}  // namespace faststream
