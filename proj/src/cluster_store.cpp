#include "faststream/cluster_store.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace faststream {

namespace {

struct MeanStddev {
  double mean;
  double stddev;
};

template <typename Get>
MeanStddev population(std::span<const ClusterHandle> handles, Get get) {
  const auto n = static_cast<double>(handles.size());
  double sum = 0.0;
  for (auto h : handles) sum += get(h);
  const double mean = sum / n;
  double sq = 0.0;
  for (auto h : handles) {
    const double d = get(h) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / n)};
}

}  // namespace

void ClusterStore::issue_stamp(Stamp stamp) {
  if (stamp <= max_stamp_) {
    throw std::invalid_argument("stamp " + std::to_string(stamp) +
                                " is not newer than " +
                                std::to_string(max_stamp_));
  }
  max_stamp_ = stamp;
}

ClusterHandle ClusterStore::create_cluster(const EncodedText& tv, Stamp stamp) {
  issue_stamp(stamp);
  const auto h = static_cast<ClusterHandle>(slots_.size());
  ClusterFeatureVector cf;
  cf.handle = h;
  cf.features.reserve(tv.features.size());
  for (const auto& fc : tv.features) cf.features.emplace(fc.id, fc.count);
  cf.feature_total = tv.total;
  cf.text_count = 1;
  cf.stamp = stamp;
  slots_.emplace_back(std::move(cf));
  live_.push_back(h);
  ++live_texts_;
  return h;
}

ClusterFeatureVector& ClusterStore::live_slot(ClusterHandle h) {
  const auto i = static_cast<std::size_t>(h);
  if (i >= slots_.size() || !slots_[i]) {
    throw std::logic_error("cluster handle " + std::to_string(i) +
                           " is not live");
  }
  return *slots_[i];
}

void ClusterStore::add_text(ClusterHandle h, const EncodedText& tv,
                            std::optional<Stamp> new_stamp) {
  auto& cf = live_slot(h);
  if (new_stamp) issue_stamp(*new_stamp);
  for (const auto& fc : tv.features) cf.features[fc.id] += fc.count;
  cf.feature_total += tv.total;
  cf.text_count += 1;
  if (new_stamp) cf.stamp = *new_stamp;
  ++live_texts_;
}

ClusterFeatureVector ClusterStore::delete_cluster(ClusterHandle h) {
  auto removed = delete_clusters(std::span<const ClusterHandle>(&h, 1));
  return std::move(removed.front());
}

std::vector<ClusterFeatureVector> ClusterStore::delete_clusters(
    std::span<const ClusterHandle> handles) {
  std::vector<ClusterHandle> sorted(handles.begin(), handles.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::logic_error("duplicate handle in deletion batch");
  }
  for (auto h : sorted) live_slot(h);

  std::vector<ClusterFeatureVector> removed;
  removed.reserve(handles.size());
  for (auto h : handles) {
    auto& cf = live_slot(h);
    live_texts_ -= cf.text_count;
    deleted_texts_ += cf.text_count;
    ++deleted_clusters_;
    removed.push_back(std::move(cf));
    slots_[static_cast<std::size_t>(h)].reset();
  }
  std::erase_if(live_, [this](ClusterHandle h) {
    return !slots_[static_cast<std::size_t>(h)];
  });
  return removed;
}

StoreStats ClusterStore::stats() const {
  if (live_.empty()) {
    throw std::logic_error("store statistics are undefined with no live clusters");
  }
  const auto stamps = population(live_, [this](ClusterHandle h) {
    return static_cast<double>(get(h).stamp);
  });
  const auto sizes = population(live_, [this](ClusterHandle h) {
    return static_cast<double>(get(h).text_count);
  });
  return {stamps.mean, stamps.stddev, sizes.mean, sizes.stddev};
}

bool ClusterStore::is_live(ClusterHandle h) const {
  const auto i = static_cast<std::size_t>(h);
  return i < slots_.size() && slots_[i].has_value();
}

const ClusterFeatureVector& ClusterStore::get(ClusterHandle h) const {
  const auto i = static_cast<std::size_t>(h);
  if (i >= slots_.size() || !slots_[i]) {
    throw std::logic_error("cluster handle " + std::to_string(i) +
                           " is not live");
  }
  return *slots_[i];
}

}  // namespace faststream
