#include "faststream/stream_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace faststream {

std::string_view to_string(TieBreak policy) {
  switch (policy) {
    case TieBreak::highest_stamp_then_handle:
      return "highest_stamp_then_handle";
  }
  return "unknown";
}

double similarity(const EncodedText& tv, const ClusterFeatureVector& cf) {
  const std::uint64_t denom = tv.total + cf.feature_total;
  if (denom == 0) {
    throw std::invalid_argument("similarity of an empty text and an empty cluster");
  }
  std::uint64_t common = 0;
  for (const auto& fc : tv.features) {
    auto it = cf.features.find(fc.id);
    if (it != cf.features.end()) common += std::min(it->second, fc.count);
  }
  return static_cast<double>(2 * common) / static_cast<double>(denom);
}

ScoreSummary summarize(std::span<const ScoredCandidate> scored) {
  ScoreSummary s;
  if (scored.empty()) return s;
  const auto n = static_cast<double>(scored.size());
  double sum = 0.0;
  s.max = scored.front().score;
  for (const auto& c : scored) {
    sum += c.score;
    s.max = std::max(s.max, c.score);
  }
  s.mean = sum / n;
  double sq = 0.0;
  for (const auto& c : scored) {
    const double d = c.score - s.mean;
    sq += d * d;
  }
  s.stddev = std::sqrt(sq / n);
  return s;
}

Decision decide(std::span<const ScoredCandidate> scored, TieBreak tie_break) {
  if (scored.empty()) return OpenNew{};

  const ScoredCandidate* best = &scored.front();
  for (const auto& c : scored) {
    if (c.score > best->score) {
      best = &c;
    } else if (c.score == best->score) {
      switch (tie_break) {
        case TieBreak::highest_stamp_then_handle:
          if (c.stamp > best->stamp ||
              (c.stamp == best->stamp && c.handle > best->handle)) {
            best = &c;
          }
          break;
      }
    }
  }

  // max > mu + sigma  <=>  max - mu > sigma  <=>  mean(d)^2 > var(d)
  //                   <=>  2 (sum d)^2 > L sum d^2,   d_i = max - s_i >= 0
  double sum_d = 0.0;
  double sum_d2 = 0.0;
  for (const auto& c : scored) {
    const double d = best->score - c.score;
    sum_d += d;
    sum_d2 += d * d;
  }
  const auto n = static_cast<double>(scored.size());
  if (2.0 * sum_d * sum_d > n * sum_d2) {
    return JoinExisting{best->handle, best->score};
  }
  return OpenNew{};
}

StreamEngine::StreamEngine(EngineConfig config, ScanMode mode)
    : config_(config), mode_(mode) {
  if (config_.delete_interval == 0) {
    throw std::invalid_argument("delete interval must be at least 1");
  }
  tokenizer_.remove_stopwords = config_.remove_stopwords;
}

AssignmentRecord StreamEngine::process_text(std::string_view raw) {
  const auto tokens = tokenize(raw, tokenizer_);
  return process_tokens(tokens);
}

AssignmentRecord StreamEngine::process_tokens(std::span<const std::string> tokens) {
  const auto tv = extract_features(tokens, config_.feature_kind, processed_);
  return assign(dictionary_.encode(tv));
}

std::vector<ScoredCandidate> StreamEngine::score_candidates(
    const EncodedText& tv) const {
  std::vector<ScoredCandidate> scored;
  if (mode_ == ScanMode::indexed) {
    const auto handles = index_.candidates(tv);
    scored.reserve(handles.size());
    for (auto h : handles) {
      const auto& cf = store_.get(h);
      scored.push_back({h, cf.stamp, similarity(tv, cf)});
    }
    return scored;
  }
  // A featureless text shares nothing with any cluster.
  if (tv.features.empty()) return scored;
  for (auto h : store_.live_handles()) {
    const auto& cf = store_.get(h);
    const double s = similarity(tv, cf);
    if (s > 0.0) scored.push_back({h, cf.stamp, s});
  }
  return scored;
}

AssignmentRecord StreamEngine::assign(const EncodedText& tv) {
  AssignmentRecord rec;
  rec.text_id = processed_;

  const auto scored = score_candidates(tv);
  rec.candidate_count = scored.size();
  if (!scored.empty()) rec.max_similarity = summarize(scored).max;

  const Decision decision = decide(scored, config_.tie_break);
  if (const auto* join = std::get_if<JoinExisting>(&decision)) {
    std::optional<Stamp> restamp;
    if (previous_ != join->handle) restamp = store_.next_stamp();
    store_.add_text(join->handle, tv, restamp);
    rec.handle = join->handle;
    rec.created_new = false;
  } else {
    rec.handle = store_.create_cluster(tv, store_.next_stamp());
    rec.created_new = true;
  }
  if (mode_ == ScanMode::indexed) index_.index_text(tv, rec.handle);
  previous_ = rec.handle;
  ++processed_;
  peak_live_ = std::max(peak_live_, store_.live_count());

  if (processed_ % config_.delete_interval == 0) delete_outdated();
  return rec;
}

std::size_t StreamEngine::delete_outdated() {
  if (store_.empty()) return 0;
  DeletionPass pass;
  pass.texts_processed = processed_;
  pass.live_before = store_.live_count();
  pass.stats = store_.stats();

  // x < mean - stddev over n values with sum S and sum of squares Q is
  //   S - n x > 0  and  (S - n x)^2 > n Q - S^2,
  // evaluated in integers so the cut is exact.
  using Wide = __int128;
  const auto n = static_cast<Wide>(store_.live_count());
  Wide stamp_sum = 0, stamp_sq = 0, size_sum = 0, size_sq = 0;
  for (auto h : store_.live_handles()) {
    const auto& cf = store_.get(h);
    const auto st = static_cast<Wide>(cf.stamp);
    const auto sz = static_cast<Wide>(cf.text_count);
    stamp_sum += st;
    stamp_sq += st * st;
    size_sum += sz;
    size_sq += sz * sz;
  }
  auto below = [n](Wide x, Wide sum, Wide sq) {
    const Wide gap = sum - n * x;
    return gap > 0 && gap * gap > n * sq - sum * sum;
  };

  std::vector<ClusterHandle> outdated;
  for (auto h : store_.live_handles()) {
    const auto& cf = store_.get(h);
    if (below(static_cast<Wide>(cf.stamp), stamp_sum, stamp_sq) &&
        below(static_cast<Wide>(cf.text_count), size_sum, size_sq)) {
      outdated.push_back(h);
    }
  }
  auto removed = store_.delete_clusters(outdated);
  if (mode_ == ScanMode::indexed) {
    for (const auto& cf : removed) index_.purge_cluster(cf);
  }

  pass.live_after = store_.live_count();
  ++deletion_passes_;
  if (deletion_observer_) deletion_observer_(pass);
  return removed.size();
}

std::vector<AssignmentRecord> StreamEngine::run_stream(
    std::span<const std::string> texts) {
  std::vector<AssignmentRecord> records;
  records.reserve(texts.size());
  for (const auto& t : texts) records.push_back(process_text(t));
  return records;
}

std::optional<std::string> StreamEngine::check_invariants() const {
  std::ostringstream msg;

  std::uint64_t live_texts = 0;
  for (auto h : store_.live_handles()) {
    const auto& cf = store_.get(h);
    if (cf.text_count < 1) {
      msg << "cluster " << to_underlying(h) << " is live with no texts";
      return msg.str();
    }
    std::uint64_t sum = 0;
    for (const auto& [f, count] : cf.features) {
      if (count < 1) {
        msg << "cluster " << to_underlying(h) << " holds a zero count";
        return msg.str();
      }
      sum += count;
      if (mode_ == ScanMode::indexed && !index_.contains(f, h)) {
        msg << "cluster " << to_underlying(h) << " has feature "
            << dictionary_.name(f) << " but is missing from its postings";
        return msg.str();
      }
    }
    if (sum != cf.feature_total) {
      msg << "cluster " << to_underlying(h) << " feature total " << cf.feature_total
          << " differs from the sum of its counts " << sum;
      return msg.str();
    }
    live_texts += cf.text_count;
  }

  if (live_texts != store_.live_text_count() ||
      live_texts + store_.deleted_text_count() != processed_) {
    msg << "conservation broken: live " << live_texts << " + deleted "
        << store_.deleted_text_count() << " != processed " << processed_;
    return msg.str();
  }

  if (mode_ == ScanMode::indexed) {
    std::optional<std::string> bad;
    index_.for_each_posting([&](FeatureId f, ClusterHandle h) {
      if (bad) return;
      if (!store_.is_live(h)) {
        bad = "posting for " + dictionary_.name(f) + " names retired cluster " +
              std::to_string(to_underlying(h));
      } else if (!store_.get(h).features.contains(f)) {
        bad = "posting for " + dictionary_.name(f) + " names cluster " +
              std::to_string(to_underlying(h)) + " which lacks the feature";
      }
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

}  // namespace faststream
