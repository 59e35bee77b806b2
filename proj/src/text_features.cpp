#include "faststream/text_features.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace faststream {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

// Small English list; sorted for binary search.
constexpr std::array<std::string_view, 64> kStopwords = {
    "a",     "about", "after", "all",  "also",  "an",    "and",   "any",
    "are",   "as",    "at",    "be",   "been",  "but",   "by",    "can",
    "could", "do",    "does",  "for",  "from",  "had",   "has",   "have",
    "he",    "her",   "his",   "how",  "i",     "if",    "in",    "into",
    "is",    "it",    "its",   "me",   "my",    "no",    "not",   "of",
    "on",    "or",    "our",   "she",  "so",    "than",  "that",  "the",
    "their", "them",  "then",  "there", "these", "they", "this",  "to",
    "was",   "we",    "were",  "what", "which", "who",   "with",  "you",
};

std::string join(const std::string& a, const std::string& b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a).push_back(kFeatureSeparator);
  key.append(b);
  return key;
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::unigram:
      return "unigram";
    case FeatureKind::bigram:
      return "bigram";
    case FeatureKind::biterm:
      return "biterm";
  }
  return "unknown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  if (name == "unigram") return FeatureKind::unigram;
  if (name == "bigram") return FeatureKind::bigram;
  if (name == "biterm") return FeatureKind::biterm;
  return std::nullopt;
}

bool is_stopword(std::string_view token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::vector<std::string> tokenize(std::string_view raw,
                                  const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (!options.remove_stopwords || !is_stopword(current)) {
      tokens.push_back(std::move(current));
    }
    current.clear();
  };
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (!is_token_byte(c)) {
      flush();
      continue;
    }
    current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                             : ch);
  }
  flush();
  return tokens;
}

TextVector extract_features(std::span<const std::string> tokens,
                            FeatureKind kind, std::size_t text_id) {
  TextVector tv;
  tv.text_id = text_id;
  const std::size_t n = tokens.size();
  switch (kind) {
    case FeatureKind::unigram:
      for (const auto& t : tokens) ++tv.features[t];
      tv.total = n;
      break;
    case FeatureKind::bigram:
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++tv.features[join(tokens[i], tokens[i + 1])];
      }
      tv.total = n > 0 ? n - 1 : 0;
      break;
    case FeatureKind::biterm:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const auto& a = tokens[i];
          const auto& b = tokens[j];
          ++tv.features[a <= b ? join(a, b) : join(b, a)];
        }
      }
      tv.total = n * (n > 0 ? n - 1 : 0) / 2;
      break;
  }
  return tv;
}

FeatureId FeatureDictionary::intern(std::string_view feature) {
  auto it = ids_.find(absl::string_view(feature.data(), feature.size()));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<FeatureId>(names_.size());
  names_.emplace_back(feature);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<FeatureId> FeatureDictionary::find(std::string_view feature) const {
  auto it = ids_.find(absl::string_view(feature.data(), feature.size()));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& FeatureDictionary::name(FeatureId id) const {
  const auto i = static_cast<std::size_t>(id);
  if (i >= names_.size()) throw std::out_of_range("unknown feature id");
  return names_[i];
}

EncodedText FeatureDictionary::encode(const TextVector& tv) {
  EncodedText out;
  out.total = tv.total;
  out.features.reserve(tv.features.size());
  for (const auto& [feature, count] : tv.features) {
    out.features.push_back({intern(feature), count});
  }
  std::sort(out.features.begin(), out.features.end(),
            [](const FeatureCount& a, const FeatureCount& b) {
              return a.id < b.id;
            });
  return out;
}

}  // namespace faststream
