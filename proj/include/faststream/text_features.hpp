#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace faststream {

// Only one kind is active for the lifetime of an engine.
enum class FeatureKind { unigram, bigram, biterm };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

// Canonical feature key. Multi-token keys join their tokens with a single
// space; biterm keys put the two tokens in lexicographic order.
using Feature = std::string;

inline constexpr char kFeatureSeparator = ' ';

struct TextVector {
  std::size_t text_id = 0;
  std::map<Feature, std::uint32_t> features;
  std::uint64_t total = 0;
};

struct TokenizerOptions {
  bool remove_stopwords = false;
};

// Lowercases ASCII letters and splits on every byte that is not an ASCII
// letter or digit. Bytes >= 0x80 are kept inside tokens so that multi-byte
// UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view raw,
                                  const TokenizerOptions& options = {});

bool is_stopword(std::string_view token);

TextVector extract_features(std::span<const std::string> tokens,
                            FeatureKind kind, std::size_t text_id = 0);

// Dense id assigned to a feature string by a FeatureDictionary.
enum class FeatureId : std::uint32_t {};

struct FeatureCount {
  FeatureId id;
  std::uint32_t count;
};

// A TextVector after interning: features sorted by id, unique, counts >= 1.
struct EncodedText {
  std::vector<FeatureCount> features;
  std::uint64_t total = 0;
};

// Interns feature strings. Ids are issued in first-seen order and never
// reused, so the same stream always produces the same ids.
class FeatureDictionary {
 public:
  FeatureId intern(std::string_view feature);
  std::optional<FeatureId> find(std::string_view feature) const;
  const std::string& name(FeatureId id) const;
  std::size_t size() const { return names_.size(); }

  EncodedText encode(const TextVector& tv);

 private:
  absl::flat_hash_map<std::string, FeatureId> ids_;
  std::vector<std::string> names_;
};

}  // namespace faststream
