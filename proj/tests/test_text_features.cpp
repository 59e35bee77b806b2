#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"

#include "faststream/rng.hpp"
#include "faststream/text_features.hpp"

using namespace faststream;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> words) {
  return {words.begin(), words.end()};
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("AI improves healthcare-system") ==
        toks({"ai", "improves", "healthcare", "system"}));
  CHECK(tokenize("").empty());
  CHECK(tokenize("ai ai AI") == toks({"ai", "ai", "ai"}));
  CHECK(tokenize("  --C++ & R2D2!! ") == toks({"c", "r2d2"}));
  CHECK(tokenize("naïve café") == toks({"naïve", "café"}));
}

TEST_CASE("stopword removal is off by default") {
  CHECK(tokenize("the cat and the hat") == toks({"the", "cat", "and", "the", "hat"}));
  TokenizerOptions opts;
  opts.remove_stopwords = true;
  CHECK(tokenize("the cat and the hat", opts) == toks({"cat", "hat"}));
}

TEST_CASE("stopword table is sorted") {
  // is_stopword relies on binary search.
  for (const char* w : {"a", "about", "the", "you", "with", "there", "these"}) {
    CHECK(is_stopword(w));
  }
  CHECK_FALSE(is_stopword("python"));
}

TEST_CASE("bigram features of the worked text") {
  const auto tv = extract_features(toks({"ai", "improves", "healthcare", "system"}),
                                   FeatureKind::bigram);
  const std::map<std::string, std::uint32_t> expected = {
      {"ai improves", 1}, {"improves healthcare", 1}, {"healthcare system", 1}};
  CHECK(tv.features == expected);
  CHECK(tv.total == 3);
}

TEST_CASE("biterm features of the worked text") {
  const auto tv = extract_features(toks({"ai", "improves", "healthcare", "system"}),
                                   FeatureKind::biterm);
  // Keys are order-normalized, so "improves healthcare" is stored as
  // "healthcare improves".
  const std::map<std::string, std::uint32_t> expected = {
      {"ai improves", 1},         {"ai healthcare", 1},  {"ai system", 1},
      {"healthcare improves", 1}, {"improves system", 1}, {"healthcare system", 1}};
  CHECK(tv.features == expected);
  CHECK(tv.total == 6);
}

TEST_CASE("unigram duplicates aggregate") {
  const auto tv = extract_features(toks({"ai", "ai"}), FeatureKind::unigram);
  CHECK(tv.features == std::map<std::string, std::uint32_t>{{"ai", 2}});
  CHECK(tv.total == 2);
}

TEST_CASE("repeated tokens form a self-pair biterm") {
  const auto tv = extract_features(toks({"ai", "ai"}), FeatureKind::biterm);
  CHECK(tv.features == std::map<std::string, std::uint32_t>{{"ai ai", 1}});
  CHECK(tv.total == 1);
}

TEST_CASE("zero tokens give an empty vector for every kind") {
  for (auto kind : {FeatureKind::unigram, FeatureKind::bigram, FeatureKind::biterm}) {
    const auto tv = extract_features({}, kind);
    CHECK(tv.features.empty());
    CHECK(tv.total == 0);
  }
}

TEST_CASE("feature totals and symmetry over random token lists") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_below(rng, 12));
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < n; ++i) {
      tokens.push_back("t" + std::to_string(uniform_below(rng, 5)));
    }
    const auto uni = extract_features(tokens, FeatureKind::unigram);
    const auto bi = extract_features(tokens, FeatureKind::bigram);
    const auto bt = extract_features(tokens, FeatureKind::biterm);
    CHECK(uni.total == n);
    CHECK(bi.total == (n > 0 ? n - 1 : 0));
    CHECK(bt.total == n * (n > 0 ? n - 1 : 0) / 2);

    for (const auto* tv : {&uni, &bi, &bt}) {
      std::uint64_t sum = 0;
      for (const auto& [k, c] : tv->features) {
        CHECK(c >= 1);
        sum += c;
      }
      CHECK(sum == tv->total);
    }

    auto permuted = tokens;
    shuffle_in_place(std::span<std::string>(permuted), rng);
    CHECK(extract_features(permuted, FeatureKind::biterm).features == bt.features);
    CHECK(extract_features(tokens, FeatureKind::biterm).features == bt.features);
  }
}

TEST_CASE("feature kind names round-trip") {
  for (auto kind : {FeatureKind::unigram, FeatureKind::bigram, FeatureKind::biterm}) {
    CHECK(parse_feature_kind(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_feature_kind("trigram").has_value());
}

TEST_CASE("dictionary interns in first-seen order") {
  FeatureDictionary dict;
  TextVector tv;
  tv.features = {{"b", 2}, {"a", 1}};
  tv.total = 3;
  const auto enc = dict.encode(tv);
  REQUIRE(enc.features.size() == 2);
  CHECK(enc.total == 3);
  // std::map iterates "a" first, so "a" receives id 0.
  CHECK(dict.name(enc.features[0].id) == "a");
  CHECK(enc.features[0].count == 1);
  CHECK(dict.name(enc.features[1].id) == "b");
  CHECK(dict.intern("a") == enc.features[0].id);
  CHECK(dict.find("zzz") == std::nullopt);
  CHECK(dict.size() == 2);
  CHECK_THROWS_AS(dict.name(static_cast<FeatureId>(99)), std::out_of_range);
}
