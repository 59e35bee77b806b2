#pragma once

// Random short-text streams for property tests. Texts mix words from a
// handful of overlapping topic vocabularies, so candidates overlap across
// topics and the threshold rule sees a wide range of score distributions.

#include <cstdint>
#include <string>
#include <vector>

#include "faststream/rng.hpp"

namespace faststream::testing {

struct StreamShape {
  std::size_t texts = 1000;
  std::size_t topics = 20;
  std::size_t vocab = 200;        // global vocabulary size
  std::size_t topic_width = 25;   // words per topic vocabulary
  std::size_t max_words = 9;      // words per text in [0, max_words]
};

inline std::vector<std::string> random_stream(const StreamShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> topics(shape.topics);
  for (auto& t : topics) {
    for (std::size_t w = 0; w < shape.topic_width; ++w) {
      t.push_back(static_cast<std::size_t>(uniform_below(rng, shape.vocab)));
    }
  }
  std::vector<std::string> out;
  out.reserve(shape.texts);
  for (std::size_t i = 0; i < shape.texts; ++i) {
    const auto& topic = topics[uniform_below(rng, topics.size())];
    const auto words = uniform_below(rng, shape.max_words + 1);
    std::string text;
    for (std::size_t w = 0; w < words; ++w) {
      // One word in eight comes from anywhere in the vocabulary.
      const auto id = uniform_below(rng, 8) == 0 ? uniform_below(rng, shape.vocab)
                                                 : topic[uniform_below(rng, topic.size())];
      if (!text.empty()) text.push_back(' ');
      text += "w" + std::to_string(id);
    }
    out.push_back(std::move(text));
  }
  return out;
}

}  // namespace faststream::testing
