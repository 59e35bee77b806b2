#include "faststream/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <absl/container/flat_hash_map.h>

#include "json.hpp"

#include "faststream/rng.hpp"
#include "faststream/text_features.hpp"

namespace faststream {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
  return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
}

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

std::string sanitize_field(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the five predefined XML entities and numeric character references.
std::optional<std::string> decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos) return std::nullopt;
    const auto name = s.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const auto digits = name.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     cp, hex ? 16 : 10);
      if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty()) {
        return std::nullopt;
      }
      append_utf8(out, cp);
    } else {
      return std::nullopt;
    }
    i = semi;
  }
  return out;
}

using Attributes = std::vector<std::pair<std::string, std::string>>;

const std::string* find_attr(const Attributes& attrs, std::string_view name) {
  for (const auto& [k, v] : attrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

template <typename Int>
std::optional<Int> parse_int(const std::string* s) {
  if (s == nullptr) return std::nullopt;
  Int v{};
  auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc{} || p != s->data() + s->size()) return std::nullopt;
  return v;
}

double population_stddev(std::span<const double> xs, double mean) {
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / static_cast<double>(xs.size()));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  return in;
}

}  // namespace

DatasetError::DatasetError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

std::vector<std::string> LabeledDataset::texts() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.text);
  return out;
}

std::vector<std::string> LabeledDataset::labels() const {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.label);
  return out;
}

std::optional<DatasetFormat> parse_dataset_format(std::string_view name) {
  if (name == "tsv") return DatasetFormat::tsv;
  if (name == "jsonl") return DatasetFormat::jsonl;
  return std::nullopt;
}

DatasetFormat guess_dataset_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? DatasetFormat::jsonl
                                             : DatasetFormat::tsv;
}

LabeledDataset read_dataset(std::istream& in, DatasetFormat format) {
  LabeledDataset ds;
  absl::flat_hash_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LabeledItem item;
    if (format == DatasetFormat::tsv) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DatasetError("expected label<TAB>text", lineno);
      }
      item.doc_id = std::to_string(lineno - 1);
      item.label = line.substr(0, tab);
      item.text = line.substr(tab + 1);
    } else {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DatasetError(std::string("invalid JSON: ") + e.what(), lineno);
      }
      if (!obj.is_object()) throw DatasetError("expected a JSON object", lineno);
      for (const char* key : {"id", "label", "text"}) {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) {
          throw DatasetError(std::string("missing string field \"") + key + "\"",
                             lineno);
        }
      }
      item.doc_id = obj["id"].get<std::string>();
      item.label = obj["label"].get<std::string>();
      item.text = obj["text"].get<std::string>();
    }
    if (item.label.empty()) throw DatasetError("empty label", lineno);
    if (!ids.insert(item.doc_id).second) {
      throw DatasetError("duplicate id \"" + item.doc_id + "\"", lineno);
    }
    ds.items.push_back(std::move(item));
  }
  if (ds.items.empty()) throw DatasetError("dataset is empty");
  return ds;
}

LabeledDataset load_dataset(const std::filesystem::path& path,
                            DatasetFormat format) {
  auto in = open_input(path);
  return read_dataset(in, format);
}

void write_tsv(const LabeledDataset& ds, std::ostream& out) {
  for (const auto& it : ds.items) {
    out << sanitize_field(it.label) << '\t' << sanitize_field(it.text) << '\n';
  }
}

LabeledDataset shuffle(const LabeledDataset& ds, std::uint64_t seed) {
  LabeledDataset out = ds;
  Rng rng(seed);
  shuffle_in_place(std::span<LabeledItem>(out.items), rng);
  return out;
}

bool DuplicateGraph::add_edge(PostId a, PostId b) {
  if (a == b) return false;
  const auto e = std::minmax(a, b);
  if (!seen_.insert({e.first, e.second}).second) return false;
  edges_.emplace_back(e.first, e.second);
  return true;
}

std::vector<PostId> DuplicateGraph::nodes() const {
  std::vector<PostId> out;
  out.reserve(edges_.size() * 2);
  for (const auto& [a, b] : edges_) {
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Component> connected_components(const DuplicateGraph& g) {
  const auto nodes = g.nodes();
  auto index_of = [&](PostId id) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
  };
  DisjointSet sets(nodes.size());
  for (const auto& [a, b] : g.edges()) sets.unite(index_of(a), index_of(b));

  // Nodes are ascending, so the first node seen for a root is its smallest
  // member and components come out ordered by smallest member.
  std::vector<Component> components;
  absl::flat_hash_map<std::size_t, std::size_t> slot_of_root;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto root = sets.find(i);
    auto [it, inserted] = slot_of_root.try_emplace(root, components.size());
    if (inserted) components.emplace_back();
    components[it->second].member_ids.push_back(nodes[i]);
  }
  return components;
}

std::optional<Attributes> parse_dump_row(std::string_view line) {
  const auto start = line.find("<row");
  if (start == std::string_view::npos) return std::nullopt;
  std::size_t i = start + 4;
  if (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
      line[i] != '/') {
    return std::nullopt;
  }
  Attributes attrs;
  auto skip_space = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };
  while (true) {
    skip_space();
    if (i >= line.size()) throw DatasetError("unterminated row element");
    if (line.compare(i, 2, "/>") == 0) break;
    const auto eq = line.find('=', i);
    if (eq == std::string_view::npos) throw DatasetError("attribute without value");
    auto name = line.substr(i, eq - i);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) {
      name.remove_suffix(1);
    }
    if (name.empty()) throw DatasetError("empty attribute name");
    i = eq + 1;
    skip_space();
    if (i >= line.size() || (line[i] != '"' && line[i] != '\'')) {
      throw DatasetError("unquoted value for attribute " + std::string(name));
    }
    const char quote = line[i];
    const auto close = line.find(quote, i + 1);
    if (close == std::string_view::npos) {
      throw DatasetError("unterminated value for attribute " + std::string(name));
    }
    auto value = decode_entities(line.substr(i + 1, close - i - 1));
    if (!value) {
      throw DatasetError("bad entity in attribute " + std::string(name));
    }
    attrs.emplace_back(std::string(name), std::move(*value));
    i = close + 1;
  }
  return attrs;
}

SoBuildResult build_so_dataset(std::istream& posts, std::istream& links,
                               const SoBuildOptions& options) {
  SoBuildResult result;

  std::vector<std::pair<PostId, PostId>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(links, line)) {
    ++lineno;
    std::optional<Attributes> row;
    try {
      row = parse_dump_row(line);
    } catch (const DatasetError& e) {
      throw DatasetError(std::string("links: ") + e.what(), lineno);
    }
    if (!row) continue;
    const auto type = parse_int<int>(find_attr(*row, "LinkTypeId"));
    const auto post = parse_int<PostId>(find_attr(*row, "PostId"));
    const auto related = parse_int<PostId>(find_attr(*row, "RelatedPostId"));
    if (!type || !post || !related) {
      throw DatasetError("links: row lacks integer PostId, RelatedPostId or LinkTypeId",
                         lineno);
    }
    if (*type == options.duplicate_link_type) pairs.emplace_back(*post, *related);
  }
  result.duplicate_pairs = pairs.size();

  if (options.pair_sample < pairs.size()) {
    Rng rng(options.seed);
    partial_shuffle(std::span(pairs), options.pair_sample, rng);
    pairs.resize(options.pair_sample);
  }
  result.sampled_pairs = pairs.size();

  DuplicateGraph graph;
  for (const auto& [a, b] : pairs) graph.add_edge(a, b);
  auto components = connected_components(graph);
  result.components_total = components.size();
  if (components.empty()) throw DatasetError("no duplicate pairs found");

  std::vector<double> lengths;
  lengths.reserve(components.size());
  for (const auto& c : components) lengths.push_back(static_cast<double>(c.length()));
  result.length_mean =
      std::accumulate(lengths.begin(), lengths.end(), 0.0) / static_cast<double>(lengths.size());
  result.length_stddev = population_stddev(lengths, result.length_mean);
  const double lo = result.length_mean - result.length_stddev;
  const double hi = result.length_mean + result.length_stddev;
  for (auto& c : components) {
    const auto len = static_cast<double>(c.length());
    if (lo < len && len < hi) result.kept_components.push_back(std::move(c));
  }
  result.components_kept = result.kept_components.size();
  if (result.kept_components.empty()) {
    throw DatasetError("no component length lies strictly within mean +/- stddev");
  }

  absl::flat_hash_map<PostId, std::string> titles;
  for (const auto& c : result.kept_components) {
    for (auto id : c.member_ids) titles.emplace(id, std::string{});
  }
  absl::flat_hash_set<PostId> found;
  lineno = 0;
  while (std::getline(posts, line)) {
    ++lineno;
    std::optional<Attributes> row;
    try {
      row = parse_dump_row(line);
    } catch (const DatasetError& e) {
      throw DatasetError(std::string("posts: ") + e.what(), lineno);
    }
    if (!row) continue;
    const auto id = parse_int<PostId>(find_attr(*row, "Id"));
    const auto type = parse_int<int>(find_attr(*row, "PostTypeId"));
    if (!id || !type) {
      throw DatasetError("posts: row lacks integer Id or PostTypeId", lineno);
    }
    if (*type != kQuestionPostType) continue;
    auto it = titles.find(*id);
    if (it == titles.end()) continue;
    if (const auto* title = find_attr(*row, "Title")) {
      it->second = *title;
      found.insert(*id);
    }
  }

  for (const auto& c : result.kept_components) {
    const auto label = std::to_string(c.member_ids.front());
    for (auto id : c.member_ids) {
      if (!found.contains(id)) {
        ++result.members_without_title;
        continue;
      }
      result.dataset.items.push_back(
          {std::to_string(id), label, sanitize_field(titles[id])});
    }
  }
  if (result.dataset.empty()) {
    throw DatasetError("no titles found for the surviving components");
  }
  return result;
}

SoBuildResult build_so_dataset(const std::filesystem::path& posts,
                               const std::filesystem::path& links,
                               const SoBuildOptions& options) {
  auto posts_in = open_input(posts);
  auto links_in = open_input(links);
  return build_so_dataset(posts_in, links_in, options);
}

double average_words_per_text(const LabeledDataset& ds) {
  if (ds.empty()) return 0.0;
  std::size_t words = 0;
  for (const auto& it : ds.items) words += tokenize(it.text).size();
  return static_cast<double>(words) / static_cast<double>(ds.size());
}

LabeledDataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.vocab_per_cluster == 0) {
    throw std::invalid_argument("synthetic vocabulary must be non-empty");
  }
  LabeledDataset ds;
  ds.items.reserve(spec.clusters * spec.texts_per_cluster);
  Rng rng(spec.seed);
  std::vector<std::size_t> slots(spec.vocab_per_cluster);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    const auto prefix = "c" + std::to_string(c) + "w";
    for (std::size_t t = 0; t < spec.texts_per_cluster; ++t) {
      std::string text;
      if (spec.words_per_text <= spec.vocab_per_cluster) {
        std::iota(slots.begin(), slots.end(), std::size_t{0});
        partial_shuffle(std::span(slots), spec.words_per_text, rng);
        for (std::size_t w = 0; w < spec.words_per_text; ++w) {
          if (w > 0) text.push_back(' ');
          text += prefix + std::to_string(slots[w]);
        }
      } else {
        for (std::size_t w = 0; w < spec.words_per_text; ++w) {
          if (w > 0) text.push_back(' ');
          text += prefix + std::to_string(uniform_below(rng, spec.vocab_per_cluster));
        }
      }
      ds.items.push_back({std::to_string(ds.items.size()), "c" + std::to_string(c),
                          std::move(text)});
    }
  }
  return ds;
}

}  // namespace faststream
