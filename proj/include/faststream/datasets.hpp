#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_set.h>

namespace faststream {

struct LabeledItem {
  std::string doc_id;
  std::string label;
  std::string text;

  bool operator==(const LabeledItem&) const = default;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  std::vector<std::string> texts() const;
  std::vector<std::string> labels() const;
};

// Raised for malformed input files; `line` is 1-based, 0 when not applicable.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class DatasetFormat { tsv, jsonl };

std::optional<DatasetFormat> parse_dataset_format(std::string_view name);
// Picks jsonl for ".jsonl"/".json" extensions and tsv otherwise.
DatasetFormat guess_dataset_format(const std::filesystem::path& path);

// tsv: `label<TAB>text` per line, id = 0-based line number.
// jsonl: one object per line with string fields "id", "label", "text".
// Blank texts are accepted. Duplicate ids, empty labels, malformed lines and
// empty inputs raise DatasetError.
LabeledDataset read_dataset(std::istream& in, DatasetFormat format);
LabeledDataset load_dataset(const std::filesystem::path& path,
                            DatasetFormat format);

// Tabs and line breaks inside fields are replaced by spaces.
void write_tsv(const LabeledDataset& ds, std::ostream& out);

LabeledDataset shuffle(const LabeledDataset& ds, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Duplicate-question graph and SO-T construction.

using PostId = std::int64_t;

class DuplicateGraph {
 public:
  // Stores the pair unordered. Self-loops and repeated edges are ignored;
  // returns whether an edge was added.
  bool add_edge(PostId a, PostId b);

  const std::vector<std::pair<PostId, PostId>>& edges() const { return edges_; }
  std::vector<PostId> nodes() const;

 private:
  std::vector<std::pair<PostId, PostId>> edges_;
  absl::flat_hash_set<std::pair<PostId, PostId>> seen_;
};

struct Component {
  std::vector<PostId> member_ids;  // ascending
  std::size_t length() const { return member_ids.size(); }
};

// Components ordered by their smallest member.
std::vector<Component> connected_components(const DuplicateGraph& g);

// Attributes of one `<row .../>` element of a StackExchange dump, with XML
// entities decoded. Returns nullopt for lines that hold no row element.
// Throws DatasetError for a row that cannot be parsed.
std::optional<std::vector<std::pair<std::string, std::string>>> parse_dump_row(
    std::string_view line);

inline constexpr int kDuplicateLinkType = 3;
inline constexpr int kQuestionPostType = 1;
inline constexpr std::size_t kDefaultPairSample = 400000;

struct SoBuildOptions {
  std::size_t pair_sample = kDefaultPairSample;
  std::uint64_t seed = 0;
  int duplicate_link_type = kDuplicateLinkType;
};

struct SoBuildResult {
  LabeledDataset dataset;
  std::size_t duplicate_pairs = 0;  // duplicate link rows found
  std::size_t sampled_pairs = 0;
  std::size_t components_total = 0;
  std::size_t components_kept = 0;
  double length_mean = 0.0;
  double length_stddev = 0.0;  // population
  std::size_t members_without_title = 0;
  std::vector<Component> kept_components;
};

// Samples duplicate pairs, takes connected components, keeps those whose
// length lies strictly inside mean +/- stddev, and emits the titles of their
// question posts labeled by component. Both files are read row by row.
SoBuildResult build_so_dataset(std::istream& posts, std::istream& links,
                               const SoBuildOptions& options);
SoBuildResult build_so_dataset(const std::filesystem::path& posts,
                               const std::filesystem::path& links,
                               const SoBuildOptions& options);

double average_words_per_text(const LabeledDataset& ds);

// ---------------------------------------------------------------------------
// Synthetic streams with disjoint per-cluster vocabularies.

struct SyntheticSpec {
  std::size_t clusters = 50;
  std::size_t texts_per_cluster = 40;
  std::size_t vocab_per_cluster = 30;
  std::size_t words_per_text = 8;
  std::uint64_t seed = 1;
};

// Words are drawn without replacement from the cluster's vocabulary (with
// replacement when words_per_text exceeds it). Items are grouped by cluster;
// shuffle before streaming.
LabeledDataset make_synthetic_dataset(const SyntheticSpec& spec);

}  // namespace faststream
