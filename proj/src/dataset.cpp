#include "gwnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "gwnn/errors.hpp"

namespace gwnn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = s.find('\t', start);
    out.push_back(trim(s.substr(start, tab == std::string_view::npos ? s.size() - start : tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

// Reads `key=value` tokens from a `# k1=v1 k2=v2` header comment.
std::map<std::string, std::size_t> parse_header(std::string_view line) {
  std::map<std::string, std::size_t> kv;
  line.remove_prefix(1);
  std::istringstream tokens{std::string(line)};
  std::string tok;
  while (tokens >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::size_t v = 0;
    if (parse_num(std::string_view(tok).substr(eq + 1), v)) kv[tok.substr(0, eq)] = v;
  }
  return kv;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw DataError("cannot open " + path.string());
  }
  // Next line (comments included); false at EOF.
  bool next(std::string_view& out) {
    if (!std::getline(in_, buf_)) return false;
    ++line_;
    out = trim(buf_);
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(path_.string() + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string buf_;
  std::size_t line_ = 0;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string to_string(SplitMode mode) {
  return mode == SplitMode::kFirstByIndex ? "first-by-index" : "seeded-random";
}

void validate_split(const Split& split, std::size_t n, const std::vector<int>& labels) {
  std::vector<char> owner(n, 0);
  auto mark = [&](const std::vector<std::size_t>& set, char tag, const char* name) {
    for (std::size_t v : set) {
      if (v >= n) throw DataError(std::string(name) + " split references node " + std::to_string(v) + " >= n");
      if (owner[v] != 0) throw DataError("node " + std::to_string(v) + " appears in more than one split");
      if (labels[v] == kUnlabeled) throw DataError("node " + std::to_string(v) + " in " + name + " split has no label");
      owner[v] = tag;
    }
  };
  mark(split.train, 1, "train");
  mark(split.val, 2, "val");
  mark(split.test, 3, "test");
}

Split make_standard_split(const std::vector<int>& labels, std::size_t num_classes, SplitMode mode,
                       std::uint64_t seed, const SplitSizes& sizes) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  if (mode == SplitMode::kSeededRandom) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<std::size_t> per_class(num_classes, 0);
  for (int y : labels) {
    if (y != kUnlabeled) ++per_class[static_cast<std::size_t>(y)];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (per_class[c] < sizes.train_per_class) {
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(per_class[c]) +
                      " labelled nodes; need " + std::to_string(sizes.train_per_class));
    }
  }

  Split split;
  std::vector<std::size_t> taken(num_classes, 0);
  std::vector<char> used(labels.size(), 0);
  for (std::size_t v : order) {
    const int y = labels[v];
    if (y == kUnlabeled) continue;
    auto& t = taken[static_cast<std::size_t>(y)];
    if (t < sizes.train_per_class) {
      ++t;
      split.train.push_back(v);
      used[v] = 1;
    }
  }
  for (std::size_t v : order) {
    if (used[v] || labels[v] == kUnlabeled) continue;
    if (split.val.size() < sizes.val) {
      split.val.push_back(v);
    } else if (split.test.size() < sizes.test) {
      split.test.push_back(v);
    } else {
      break;
    }
  }
  if (split.val.size() < sizes.val || split.test.size() < sizes.test) {
    throw DataError("not enough labelled nodes for a " + std::to_string(sizes.train_per_class) +
                    "-per-class / " + std::to_string(sizes.val) + " / " +
                    std::to_string(sizes.test) + " split");
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

double label_rate(const Dataset& d) {
  if (d.node_count() == 0) return 0.0;
  return static_cast<double>(d.split.train.size()) / static_cast<double>(d.node_count());
}

Dataset load_dataset(const std::filesystem::path& dir, const LoadOptions& options) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("dataset directory " + dir.string() + " does not exist");
  }
  Dataset d;

  // features.tsv: `# n=<n> p=<p> nnz=<k>` then node, feature, value.
  std::size_t n = 0, p = 0, declared_nnz = 0;
  {
    LineReader rd(dir / "features.tsv");
    std::string_view line;
    bool header = false;
    std::vector<Triplet> trip;
    while (rd.next(line)) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        const auto kv = parse_header(line);
        if (kv.count("n") && kv.count("p") && kv.count("nnz")) {
          n = kv.at("n");
          p = kv.at("p");
          declared_nnz = kv.at("nnz");
          header = true;
        }
        continue;
      }
      if (!header) rd.fail("feature entry before the `# n=<n> p=<p> nnz=<k>` header");
      const auto f = split_tabs(line);
      std::size_t node = 0, feat = 0;
      double value = 0.0;
      if (f.size() != 3 || !parse_num(f[0], node) || !parse_num(f[1], feat) ||
          !parse_num(f[2], value)) {
        rd.fail("expected `node<TAB>feature_index<TAB>value`");
      }
      if (node >= n || feat >= p) rd.fail("feature entry (" + std::to_string(node) + ", " + std::to_string(feat) + ") out of range");
      if (value == 0.0) rd.fail("explicit zero feature value");
      trip.push_back({node, feat, value});
    }
    if (!header) throw DataError((dir / "features.tsv").string() + ": missing `# n= p= nnz=` header");
    if (trip.size() != declared_nnz) {
      throw DataError((dir / "features.tsv").string() + ": header declares nnz=" +
                      std::to_string(declared_nnz) + " but " + std::to_string(trip.size()) +
                      " entries were read");
    }
    d.features = SparseMatrix::from_triplets(n, p, std::move(trip));
    if (d.features.nnz() != declared_nnz) {
      throw DataError((dir / "features.tsv").string() + ": duplicate (node, feature) entries");
    }
  }

  // edges.tsv
  {
    std::ifstream in(dir / "edges.tsv");
    if (!in) throw DataError("cannot open " + (dir / "edges.tsv").string());
    const EdgeList list = parse_edge_list(in, (dir / "edges.tsv").string());
    if (list.declared_n && *list.declared_n != n) {
      throw DataError((dir / "edges.tsv").string() + ": declares n=" +
                      std::to_string(*list.declared_n) + " but features.tsv has n=" +
                      std::to_string(n));
    }
    try {
      d.graph = load_graph(list.edges, n, list.lines);
    } catch (const DataError& e) {
      throw DataError((dir / "edges.tsv").string() + ": " + e.what());
    }
  }

  // labels.tsv: `# c=<classes>` then node, label.
  {
    LineReader rd(dir / "labels.tsv");
    std::string_view line;
    bool header = false;
    d.labels.assign(n, kUnlabeled);
    while (rd.next(line)) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        const auto kv = parse_header(line);
        if (kv.count("c")) {
          d.num_classes = kv.at("c");
          header = true;
        }
        continue;
      }
      if (!header) rd.fail("label entry before the `# c=<classes>` header");
      const auto f = split_tabs(line);
      std::size_t node = 0;
      int label = 0;
      if (f.size() != 2 || !parse_num(f[0], node) || !parse_num(f[1], label)) {
        rd.fail("expected `node<TAB>label`");
      }
      if (node >= n) rd.fail("node " + std::to_string(node) + " out of range");
      if (label < 0 || static_cast<std::size_t>(label) >= d.num_classes) {
        rd.fail("label " + std::to_string(label) + " outside [0, " + std::to_string(d.num_classes) + ")");
      }
      if (d.labels[node] != kUnlabeled) rd.fail("node " + std::to_string(node) + " labelled twice");
      d.labels[node] = label;
    }
    if (!header) throw DataError((dir / "labels.tsv").string() + ": missing `# c=<classes>` header");
  }

  // splits.tsv (optional)
  const auto split_path = dir / "splits.tsv";
  if (std::filesystem::exists(split_path)) {
    LineReader rd(split_path);
    std::string_view line;
    while (rd.next(line)) {
      if (line.empty() || line.front() == '#') continue;
      const auto f = split_tabs(line);
      std::size_t node = 0;
      if (f.size() != 2 || !parse_num(f[0], node)) rd.fail("expected `node<TAB>{train|val|test}`");
      if (node >= n) rd.fail("node " + std::to_string(node) + " out of range");
      if (f[1] == "train") {
        d.split.train.push_back(node);
      } else if (f[1] == "val") {
        d.split.val.push_back(node);
      } else if (f[1] == "test") {
        d.split.test.push_back(node);
      } else {
        rd.fail("unknown split name `" + std::string(f[1]) + "`");
      }
    }
    d.split_source = "file";
    for (auto* set : {&d.split.train, &d.split.val, &d.split.test}) std::sort(set->begin(), set->end());
    try {
      validate_split(d.split, n, d.labels);
    } catch (const DataError& e) {
      throw DataError(split_path.string() + ": " + e.what());
    }
  } else {
    d.split = make_standard_split(d.labels, d.num_classes, options.split_mode, options.split_seed,
                               options.split_sizes);
    d.split_source = to_string(options.split_mode);
  }
  return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("edges.tsv");
    write_edge_file(d.graph, out);
  }
  {
    auto out = open("features.tsv");
    const auto& x = d.features;
    out << "# n=" << x.rows() << " p=" << x.cols() << " nnz=" << x.nnz() << '\n';
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto cols = x.row_cols(r);
      const auto vals = x.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k)
        out << r << '\t' << cols[k] << '\t' << format_double(vals[k]) << '\n';
    }
  }
  {
    auto out = open("labels.tsv");
    out << "# c=" << d.num_classes << '\n';
    for (std::size_t v = 0; v < d.labels.size(); ++v)
      if (d.labels[v] != kUnlabeled) out << v << '\t' << d.labels[v] << '\n';
  }
  {
    auto out = open("splits.tsv");
    std::vector<std::pair<std::size_t, const char*>> rows;
    for (std::size_t v : d.split.train) rows.emplace_back(v, "train");
    for (std::size_t v : d.split.val) rows.emplace_back(v, "val");
    for (std::size_t v : d.split.test) rows.emplace_back(v, "test");
    std::sort(rows.begin(), rows.end());
    for (const auto& [v, name] : rows) out << v << '\t' << name << '\n';
  }
}

}  // namespace gwnn
