#include "farf/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <zlib.h>

#include "farf/error.hpp"

namespace farf {

namespace {

constexpr char kMagic[4] = {'F', 'A', 'R', 'F'};
constexpr std::uint8_t kSplitTag = 0;
constexpr std::uint8_t kLeafTag = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) { out_.append(s); }

  template <typename Derived>
  void matrix(const Eigen::DenseBase<Derived>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }
  }

  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  /// A count that must fit in the remaining bytes at `unit` bytes each.
  std::size_t count(std::size_t value, std::size_t unit) {
    if (unit != 0 && value > (data_.size() - pos_) / unit) fail("implausible element count");
    return value;
  }
  Eigen::MatrixXd matrix(std::size_t rows, std::size_t cols) {
    count(rows * cols, 8);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f64();
    }
    return m;
  }
  bool done() const { return pos_ == data_.size(); }
  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError("model file: " + what_ + ": " + msg);
  }

 private:
  void need(std::size_t n) {
    if (n > data_.size() - pos_) fail("truncated");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  std::string what_;
};

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for large models.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

void section(Writer& w, const char tag[4], const std::string& payload) {
  w.bytes(std::string_view(tag, 4));
  w.u64(payload.size());
  w.bytes(payload);
}

std::string projection_payload(const ProjectionModel& p) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(p.kind));
  w.u32(static_cast<std::uint32_t>(p.d_out()));
  w.u32(static_cast<std::uint32_t>(p.d_in()));
  w.u64(p.seed);
  w.i32(p.data_rank);
  w.matrix(p.mean.transpose());
  w.matrix(p.matrix);
  return std::move(w.str());
}

std::string trees_payload(const ForestModel& f) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(f.trees.size()));
  w.u32(static_cast<std::uint32_t>(f.compressed_dim));
  w.u32(static_cast<std::uint32_t>(f.original_dim));
  w.u32(static_cast<std::uint32_t>(f.target_dim));
  for (const Tree& t : f.trees) {
    w.u32(static_cast<std::uint32_t>(t.nodes.size()));
    for (const TreeNode& node : t.nodes) {
      if (const auto* s = std::get_if<SplitNode>(&node)) {
        w.u8(kSplitTag);
        w.u32(static_cast<std::uint32_t>(s->feature));
        w.f64(s->threshold);
        w.u32(static_cast<std::uint32_t>(s->left));
        w.u32(static_cast<std::uint32_t>(s->right));
      } else {
        const auto& leaf = std::get<LeafNode>(node);
        w.u8(kLeafTag);
        w.u64(leaf.n_samples);
        w.u64(leaf.regressor.n_samples);
        w.f64(leaf.regressor.lambda_used);
        w.u8(leaf.regressor.weighted ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(leaf.regressor.P.rows()));
        w.u32(static_cast<std::uint32_t>(leaf.regressor.P.cols()));
        w.matrix(leaf.regressor.P);
        w.matrix(leaf.mean_target.transpose());
      }
    }
  }
  return std::move(w.str());
}

ProjectionModel read_projection(std::string_view payload) {
  Reader r(payload, "PROJ section");
  ProjectionModel p;
  const std::uint32_t kind = r.u32();
  if (kind > static_cast<std::uint32_t>(ProjectionKind::lsh)) r.fail("unknown projection kind");
  p.kind = static_cast<ProjectionKind>(kind);
  const std::size_t d_out = r.u32();
  const std::size_t d_in = r.u32();
  p.seed = r.u64();
  p.data_rank = r.i32();
  p.mean = r.matrix(1, d_in).transpose();
  p.matrix = r.matrix(d_out, d_in);
  if (!r.done()) r.fail("trailing bytes");
  return p;
}

void read_trees(std::string_view payload, ForestModel& f) {
  Reader r(payload, "TREE section");
  const std::size_t n_trees = r.count(r.u32(), 4);
  f.compressed_dim = static_cast<int>(r.u32());
  f.original_dim = static_cast<int>(r.u32());
  f.target_dim = static_cast<int>(r.u32());
  const std::size_t leaf_dim = f.leaf.features == LeafFeatures::original
                                   ? static_cast<std::size_t>(f.original_dim)
                                   : static_cast<std::size_t>(f.compressed_dim);
  f.trees.resize(n_trees);
  for (Tree& t : f.trees) {
    const std::size_t n_nodes = r.count(r.u32(), 1);
    t.nodes.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const std::uint8_t tag = r.u8();
      if (tag == kSplitTag) {
        SplitNode s;
        s.feature = static_cast<int>(r.u32());
        s.threshold = r.f64();
        s.left = static_cast<int>(r.u32());
        s.right = static_cast<int>(r.u32());
        if (s.feature < 0 || s.feature >= f.compressed_dim) r.fail("split feature out of range");
        if (s.left <= static_cast<int>(i) || s.right <= static_cast<int>(i) ||
            s.left >= static_cast<int>(n_nodes) || s.right >= static_cast<int>(n_nodes)) {
          r.fail("child index out of range");
        }
        t.nodes.emplace_back(s);
      } else if (tag == kLeafTag) {
        LeafNode leaf;
        leaf.n_samples = r.u64();
        leaf.regressor.n_samples = r.u64();
        leaf.regressor.lambda_used = r.f64();
        leaf.regressor.weighted = r.u8() != 0;
        const std::size_t rows = r.u32();
        const std::size_t cols = r.u32();
        if (rows != static_cast<std::size_t>(f.target_dim) || cols != leaf_dim) {
          r.fail("leaf matrix has unexpected shape");
        }
        leaf.regressor.P = r.matrix(rows, cols);
        leaf.mean_target = r.matrix(1, rows).transpose();
        t.nodes.emplace_back(std::move(leaf));
      } else {
        r.fail("unknown node tag");
      }
    }
    if (t.nodes.empty()) r.fail("empty tree");
  }
  if (!r.done()) r.fail("trailing bytes");
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  Writer w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kModelFormatVersion);
  section(w, "CONF", model.config.to_text());
  section(w, "PROJ", projection_payload(model.projection));
  section(w, "TREE", trees_payload(model.forest));
  w.u32(crc32_of(w.str()));
  return std::move(w.str());
}

TrainedModel deserialize_model(std::string_view bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError("model file: bad magic (not a FARF model)");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4), "checksum");
  if (tail.u32() != crc32_of(body)) throw IoError("model file: checksum mismatch (corrupt file)");

  Reader r(body.substr(4), "header");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw IoError("model file: unsupported version " + std::to_string(version) + " (expected " +
                  std::to_string(kModelFormatVersion) + ")");
  }
  TrainedModel model;
  bool have_conf = false, have_proj = false, have_tree = false;
  std::string_view tree_payload;
  while (!r.done()) {
    const std::string_view tag = r.bytes(4);
    const std::uint64_t len = r.u64();
    const std::string_view payload = r.bytes(r.count(len, 1));
    if (tag == "CONF") {
      try {
        model.config = SRConfig::from_text(payload);
        model.config.validate();
      } catch (const InvalidArgument& e) {
        throw IoError(std::string("model file: CONF section: ") + e.what());
      }
      have_conf = true;
    } else if (tag == "PROJ") {
      model.projection = read_projection(payload);
      have_proj = true;
    } else if (tag == "TREE") {
      tree_payload = payload;
      have_tree = true;
    } else {
      r.fail("unknown section '" + std::string(tag) + "'");
    }
  }
  if (!have_conf || !have_proj || !have_tree) throw IoError("model file: missing section");

  model.forest.params = model.config.forest_params();
  model.forest.leaf = model.config.leaf;
  read_trees(tree_payload, model.forest);
  model.forest.params.n_trees = static_cast<int>(model.forest.trees.size());
  if (model.projection.d_out() != model.forest.compressed_dim ||
      model.projection.d_in() != model.forest.original_dim) {
    throw IoError("model file: projection and forest dimensions disagree");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return deserialize_model(bytes);
}

}  // namespace farf
