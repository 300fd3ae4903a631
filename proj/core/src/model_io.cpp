#include <bit>
#include <cstring>

#include "ideageo/error.hpp"
#include "ideageo/session.hpp"

namespace ideageo {

namespace {

constexpr char magic[4] = {'I', 'D', 'G', 'M'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void text(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.append(s);
  }
  void raw(std::string_view s) { bytes_.append(s); }
  void matrix(const Matrix& m) {
    for (const double v : m.data()) f64(v);
  }
  std::string take() { return std::move(bytes_); }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool at_end() const noexcept { return pos_ == bytes_.size(); }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::truncated, "model file truncated at byte " + std::to_string(pos_));
    }
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string text() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n);
    const auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Matrix matrix(std::size_t rows, std::size_t cols) {
    // Guard the allocation against corrupt sizes before reserving memory.
    if (cols != 0 && rows > (bytes_.size() - pos_) / 8 / cols) {
      throw Error(ErrorCode::truncated, "model file truncated inside a matrix");
    }
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = f64();
    return m;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const EmbeddingModel& model) {
  Writer w;
  w.raw(std::string_view(magic, 4));
  w.u32(model_format_version);
  w.u32(static_cast<std::uint32_t>(model.dim()));
  w.u32(static_cast<std::uint32_t>(model.vocabulary.size()));
  w.u32(static_cast<std::uint32_t>(model.doc_ids.size()));
  for (std::uint32_t i = 0; i < model.vocabulary.size(); ++i) {
    w.text(model.vocabulary.term(i));
    w.u64(model.vocabulary.count(i));
  }
  w.matrix(model.word_vectors);
  w.matrix(model.output_vectors);
  w.matrix(model.doc_vectors);
  for (const auto& id : model.doc_ids) w.text(id);

  const auto& c = model.config;
  w.u32(c.window);
  w.u32(c.epochs);
  w.f64(c.initial_rate);
  w.f64(c.final_rate);
  w.u32(c.negatives);
  w.u32(static_cast<std::uint32_t>(c.mode));
  w.f64(c.subsample_threshold);
  w.u64(c.seed);
  w.u64(c.min_count);
  w.u32(c.workers);
  return w.take();
}

EmbeddingModel parse_model(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(4) != std::string_view(magic, 4)) {
    throw Error(ErrorCode::bad_magic, "not a model file (expected magic IDGM)");
  }
  const std::uint32_t version = r.u32();
  if (version != model_format_version) {
    throw Error(ErrorCode::version_mismatch, "model format version " + std::to_string(version) +
                                                 " is not supported (expected " +
                                                 std::to_string(model_format_version) + ")");
  }
  const std::uint32_t dim = r.u32();
  const std::uint32_t vocab_size = r.u32();
  const std::uint32_t doc_count = r.u32();

  std::vector<std::string> terms;
  std::vector<std::uint64_t> counts;
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    terms.push_back(r.text());
    counts.push_back(r.u64());
  }

  EmbeddingModel model;
  try {
    model.vocabulary = Vocabulary(std::move(terms), std::move(counts));
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, std::string("corrupt model vocabulary: ") + e.what());
  }
  model.word_vectors = r.matrix(vocab_size, dim);
  model.output_vectors = r.matrix(vocab_size, dim);
  model.doc_vectors = r.matrix(doc_count, dim);
  for (std::uint32_t i = 0; i < doc_count; ++i) model.doc_ids.push_back(r.text());

  auto& c = model.config;
  c.dim = dim;
  c.window = r.u32();
  c.epochs = r.u32();
  c.initial_rate = r.f64();
  c.final_rate = r.f64();
  c.negatives = r.u32();
  const std::uint32_t mode = r.u32();
  if (mode > 1) throw Error(ErrorCode::parse, "corrupt model: unknown training mode");
  c.mode = static_cast<TrainingMode>(mode);
  c.subsample_threshold = r.f64();
  c.seed = r.u64();
  c.min_count = r.u64();
  c.workers = r.u32();
  if (!r.at_end()) throw Error(ErrorCode::parse, "corrupt model: trailing bytes after config block");
  return model;
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  try {
    return parse_model(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace ideageo
