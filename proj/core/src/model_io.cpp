#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "digitrec/errors.hpp"
#include "digitrec/mlp.hpp"

// Layout (little-endian):
//   "MLP1" | u32 version = 1 | u32 layer count = 3 | u32 size x 3 |
//   f64 hidden matrix row-major | f64 output matrix row-major
// Nothing may follow the last matrix.

namespace digitrec {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'P', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kLayerCount = 3;

void put_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(bytes, 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  out.write(bytes, 8);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(Errc::truncated_stream, std::string("stream ended inside ") + what);
    }
  }

  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4, what);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
  }

  double f64(const char* what) {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8, what);
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = bits << 8 | b[i];
    return std::bit_cast<double>(bits);
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

void check_shape(const MlpModel& model) {
  const auto [n_in, n_hidden, n_out] = model.layer_sizes;
  if (n_in < 1 || n_hidden < 1 || n_out < 1 || model.hidden.rows() != n_hidden ||
      model.hidden.cols() != n_in + 1 || model.output.rows() != n_out ||
      model.output.cols() != n_hidden + 1) {
    throw Error(Errc::shape_mismatch, "weight matrices do not match layer sizes");
  }
}

}  // namespace

void save_model(const MlpModel& model, std::ostream& out) {
  check_shape(model);
  for (const Matrix* m : {&model.hidden, &model.output}) {
    for (double w : m->data()) {
      if (!std::isfinite(w)) throw Error(Errc::invalid_argument, "model has non-finite weights");
    }
  }
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, kLayerCount);
  for (int size : model.layer_sizes) put_u32(out, static_cast<std::uint32_t>(size));
  for (double w : model.hidden.data()) put_f64(out, w);
  for (double w : model.output.data()) put_f64(out, w);
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write model file " + path.string());
  save_model(model, out);
  out.flush();
  if (!out) throw Error(Errc::io_error, "failed writing model file " + path.string());
}

MlpModel load_model(std::istream& in) {
  Reader reader(in);
  char magic[4];
  reader.bytes(magic, 4, "magic");
  if (!std::equal(magic, magic + 4, kMagic)) throw Error(Errc::bad_magic, "not an MLP1 model file");
  const std::uint32_t version = reader.u32("version");
  if (version != kVersion) {
    throw Error(Errc::version_mismatch, "model format version " + std::to_string(version) +
                                            ", expected " + std::to_string(kVersion));
  }
  const std::uint32_t layers = reader.u32("layer count");
  if (layers != kLayerCount) {
    throw Error(Errc::shape_mismatch, "model has " + std::to_string(layers) + " layers, expected 3");
  }
  MlpModel model;
  for (int& size : model.layer_sizes) {
    const std::uint32_t v = reader.u32("layer sizes");
    if (v == 0 || v > (1u << 20)) throw Error(Errc::shape_mismatch, "layer size " + std::to_string(v));
    size = static_cast<int>(v);
  }
  const auto [n_in, n_hidden, n_out] = model.layer_sizes;
  model.hidden = Matrix(n_hidden, n_in + 1);
  model.output = Matrix(n_out, n_hidden + 1);
  for (double& w : model.hidden.data()) w = reader.f64("hidden weights");
  for (double& w : model.output.data()) w = reader.f64("output weights");
  if (!reader.at_end()) throw Error(Errc::shape_mismatch, "trailing bytes after output weights");
  return model;
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open model file " + path.string());
  try {
    return load_model(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

}  // namespace digitrec
