#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "digitrec/errors.hpp"
#include "digitrec/mlp.hpp"

namespace digitrec {
namespace {

std::string saved_bytes(const MlpModel& m) {
  std::ostringstream out(std::ios::binary);
  save_model(m, out);
  return out.str();
}

Errc load_error(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    load_model(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return Errc::invalid_argument;
}

TEST(ModelFile, RoundTripIsBitExact) {
  std::mt19937 gen(1);
  for (int trial = 0; trial < 10; ++trial) {
    TrainingConfig config;
    config.hidden_size = 1 + static_cast<int>(gen() % 70);
    config.seed = gen();
    MlpModel m = init_model(config);
    m.hidden(0, 0) = -0.0;
    m.output(0, 0) = 1e-310;  // subnormal
    const std::string bytes = saved_bytes(m);
    std::istringstream in(bytes, std::ios::binary);
    const MlpModel back = load_model(in);
    EXPECT_EQ(back.layer_sizes, m.layer_sizes);
    ASSERT_EQ(std::memcmp(back.hidden.data().data(), m.hidden.data().data(), m.hidden.data().size_bytes()), 0);
    ASSERT_EQ(std::memcmp(back.output.data().data(), m.output.data().data(), m.output.data().size_bytes()), 0);
    EXPECT_EQ(saved_bytes(back), bytes);
  }
}

TEST(ModelFile, HeaderLayout) {
  TrainingConfig config;
  config.hidden_size = 65;
  const std::string bytes = saved_bytes(init_model(config));
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 12 + 8u * (65 * 77 + 10 * 66));
  EXPECT_EQ(bytes.substr(0, 4), "MLP1");
  const std::string expected_header("\x01\x00\x00\x00\x03\x00\x00\x00\x4c\x00\x00\x00\x41\x00\x00\x00\x0a\x00\x00\x00", 20);
  EXPECT_EQ(bytes.substr(4, 20), expected_header);
  // First weight, little-endian IEEE-754.
  const MlpModel m = init_model(config);
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = bits << 8 | static_cast<unsigned char>(bytes[24 + i]);
  EXPECT_EQ(std::bit_cast<double>(bits), m.hidden(0, 0));
}

TEST(ModelFile, Errors) {
  const std::string good = saved_bytes(init_model(TrainingConfig{}));

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(load_error(bad_magic), Errc::bad_magic);

  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(load_error(bad_version), Errc::version_mismatch);

  std::string bad_layers = good;
  bad_layers[8] = 4;
  EXPECT_EQ(load_error(bad_layers), Errc::shape_mismatch);

  std::string zero_size = good;
  zero_size[12] = 0;
  EXPECT_EQ(load_error(zero_size), Errc::shape_mismatch);

  EXPECT_EQ(load_error(good.substr(0, good.size() / 2)), Errc::truncated_stream);
  EXPECT_EQ(load_error(good.substr(0, 10)), Errc::truncated_stream);
  EXPECT_EQ(load_error(""), Errc::truncated_stream);
  EXPECT_EQ(load_error(good + "x"), Errc::shape_mismatch);
}

TEST(ModelFile, RefusesNonFiniteWeights) {
  MlpModel m = init_model(TrainingConfig{});
  m.output(3, 3) = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream out;
  EXPECT_THROW(save_model(m, out), Error);
}

}  // namespace
}  // namespace digitrec
