#include <gtest/gtest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>

#include "stillwater/io.hpp"
#include "stillwater/run.hpp"
#include "support.hpp"

using namespace stillwater;
using namespace testing_support;

namespace {

template <class T>
void le(std::vector<char>& out, T v) {
  // Bytes by shifting the value, independent of host order.
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

FieldFile sample_file(std::uint64_t seed) {
  const Grid g(2.5, 0.75, 8, 12);
  Rng rng(seed);
  std::vector<double> a(g.num_points()), b(g.num_points());
  for (double& v : a) v = rng.uniform(-1, 1);
  for (double& v : b) v = std::ldexp(rng.uniform(), -1000);
  return {g, {{"eta", Field(g, a)}, {"u1", Field(g, b)}}};
}

bool same_bits(const Field& a, const Field& b) {
  return a.size() == b.size() && std::memcmp(a.samples().data(), b.samples().data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Swf1, EncodingMatchesByteOracle) {
  const Grid g(1.5, 2, 8, 8);
  std::vector<double> s(g.num_points());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.25 * double(i) - 3;
  const FieldFile f{g, {{"beta", Field(g, s)}}};

  std::vector<char> want{'S', 'W', 'F', '1'};
  le<std::uint32_t>(want, 1);
  le<std::uint32_t>(want, 8);
  le<std::uint32_t>(want, 8);
  le<double>(want, 1.5);
  le<double>(want, 2.0);
  le<std::uint32_t>(want, 1);
  le<std::uint16_t>(want, 4);
  for (char c : std::string("beta")) want.push_back(c);
  for (int j1 = 0; j1 < 8; ++j1)
    for (int j2 = 0; j2 < 8; ++j2) le<double>(want, 0.25 * (8 * j1 + j2) - 3);
  EXPECT_EQ(encode_field_file(f), want);
  EXPECT_EQ(want.size(), 4u + 4 + 8 + 16 + 4 + 2 + 4 + 64 * 8);
}

TEST(Swf1, RoundTripIsBitwise) {
  const FieldFile f = sample_file(3);
  const FieldFile back = decode_field_file(encode_field_file(f));
  EXPECT_TRUE(back.grid == f.grid);
  ASSERT_EQ(back.fields.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.fields[i].first, f.fields[i].first);
    EXPECT_TRUE(same_bits(back.fields[i].second, f.fields[i].second));
  }
}

TEST(Swf1, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "stillwater_io_test.swf1";
  const FieldFile f = sample_file(4);
  write_field_file(path, f);
  const FieldFile back = read_field_file(path);
  EXPECT_TRUE(same_bits(back.get("eta"), f.get("eta")));
  EXPECT_TRUE(back.has("u1"));
  EXPECT_FALSE(back.has("u2"));
  EXPECT_THROW((void)back.get("u2"), FormatError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_field_file(path), FormatError);
}

TEST(Swf1, RejectsMalformedInput) {
  const std::vector<char> good = encode_field_file(sample_file(5));

  std::vector<char> bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_field_file(bad), FormatError);

  bad = good;
  bad[4] = 2;
  EXPECT_THROW(decode_field_file(bad), FormatError);

  bad.assign(good.begin(), good.end() - 1);
  EXPECT_THROW(decode_field_file(bad), FormatError);

  bad.assign(good.begin(), good.begin() + 10);
  EXPECT_THROW(decode_field_file(bad), FormatError);

  bad = good;
  bad.push_back(0);
  EXPECT_THROW(decode_field_file(bad), FormatError);

  // Odd N1 is not a valid grid.
  bad = good;
  bad[8] = 7;
  EXPECT_THROW(decode_field_file(bad), FormatError);

  EXPECT_THROW(decode_field_file({}), FormatError);
}

TEST(Swf1, RejectsNonFiniteSample) {
  std::vector<char> bytes = encode_field_file(sample_file(6));
  const double nan = std::nan("");
  std::memcpy(bytes.data() + bytes.size() - 8, &nan, 8);
  EXPECT_THROW(decode_field_file(bytes), FormatError);
}

TEST(StateFile, LayoutAndReadBack) {
  const Grid g(1, 1, 16, 16);
  Rng rng(7);
  const State s = random_state(g, rng, 3, 1, 0.2);
  const Field beta = random_field(g, rng, 3);
  const FieldFile f = state_file(s, beta, true, true);
  ASSERT_EQ(f.fields.size(), 6u);
  const char* names[] = {"eta", "beta", "u1", "u2", "div_u", "curl_u"};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(f.fields[i].first, names[i]);
  const State back = read_state(decode_field_file(encode_field_file(f)));
  EXPECT_TRUE(same_bits(back.eta, s.eta));
  EXPECT_TRUE(same_bits(back.u[1], s.u[1]));
  EXPECT_EQ(state_file(s, beta).fields.size(), 4u);
}

TEST(Csv, HeaderAndNumberFormat) {
  EXPECT_EQ(branch_csv_header(), "kappa,eta_max,depth_min,residual,power_relerr,h1_u,h2_eta");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0), "0");
  EXPECT_EQ(format_number(121.71299774605559), "121.71299774605559");
  for (double x : {1.0 / 3, 6.02e23, -2.5e-300}) EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Csv, RowHasSevenColumns) {
  const Grid g(1, 1, 8, 8);
  BranchPoint p{State::zeros(g), 0.5, {0, 1, 0.5}, 1e-12, 3, 0, 0.5};
  DiagnosticsReport d;
  d.eta_max = 0.25;
  d.depth_min = 0.75;
  EXPECT_EQ(branch_csv_row(0.5, p, d), "0.5,0.25,0.75,1e-12,0,0,0");
}
