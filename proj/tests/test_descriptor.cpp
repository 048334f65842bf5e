#include <gtest/gtest.h>

#include "json.hpp"
#include "streamrelay/construct.hpp"
#include "streamrelay/descriptor.hpp"
#include "streamrelay/error.hpp"
#include "support.hpp"

namespace streamrelay {
namespace {

using testing::Q;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

TEST(Descriptor, P2PRoundTrip) {
  for (const auto& code : {build_spectrum_code(30, 15, 3), build_spectrum_code(9, 6, 1, FieldConfig::gf65536()),
                           build_constrained_code(30, 2, DelaySpectrum{{5, 4, 3, 2, 2}})}) {
    const auto text = p2p_to_json(code);
    const auto back = p2p_from_json(text);
    EXPECT_EQ(p2p_to_json(back), text);
    EXPECT_EQ(back.delays(), code.delays());
    EXPECT_EQ(back.field_config(), code.field_config());
  }
}

TEST(Descriptor, CodeRoundTrip) {
  const auto code = construct_fb({3, 2, 1, 6}, Q(1, 2)).code;
  const auto text = code_to_json(code);
  const auto back = code_from_json(text);
  EXPECT_EQ(code_to_json(back), text);
  EXPECT_EQ(back.k1(), 15);
  EXPECT_EQ(back.k2(), 9);
  EXPECT_EQ(back.schedule, code.schedule);
}

TEST(Descriptor, MalformedInputIsAParseError) {
  EXPECT_EQ(code_of([] { code_from_json("{not json"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { code_from_json("{}"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { p2p_from_json("[1,2,3]"); }), ErrorCode::Parse);
}

TEST(Descriptor, TamperedCodesAreRejected) {
  auto j = nlohmann::json::parse(code_to_json(construct_fb({1, 1, 1, 2}, Q(1, 4)).code));
  auto bad_map = j;
  bad_map["src1"]["symbol_map"][0] = {5, 0};
  EXPECT_EQ(code_of([&] { code_from_json(bad_map.dump()); }), ErrorCode::Parse);
  auto bad_matrix = j;
  bad_matrix["relay"]["components"][0]["parity_matrix"] = "0";
  EXPECT_EQ(code_of([&] { code_from_json(bad_matrix.dump()); }), ErrorCode::Parse);
  auto bad_pair = j;
  bad_pair["assignment"][0]["relay_index"] = 7;
  EXPECT_EQ(code_of([&] { code_from_json(bad_pair.dump()); }), ErrorCode::Parse);
}

TEST(Descriptor, IndicesAreZeroBased) {
  const auto j = nlohmann::json::parse(code_to_json(construct_fb({1, 1, 1, 2}, Q(1, 4)).code));
  EXPECT_EQ(j["src1"]["symbol_map"][0], nlohmann::json::array({0, 0}));
  EXPECT_EQ(j["schedule"][0]["relay_index"], 0);
  EXPECT_EQ(j["rates"]["R1"], "1/4");
}

class GoldenDescriptor : public ::testing::TestWithParam<const char*> {};

TEST_P(GoldenDescriptor, ParsesReserializesAndVerifies) {
  const auto text = testing::slurp(testing::golden(GetParam()));
  const auto code = code_from_json(text);
  EXPECT_EQ(code_to_json(code) + "\n", text);
  VerifyOptions o{VerifyMode::Sampled, 1, 500};
  const auto rep = verify_network(code, code.params, code.default_horizon(), o);
  EXPECT_TRUE(rep.ok()) << rep.failure_count;
}

INSTANTIATE_TEST_SUITE_P(Files, GoldenDescriptor,
                         ::testing::Values("fb_1_1_1_2.json", "fb_3_2_1_6.json", "cs_9_8_1_12.json",
                                           "cs_3_2_1_6.json"));

TEST(Report, JsonFields) {
  NetworkReport r;
  r.patterns_checked = 3;
  r.failure_count = 1;
  r.failures.push_back({{{1}, {}, {2, 3}}, 2, 4, 0});
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["patterns_checked"], 3);
  EXPECT_EQ(j["failures"][0]["user"], 2);
  EXPECT_EQ(j["failures"][0]["t"], 4);
  EXPECT_EQ(j["failures"][0]["j"], 0);
  EXPECT_EQ(j["failures"][0]["pattern"]["link3"], nlohmann::json::array({2, 3}));
}

}  // namespace
}  // namespace streamrelay
