#include <gtest/gtest.h>

#include <limits>

#include "cmt/io.hpp"
#include "test_support.hpp"

using namespace cmt;

namespace {

ErrorCode parse_error(const std::string& text, bool program) {
  try {
    const auto j = io::parse(text);
    if (program)
      io::program_from_json(j);
    else
      io::instance_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Json, ComplexNumbersAreTwoElementArrays) {
  EXPECT_EQ(io::to_json(cplx{1.5, -2.0}).dump(), "[1.5,-2.0]");
  EXPECT_EQ(io::complex_from_json(io::json::array({3, 4})), (cplx{3.0, 4.0}));
}

TEST(Json, InstanceRoundTripIsBitExact) {
  Rng rng(50);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Configuration c;
    for (std::size_t n = 1; n <= 3; ++n) c.blocks.push_back({n, {random_point(n, seed * 10 + n)}});
    // Values that stress shortest round-trip formatting.
    c.blocks[0].points[0].x(0, 0) = cplx{0.1 + 0.2, std::nextafter(1.0, 2.0)};
    c.blocks[0].points[0].y(0, 0) = cplx{std::numeric_limits<double>::denorm_min(), -1e308};
    const std::string text = io::dump(io::instance_to_json(c));
    const auto back = io::instance_from_json(io::parse(text));
    EXPECT_EQ(back, c);
    EXPECT_EQ(io::dump(io::instance_to_json(back)), text);
  }
}

TEST(Json, ProgramRoundTripIsBitExact) {
  Rng rng(51);
  Program prog;
  for (int k = 0; k < 8; ++k)
    prog.moves.push_back({k % 2 ? MoveKind::AddQOfXToY : MoveKind::AddPOfYToX, testing_support::random_poly(rng, k)});
  prog.moves.push_back({MoveKind::AddPOfYToX, Poly{}});
  const std::string text = io::dump(io::program_to_json(prog));
  const auto back = io::program_from_json(io::parse(text));
  EXPECT_EQ(back, prog);
  EXPECT_EQ(io::dump(io::program_to_json(back)), text);
}

TEST(Json, ProgramKindsUseReadableNames) {
  const Program prog{{{MoveKind::AddPOfYToX, Poly::constant(1.0)}, {MoveKind::AddQOfXToY, Poly::identity()}}};
  const auto j = io::program_to_json(prog);
  EXPECT_EQ(j["format_version"], "1");
  EXPECT_EQ(j["moves"][0]["kind"], "X+=p(Y)");
  EXPECT_EQ(j["moves"][1]["kind"], "Y+=q(X)");
  EXPECT_EQ(j["moves"][1]["poly"].dump(), "[[0.0,0.0],[1.0,0.0]]");
}

TEST(Json, MalformedInstances) {
  EXPECT_EQ(parse_error(R"j({"format_version": "1", "configuration": {"blocks": [)j", false), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"j({"configuration": {"blocks": []}})j", false), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"j({"format_version": "2", "configuration": {"blocks": []}})j", false),
            ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"j({"format_version": "1", "configuration": {"blocks": [{"n": 0, "points": []}]}})j", false),
            ErrorCode::MalformedInput);
  const char* non_square = R"j({"format_version": "1", "configuration": {"blocks": [{"n": 2, "points": [
      {"n": 2, "X": [[[0,0],[0,0]]], "Y": [[[0,0],[0,0]],[[0,0],[0,0]]]}]}]}})j";
  EXPECT_EQ(parse_error(non_square, false), ErrorCode::MalformedInput);
  const char* bad_complex = R"j({"format_version": "1", "configuration": {"blocks": [{"n": 1, "points": [
      {"n": 1, "X": [[[0,0,0]]], "Y": [[[0,0]]]}]}]}})j";
  EXPECT_EQ(parse_error(bad_complex, false), ErrorCode::MalformedInput);
  const char* wrong_block = R"j({"format_version": "1", "configuration": {"blocks": [{"n": 2, "points": [
      {"n": 1, "X": [[[0,0]]], "Y": [[[0,0]]]}]}]}})j";
  EXPECT_EQ(parse_error(wrong_block, false), ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"j({"format_version": "1", "configuration": {"blocks": [{"n": 1, "points": [
      {"n": 1, "X": [[[NaN,0]]], "Y": [[[0,0]]]}]}]}})j", false), ErrorCode::MalformedInput);
}

TEST(Json, MalformedPrograms) {
  EXPECT_EQ(parse_error(R"j({"format_version": "1", "moves": [{"kind": "Z+=p(Y)", "poly": []}]})j", true),
            ErrorCode::MalformedInput);
  EXPECT_EQ(parse_error(R"j({"format_version": "1", "moves": [{"kind": "X+=p(Y)"}]})j", true),
            ErrorCode::MalformedInput);
  std::string big = R"j({"format_version": "1", "moves": [{"kind": "X+=p(Y)", "poly": [)j";
  for (int k = 0; k < 70; ++k) big += "[1,0],";
  big += "[1,0]]}]}";
  EXPECT_EQ(parse_error(big, true), ErrorCode::MalformedInput);
}

TEST(Json, ReportCarriesVerificationAndCertificates) {
  GenericityBudget b;
  const std::vector<CMPoint> src{random_point(2, 1)}, tgt{random_point(2, 2)};
  const auto r = solve_transitivity(src, tgt, b);
  const auto j = io::report_to_json(r);
  EXPECT_EQ(j["status"], "success");
  EXPECT_EQ(j["program_length"], r.program.size());
  EXPECT_EQ(j["stages"].size(), 4u);
  EXPECT_EQ(j["verification"]["distances"].size(), 1u);
  EXPECT_LE(j["verification"]["max_distance"].get<double>(), 1e-6);
  EXPECT_EQ(j["certificates"].size(), r.certificates.size());
}

TEST(Json, MissingFileIsMalformed) {
  try {
    io::read_file("/nonexistent/instance.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedInput);
  }
}
