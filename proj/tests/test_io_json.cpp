#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fpa/io_json.hpp"
#include "helpers.hpp"

using Catch::Matchers::ContainsSubstring;
using fpa::Rat;
using fpa::validation_error;
namespace io = fpa::io;

TEST_CASE("golden instance round-trips bit-exactly") {
  auto a = fpatest::golden_instance();
  std::string text = io::serialize_instance(a);
  auto b = io::parse_instance(text);
  CHECK(b.n == 3);
  CHECK(b.bids == a.bids);
  CHECK(io::serialize_instance(b) == text);

  // A second pass through the parser is the identity on serialized output.
  CHECK(io::serialize_instance(io::parse_instance(io::serialize_instance(b))) == text);
}

TEST_CASE("random instances survive the round trip") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 25; ++t) {
    int n = 2 + static_cast<int>(rng() % 3);
    auto a = fpatest::random_instance(rng, n, fpatest::random_bids(rng));
    std::string text = io::serialize_instance(a);
    auto b = io::parse_instance(text);
    CHECK(io::serialize_instance(b) == text);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        CHECK(a.prior(i, j).eval(Rat(1, 3)) == b.prior(i, j).eval(Rat(1, 3)));
      }
  }
}

TEST_CASE("block shorthand normalizes to pieces on load") {
  std::string text = R"({
    "bidders": 2,
    "bids": ["0", "1/4"],
    "priors": [
      [null, {"blocks": [{"interval": ["0", "1/2"], "volume": "3/4"},
                         {"interval": ["1/2", "1"], "volume": "1/4"}]}],
      [{"pieces": [{"interval": ["0", "1"], "coeffs": ["0", "1"]}]}, null]
    ]
  })";
  auto a = io::parse_instance(text);
  auto expected = fpa::distributions::PiecewiseCdf::from_blocks(
      {{Rat(0), Rat(1, 2), Rat(3, 4)}, {Rat(1, 2), Rat(1), Rat(1, 4)}});
  CHECK(a.prior(0, 1).eval(Rat(1, 4)) == expected.eval(Rat(1, 4)));
  CHECK(a.prior(0, 1).eval(Rat(3, 4)) == expected.eval(Rat(3, 4)));
  // Serialization always writes the pieces form.
  CHECK_THAT(io::serialize_instance(a), ContainsSubstring("pieces"));
  CHECK_THAT(io::serialize_instance(a), !ContainsSubstring("blocks"));
}

TEST_CASE("under-filled prior volume is a validation error") {
  std::string text = R"({
    "bidders": 2,
    "bids": ["0", "1/4"],
    "priors": [
      [null, {"blocks": [{"interval": ["0", "1"], "volume": "9/10"}]}],
      [{"pieces": [{"interval": ["0", "1"], "coeffs": ["0", "1"]}]}, null]
    ]
  })";
  CHECK_THROWS_AS(io::parse_instance(text), validation_error);
  CHECK_THROWS_WITH(io::parse_instance(text), ContainsSubstring("F_{0,1}"));
  CHECK_THROWS_WITH(io::parse_instance(text), ContainsSubstring("F(1) = 9/10"));
}

TEST_CASE("missing and malformed fields are syntax errors") {
  CHECK_THROWS_AS(io::parse_instance(R"({"bidders": 2, "priors": []})"), io::syntax_error);
  CHECK_THROWS_WITH(io::parse_instance(R"({"bidders": 2, "priors": []})"),
                    ContainsSubstring("missing 'bids' field"));
  // Truncated document: the message carries the parser's line/column location.
  CHECK_THROWS_AS(io::parse_instance("{\n  \"bidders\": 2,"), io::syntax_error);
  CHECK_THROWS_WITH(io::parse_instance("{\n  \"bidders\": 2,"), ContainsSubstring("line"));
  // Floats never appear in files; reject them instead of rounding silently.
  CHECK_THROWS_AS(
      io::parse_instance(R"({"bidders": 2, "bids": [0.5], "priors": []})"),
      io::syntax_error);
  CHECK_THROWS_WITH(
      io::parse_instance(R"({"bidders": 2, "bids": [0.5], "priors": []})"),
      ContainsSubstring("rational string"));
}

TEST_CASE("validation failures list every problem") {
  // Bad bid order and two bad priors at once.
  std::string text = R"({
    "bidders": 2,
    "bids": ["0", "3/4", "1/2"],
    "priors": [
      [null, {"blocks": [{"interval": ["0", "1"], "volume": "1/2"}]}],
      [{"pieces": [{"interval": ["0", "1"], "coeffs": ["1/5", "1"]}]}, null]
    ]
  })";
  try {
    io::parse_instance(text);
    FAIL("expected a validation error");
  } catch (const validation_error& e) {
    std::string msg = e.what();
    CHECK_THAT(msg, ContainsSubstring("strictly increasing"));
    CHECK_THAT(msg, ContainsSubstring("F_{0,1}"));
    CHECK_THAT(msg, ContainsSubstring("F_{1,0}"));
  }
}

TEST_CASE("profiles round-trip exactly, including dyadic doubles") {
  auto a = fpatest::golden_instance();
  std::mt19937_64 rng(405);
  auto p = fpatest::random_rat_profile(rng, a);
  std::string text = io::serialize_profile(p);
  auto q = io::parse_profile(text);
  CHECK(q.jumps == p.jumps);
  CHECK(io::serialize_profile(q) == text);

  fpa::auction::Profile d;
  d.jumps = {{0.6180339887498949, 1.0}, {0.7, 1.0}, {0.5, 1.0}};
  auto back = fpa::auction::to_double_profile(io::parse_profile(io::serialize_profile(d)));
  CHECK(back.jumps == d.jumps);
}

TEST_CASE("require_profile rejects mismatched shapes and domain violations") {
  auto a = fpatest::golden_instance();
  fpa::auction::RatProfile p;
  p.jumps = {{Rat(1, 2), Rat(1)}, {Rat(1, 2), Rat(1)}};
  CHECK_THROWS_WITH(io::require_profile(a, p), ContainsSubstring("expected 3 rows"));
  p.jumps.push_back({Rat(1)});
  CHECK_THROWS_WITH(io::require_profile(a, p), ContainsSubstring("2 jump values"));
  p.jumps[2] = {Rat(1, 3), Rat(1)};  // below the 1/2 bid floor
  CHECK_THROWS_WITH(io::require_profile(a, p), ContainsSubstring("overbidding"));
  p.jumps[2] = {Rat(2, 3), Rat(1)};
  CHECK_NOTHROW(io::require_profile(a, p));
}

TEST_CASE("shipped sample files parse and agree with the builders") {
  const char* dir = std::getenv("FPA_DATA");
  if (!dir) SKIP("FPA_DATA not set");
  auto slurp = [&](const std::string& name) {
    std::ifstream in(std::string(dir) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string text = slurp("golden.json");
  auto a = io::parse_instance(text);
  CHECK(io::serialize_instance(a) == text);
  CHECK(io::serialize_instance(fpatest::golden_instance()) == text);

  auto eq = io::parse_profile(slurp("golden_eq.json"));
  CHECK(eq.jumps.size() == 3);
  // The shipped equilibrium value matches the 60-digit literal.
  Rat expect = fpa::parse_rational(fpatest::kGoldenJump60);
  for (const auto& row : eq.jumps) {
    CHECK(row[0] == expect);
    CHECK(row[1] == 1);
  }
}
