#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fpa/auction.hpp"
#include "fpa/piecewise_cdf.hpp"
#include "helpers.hpp"

using fpa::Rat;
using fpa::distributions::DensityBlock;
using fpa::distributions::PiecewiseCdf;

TEST_CASE("uniform cdf evaluates to the identity") {
  auto f = PiecewiseCdf::uniform();
  CHECK(f.eval(Rat(1, 2)) == Rat(1, 2));
  CHECK(f.eval(Rat(1, 3)) == Rat(1, 3));
  CHECK(f.eval(Rat(1)) == 1);
  CHECK(f.eval(Rat(0)) == 0);
  CHECK(f.eval(0.25) == 0.25);
  CHECK(fpa::distributions::validate_cdf(f).ok);
}

TEST_CASE("two-block cdf from the density constructor") {
  auto f = PiecewiseCdf::from_blocks(
      {{Rat(0), Rat(1, 4), Rat(3, 10)}, {Rat(1, 2), Rat(1), Rat(7, 10)}});
  CHECK(f.eval(Rat(1, 4)) == Rat(3, 10));
  CHECK(f.eval(Rat(1, 3)) == Rat(3, 10));  // flat gap
  CHECK(f.eval(Rat(1, 2)) == Rat(3, 10));
  CHECK(f.eval(Rat(1)) == 1);
  CHECK(f.piece_count() == 3);
  CHECK(fpa::distributions::validate_cdf(f).ok);
}

TEST_CASE("half-volume blocks example") {
  auto f = PiecewiseCdf::from_blocks(
      {{Rat(0), Rat(1, 4), Rat(1, 2)}, {Rat(3, 4), Rat(1), Rat(1, 2)}});
  CHECK(f.eval(Rat(1, 8)) == Rat(1, 4));
  CHECK(f.eval(Rat(1, 2)) == Rat(1, 2));
  CHECK(f.eval(Rat(7, 8)) == Rat(3, 4));
  CHECK(fpa::distributions::validate_cdf(f).ok);
}

TEST_CASE("eval rejects out-of-range points") {
  auto f = PiecewiseCdf::uniform();
  CHECK_THROWS_AS(f.eval(Rat(-1, 10)), std::domain_error);
  CHECK_THROWS_AS(f.eval(Rat(11, 10)), std::domain_error);
  CHECK_THROWS_AS(f.eval(1.5), std::domain_error);
}

TEST_CASE("structural constructor errors") {
  CHECK_THROWS_AS(PiecewiseCdf::from_pieces({}), fpa::validation_error);
  CHECK_THROWS_AS(PiecewiseCdf::from_pieces({{Rat(0), Rat(1, 2), {Rat(0), Rat(1)}}}),
                  fpa::validation_error);
  CHECK_THROWS_AS(
      PiecewiseCdf::from_blocks({{Rat(0), Rat(1, 2), Rat(1, 2)}, {Rat(1, 4), Rat(1), Rat(1, 2)}}),
      fpa::validation_error);
  CHECK_THROWS_AS(PiecewiseCdf::from_blocks({{Rat(0), Rat(1), Rat(0)}}), fpa::validation_error);
}

TEST_CASE("validate reports every failed condition") {
  SECTION("mass not normalized") {
    auto f = PiecewiseCdf::from_blocks({{Rat(0), Rat(1), Rat(9, 10)}});
    auto rep = fpa::distributions::validate_cdf(f);
    REQUIRE_FALSE(rep.ok);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].message == "F(1) = 9/10 != 1");
  }
  SECTION("decreasing piece") {
    auto f = PiecewiseCdf::from_pieces({{Rat(0), Rat(1), {Rat(1), Rat(-1)}}});
    auto rep = fpa::distributions::validate_cdf(f);
    REQUIRE_FALSE(rep.ok);
    bool found = false;
    for (const auto& is : rep.issues) found |= (is.message == "decreasing on piece 1");
    CHECK(found);
  }
  SECTION("discontinuity") {
    auto f = PiecewiseCdf::from_pieces(
        {{Rat(0), Rat(1, 2), {Rat(0), Rat(1)}}, {Rat(1, 2), Rat(1), {Rat(1)}}});
    auto rep = fpa::distributions::validate_cdf(f);
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.issues[0].message.find("discontinuity") == 0);
  }
  SECTION("negative start") {
    auto f = PiecewiseCdf::from_pieces({{Rat(0), Rat(1), {Rat(-1, 10), Rat(11, 10)}}});
    auto rep = fpa::distributions::validate_cdf(f);
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.issues[0].piece == 1);
  }
  SECTION("atom at zero is allowed") {
    auto f = PiecewiseCdf::from_pieces({{Rat(0), Rat(1), {Rat(1, 4), Rat(3, 4)}}});
    CHECK(fpa::distributions::validate_cdf(f).ok);
    CHECK(f.eval(Rat(0)) == Rat(1, 4));
  }
  SECTION("curved piece that dips is caught") {
    // F = 3z^2 - 2z + 2/3 on [0,1/2] decreases on [0,1/3] despite rising endpoints overall.
    auto f = PiecewiseCdf::from_pieces({{Rat(0), Rat(1, 2), {Rat(2, 3), Rat(-2), Rat(3)}},
                                        {Rat(1, 2), Rat(1), {Rat(-1, 6), Rat(7, 6)}}});
    auto rep = fpa::distributions::validate_cdf(f);
    REQUIRE_FALSE(rep.ok);
    bool found = false;
    for (const auto& is : rep.issues) found |= (is.message == "decreasing on piece 1");
    CHECK(found);
  }
}

TEST_CASE("lipschitz bound examples") {
  CHECK(fpa::distributions::lipschitz_bound(PiecewiseCdf::uniform()) == 1);
  auto tall = PiecewiseCdf::from_blocks({{Rat(0), Rat(1, 4), Rat(1)}});
  CHECK(fpa::distributions::lipschitz_bound(tall) == 4);
  auto sq = PiecewiseCdf::from_pieces({{Rat(0), Rat(1), {Rat(0), Rat(0), Rat(1)}}});
  CHECK(fpa::distributions::lipschitz_bound(sq) == 2);
}

TEST_CASE("continuity delta formula") {
  auto a = fpatest::golden_instance();
  CHECK(fpa::distributions::continuity_delta(a, Rat(1, 100)) == Rat(1, 1600));
  CHECK(fpa::distributions::continuity_delta(a, Rat(1, 10)) == Rat(1, 160));
  auto b = fpatest::uniform_instance(3, {Rat(0), Rat(1, 2)});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) b.priors[i][j] = PiecewiseCdf::from_blocks({{Rat(0), Rat(1, 2), Rat(1)}});
  CHECK(fpa::distributions::continuity_delta(b, Rat(1, 100)) == Rat(1, 3200));
  CHECK_THROWS_AS(fpa::distributions::continuity_delta(a, Rat(0)), std::domain_error);
}

TEST_CASE("random cdfs: monotone, lipschitz, exact-float agreement") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    auto f = fpatest::random_cdf(rng);
    REQUIRE(fpa::distributions::validate_cdf(f).ok);
    Rat L = fpa::distributions::lipschitz_bound(f);
    for (int s = 0; s < 20; ++s) {
      Rat x = fpatest::random_rat01(rng, 97);
      Rat y = fpatest::random_rat01(rng, 97);
      if (x > y) std::swap(x, y);
      Rat fx = f.eval(x), fy = f.eval(y);
      CHECK(fx <= fy);
      CHECK(fy - fx <= L * (y - x));
      CHECK(std::abs(f.eval(fpa::to_double(x)) - fpa::to_double(fx)) < 1e-12);
    }
  }
}

TEST_CASE("continuity delta bounds utility perturbations empirically") {
  std::mt19937_64 rng(23);
  Rat eps(1, 50);
  for (int t = 0; t < 12; ++t) {
    int n = 2 + static_cast<int>(rng() % 3);
    auto a = fpatest::random_instance(rng, n, fpatest::random_bids(rng));
    double delta = fpa::to_double(fpa::distributions::continuity_delta(a, eps));
    auto p = fpatest::random_rat_profile(rng, a);
    auto pd = fpa::auction::to_double_profile(p);
    std::uniform_real_distribution<double> shift(-delta, delta);
    for (int trial = 0; trial < 40; ++trial) {
      auto q = pd;
      for (auto& row : q.jumps)
        for (auto& x : row) x = std::min(1.0, std::max(0.0, x + shift(rng)));
      fpa::auction::clamp_to_domain(a, q);
      auto r = pd;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < a.num_bids(); ++j)
          if (std::abs(q.jumps[i][j] - r.jumps[i][j]) > delta)
            q.jumps[i][j] = r.jumps[i][j];  // clamping may overshoot; keep within delta
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < a.num_bids(); ++j) {
          double u1 = fpa::auction::utility(a, pd, i, j, 0.7);
          double u2 = fpa::auction::utility(a, q, i, j, 0.7);
          CHECK(std::abs(u1 - u2) <= fpa::to_double(eps) + 1e-12);
        }
    }
  }
}
