#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace wtlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
CompactVector e(Index x) { return CompactVector::point_mass(x); }
}  // namespace

TEST_CASE("s_k_map examples") {
  const WeightedTranslation shift{StepElement(1), LatticeWeight::constant(1)};
  const WeightedTranslation doubling{StepElement(1), LatticeWeight::constant(2)};
  // beta = 1 uses the -k prefactor, the limit of (beta^k - 1)/(1 - beta).
  CHECK(s_k_map(shift, 1.0, 1, e(1)) == e(1) - e(0));
  CHECK(s_k_map(doubling, 4.0, 1, e(1)) == e(1) - 2.0 * e(0));
  CHECK(s_k_map(shift, 1.0, 7, CompactVector{}).is_zero());
  CHECK_THROWS_AS(s_k_map(shift, 0.5, 1, e(0)), std::invalid_argument);
  CHECK_THROWS_AS(s_k_map(shift, 1.0, 0, e(0)), std::invalid_argument);
}

TEST_CASE("beta = 1 prefactor is the limit of the beta > 1 one") {
  testing_support::Rng rng(61);
  const WeightedTranslation T{StepElement(-2), rng.weight(0.5, 2.0).lattice_weight()};
  const CompactVector h = rng.vector();
  for (int k : {1, 4, 9}) {
    const CompactVector at_one = s_k_map(T, 1.0, k, h);
    const CompactVector near_one = s_k_map(T, 1.0 + 1e-9, k, h);
    CHECK(testing_support::relative_gap(near_one, at_one) <= 1e-6);
  }
}

TEST_CASE("s_k identity on random instances") {
  testing_support::Rng rng(62);
  for (int t = 0; t < 40; ++t) {
    const WeightedTranslation T{StepElement(rng.step()), rng.weight(0.5, 2.0).lattice_weight()};
    const CompactVector h = rng.vector();
    const double beta = t % 2 ? 1.0 : rng.uniform(1.01, 3.0);
    const int k = static_cast<int>(rng.integer(1, 30));
    CompactVector lhs = evaluate_poly(proof_polynomial(beta, k), T, s_k_map(T, beta, k, h));
    lhs -= h;
    const CompactVector rhs = -std::pow(beta, k) * S_power(T, h, k);
    const double scale = std::max(p_norm(rhs, 2, T.lattice), p_norm(h, 2, T.lattice));
    CHECK(p_norm(lhs - rhs, 2, T.lattice) <= 1e-8 * scale);
  }
}

TEST_CASE("transitivity demo on the piecewise example") {
  const ExperimentConfig cfg = preset_example1();
  const auto rows = transitivity_demo(cfg.op(), 1.5, e(0), e(0), 1, 60, 2.0);
  REQUIRE(rows.size() == 60);
  for (const auto& r : rows) {
    CHECK(r.identity_residual <= 1e-8);
    CHECK(r.q3_identity_mismatch <= 1e-8);
  }
  // q2 and q3 decay with ratio beta / t = 0.75 once the walk is in the tail.
  CHECK_THAT(rows[59].q3 / rows[58].q3, WithinRel(0.75, 1e-9));
  CHECK_THAT(rows[59].q2 / rows[58].q2, WithinRel(0.75, 1e-9));
  CHECK(rows[59].q2 < 1e-4);
  CHECK(rows[59].q3 < 1e-4);
  // q1 = (beta-1)/(beta^k-1) ||beta^k e_0 - T^k e_0|| tends to (beta-1)||e_0|| = 0.25.
  for (const auto& r : rows) {
    const double bk = std::pow(1.5, r.k);
    const double tk = std::pow(1.25, r.k);  // T^k e_0 = 1.25^k e_{k g}
    const double expected = 0.5 / (bk - 1.0) * std::sqrt(bk * bk + tk * tk) * 0.5;
    CHECK_THAT(r.q1, WithinRel(expected, 1e-10));
  }
}

TEST_CASE("transitivity demo on the step example") {
  const ExperimentConfig cfg = preset_example2();
  const auto rows = transitivity_demo(cfg.op(), 1.0, e(0), e(0), 1, 60, 2.0);
  for (const auto& r : rows) {
    CHECK(r.identity_residual <= 1e-8);
    // q1 = ||e_0 - T^k e_0|| / k = sqrt(2)/k
    CHECK_THAT(r.q1, WithinRel(std::sqrt(2.0) / r.k, 1e-12));
    // S^k e_0 = 2^{-k} e_k; q3 is a difference of unit-size terms, so its
    // absolute error sits near machine epsilon.
    CHECK_THAT(r.q3, WithinAbs(std::pow(2.0, -r.k), 1e-15));
    if (r.k <= 20) CHECK_THAT(r.q3, WithinRel(std::pow(2.0, -r.k), 1e-9));
  }
  CHECK(rows.back().q2 < 1e-10);
}

TEST_CASE("transitivity demo fails for the unit shift") {
  const WeightedTranslation shift{StepElement(1), LatticeWeight::constant(1)};
  const auto rows = transitivity_demo(shift, 1.0, e(0), e(0), 1, 60, 2.0);
  for (const auto& r : rows) {
    CHECK_THAT(r.q3, WithinRel(1.0, 1e-12));
    CHECK(r.identity_residual <= 1e-12);
  }
  CHECK_THROWS_AS(transitivity_demo(shift, 1.0, e(0), e(0), 3, 2, 2.0), std::invalid_argument);
}
