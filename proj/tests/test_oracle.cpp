#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bpbkit/generate.hpp"
#include "bpbkit/oracle.hpp"
#include "test_util.hpp"

using namespace bpbkit;
using Catch::Approx;

namespace {
L1Operator random_operator(Xoshiro256StarStar& rng, std::size_t n,
                           double scale = 1.0) {
  L1Operator t(n);
  for (auto& e : t.entries) e = scale * rng.uniform() * rng.phase();
  return t;
}
}  // namespace

TEST_CASE("grid oracle hits the extreme points") {
  // The phase sweep re-derives each unit phase through hypot, so the basis
  // values are exact only up to a couple of ulps.
  OracleReport idr = nr_grid_oracle_l1(L1Operator::identity(3), 100, 1);
  CHECK(std::abs(idr.estimate - 1.0) <= 1e-12);
  CHECK(idr.closed_form == 1.0);
  CHECK(idr.estimate <= idr.closed_form + 1e-9);

  OracleReport zr = nr_grid_oracle_l1(L1Operator(3), 100, 1);
  CHECK(zr.estimate == 0.0);

  // The basis sweep lands on e2 exactly, so the shift has gap ~0.
  OracleReport sr = nr_grid_oracle_l1(counterexample_shift(2), 10000, 7);
  CHECK(std::abs(sr.gap) <= 1e-9);
  CHECK(sr.estimate <= sr.closed_form + 1e-9);

  CHECK_THROWS_AS(nr_grid_oracle_l1(L1Operator::identity(2), 0, 1),
                  DomainError);
}

TEST_CASE("grid oracle soundness") {
  Xoshiro256StarStar rng(51);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 2 + rng.below(5);
    L1Operator t = random_operator(rng, n, rng.uniform(0.2, 3.0));
    OracleReport rep = nr_grid_oracle_l1(t, 2000, 123 + it);
    CHECK(rep.estimate <= rep.closed_form + 1e-9);
    // Extreme sweep makes the estimate exact for l1.
    CHECK(rep.estimate == Approx(rep.closed_form).margin(1e-9));
  }
}

TEST_CASE("grid oracle is deterministic for a fixed seed") {
  Xoshiro256StarStar rng(52);
  L1Operator t = random_operator(rng, 3);
  OracleReport a = nr_grid_oracle_l1(t, 5000, 99);
  OracleReport b = nr_grid_oracle_l1(t, 5000, 99);
  CHECK(a.estimate == b.estimate);
  CHECK(a.samples == b.samples);
  CHECK(a.gap == b.gap);
  OracleReport c = nr_grid_oracle_l1(t, 5000, 100);
  CHECK(c.samples == a.samples);  // same budget, different stream
}

TEST_CASE("pair verdicts") {
  L1Vector x{Cx(0.9, 0), Cx(0.1, 0)};
  LinfFunctional phi{Cx(1, 0), Cx(0.5, 0)};
  auto corr = bpb_first(x, phi, 0.6);
  Verdict good = verify_pair_correction(x, phi, corr, 0.6);
  CHECK(good.all_pass);
  for (const Condition& c : good.conditions)
    if (c.name == "dist_x") CHECK(c.value == Approx(0.2).margin(1e-15));

  // Detector sanity: bump one output coordinate by 2 eps.
  auto corrupted = corr;
  corrupted.phi0[1] += Cx(1.2, 0);
  Verdict bad = verify_pair_correction(x, phi, corrupted, 0.6);
  CHECK_FALSE(bad.all_pass);
  bool dist_phi_failed = false;
  for (const Condition& c : bad.conditions)
    if (c.name == "dist_phi" && !c.pass) dist_phi_failed = true;
  CHECK(dist_phi_failed);
}

TEST_CASE("operator verdicts") {
  LinfFunctional ones{Cx(1, 0), Cx(1, 0)};
  L1Vector e1 = basis_vector(2, 0);
  auto corr = nr_correct_l1(L1Operator::identity(2), e1, ones, 0.5);
  CHECK(verify_operator_correction(L1Operator::identity(2), e1, ones, corr, 0.5)
            .all_pass);

  auto corrupted = corr;
  for (std::size_t k = 0; k < 2; ++k)
    corrupted.T0.entry(k, 0) = 1.5 * corrupted.T0.entry(k, 0);
  Verdict bad = verify_operator_correction(L1Operator::identity(2), e1, ones,
                                           corrupted, 0.5);
  CHECK_FALSE(bad.all_pass);
  bool nu_failed = false;
  for (const Condition& c : bad.conditions)
    if ((c.name == "nu_closed_form" || c.name == "nu_oracle") && !c.pass)
      nu_failed = true;
  CHECK(nu_failed);
}

TEST_CASE("near-pair counterexample demonstration") {
  // The exact base point pairs to zero.
  CHECK(pairing(LinfFunctional{Cx(0, 0), Cx(1, 0)},
                L1Vector{Cx(1, 0), Cx(0, 0)}) == Cx(0, 0));

  CHECK(counterexample_demo(0.1, 1000, 3) <= 0.2 + 1e-9);
  double obs = counterexample_demo(0.25, 10000, 42);
  CHECK(obs <= 0.5 + 1e-9);
  CHECK(obs >= 0.25);  // the aligned corner already realizes 1.5 eps - eps^2/2

  CHECK_THROWS_AS(counterexample_demo(0.5, 100, 1), DomainError);
  CHECK_THROWS_AS(counterexample_demo(0.0, 100, 1), DomainError);
  CHECK_THROWS_AS(counterexample_demo(0.1, 0, 1), DomainError);
}
