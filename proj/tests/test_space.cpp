#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bpbkit/space.hpp"
#include "bpbkit/rng.hpp"
#include "test_util.hpp"

using namespace bpbkit;
using testutil::close;
using Catch::Approx;

namespace {
const Cx I(0.0, 1.0);

bool angle_congruent(double a, double b, double tol = 1e-9) {
  double d = std::fmod(a - b, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d <= tol || kTwoPi - d <= tol;
}
}  // namespace

TEST_CASE("l1 norm") {
  CHECK(l1_norm(L1Vector{Cx(0, 0), Cx(0, 0)}) == 0.0);
  CHECK(l1_norm(L1Vector{Cx(1, 0), Cx(0, 0)}) == 1.0);
  CHECK(l1_norm(L1Vector{Cx(0.6, 0), Cx(0, 0.8)}) == Approx(1.4).margin(1e-15));
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(LinfFunctional{Cx(0, 0), Cx(0, 0)}) == 0.0);
  CHECK(sup_norm(LinfFunctional{Cx(1, 0), Cx(0.5, 0)}) == 1.0);
  CHECK(sup_norm(LinfFunctional{Cx(0.3, 0.4), Cx(0.2, 0)}) ==
        Approx(0.5).margin(1e-15));
}

TEST_CASE("bilinear pairing") {
  CHECK(close(pairing(LinfFunctional{Cx(1, 0), Cx(1, 0)},
                      L1Vector{Cx(1, 0), Cx(0, 0)}),
              Cx(1, 0)));
  // No conjugation: (-i)(0.5i) = 0.5.
  CHECK(close(pairing(LinfFunctional{Cx(1, 0), -I},
                      L1Vector{Cx(0.5, 0), Cx(0, 0.5)}),
              Cx(1, 0)));
  CHECK(close(pairing(LinfFunctional{Cx(0, 0), Cx(1, 0)},
                      L1Vector{Cx(1, 0), Cx(0, 0)}),
              Cx(0, 0)));
  CHECK_THROWS_AS(pairing(LinfFunctional{Cx(1, 0)},
                          L1Vector{Cx(1, 0), Cx(0, 0)}),
                  DimensionMismatch);
}

TEST_CASE("pairing is bilinear in the vector") {
  Xoshiro256StarStar rng(11);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rng.below(8);
    auto phi = testutil::random_ball_linf(rng, n);
    auto x = testutil::random_unit_l1(rng, n);
    auto y = testutil::random_unit_l1(rng, n);
    Cx a = rng.phase() * rng.uniform(0.0, 2.0);
    Cx b = rng.phase() * rng.uniform(0.0, 2.0);
    L1Vector combo(n);
    for (std::size_t j = 0; j < n; ++j) combo[j] = a * x[j] + b * y[j];
    CHECK(close(pairing(phi, combo),
                a * pairing(phi, x) + b * pairing(phi, y), 1e-12));
  }
}

TEST_CASE("argument convention") {
  CHECK(arg_of(Cx(0, 0)) == 0.0);
  CHECK(arg_of(Cx(1, 0)) == 0.0);
  CHECK(arg_of(I) == Approx(std::numbers::pi / 2));
  // Negative imaginary part lands in the upper half of [0, 2*pi).
  CHECK(arg_of(Cx(0, -1)) == Approx(3 * std::numbers::pi / 2));

  Xoshiro256StarStar rng(12);
  for (int it = 0; it < 500; ++it) {
    Cx z = rng.phase() * rng.uniform(0.1, 2.0);
    double th = rng.uniform(0.0, kTwoPi);
    CHECK(angle_congruent(arg_of(z * Cx(std::cos(th), std::sin(th))),
                          arg_of(z) + th));
    // z = |z| e^{i arg z}
    Cx back = std::abs(z) * Cx(std::cos(arg_of(z)), std::sin(arg_of(z)));
    CHECK(close(back, z, 1e-12));
  }
}

TEST_CASE("unit phase") {
  CHECK(unit_phase(Cx(0, 0)) == Cx(1, 0));
  CHECK(unit_phase(Cx(2.5, 0)) == Cx(1, 0));
  CHECK(close(unit_phase(Cx(0, -3)), Cx(0, -1), 0.0));
}

TEST_CASE("alignment set") {
  CHECK(alignment_set(L1Vector{Cx(1, 0), Cx(0, 0)},
                      LinfFunctional{Cx(1, 0), Cx(0.3, 0)}, 0.0)
            .members == std::vector<std::size_t>{0, 1});
  CHECK(alignment_set(L1Vector{Cx(0.5, 0), Cx(0.5, 0)},
                      LinfFunctional{Cx(1, 0), Cx(-1, 0)}, 0.0)
            .members == std::vector<std::size_t>{0});
  CHECK(alignment_set(L1Vector{Cx(0.5, 0), Cx(0, 0.5)},
                      LinfFunctional{Cx(1, 0), -I}, 0.0)
            .members == std::vector<std::size_t>{0, 1});
}

TEST_CASE("near-unimodular set") {
  CHECK(near_unimodular_set(LinfFunctional{Cx(1, 0), Cx(0.5, 0)}, 0.1).members ==
        std::vector<std::size_t>{0});
  for (double r : {0.01, 0.3, 0.9})
    CHECK(near_unimodular_set(LinfFunctional{Cx(1, 0), Cx(1, 0)}, r).members ==
          std::vector<std::size_t>{0, 1});
  CHECK(near_unimodular_set(LinfFunctional{Cx(0.999, 0), Cx(0.3, 0)}, 0.008)
            .members == std::vector<std::size_t>{0});
}

TEST_CASE("well-aligned support") {
  CHECK(well_aligned_support(L1Vector{Cx(0.9, 0), Cx(0.1, 0)},
                             LinfFunctional{Cx(1, 0), Cx(0.5, 0)}, 0.18)
            .members == std::vector<std::size_t>{0});
  CHECK(well_aligned_support(L1Vector{Cx(0.8, 0), Cx(0.2, 0)},
                             LinfFunctional{Cx(1, 0), Cx(0.9, 0)}, 0.125)
            .members == std::vector<std::size_t>{0, 1});
  // Coordinate 2 is outside supp(x).
  CHECK(well_aligned_support(L1Vector{Cx(1, 0), Cx(0, 0)},
                             LinfFunctional{Cx(1, 0), Cx(1, 0)}, 0.5)
            .members == std::vector<std::size_t>{0});
}

TEST_CASE("well-aligned support is contained in the near-unimodular set") {
  Xoshiro256StarStar rng(13);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rng.below(10);
    auto x = testutil::random_unit_l1(rng, n);
    auto phi = testutil::random_ball_linf(rng, n);
    double r = rng.uniform(0.01, 0.99);
    CHECK(well_aligned_support(x, phi, r).subset_of(
        near_unimodular_set(phi, r)));
  }
}

TEST_CASE("well-aligned support of a positive vector") {
  Xoshiro256StarStar rng(14);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rng.below(10);
    L1Vector x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = Cx(rng.uniform() < 0.3 ? 0.0 : rng.uniform(), 0.0);
    auto phi = testutil::random_ball_linf(rng, n);
    double r = rng.uniform(0.01, 0.99);
    IndexSet p = well_aligned_support(x, phi, r);
    std::vector<std::size_t> expected;
    for (std::size_t j = 0; j < n; ++j)
      if (x[j].real() != 0.0 && phi[j].real() >= 1.0 - r) expected.push_back(j);
    CHECK(p.members == expected);
  }
}

TEST_CASE("attaining pair membership") {
  Xoshiro256StarStar rng(15);
  for (Cx z : {Cx(0, 0), Cx(0.5, 0.2), Cx(0, -1)})
    CHECK(is_attaining_pair_l1(L1Vector{Cx(1, 0), Cx(0, 0)},
                               LinfFunctional{Cx(1, 0), z}, 0.0));
  CHECK(is_attaining_pair_l1(L1Vector{Cx(0.5, 0), Cx(0, 0.5)},
                             LinfFunctional{Cx(1, 0), -I}, 0.0));
  CHECK_FALSE(is_attaining_pair_l1(L1Vector{Cx(0.5, 0), Cx(0.5, 0)},
                                   LinfFunctional{Cx(1, 0), Cx(-1, 0)}, 0.0));
}

TEST_CASE("attaining pair characterization, both directions") {
  Xoshiro256StarStar rng(16);
  for (int it = 0; it < 300; ++it) {
    std::size_t n = 1 + rng.below(50);
    auto x = testutil::random_unit_l1(rng, n);
    auto phi = testutil::aligned_with(x, rng);
    // Coordinatewise alignment forces the pairing to be the norm.
    CHECK(close(pairing(phi, x), Cx(1, 0), 1e-12));
    CHECK(is_attaining_pair_l1(x, phi, 1e-9));
    // Conversely membership bounds every coordinate defect.
    if (is_attaining_pair_l1(x, phi, 1e-12)) {
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(phi[j] * x[j] - Cx(std::abs(x[j]), 0.0)) <= 1e-9);
    }
  }
}

TEST_CASE("norming points") {
  CHECK(is_norming_point(LinfFunctional{Cx(1, 0), Cx(1, 0)},
                         L1Vector{Cx(1, 0), Cx(0, 0)}));
  CHECK(is_norming_point(LinfFunctional{Cx(1, 0), Cx(1, 0)},
                         L1Vector{Cx(0.5, 0), Cx(0.5, 0)}));
  CHECK_FALSE(is_norming_point(LinfFunctional{Cx(1, 0), Cx(0, 0)},
                               L1Vector{Cx(0, 0), Cx(1, 0)}));
}

TEST_CASE("disk chord inequality, spot check") {
  Xoshiro256StarStar rng(17);
  for (int it = 0; it < 10000; ++it) {
    Cx z = std::sqrt(rng.uniform()) * rng.phase();
    CHECK(std::abs(z - Cx(1, 0)) <=
          std::sqrt(2.0 * (1.0 - z.real())) + 1e-12);
  }
}
