#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "bpbkit/c0.hpp"
#include "bpbkit/errors.hpp"
#include "bpbkit/op.hpp"
#include "bpbkit/rng.hpp"
#include "bpbkit/space.hpp"
#include "bpbkit/thresholds.hpp"

namespace bpbkit {

// Instance generation works perturb-from-attaining: start from an exactly
// attaining configuration, mix in a random ball element with a weight small
// enough to keep the required deficit, and re-verify. Rejection sampling
// would starve for small eps (the admissible region has measure ~ eps^4.5
// for the operator correction), the perturbation route never does.
//
// Moduli of attaining vectors are dyadic (denominator 2^20), so their sums
// are exact in double precision and the delta = 0 instances are exact fixed
// points of the corrections.

struct PairInstance {
  FieldMode field = FieldMode::Complex;
  L1Vector x;
  LinfFunctional phi;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct OperatorInstance {
  FieldMode field = FieldMode::Complex;
  L1Operator T;
  L1Vector x;
  LinfFunctional phi;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct C0Instance {
  FieldMode field = FieldMode::Complex;
  C0Operator T;
  C0Vector x;
  L1Vector phi;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t kDyadicDenominator = 1u << 20;

/// `count` strictly positive dyadic weights summing to exactly 1.0.
inline std::vector<double> dyadic_unit_weights(Xoshiro256StarStar& rng,
                                               std::size_t count) {
  const std::uint64_t den = kDyadicDenominator;
  std::vector<std::uint64_t> cuts(count - 1);
  for (auto& c : cuts) c = rng.below(den - count + 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w(count);
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t next = (i + 1 == count) ? den - count : cuts[i];
    w[i] = static_cast<double>(next - prev + 1) / static_cast<double>(den);
    prev = next;
  }
  return w;
}

inline std::vector<std::size_t> random_subset(Xoshiro256StarStar& rng,
                                              std::size_t n,
                                              std::size_t count) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline Cx random_phase(Xoshiro256StarStar& rng, FieldMode field) {
  if (field == FieldMode::Real)
    return rng.uniform() < 0.5 ? Cx(1.0, 0.0) : Cx(-1.0, 0.0);
  return rng.phase();
}

/// Random element of the l1 ball with total mass <= max_mass.
inline L1Vector random_ball_l1(Xoshiro256StarStar& rng, std::size_t n,
                               FieldMode field, double max_mass = 1.0) {
  std::vector<double> raw(n);
  double total = 0.0;
  for (auto& m : raw) {
    m = -std::log(1.0 - rng.uniform());
    total += m;
  }
  double mass = max_mass * rng.uniform();
  L1Vector w(n);
  if (total == 0.0) return w;
  for (std::size_t j = 0; j < n; ++j)
    w[j] = (raw[j] / total * mass) * random_phase(rng, field);
  return w;
}

}  // namespace detail

/// Exactly attaining pair in the canonical positive/unimodular configuration:
/// x positive dyadic on its support, phi = 1 there, |phi| <= 1/2 elsewhere.
inline PairInstance canonical_pair(std::size_t n, double eps,
                                   std::uint64_t seed,
                                   FieldMode field = FieldMode::Complex) {
  if (n < 1) throw DomainError("canonical_pair: n must be >= 1");
  Xoshiro256StarStar rng(seed);
  std::size_t s = 1 + static_cast<std::size_t>(rng.below(n));
  auto supp = detail::random_subset(rng, n, s);
  auto w = detail::dyadic_unit_weights(rng, s);

  PairInstance inst;
  inst.field = field;
  inst.x = L1Vector(n);
  inst.phi = LinfFunctional(n);
  for (std::size_t i = 0; i < s; ++i) {
    inst.x[supp[i]] = Cx(w[i], 0.0);
    inst.phi[supp[i]] = Cx(1.0, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.phi[j] == Cx(1.0, 0.0)) continue;
    double m = 0.5 * rng.uniform();
    inst.phi[j] = field == FieldMode::Real
                      ? Cx((rng.uniform() < 0.5 ? m : -m), 0.0)
                      : m * rng.phase();
  }
  inst.epsilon = eps;
  inst.delta = 0.0;
  inst.seed = seed;
  return inst;
}

/// Near-attaining pair with deficit 1 - Re(phi(x)) <= 0.9 * delta. delta = 0
/// returns the canonical exactly attaining configuration. The functional
/// keeps a set of exactly unimodular coordinates (phases may move, moduli do
/// not), so its norming points can be sampled.
inline PairInstance generate_pair(std::size_t n, double eps, double delta,
                                  std::uint64_t seed,
                                  FieldMode field = FieldMode::Complex) {
  if (delta < 0.0) throw DomainError("generate_pair: delta must be >= 0");
  PairInstance inst = canonical_pair(n, eps, seed, field);
  if (delta == 0.0) return inst;

  Xoshiro256StarStar rng(derive_seed(seed, 0x70414952));
  // Extra unimodular coordinates beyond supp(x), to decouple the snapped set
  // from the support.
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.phi[j] == Cx(1.0, 0.0)) {
      if (field == FieldMode::Complex && rng.uniform() < 0.7)
        inst.phi[j] = rng.phase();
    } else if (rng.uniform() < 0.25) {
      inst.phi[j] = detail::random_phase(rng, field);
    }
  }
  // Re-align x so the configuration still attains exactly (up to roundoff):
  // x_j inherits the conjugate phase of phi_j on its support.
  L1Vector x_base = inst.x;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(x_base[j]) != 0.0)
      x_base[j] = std::abs(x_base[j]) * std::conj(unit_phase(inst.phi[j]));

  const LinfFunctional phi_base = inst.phi;
  double scale = 1.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double t = 0.4 * delta * scale * rng.uniform(0.25, 1.0);
    L1Vector w = detail::random_ball_l1(rng, n, field);
    L1Vector x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = (1.0 - t) * x_base[j] + t * w[j];

    LinfFunctional phi = phi_base;
    if (field == FieldMode::Complex) {
      double gamma = std::sqrt(0.2 * delta * scale);
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x_base[j]) == 0.0) continue;
        double g = gamma * rng.uniform(-1.0, 1.0);
        phi[j] = phi[j] * Cx(std::cos(g), std::sin(g));
      }
    }
    double deficit = 1.0 - pairing(phi, x).real();
    if (deficit <= 0.9 * delta) {
      inst.x = std::move(x);
      inst.phi = std::move(phi);
      inst.delta = delta;
      return inst;
    }
    scale *= 0.5;
  }
  throw InternalInvariant("generate_pair: perturbation did not converge");
}

/// Exactly attaining operator triple in the canonical configuration:
/// (x, phi) attaining with x positive dyadic, phi = 1 on a window containing
/// supp(x), and every column of T over supp(x) a positive dyadic norming
/// point of phi. nu(T) = 1 and phi(Tx) = 1 hold exactly.
inline OperatorInstance canonical_operator_l1(std::size_t n, double eps,
                                              std::uint64_t seed,
                                              FieldMode field = FieldMode::Complex) {
  if (n < 1) throw DomainError("canonical_operator_l1: n must be >= 1");
  Xoshiro256StarStar rng(seed);
  std::size_t s = 1 + static_cast<std::size_t>(rng.below(n));
  auto supp = detail::random_subset(rng, n, s);
  auto w = detail::dyadic_unit_weights(rng, s);

  OperatorInstance inst;
  inst.field = field;
  inst.x = L1Vector(n);
  inst.phi = LinfFunctional(n);
  for (std::size_t i = 0; i < s; ++i) inst.x[supp[i]] = Cx(w[i], 0.0);

  // Unimodular window U >= supp(x); phi is exactly 1 there.
  std::vector<bool> in_window(n, false);
  for (std::size_t j : supp) in_window[j] = true;
  for (std::size_t j = 0; j < n; ++j)
    if (!in_window[j] && rng.uniform() < 0.5) in_window[j] = true;
  std::vector<std::size_t> window;
  for (std::size_t j = 0; j < n; ++j)
    if (in_window[j]) window.push_back(j);
  for (std::size_t j = 0; j < n; ++j) {
    if (in_window[j]) {
      inst.phi[j] = Cx(1.0, 0.0);
    } else {
      double m = 0.5 * rng.uniform();
      inst.phi[j] = field == FieldMode::Real
                        ? Cx((rng.uniform() < 0.5 ? m : -m), 0.0)
                        : m * rng.phase();
    }
  }

  inst.T = L1Operator(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (inst.x[j].real() != 0.0) {
      // Attaining column: positive dyadic mass inside the window.
      std::size_t cs = 1 + static_cast<std::size_t>(rng.below(window.size()));
      auto cols = detail::random_subset(rng, window.size(), cs);
      auto cw = detail::dyadic_unit_weights(rng, cs);
      for (std::size_t i = 0; i < cs; ++i)
        inst.T.entry(window[cols[i]], j) = Cx(cw[i], 0.0);
    } else {
      // Free column with modulus sum strictly below 1.
      L1Vector c = detail::random_ball_l1(rng, n, field, 0.9);
      set_column(inst.T, j, c);
    }
  }
  inst.epsilon = eps;
  inst.delta = 0.0;
  inst.seed = seed;
  return inst;
}

/// Operator triple for the numerical-radius correction: nu(T) = 1 within
/// roundoff, (x, phi) an exactly attaining pair, and
/// Re(phi(Tx)) >= 1 - 0.9 * delta. delta = 0 gives the canonical exact
/// configuration.
inline OperatorInstance generate_operator_l1(std::size_t n, double eps,
                                             double delta, std::uint64_t seed,
                                             FieldMode field = FieldMode::Complex) {
  if (delta < 0.0) throw DomainError("generate_operator_l1: delta must be >= 0");
  OperatorInstance inst = canonical_operator_l1(n, eps, seed, field);
  if (delta == 0.0) return inst;

  Xoshiro256StarStar rng(derive_seed(seed, 0x704F5045));

  // Rephase the canonical configuration: every unimodular-window coordinate
  // of phi picks up a phase q_k, x inherits the conjugate phase on its
  // support, and each attaining column entry t_kc becomes
  // y_kc * conj(q_k) * q_c so the triple still attains exactly (up to
  // roundoff) before the perturbation.
  if (field == FieldMode::Complex) {
    std::vector<bool> in_supp(n, false), in_window(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      in_supp[j] = inst.x[j].real() != 0.0;
      in_window[j] = inst.phi[j] == Cx(1.0, 0.0);
    }
    std::vector<Cx> q(n, Cx(1.0, 0.0));
    for (std::size_t k = 0; k < n; ++k)
      if (in_window[k] && rng.uniform() < 0.8) q[k] = rng.phase();
    for (std::size_t k = 0; k < n; ++k) {
      if (!in_window[k]) continue;
      inst.phi[k] = q[k];
      if (in_supp[k]) inst.x[k] = std::abs(inst.x[k]) * std::conj(q[k]);
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (!in_supp[c]) continue;
      for (std::size_t k = 0; k < n; ++k)
        inst.T.entry(k, c) = inst.T.entry(k, c) * std::conj(q[k]) * q[c];
    }
  }

  const L1Operator t_base = inst.T;
  double scale = 1.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double t = 0.4 * delta * scale * rng.uniform(0.25, 1.0);
    L1Operator T = t_base;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(inst.x[j]) == 0.0) continue;
      L1Vector w = detail::random_ball_l1(rng, n, field);
      for (std::size_t k = 0; k < n; ++k)
        T.entry(k, j) = (1.0 - t) * T.entry(k, j) + t * w[k];
    }
    double nu = op_norm_l1(T);
    if (nu == 0.0) continue;
    T = scaled(T, Cx(1.0 / nu, 0.0));
    double deficit = 1.0 - pairing(inst.phi, apply(T, inst.x)).real();
    if (deficit <= 0.9 * delta) {
      inst.T = std::move(T);
      inst.delta = delta;
      return inst;
    }
    scale *= 0.5;
  }
  throw InternalInvariant("generate_operator_l1: perturbation did not converge");
}

/// c0 triple obtained by transposing an l1 triple: the c0 vector is the l1
/// functional, the c0 functional is the l1 vector. The transpose is rotated
/// so the duality pairing x(T* phi) comes out real positive (up to roundoff),
/// mirroring the rotation the dualized correction performs anyway; delta = 0
/// instances skip the rotation and stay exact.
inline C0Instance generate_operator_c0(std::size_t n, double eps, double delta,
                                       std::uint64_t seed,
                                       FieldMode field = FieldMode::Complex) {
  OperatorInstance dual = generate_operator_l1(n, eps, delta, seed, field);
  Cx u = unit_phase(pairing(dual.phi, apply(dual.T, dual.x)));
  if (!is_one(u)) dual.T = scaled(dual.T, std::conj(u));
  C0Instance inst;
  inst.field = field;
  inst.T = adjoint(dual.T);
  inst.x = C0Vector(dual.phi.coords);
  inst.phi = L1Vector(dual.x.coords);
  inst.epsilon = eps;
  inst.delta = delta;
  inst.seed = seed;
  return inst;
}

/// Random norming point of phi: positive dyadic mass spread over the
/// coordinates where |phi_j| = 1 to machine precision, each rotated by
/// conj(phi_j). Returns nothing when phi has no unimodular coordinates.
inline std::optional<L1Vector> sample_norming_point(const LinfFunctional& phi,
                                                    Xoshiro256StarStar& rng) {
  std::vector<std::size_t> u;
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (std::abs(std::abs(phi[j]) - 1.0) <= 1.6e-15) u.push_back(j);
  if (u.empty()) return std::nullopt;
  std::size_t s = 1 + static_cast<std::size_t>(rng.below(u.size()));
  auto pick = detail::random_subset(rng, u.size(), s);
  auto w = detail::dyadic_unit_weights(rng, s);
  L1Vector y(phi.size());
  for (std::size_t i = 0; i < s; ++i) {
    std::size_t j = u[pick[i]];
    y[j] = w[i] * std::conj(phi[j]);
  }
  return y;
}

}  // namespace bpbkit
