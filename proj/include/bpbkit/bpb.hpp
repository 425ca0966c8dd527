#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "bpbkit/errors.hpp"
#include "bpbkit/scalar.hpp"
#include "bpbkit/space.hpp"
#include "bpbkit/thresholds.hpp"

namespace bpbkit {

struct CorrectionOptions {
  double tol = kDefaultTol;
  /// Run the construction even if the near-attainment hypothesis fails.
  /// Postconditions are then unverified and EmptyP becomes reachable.
  bool force = false;
};

enum class Construction { First, Second };

struct PairWitnesses {
  IndexSet P;                 ///< kept support
  std::optional<IndexSet> A;  ///< snapped near-unimodular set (second only)
  double M = 0.0;             ///< kept mass, the normalization constant
};

/// Result of a pair correction: the exactly attaining nearby pair together
/// with the realized distances and the intermediate witnesses the
/// construction produced.
struct PairCorrection {
  L1Vector x0;
  LinfFunctional phi0;
  double dist_x = 0.0;    // ||x - x0||_1
  double dist_phi = 0.0;  // ||phi - phi0||_inf
  Cx attainment;          // pairing(phi0, x0)
  PairWitnesses witnesses;
  double epsilon = 0.0;
  Construction construction = Construction::First;
  bool modulus = false;  ///< true when produced by a modulus wrapper
};

struct MassBound {
  double mass = 0.0;
  IndexSet P;
};

namespace detail {

inline void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("epsilon must lie in (0, 1), got " +
                      std::to_string(eps));
}

inline void require_ball_pair(const L1Vector& x, const LinfFunctional& phi,
                              double tol) {
  if (l1_norm(x) > 1.0 + tol)
    throw DomainError("input vector lies outside the unit ball of l1");
  if (sup_norm(phi) > 1.0 + tol)
    throw DomainError("input functional lies outside the unit ball of linf");
}

inline void check_hypothesis(double deficit, double slack, bool force,
                             const char* who) {
  if (deficit > slack && !force)
    throw HypothesisNotMet(deficit, slack,
                           std::string(who) + ": deficit " +
                               std::to_string(deficit) + " exceeds slack " +
                               std::to_string(slack));
}

}  // namespace detail

/// Mass of the well-aligned support: with P = well_aligned_support(x, phi, r)
/// returns || Re(e^{i arg(phi)} x) * 1_P ||_1. If Re(phi(x)) >= 1 - delta
/// with delta < r, the mass is at least 1 - delta/r.
inline MassBound well_aligned_mass(const L1Vector& x,
                                   const LinfFunctional& phi, double r,
                                   double tol = kDefaultTol) {
  detail::require_same_size(x.size(), phi.size(), "well_aligned_mass");
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("mask radius must lie in (0, 1)");
  detail::require_ball_pair(x, phi, tol);
  MassBound out;
  out.P = well_aligned_support(x, phi, r);
  double s = 0.0;
  for (std::size_t j : out.P.members)
    s += std::abs((unit_phase(phi[j]) * x[j]).real());
  out.mass = s;
  return out;
}

/// First pair correction. Given a ball pair with Re(phi(x)) >= 1 - eps^3/4,
/// keeps the well-aligned support P (radius eps^2/2), renormalizes x on it,
/// and rephases the functional there:
///
///   x0    = x * 1_P / ||x * 1_P||,
///   phi0  = phi off P,  e^{-i arg(x_j)} on P.
///
/// The returned pair attains exactly, with ||x - x0|| <= eps and
/// ||phi - phi0|| <= eps, and the kept mass M is at least 1 - eps/2.
inline PairCorrection bpb_first(const L1Vector& x, const LinfFunctional& phi,
                                double eps, CorrectionOptions opts = {}) {
  detail::require_same_size(x.size(), phi.size(), "bpb_first");
  detail::require_eps(eps);
  detail::require_ball_pair(x, phi, opts.tol);

  const double deficit = 1.0 - pairing(phi, x).real();
  detail::check_hypothesis(deficit, bpb_first_slack(eps), opts.force,
                           "bpb_first");

  IndexSet P = well_aligned_support(x, phi, bpb_first_mask_radius(eps));
  double M = 0.0;
  for (std::size_t j : P.members) M += std::abs(x[j]);
  if (P.empty() || M == 0.0)
    throw EmptyP("bpb_first: kept support is empty (hypothesis was bypassed)");

  PairCorrection out;
  out.x0 = L1Vector(x.size());
  out.phi0 = phi;
  for (std::size_t j : P.members) {
    out.x0[j] = x[j] / M;
    out.phi0[j] = std::conj(unit_phase(x[j]));
  }
  out.dist_x = l1_norm(x - out.x0);
  out.dist_phi = sup_norm(phi - out.phi0);
  out.attainment = pairing(out.phi0, out.x0);
  out.witnesses = PairWitnesses{std::move(P), std::nullopt, M};
  out.epsilon = eps;
  out.construction = Construction::First;
  return out;
}

/// Modulus version of the first correction: accepts |phi(x)| >= 1 - eps^3/4.
/// When Re(phi(x)) already satisfies the hypothesis the plain construction
/// applies as-is; otherwise x is rotated so the pairing becomes real
/// positive, corrected, and rotated back. The output satisfies
/// |phi0(x0)| = 1 with both distances <= eps; after a rotation the pair is
/// generally not attaining.
inline PairCorrection bpb_first_modulus(const L1Vector& x,
                                        const LinfFunctional& phi, double eps,
                                        CorrectionOptions opts = {}) {
  detail::require_same_size(x.size(), phi.size(), "bpb_first_modulus");
  const Cx pr = pairing(phi, x);
  if (1.0 - pr.real() <= bpb_first_slack(eps)) {
    PairCorrection out = bpb_first(x, phi, eps, opts);
    out.modulus = true;
    return out;
  }
  const Cx u = unit_phase(pr);
  PairCorrection out =
      bpb_first(is_one(u) ? x : scaled(x, std::conj(u)), phi, eps, opts);
  if (!is_one(u)) {
    out.x0 = scaled(out.x0, u);
    out.dist_x = l1_norm(x - out.x0);
    out.attainment = pairing(out.phi0, out.x0);
  }
  out.modulus = true;
  return out;
}

/// The snapped functional of the second correction: phi_j off the
/// near-unimodular set of radius r, e^{i arg(phi_j)} on it. Depends only on
/// (phi, r) -- in particular not on the vector being corrected -- and fixes
/// every norming point of phi.
inline LinfFunctional aligned_functional(const LinfFunctional& phi, double r) {
  LinfFunctional out = phi;
  for (std::size_t j : near_unimodular_set(phi, r).members)
    out[j] = unit_phase(phi[j]);
  return out;
}

/// Second pair correction. Same contract shape as bpb_first but with
/// hypothesis slack eps^3/60 and mask radius r = eps^2/20, and with the key
/// extra property that phi0 = aligned_functional(phi, r) is computed from
/// (phi, eps) alone.
///
/// Internally the pair is rephased so the functional becomes |phi| >= 0
/// (coordinatewise multiplication by e^{i arg(phi_j)}), the real part of the
/// rephased vector is kept on the well-aligned support and renormalized, and
/// the rephasing is undone. The kept mass M is at least 1 - eps/3.
inline PairCorrection bpb_second(const L1Vector& x, const LinfFunctional& phi,
                                 double eps, CorrectionOptions opts = {}) {
  detail::require_same_size(x.size(), phi.size(), "bpb_second");
  detail::require_eps(eps);
  detail::require_ball_pair(x, phi, opts.tol);

  const double deficit = 1.0 - pairing(phi, x).real();
  detail::check_hypothesis(deficit, bpb_second_slack(eps), opts.force,
                           "bpb_second");

  const double r = bpb_second_mask_radius(eps);
  const std::size_t n = x.size();

  // phi0 before x is consulted; it must not depend on the vector.
  IndexSet A = near_unimodular_set(phi, r);
  LinfFunctional phi0 = aligned_functional(phi, r);

  // Rephased pair: tilde_x_j = e^{i arg(phi_j)} x_j, tilde_phi = |phi|.
  L1Vector tx(n);
  LinfFunctional tphi(n);
  for (std::size_t j = 0; j < n; ++j) {
    tx[j] = unit_phase(phi[j]) * x[j];
    tphi[j] = Cx(std::abs(phi[j]), 0.0);
  }

  IndexSet P = well_aligned_support(tx, tphi, r);
  double M = 0.0;
  for (std::size_t j : P.members) M += std::abs(tx[j].real());
  if (P.empty() || M == 0.0)
    throw EmptyP(
        "bpb_second: kept support is empty (hypothesis was bypassed)");

  PairCorrection out;
  out.x0 = L1Vector(n);
  for (std::size_t j : P.members)
    out.x0[j] = std::conj(unit_phase(phi[j])) * Cx(tx[j].real() / M, 0.0);
  out.phi0 = std::move(phi0);
  out.dist_x = l1_norm(x - out.x0);
  out.dist_phi = sup_norm(phi - out.phi0);
  out.attainment = pairing(out.phi0, out.x0);
  out.witnesses = PairWitnesses{std::move(P), std::move(A), M};
  out.epsilon = eps;
  out.construction = Construction::Second;
  return out;
}

}  // namespace bpbkit
