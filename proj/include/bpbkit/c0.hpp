#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "bpbkit/op.hpp"
#include "bpbkit/space.hpp"

namespace bpbkit {

/// Vector in c0^n, measured in the sup norm. Finite dimension makes c0^n
/// coincide with linf^n, so the functional carrier is reused; the functional
/// on c0^n is an l1 element and the pairing is the same bilinear sum with the
/// roles swapped.
using C0Vector = LinfFunctional;

inline Cx pairing_c0(const L1Vector& phi, const C0Vector& x) {
  detail::require_same_size(phi.size(), x.size(), "pairing_c0");
  Cx s(0.0, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) s += phi[j] * x[j];
  return s;
}

inline C0Vector apply_c0(const C0Operator& t, const C0Vector& x) {
  detail::require_same_size(t.n, x.size(), "apply_c0");
  C0Vector y(t.n);
  for (std::size_t j = 0; j < t.n; ++j) {
    const Cx xj = x[j];
    if (xj.real() == 0.0 && xj.imag() == 0.0) continue;
    for (std::size_t k = 0; k < t.n; ++k) y[k] += t.entry(k, j) * xj;
  }
  return y;
}

/// Attaining pair on c0: ||x||_inf = 1, ||phi||_1 = 1 and the coordinatewise
/// alignment x_j phi_j = |phi_j| within tol for every j (the l1
/// characterization with the roles of vector and functional swapped).
inline bool is_attaining_pair_c0(const C0Vector& x, const L1Vector& phi,
                                 double tol = kDefaultTol) {
  detail::require_same_size(x.size(), phi.size(), "is_attaining_pair_c0");
  if (std::abs(sup_norm(x) - 1.0) > tol) return false;
  if (std::abs(l1_norm(phi) - 1.0) > tol) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(x[j] * phi[j] - Cx(std::abs(phi[j]), 0.0)) > tol)
      return false;
  return true;
}

struct C0Correction {
  C0Operator S;
  C0Vector x0;
  L1Vector phi0;
  double dist_T = 0.0;    // ||T - S|| in the sup-norm operator norm
  double dist_x = 0.0;    // ||x - x0||_inf
  double dist_phi = 0.0;  // ||phi - phi0||_1
  Cx attainment;          // phi0(S x0)
  double nu_S = 0.0;
  OperatorCorrection dual;  ///< the underlying l1 run on the transpose
};

/// Numerical-radius correction on c0^n, obtained by dualizing the l1
/// construction: the transpose of T is corrected as an operator on l1^n with
/// the vector/functional roles swapped (the l1 vector is phi, the functional
/// is x), and the corrected transpose is transposed back. In finite dimension
/// the restriction of the double adjoint back to c0 is automatic.
inline C0Correction nr_correct_c0(const C0Operator& t, const C0Vector& x,
                                  const L1Vector& phi, double eps,
                                  OperatorOptions opts = {}) {
  detail::require_same_size(t.n, x.size(), "nr_correct_c0");
  detail::require_same_size(t.n, phi.size(), "nr_correct_c0");
  if (!is_attaining_pair_c0(x, phi, opts.tol))
    throw NotInPi("nr_correct_c0: (x, phi) is not an attaining pair on c0");

  // The hypothesis is modulus-valued, so the l1 run goes through the
  // rotating wrapper; when the duality pairing is already real positive the
  // wrapper is a bit-exact pass-through of the plain run.
  L1Operator adj = adjoint(t);
  L1Vector vec(phi.coords);
  LinfFunctional fun(x.coords);
  OperatorCorrection dual = nr_correct_l1_modulus(adj, vec, fun, eps, opts);

  C0Correction out;
  out.S = adjoint(dual.T0);
  out.x0 = C0Vector(dual.phi0.coords);
  out.phi0 = L1Vector(dual.x0.coords);
  out.dist_T = op_norm_c0(out.S - t);
  out.dist_x = sup_norm(x - out.x0);
  out.dist_phi = l1_norm(phi - out.phi0);
  out.attainment = pairing_c0(out.phi0, apply_c0(out.S, out.x0));
  out.nu_S = numerical_radius_c0(out.S);
  out.dual = std::move(dual);
  return out;
}

}  // namespace bpbkit
