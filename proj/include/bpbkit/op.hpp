#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bpbkit/bpb.hpp"
#include "bpbkit/errors.hpp"
#include "bpbkit/scalar.hpp"
#include "bpbkit/space.hpp"
#include "bpbkit/thresholds.hpp"

namespace bpbkit {

/// n x n complex matrix acting on l1^n. Stored column-major: entry(k, j) is
/// the k-th coordinate of the image of the j-th basis vector, so columns are
/// contiguous and column surgery touches exact bit patterns.
struct L1Operator {
  std::size_t n = 0;
  std::vector<Cx> entries;  // entries[j*n + k] = entry(k, j)

  L1Operator() = default;
  explicit L1Operator(std::size_t dim)
      : n(dim), entries(dim * dim, Cx(0.0, 0.0)) {}

  Cx& entry(std::size_t k, std::size_t j) { return entries[j * n + k]; }
  const Cx& entry(std::size_t k, std::size_t j) const {
    return entries[j * n + k];
  }

  static L1Operator identity(std::size_t dim) {
    L1Operator t(dim);
    for (std::size_t j = 0; j < dim; ++j) t.entry(j, j) = Cx(1.0, 0.0);
    return t;
  }

  bool operator==(const L1Operator&) const = default;
};

/// Operator on c0^n. Same carrier and action as L1Operator -- the coordinate
/// formula (Tx)_k = sum_j t_kj x_j does not depend on the space -- only the
/// norms differ (max row sum instead of max column sum). The adjoint of a c0
/// operator, acting on l1^n, is its transpose.
using C0Operator = L1Operator;

inline L1Vector column(const L1Operator& t, std::size_t j) {
  L1Vector c(t.n);
  for (std::size_t k = 0; k < t.n; ++k) c[k] = t.entry(k, j);
  return c;
}

inline void set_column(L1Operator& t, std::size_t j, const L1Vector& c) {
  detail::require_same_size(t.n, c.size(), "set_column");
  for (std::size_t k = 0; k < t.n; ++k) t.entry(k, j) = c[k];
}

inline L1Vector apply(const L1Operator& t, const L1Vector& x) {
  detail::require_same_size(t.n, x.size(), "apply");
  L1Vector y(t.n);
  for (std::size_t j = 0; j < t.n; ++j) {
    const Cx xj = x[j];
    if (xj.real() == 0.0 && xj.imag() == 0.0) continue;
    for (std::size_t k = 0; k < t.n; ++k) y[k] += t.entry(k, j) * xj;
  }
  return y;
}

/// Adjoint under the bilinear pairing: plain transpose, no conjugation.
/// Satisfies pairing(adjoint(T) phi, x) = pairing(phi, T x) with phi viewed
/// as an l1 element on the left.
inline L1Operator adjoint(const L1Operator& t) {
  L1Operator s(t.n);
  for (std::size_t j = 0; j < t.n; ++j)
    for (std::size_t k = 0; k < t.n; ++k) s.entry(j, k) = t.entry(k, j);
  return s;
}

inline double column_abs_sum(const L1Operator& t, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < t.n; ++k) s += std::abs(t.entry(k, j));
  return s;
}

/// Operator norm on l1: max over columns of the column modulus sum. Returns
/// the norm and the smallest maximizing column index.
inline std::pair<double, std::size_t> op_norm_l1_argmax(const L1Operator& t) {
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < t.n; ++j) {
    double s = column_abs_sum(t, j);
    if (s > best) {
      best = s;
      arg = j;
    }
  }
  return {best, arg};
}

inline double op_norm_l1(const L1Operator& t) {
  return op_norm_l1_argmax(t).first;
}

/// Operator norm on c0/linf: max row modulus sum.
inline double op_norm_c0(const C0Operator& t) {
  double best = 0.0;
  for (std::size_t k = 0; k < t.n; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.n; ++j) s += std::abs(t.entry(k, j));
    best = std::max(best, s);
  }
  return best;
}

/// Numerical radius on l1^n. The numerical index of l1 is 1, so this is the
/// operator norm; the grid oracle provides the independent cross-check.
inline double numerical_radius_l1(const L1Operator& t) {
  return op_norm_l1(t);
}

inline double numerical_radius_c0(const C0Operator& t) {
  return op_norm_c0(t);
}

/// Whether (x, phi) witnesses the numerical radius of T:
/// an attaining pair with |phi(Tx)| = nu(T) within tol.
inline bool attains_nr(const L1Operator& t, const L1Vector& x,
                       const LinfFunctional& phi, double tol = kDefaultTol) {
  if (!is_attaining_pair_l1(x, phi, tol)) return false;
  double v = std::abs(pairing(phi, apply(t, x)));
  return std::abs(v - numerical_radius_l1(t)) <= tol;
}

inline L1Operator operator-(const L1Operator& a, const L1Operator& b) {
  detail::require_same_size(a.n, b.n, "L1Operator difference");
  L1Operator d(a.n);
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    d.entries[i] = a.entries[i] - b.entries[i];
  return d;
}

inline L1Operator scaled(const L1Operator& t, Cx factor) {
  L1Operator s = t;
  for (Cx& e : s.entries) e = factor * e;
  return s;
}

struct OperatorOptions {
  double tol = kDefaultTol;
  bool force = false;
  /// Rescale T by 1/nu(T) before correcting instead of raising NotUnitNorm.
  /// All outputs and distances then refer to the rescaled operator.
  bool normalize = false;
};

/// The constants consumed by one nr_correct_l1 run, recorded for
/// reproducibility.
struct OperatorConstants {
  double slack = 0.0;        // admissible hypothesis deficit, (eps/9)^(9/2)
  double mu = 0.0;           // sqrt(eps^3/240)
  double mask_radius = 0.0;  // mu^2/2, selects the replaced columns
  double snap_radius = 0.0;  // eps^2/80, selects the snapped functional set
};

struct ColumnSurgery {
  std::size_t column = 0;
  Cx a;        ///< phase of phi(T e_j); always |a - 1| <= mu
  L1Vector z;  ///< replacement column, a norming point of phi0
};

struct OperatorCorrection {
  L1Operator T0;
  L1Vector x0;
  LinfFunctional phi0;
  double dist_T = 0.0;
  double dist_x = 0.0;
  double dist_phi = 0.0;
  Cx attainment;  // pairing(phi0, T0 x0)
  double nu_T0 = 0.0;
  IndexSet replaced_columns;
  std::vector<ColumnSurgery> column_log;
  OperatorConstants constants;
  double epsilon = 0.0;
  bool modulus = false;
  double normalization = 1.0;  ///< nu of the raw input when normalize rescaled
};

namespace detail {

struct PhaseFrame {
  bool identity = true;
  std::vector<Cx> d;  // d_j = e^{i arg(x_j)}
};

inline PhaseFrame phase_frame(const L1Vector& x) {
  PhaseFrame f;
  f.d.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    f.d[j] = unit_phase(x[j]);
    if (!is_one(f.d[j])) f.identity = false;
  }
  return f;
}

}  // namespace detail

/// Numerical-radius correction on l1^n. Given T of unit norm, an attaining
/// pair (x, phi) and Re(phi(Tx)) >= 1 - (eps/9)^(9/2), produces T0 with
/// nu(T0) = 1 and an attaining pair (x0, phi0) with phi0(T0 x0) = 1, all
/// within eps of the inputs.
///
/// The construction rephases coordinates so x becomes positive (phi is then
/// forced to equal 1 on the support of x), keeps the columns whose images
/// pair well with phi (mask radius mu^2/2), replaces each kept column j by a
/// norming point of the shared snapped functional via the second pair
/// correction at eps/2 applied to e^{-i arg(phi(T e_j))} T e_j, and undoes
/// the rephasing. Columns outside the kept set are copied into T0 verbatim.
inline OperatorCorrection nr_correct_l1(const L1Operator& t_in,
                                        const L1Vector& x,
                                        const LinfFunctional& phi,
                                        double eps, OperatorOptions opts = {}) {
  detail::require_same_size(t_in.n, x.size(), "nr_correct_l1");
  detail::require_same_size(t_in.n, phi.size(), "nr_correct_l1");
  detail::require_eps(eps);

  L1Operator t = t_in;
  double normalization = 1.0;
  {
    const double nu = numerical_radius_l1(t);
    if (std::abs(nu - 1.0) > opts.tol) {
      if (!opts.normalize || nu == 0.0)
        throw NotUnitNorm("nr_correct_l1: nu(T) = " + std::to_string(nu) +
                          " is not 1 within tol");
      normalization = nu;
      t = scaled(t, Cx(1.0 / nu, 0.0));
    }
  }
  if (!is_attaining_pair_l1(x, phi, opts.tol))
    throw NotInPi("nr_correct_l1: (x, phi) is not an attaining pair");

  const double deficit = 1.0 - pairing(phi, apply(t, x)).real();
  const double slack = nr_slack(eps);
  detail::check_hypothesis(deficit, slack, opts.force, "nr_correct_l1");

  const std::size_t n = t.n;

  // Rephase so the corrected vector is positive. The frame is the explicit
  // realization of the reduction to positive x; it is undone on every output.
  const detail::PhaseFrame frame = detail::phase_frame(x);
  L1Vector px(n);
  LinfFunctional pphi(n);
  L1Operator pt(n);
  if (frame.identity) {
    px = x;
    pphi = phi;
    pt = t;
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      px[j] = Cx(std::abs(x[j]), 0.0);
      pphi[j] = phi[j] * frame.d[j];
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        pt.entry(k, j) = std::conj(frame.d[k]) * t.entry(k, j) * frame.d[j];
  }

  // Attaining-pair membership forces phi = 1 on supp(x) after rephasing; a
  // violation means the inputs are corrupted beyond what tol admits.
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(px[j]) != 0.0 &&
        std::abs(pphi[j] - Cx(1.0, 0.0)) > opts.tol)
      throw InternalInvariant(
          "nr_correct_l1: rephased functional is not 1 on supp(x) at index " +
          std::to_string(j + 1));

  OperatorConstants consts;
  consts.slack = slack;
  consts.mu = nr_mu(eps);
  consts.mask_radius = consts.mu * consts.mu / 2.0;
  const double half = eps / 2.0;
  consts.snap_radius = half * half / 20.0;  // = eps^2/80

  // Kept columns: where the adjoint image of phi pairs well with x.
  LinfFunctional tphi(n);
  for (std::size_t j = 0; j < n; ++j) {
    Cx s(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) s += pphi[k] * pt.entry(k, j);
    tphi[j] = s;
  }
  IndexSet P = well_aligned_support(px, tphi, consts.mask_radius);
  if (P.empty())
    throw EmptyP(
        "nr_correct_l1: no column pairs well enough (hypothesis bypassed)");

  double massP = 0.0;
  for (std::size_t j : P.members) massP += std::abs(x[j]);

  // Shared functional, fixed before the column loop; every surgery below
  // reproduces it bit-identically from (pphi, eps/2).
  const LinfFunctional pphi0 = aligned_functional(pphi, consts.snap_radius);

  OperatorCorrection out;
  out.T0 = t;  // off-P columns stay verbatim
  out.column_log.reserve(P.size());
  for (std::size_t j : P.members) {
    ColumnSurgery log;
    log.column = j;
    L1Vector col = column(pt, j);
    log.a = unit_phase(tphi[j]);
    if (!is_one(log.a)) col = scaled(col, std::conj(log.a));
    CorrectionOptions sub{opts.tol, /*force=*/true};
    PairCorrection pc = bpb_second(col, pphi, half, sub);
    log.z = std::move(pc.x0);

    if (frame.identity) {
      set_column(out.T0, j, log.z);
    } else {
      for (std::size_t k = 0; k < n; ++k)
        out.T0.entry(k, j) = frame.d[k] * log.z[k] * std::conj(frame.d[j]);
    }
    out.column_log.push_back(std::move(log));
  }

  out.x0 = L1Vector(n);
  for (std::size_t j : P.members) out.x0[j] = x[j] / massP;
  if (frame.identity) {
    out.phi0 = pphi0;
  } else {
    out.phi0 = LinfFunctional(n);
    for (std::size_t j = 0; j < n; ++j)
      out.phi0[j] = pphi0[j] * std::conj(frame.d[j]);
  }

  out.dist_T = op_norm_l1(t - out.T0);
  out.dist_x = l1_norm(x - out.x0);
  out.dist_phi = sup_norm(phi - out.phi0);
  out.attainment = pairing(out.phi0, apply(out.T0, out.x0));
  out.nu_T0 = numerical_radius_l1(out.T0);
  out.replaced_columns = std::move(P);
  out.constants = consts;
  out.epsilon = eps;
  out.normalization = normalization;
  return out;
}

/// Modulus version: accepts |phi(Tx)| >= 1 - (eps/9)^(9/2). When Re(phi(Tx))
/// already satisfies the hypothesis the plain correction applies unchanged;
/// otherwise T is rotated so the pairing is real positive, corrected, and the
/// replaced columns rotated back. Guarantees |phi0(T0 x0)| = 1 within tol.
inline OperatorCorrection nr_correct_l1_modulus(const L1Operator& t_in,
                                                const L1Vector& x,
                                                const LinfFunctional& phi,
                                                double eps,
                                                OperatorOptions opts = {}) {
  detail::require_same_size(t_in.n, x.size(), "nr_correct_l1_modulus");
  detail::require_same_size(t_in.n, phi.size(), "nr_correct_l1_modulus");

  // Normalize up front so the rotated run and the verbatim column copies
  // below refer to the same operator.
  L1Operator t = t_in;
  double normalization = 1.0;
  {
    const double nu = numerical_radius_l1(t);
    if (std::abs(nu - 1.0) > opts.tol && opts.normalize && nu != 0.0) {
      normalization = nu;
      t = scaled(t, Cx(1.0 / nu, 0.0));
    }
  }

  const Cx pr = pairing(phi, apply(t, x));
  const Cx u = unit_phase(pr);
  if (1.0 - pr.real() <= nr_slack(eps) || is_one(u)) {
    OperatorCorrection out = nr_correct_l1(t, x, phi, eps, opts);
    out.modulus = true;
    out.normalization = normalization;
    return out;
  }
  OperatorCorrection out =
      nr_correct_l1(scaled(t, std::conj(u)), x, phi, eps, opts);
  // Undo the global rotation on the surgered columns only; the others are
  // verbatim copies of the (normalized) original.
  for (std::size_t j = 0; j < t.n; ++j) {
    if (out.replaced_columns.contains(j)) {
      for (std::size_t k = 0; k < t.n; ++k)
        out.T0.entry(k, j) = u * out.T0.entry(k, j);
    } else {
      for (std::size_t k = 0; k < t.n; ++k)
        out.T0.entry(k, j) = t.entry(k, j);
    }
  }
  out.dist_T = op_norm_l1(t - out.T0);
  out.dist_x = l1_norm(x - out.x0);
  out.dist_phi = sup_norm(phi - out.phi0);
  out.attainment = pairing(out.phi0, apply(out.T0, out.x0));
  out.nu_T0 = numerical_radius_l1(out.T0);
  out.modulus = true;
  out.normalization = normalization;
  return out;
}

}  // namespace bpbkit
