#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bpbkit/errors.hpp"
#include "bpbkit/scalar.hpp"

namespace bpbkit {

/// Element of l1^n, measured in the sum norm.
struct L1Vector {
  std::vector<Cx> coords;

  L1Vector() = default;
  explicit L1Vector(std::size_t n) : coords(n, Cx(0.0, 0.0)) {}
  explicit L1Vector(std::vector<Cx> c) : coords(std::move(c)) {}
  L1Vector(std::initializer_list<Cx> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  Cx& operator[](std::size_t j) { return coords[j]; }
  const Cx& operator[](std::size_t j) const { return coords[j]; }
  bool operator==(const L1Vector&) const = default;
};

/// Element of linf^n = (l1^n)*, measured in the sup norm. The same carrier
/// serves c0^n vectors (finite-dimensional c0 coincides with linf).
struct LinfFunctional {
  std::vector<Cx> coords;

  LinfFunctional() = default;
  explicit LinfFunctional(std::size_t n) : coords(n, Cx(0.0, 0.0)) {}
  explicit LinfFunctional(std::vector<Cx> c) : coords(std::move(c)) {}
  LinfFunctional(std::initializer_list<Cx> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  Cx& operator[](std::size_t j) { return coords[j]; }
  const Cx& operator[](std::size_t j) const { return coords[j]; }
  bool operator==(const LinfFunctional&) const = default;
};

/// Sorted set of 0-based coordinate indices. Reports and files print these
/// 1-based; the conversion lives in the serialization layer.
struct IndexSet {
  std::vector<std::size_t> members;  // strictly increasing

  IndexSet() = default;
  explicit IndexSet(std::vector<std::size_t> m) : members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  bool contains(std::size_t j) const {
    return std::binary_search(members.begin(), members.end(), j);
  }
  bool subset_of(const IndexSet& other) const {
    return std::includes(other.members.begin(), other.members.end(),
                         members.begin(), members.end());
  }
  bool operator==(const IndexSet&) const = default;
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* who) {
  if (a != b)
    throw DimensionMismatch(std::string(who) + ": lengths " +
                            std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace detail

inline double l1_norm(const L1Vector& x) {
  double s = 0.0;
  for (const Cx& c : x.coords) s += std::abs(c);
  return s;
}

inline double sup_norm(const LinfFunctional& phi) {
  double m = 0.0;
  for (const Cx& c : phi.coords) m = std::max(m, std::abs(c));
  return m;
}

/// Bilinear pairing phi(x) = sum_j phi_j x_j. No conjugation: the dual action
/// on l1 is the plain coordinate sum, and the c0 pairing reuses it with the
/// roles swapped (functional = l1 element, vector = sup-norm element).
inline Cx pairing(const LinfFunctional& phi, const L1Vector& x) {
  detail::require_same_size(phi.size(), x.size(), "pairing");
  Cx s(0.0, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) s += phi[j] * x[j];
  return s;
}

inline IndexSet support(const L1Vector& x) {
  std::vector<std::size_t> m;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j].real() != 0.0 || x[j].imag() != 0.0) m.push_back(j);
  IndexSet s;
  s.members = std::move(m);
  return s;
}

/// Coordinates where the functional aligns the vector with its modulus:
/// { j : |phi_j x_j - |x_j|| <= tol }.
inline IndexSet alignment_set(const L1Vector& x, const LinfFunctional& phi,
                              double tol) {
  detail::require_same_size(x.size(), phi.size(), "alignment_set");
  std::vector<std::size_t> m;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(phi[j] * x[j] - Cx(std::abs(x[j]), 0.0)) <= tol)
      m.push_back(j);
  IndexSet s;
  s.members = std::move(m);
  return s;
}

/// { j : |phi_j| >= 1 - r }. Comparison is exact (no slack); borderline
/// floating-point inputs fall where IEEE comparison puts them.
inline IndexSet near_unimodular_set(const LinfFunctional& phi, double r) {
  std::vector<std::size_t> m;
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (std::abs(phi[j]) >= 1.0 - r) m.push_back(j);
  IndexSet s;
  s.members = std::move(m);
  return s;
}

/// Support coordinates where Re(phi_j x_j) captures at least a (1-r) fraction
/// of |x_j|. Always a subset of near_unimodular_set(phi, r).
inline IndexSet well_aligned_support(const L1Vector& x,
                                     const LinfFunctional& phi, double r) {
  detail::require_same_size(x.size(), phi.size(), "well_aligned_support");
  std::vector<std::size_t> m;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double mod = std::abs(x[j]);
    if (mod == 0.0) continue;
    if ((phi[j] * x[j]).real() >= (1.0 - r) * mod) m.push_back(j);
  }
  IndexSet s;
  s.members = std::move(m);
  return s;
}

/// Unit pair with phi(x) = 1, characterized coordinatewise: both norms are 1
/// within tol and every coordinate aligns (phi_j x_j = |x_j| within tol).
inline bool is_attaining_pair_l1(const L1Vector& x, const LinfFunctional& phi,
                                 double tol = kDefaultTol) {
  detail::require_same_size(x.size(), phi.size(), "is_attaining_pair_l1");
  if (std::abs(l1_norm(x) - 1.0) > tol) return false;
  if (std::abs(sup_norm(phi) - 1.0) > tol) return false;
  return alignment_set(x, phi, tol).size() == x.size();
}

/// x is a norming point of phi: unit vector with phi(x) = 1 within tol.
inline bool is_norming_point(const LinfFunctional& phi, const L1Vector& x,
                             double tol = kDefaultTol) {
  detail::require_same_size(phi.size(), x.size(), "is_norming_point");
  if (std::abs(l1_norm(x) - 1.0) > tol) return false;
  return std::abs(pairing(phi, x) - Cx(1.0, 0.0)) <= tol;
}

inline L1Vector operator-(const L1Vector& a, const L1Vector& b) {
  detail::require_same_size(a.size(), b.size(), "L1Vector difference");
  L1Vector d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  return d;
}

inline LinfFunctional operator-(const LinfFunctional& a,
                                const LinfFunctional& b) {
  detail::require_same_size(a.size(), b.size(), "LinfFunctional difference");
  LinfFunctional d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
  return d;
}

inline L1Vector scaled(const L1Vector& x, Cx factor) {
  L1Vector y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = factor * x[j];
  return y;
}

inline L1Vector basis_vector(std::size_t n, std::size_t j) {
  L1Vector e(n);
  e[j] = Cx(1.0, 0.0);
  return e;
}

}  // namespace bpbkit
