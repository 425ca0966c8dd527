#pragma once

#include <cmath>

namespace bpbkit {

// Central store for the quantitative constants of the correction
// constructions. Each correction documents which of these it consumes; the
// generators and the sweep command read them too, so a change here propagates
// everywhere at once.

/// Admissible deficit 1 - Re(phi(x)) for the first pair correction: eps^3/4.
inline double bpb_first_slack(double eps) { return eps * eps * eps / 4.0; }

/// Mask radius of the kept support in the first pair correction: eps^2/2.
inline double bpb_first_mask_radius(double eps) { return eps * eps / 2.0; }

/// Admissible deficit for the second pair correction: eps^3/60.
inline double bpb_second_slack(double eps) { return eps * eps * eps / 60.0; }

/// Mask/snap radius of the second pair correction: eps^2/20. Both the kept
/// support and the snapped near-unimodular set use this radius.
inline double bpb_second_mask_radius(double eps) { return eps * eps / 20.0; }

/// Admissible deficit for the numerical-radius correction: (eps/9)^(9/2).
inline double nr_slack(double eps) { return std::pow(eps / 9.0, 4.5); }

/// Column-selection scale of the numerical-radius correction:
/// mu = sqrt(eps^3/240).
inline double nr_mu(double eps) { return std::sqrt(eps * eps * eps / 240.0); }

}  // namespace bpbkit
