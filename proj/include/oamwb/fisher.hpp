#pragma once

// Quantum Fisher information for the rotation angles. The Dove-prism phases
// are generated by number operators acting on the pure probe state after the
// splitter and PAs, so for pure input
//
//   F_ij = 4 Cov(G_i, G_j),  G_d = l (n_b - n_a),  G_s = l (n_b + n_a).

#include <cmath>

#include "oamwb/bogoliubov.hpp"
#include "oamwb/elements.hpp"

namespace oamwb {

// Ordered (theta_d, theta_s).
struct Qfim {
  double F_dd = 0.0;
  double F_ds = 0.0;
  double F_sd = 0.0;
  double F_ss = 0.0;

  double determinant() const { return F_dd * F_ss - F_ds * F_sd; }
  double trace() const { return F_dd + F_ss; }
};

struct CrbBounds {
  double var_theta_d = 0.0;
  double var_theta_s = 0.0;
  bool valid = false;
};

struct SingleParameterQfi {
  double F = 0.0;
  double qcrb = 0.0;
};

inline GaussianMoments probe_moments(const Scenario& s) {
  return moments(build_probe(s), InputState::coherent(s.alpha, 2));
}

inline Qfim qfim_two_param(const Scenario& s) {
  validate(s);
  if (s.is_lossy()) throw Unsupported("qfim_two_param: lossy (mixed) probe states are not supported");
  const GaussianMoments m = probe_moments(s);
  const double l = s.l;
  RVector gd(2), gs(2);
  gd << -l, l;
  gs << l, l;
  Qfim f;
  f.F_dd = 4.0 * number_cross_covariance(m, gd, gd);
  f.F_ds = 4.0 * number_cross_covariance(m, gd, gs);
  f.F_sd = 4.0 * number_cross_covariance(m, gs, gd);
  f.F_ss = 4.0 * number_cross_covariance(m, gs, gs);
  return f;
}

inline CrbBounds crb_bounds(const Qfim& f) {
  const double det = f.determinant();
  const double tr = f.trace();
  if (!(tr > 0.0) || !(det > 1e-12 * tr * tr)) {
    throw SingularInformation("crb_bounds: information matrix is singular");
  }
  return {f.F_ss / det, f.F_dd / det, true};
}

// theta = theta_b with theta_a = 0 on a balanced splitter.
inline SingleParameterQfi qfi_single(const Scenario& s) {
  validate(s);
  if (s.theta_a != 0.0 || s.T != 0.5) {
    throw InvalidArgument("qfi_single: requires theta_a = 0 and T = 1/2");
  }
  if (s.is_lossy()) throw Unsupported("qfi_single: lossy (mixed) probe states are not supported");
  RVector w(2);
  w << 0.0, 1.0;
  const double var_nb = number_stats(probe_moments(s), w).variance;
  const double F = 16.0 * s.l * s.l * var_nb;
  if (!(F > 0.0)) throw SingularInformation("qfi_single: probe carries no information on theta");
  return {F, 1.0 / std::sqrt(F)};
}

}  // namespace oamwb
