#pragma once

// Analytic reference layer: closed-form information bounds, detection
// sensitivities, photon budgets and the configuration comparison table for
// coherent x vacuum input. Divergent or information-free points evaluate to
// +inf rather than throwing.
//
// Sensitivity formulas assume a balanced interferometer (T = 1/2); the
// information-matrix formulas hold for any T. `alpha` is the modulus |alpha|.

#include <cmath>
#include <limits>
#include <optional>

#include "oamwb/errors.hpp"

namespace oamwb::cf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// |cos| or |sin| of the signal phase below which a working point has no
// first-order signal.
inline constexpr double kDivergenceTolerance = 1e-9;

inline double sq(double x) { return x * x; }

struct QfimBounds {
  double F_dd = 0.0;
  double F_ds = 0.0;
  double F_ss = 0.0;
  double var_d_bound = kInf;
  double var_s_bound = kInf;
  double qfi_single = 0.0;
  double qcrb_single = kInf;
};

inline QfimBounds qfim_and_bounds(double alpha, double r, int l, double T) {
  const double l2 = sq(static_cast<double>(l));
  const double coherent = sq(alpha) * std::exp(4.0 * r);
  const double spontaneous = sq(std::sinh(2.0 * r));
  QfimBounds out;
  out.F_dd = 4.0 * l2 * (coherent + spontaneous);
  out.F_ss = out.F_dd;
  out.F_ds = 4.0 * l2 * coherent * (1.0 - 2.0 * T);
  const double det = out.F_dd * out.F_ss - out.F_ds * out.F_ds;
  const double trace = out.F_dd + out.F_ss;
  if (det > 1e-12 * trace * trace && det > 0.0) {
    out.var_d_bound = out.F_ss / det;
    out.var_s_bound = out.F_dd / det;
  }
  // Single arm, balanced splitter.
  out.qfi_single = 8.0 * l2 * (coherent + spontaneous);
  if (out.qfi_single > 0.0) out.qcrb_single = 1.0 / std::sqrt(out.qfi_single);
  return out;
}

// Intensity-difference detection, as a function of theta_d.
inline double dtheta_id(double alpha, double r, int l, double theta_d) {
  const double c = std::cos(2.0 * l * theta_d);
  const double s = std::sin(2.0 * l * theta_d);
  if (std::abs(s) <= kDivergenceTolerance || alpha == 0.0) return kInf;
  const double a2 = sq(alpha);
  const double noise = a2 * (sq(c) * std::exp(4.0 * r) + sq(s)) + sq(std::sinh(2.0 * r)) * sq(c);
  return std::sqrt(noise) / (2.0 * l * a2 * std::exp(2.0 * r) * std::abs(s));
}

inline double dtheta_id_opt(double alpha, double r, int l) {
  if (alpha == 0.0) return kInf;
  return 1.0 / (2.0 * l * alpha * std::exp(2.0 * r));
}

// Lossy homodyne (Y quadrature of output b) with theta on arm b only.
inline double dtheta_lossy(double alpha, double r, int l, double theta, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("dtheta_lossy: eta must lie in (0, 1]");
  const double c = std::cos(2.0 * l * theta);
  if (std::abs(c) <= kDivergenceTolerance || alpha == 0.0) return kInf;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double noise =
      -eta * ch * sh * (std::cos(4.0 * l * theta) + 1.0) + eta * std::cosh(2.0 * r) + 1.0 - eta;
  return std::sqrt(noise) / (2.0 * std::sqrt(eta) * l * (ch + sh) * alpha * std::abs(c));
}

inline double dtheta_bhd(double alpha, double r, int l, double theta) {
  const double c = std::cos(2.0 * l * theta);
  if (std::abs(c) <= kDivergenceTolerance || alpha == 0.0) return kInf;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double noise = -sh * ch * (std::cos(4.0 * l * theta) + 1.0) + std::cosh(2.0 * r);
  return std::sqrt(noise) / (2.0 * l * (ch + sh) * alpha * std::abs(c));
}

inline double dtheta_bhd_opt(double alpha, double r, int l) {
  if (alpha == 0.0) return kInf;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  return (ch - sh) / (2.0 * l * (ch + sh) * alpha);
}

struct Detection {
  double dtheta_id = kInf;
  double dtheta_id_opt = kInf;
  double dtheta_bhd = kInf;
  double dtheta_bhd_opt = kInf;
  double dtheta_lossy = kInf;
};

// `theta` is theta_d for the intensity rows and theta_b for the homodyne rows.
inline Detection detection(double alpha, double r, int l, double theta, double eta = 1.0) {
  return {dtheta_id(alpha, r, l, theta), dtheta_id_opt(alpha, r, l),
          dtheta_bhd(alpha, r, l, theta), dtheta_bhd_opt(alpha, r, l),
          dtheta_lossy(alpha, r, l, theta, eta)};
}

struct PhotonBudget {
  double n_alpha = 0.0;   // input coherent photons |alpha|^2
  double n_r = 0.0;       // spontaneous PA photons 2 sinh^2 r
  double n_script = 0.0;  // sqrt((n_r + 2) n_r) = sinh 2r
  double n_tot = 0.0;     // phase-sensing photons inside the interferometer
};

inline PhotonBudget photon_budget(double alpha, double r) {
  PhotonBudget b;
  b.n_alpha = sq(alpha);
  b.n_r = 2.0 * sq(std::sinh(r));
  b.n_script = std::sqrt((b.n_r + 2.0) * b.n_r);
  b.n_tot = sq(std::cosh(r) + std::sinh(r)) * b.n_alpha + b.n_r;
  return b;
}

// Photon number that defines the shot-noise reference.
enum class SqlNormalization { n_tot, n_alpha };

inline double sql(double alpha, double r, int l,
                  SqlNormalization norm = SqlNormalization::n_tot) {
  const PhotonBudget b = photon_budget(alpha, r);
  const double n = norm == SqlNormalization::n_tot ? b.n_tot : b.n_alpha;
  if (n <= 0.0) return kInf;
  return 1.0 / (2.0 * l * std::sqrt(n));
}

struct BudgetLimits {
  PhotonBudget budget;
  double sql = kInf;
  double heisenberg = kInf;
  double enhancement = 1.0;
};

inline BudgetLimits photon_budget_limits(double alpha, double r, int l,
                                         SqlNormalization norm = SqlNormalization::n_tot) {
  BudgetLimits out;
  out.budget = photon_budget(alpha, r);
  out.sql = sql(alpha, r, l, norm);
  if (out.budget.n_tot > 0.0) out.heisenberg = 1.0 / (2.0 * l * out.budget.n_tot);
  out.enhancement = 2.0 * std::cosh(r);
  return out;
}

// Large-photon-number approximation of the optimal homodyne sensitivity
// written against the internal photon number: 1 / (4 l cosh r sqrt(N_tot)).
inline double approx_optimal_from_budget(double n_tot, double r, int l) {
  if (n_tot <= 0.0) return kInf;
  return 1.0 / (4.0 * l * std::cosh(r) * std::sqrt(n_tot));
}

struct Table1 {
  double mzi = kInf;
  double pa_pa = kInf;
  double pa_bs = kInf;
  double modified_mzi = kInf;
};

// Homodyne sensitivities of four configurations for coherent x vacuum input.
inline Table1 table1(double alpha, double r, int l) {
  if (alpha == 0.0) throw InvalidArgument("table1: alpha must be non-zero");
  const PhotonBudget b = photon_budget(alpha, r);
  const double root_na = std::sqrt(b.n_alpha);
  Table1 t;
  t.mzi = 1.0 / (2.0 * l * root_na);
  t.pa_pa = b.n_script > 0.0 ? 1.0 / (2.0 * l * b.n_script * root_na) : kInf;
  t.pa_bs = 1.0 / (2.0 * std::sqrt(2.0) * l * (0.5 * b.n_r + 0.5 * b.n_script + 1.0) * root_na);
  t.modified_mzi = 1.0 / (2.0 * l * (b.n_r + b.n_script + 1.0) * root_na);
  return t;
}

// Smallest arm transmission at which the lossy optimal (theta = 0) homodyne
// sensitivity still reaches the lossless SQL. Empty when it never does.
inline std::optional<double> loss_tolerance_eta(double alpha, double r, int l,
                                                SqlNormalization norm = SqlNormalization::n_tot,
                                                double tol = 1e-12) {
  const double target = sql(alpha, r, l, norm);
  auto excess = [&](double eta) { return dtheta_lossy(alpha, r, l, 0.0, eta) - target; };
  double hi = 1.0;
  if (excess(hi) > 0.0) return std::nullopt;
  double lo = 1e-12;
  if (excess(lo) <= 0.0) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oamwb::cf
