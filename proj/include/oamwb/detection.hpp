#pragma once

// Measurement statistics for intensity-difference and balanced homodyne
// detection, and error-propagation sensitivity
//
//   dtheta = sqrt(Var O) / |d<O>/dtheta|
//
// from the Gaussian engine. The slope comes from a Richardson-refined central
// difference of the engine mean; `analytic_reference` evaluates the matching
// closed form instead.

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "oamwb/bogoliubov.hpp"
#include "oamwb/closed_forms.hpp"
#include "oamwb/elements.hpp"

namespace oamwb {

// n_{a4} - n_{b4}
struct IntensityDifference {};

// X_phase on one output port; the standard choice is Y on b4.
struct Homodyne {
  std::size_t mode = 1;
  double phase = std::numbers::pi / 2.0;

  bool is_standard() const { return mode == 1 && phase == std::numbers::pi / 2.0; }
};

using Observable = std::variant<IntensityDifference, Homodyne>;

enum class DetectionMethod { ID, BHD };
enum class Parameter { theta_d, theta_b };
enum class EvalMode { numeric, analytic_reference };

inline const char* to_string(DetectionMethod m) { return m == DetectionMethod::ID ? "ID" : "BHD"; }

struct SensitivityResult {
  double delta_theta = cf::kInf;
  double theta = 0.0;  // operating point of the estimated parameter
  DetectionMethod method = DetectionMethod::ID;
  Scenario scenario;
  double derivative = 0.0;
  double noise = 0.0;
  bool divergent = true;
};

struct FiniteDifference {
  double step = 1e-6;
  bool richardson = true;
};

inline Stats observable_stats(const Scenario& s, const Observable& o) {
  const GaussianMoments m = moments(build_circuit(s), scenario_input(s));
  if (std::holds_alternative<IntensityDifference>(o)) {
    RVector w = RVector::Zero(static_cast<Eigen::Index>(m.n_modes()));
    w[0] = 1.0;
    w[1] = -1.0;
    return number_stats(m, w);
  }
  const auto& h = std::get<Homodyne>(o);
  if (h.mode > 1) throw InvalidArgument("observable_stats: homodyne mode must be a signal output");
  return quadrature_stats(m, ModeLabel::at(h.mode), h.phase);
}

namespace detail {

inline DetectionMethod method_of(const Observable& o) {
  return std::holds_alternative<IntensityDifference>(o) ? DetectionMethod::ID : DetectionMethod::BHD;
}

inline Scenario shifted(const Scenario& s, Parameter wrt, double h) {
  Scenario out = s;
  if (wrt == Parameter::theta_d) {
    out.theta_b += 0.5 * h;
    out.theta_a -= 0.5 * h;
  } else {
    out.theta_b += h;
  }
  return out;
}

// Magnitude of the observable's signal used to decide when a slope is zero.
inline double signal_scale(const Scenario& s, const Observable& o) {
  const GaussianMoments m = moments(build_circuit(s), scenario_input(s));
  if (std::holds_alternative<IntensityDifference>(o)) {
    return photon_number(m, 0) + photon_number(m, 1);
  }
  return 2.0 * std::hypot(std::abs(m.mean[0]), std::abs(m.mean[1]));
}

inline void check_pairing(const Observable& o, Parameter wrt) {
  const bool id = std::holds_alternative<IntensityDifference>(o);
  if (id && wrt != Parameter::theta_d) {
    throw InvalidArgument("sensitivity: intensity-difference detection estimates theta_d");
  }
  if (!id && wrt != Parameter::theta_b) {
    throw InvalidArgument("sensitivity: homodyne detection estimates theta_b");
  }
}

inline SensitivityResult finish(SensitivityResult r, double scale) {
  r.noise = std::max(r.noise, 0.0);
  const double threshold = cf::kDivergenceTolerance * 2.0 * r.scenario.l * scale;
  r.divergent = !(std::abs(r.derivative) > threshold);
  r.delta_theta = r.divergent ? cf::kInf : std::sqrt(r.noise) / std::abs(r.derivative);
  return r;
}

inline SensitivityResult analytic(const Scenario& s, const Observable& o) {
  if (s.T != 0.5) throw Unsupported("analytic_reference: closed forms need T = 1/2");
  if (s.alpha.imag() != 0.0) throw Unsupported("analytic_reference: closed forms need real alpha");
  const double alpha = std::abs(s.alpha.real());
  const double r = s.r;
  const int l = s.l;
  const double e2r = std::exp(2.0 * r);

  SensitivityResult out;
  out.scenario = s;
  out.method = method_of(o);
  if (out.method == DetectionMethod::ID) {
    if (s.is_lossy()) throw Unsupported("analytic_reference: no closed form for lossy intensity detection");
    const double phi = 2.0 * l * s.theta_d();
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    out.theta = s.theta_d();
    out.derivative = -2.0 * l * alpha * alpha * e2r * sn;
    out.noise = alpha * alpha * (c * c * e2r * e2r + sn * sn) + cf::sq(std::sinh(2.0 * r) * c);
    out = finish(out, alpha * alpha * e2r + 2.0 * cf::sq(std::sinh(r)));
    if (!out.divergent) out.delta_theta = cf::dtheta_id(alpha, r, l, out.theta);
    return out;
  }
  if (!std::get<Homodyne>(o).is_standard()) {
    throw Unsupported("analytic_reference: closed forms cover the Y quadrature of b4 only");
  }
  if (s.theta_a != 0.0) throw Unsupported("analytic_reference: homodyne closed form needs theta_a = 0");
  if (s.is_lossy() && s.eta_a != s.eta_b) {
    throw Unsupported("analytic_reference: lossy closed form needs equal arm transmissions");
  }
  const double eta = s.is_lossy() ? s.eta_a : 1.0;
  const double phi = 2.0 * l * s.theta_b;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  out.theta = s.theta_b;
  out.derivative = 2.0 * l * std::sqrt(eta) * (ch + sh) * alpha * std::cos(phi);
  out.noise = -eta * sh * ch * (std::cos(2.0 * phi) + 1.0) + eta * std::cosh(2.0 * r) + 1.0 - eta;
  out = finish(out, 2.0 * std::sqrt(eta) * (ch + sh) * alpha);
  if (!out.divergent) out.delta_theta = cf::dtheta_lossy(alpha, r, l, out.theta, eta);
  return out;
}

}  // namespace detail

inline SensitivityResult sensitivity(const Scenario& s, const Observable& o, Parameter wrt,
                                     EvalMode mode = EvalMode::numeric,
                                     const FiniteDifference& fd = {}) {
  validate(s);
  detail::check_pairing(o, wrt);
  if (mode == EvalMode::analytic_reference) return detail::analytic(s, o);

  auto mean_at = [&](double h) { return observable_stats(detail::shifted(s, wrt, h), o).mean; };
  auto central = [&](double h) { return (mean_at(h) - mean_at(-h)) / (2.0 * h); };
  double slope = central(fd.step);
  if (fd.richardson) slope = (4.0 * central(0.5 * fd.step) - slope) / 3.0;

  SensitivityResult out;
  out.scenario = s;
  out.method = detail::method_of(o);
  out.theta = wrt == Parameter::theta_d ? s.theta_d() : s.theta_b;
  out.derivative = slope;
  out.noise = observable_stats(s, o).variance;
  return detail::finish(out, detail::signal_scale(s, o));
}

// Homodyne sensitivity with equal-or-unequal arm losses, in the balanced
// single-arm configuration (T = 1/2, theta_a = 0).
inline SensitivityResult sensitivity_lossy(const Scenario& s, EvalMode mode = EvalMode::numeric,
                                           const FiniteDifference& fd = {}) {
  if (s.T != 0.5 || s.theta_a != 0.0) {
    throw InvalidArgument("sensitivity_lossy: requires T = 1/2 and theta_a = 0");
  }
  Scenario lossy = s;
  lossy.lossless = s.eta_a == 1.0 && s.eta_b == 1.0;
  return sensitivity(lossy, Homodyne{}, Parameter::theta_b, mode, fd);
}

}  // namespace oamwb
