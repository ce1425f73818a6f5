#pragma once

// Optical elements of the squeezing-enhanced OAM interferometer and the
// scenario-driven circuit builder:
//
//   splitter BS -> PA on each arm -> SPP+DP phase e^{2 i l theta} per arm
//   -> recombiner BS
//
// with optional arm losses modelled as beam splitters onto vacuum ancillas.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "oamwb/bogoliubov.hpp"

namespace oamwb {

enum class BsConvention { splitter, recombiner };

struct BeamSplitter {
  double transmissivity = 0.5;
  std::size_t first = 0;
  std::size_t second = 1;
  BsConvention convention = BsConvention::splitter;
};

struct Squeezer {
  double r = 0.0;
  std::size_t mode = 0;
};

struct OamPhase {
  int l = 1;
  double theta = 0.0;
  std::size_t mode = 0;
};

struct Loss {
  double eta = 1.0;
  std::size_t mode = 0;
  std::size_t ancilla = 2;
};

using Element = std::variant<BeamSplitter, Squeezer, OamPhase, Loss>;

namespace detail {

inline void require_mode(std::size_t mode, std::size_t n_modes, const char* who) {
  if (mode >= n_modes) {
    throw InvalidArgument(std::string(who) + ": mode " + std::to_string(mode) +
                          " outside register of " + std::to_string(n_modes));
  }
}

inline void require_pair(std::size_t i, std::size_t j, std::size_t n_modes, const char* who) {
  require_mode(i, n_modes, who);
  require_mode(j, n_modes, who);
  if (i == j) throw InvalidArgument(std::string(who) + ": modes must be distinct");
}

// Real two-mode mixer: rows (i, j) of A become [[t, s_ij], [s_ji, t']].
inline BogoliubovTransform mixer(std::size_t i, std::size_t j, std::size_t n_modes, double ii,
                                 double ij, double ji, double jj) {
  auto t = BogoliubovTransform::identity(n_modes);
  CMatrix a = t.A();
  const auto ei = static_cast<Eigen::Index>(i);
  const auto ej = static_cast<Eigen::Index>(j);
  a(ei, ei) = ii;
  a(ei, ej) = ij;
  a(ej, ei) = ji;
  a(ej, ej) = jj;
  return {std::move(a), t.B()};
}

}  // namespace detail

// c_i = sqrt(T) a_i - sqrt(R) a_j,  c_j = sqrt(R) a_i + sqrt(T) a_j.
inline BogoliubovTransform splitter_bs(double transmissivity, std::size_t i = 0,
                                       std::size_t j = 1, std::size_t n_modes = 2) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw InvalidArgument("splitter_bs: transmissivity must lie in [0, 1]");
  }
  detail::require_pair(i, j, n_modes, "splitter_bs");
  const double st = std::sqrt(transmissivity);
  const double sr = std::sqrt(1.0 - transmissivity);
  return detail::mixer(i, j, n_modes, st, -sr, sr, st);
}

// c_i = sqrt(T) a_i + sqrt(R) a_j,  c_j = -sqrt(R) a_i + sqrt(T) a_j.
// Inverse of splitter_bs; this sign choice is what makes the full chain
// reproduce the expected output-port coefficients (see docs/recombiner.md).
inline BogoliubovTransform recombiner_bs(double transmissivity, std::size_t i = 0,
                                         std::size_t j = 1, std::size_t n_modes = 2) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw InvalidArgument("recombiner_bs: transmissivity must lie in [0, 1]");
  }
  detail::require_pair(i, j, n_modes, "recombiner_bs");
  const double st = std::sqrt(transmissivity);
  const double sr = std::sqrt(1.0 - transmissivity);
  return detail::mixer(i, j, n_modes, st, sr, -sr, st);
}

// c = cosh(r) a + sinh(r) a^+ on `mode`.
inline BogoliubovTransform squeezer(double r, std::size_t mode, std::size_t n_modes) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("squeezer: r must be finite and >= 0");
  detail::require_mode(mode, n_modes, "squeezer");
  auto t = BogoliubovTransform::identity(n_modes);
  CMatrix a = t.A();
  CMatrix b = t.B();
  const auto m = static_cast<Eigen::Index>(mode);
  a(m, m) = std::cosh(r);
  b(m, m) = std::sinh(r);
  return {std::move(a), std::move(b)};
}

inline BogoliubovTransform squeezer(double r) { return squeezer(r, 0, 1); }

// SPP + Dove prism: c = e^{2 i l theta} a on `mode`.
inline BogoliubovTransform oam_phase(int l, double theta, std::size_t mode, std::size_t n_modes) {
  if (l < 1) throw InvalidArgument("oam_phase: topological charge l must be >= 1");
  if (!std::isfinite(theta)) throw InvalidArgument("oam_phase: theta must be finite");
  detail::require_mode(mode, n_modes, "oam_phase");
  auto t = BogoliubovTransform::identity(n_modes);
  CMatrix a = t.A();
  const auto m = static_cast<Eigen::Index>(mode);
  a(m, m) = std::polar(1.0, 2.0 * l * theta);
  return {std::move(a), t.B()};
}

// c = sqrt(eta) a + sqrt(1 - eta) v, v = sqrt(eta) v - sqrt(1 - eta) a.
inline BogoliubovTransform loss_channel(double eta, std::size_t mode, std::size_t ancilla,
                                        std::size_t n_modes) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("loss_channel: eta must lie in (0, 1]");
  detail::require_pair(mode, ancilla, n_modes, "loss_channel");
  if (ancilla < 2) throw InvalidArgument("loss_channel: ancilla must be a loss-ancilla mode (index >= 2)");
  const double se = std::sqrt(eta);
  const double sl = std::sqrt(1.0 - eta);
  return detail::mixer(mode, ancilla, n_modes, se, sl, -sl, se);
}

inline BogoliubovTransform to_transform(const Element& element, std::size_t n_modes) {
  return std::visit(
      [n_modes](const auto& e) -> BogoliubovTransform {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, BeamSplitter>) {
          return e.convention == BsConvention::splitter
                     ? splitter_bs(e.transmissivity, e.first, e.second, n_modes)
                     : recombiner_bs(e.transmissivity, e.first, e.second, n_modes);
        } else if constexpr (std::is_same_v<E, Squeezer>) {
          return squeezer(e.r, e.mode, n_modes);
        } else if constexpr (std::is_same_v<E, OamPhase>) {
          return oam_phase(e.l, e.theta, e.mode, n_modes);
        } else {
          return loss_channel(e.eta, e.mode, e.ancilla, n_modes);
        }
      },
      element);
}

using ElementMapper = std::function<BogoliubovTransform(const Element&, std::size_t)>;

// Composes elements in application order (front of the list acts first).
inline BogoliubovTransform compose_chain(const std::vector<Element>& chain, std::size_t n_modes,
                                         const ElementMapper& mapper = to_transform) {
  auto total = BogoliubovTransform::identity(n_modes);
  for (const auto& e : chain) total = compose(mapper(e, n_modes), total);
  return total;
}

struct Scenario {
  cplx alpha{1.0, 0.0};
  double r = 0.0;
  int l = 1;
  double T = 0.5;
  double theta_a = 0.0;
  double theta_b = 0.0;
  double eta_a = 1.0;
  double eta_b = 1.0;
  bool lossless = true;

  double theta_d() const { return theta_b - theta_a; }
  double theta_s() const { return theta_b + theta_a; }

  Scenario with_difference_sum(double theta_d, double theta_s) const {
    Scenario s = *this;
    s.theta_a = 0.5 * (theta_s - theta_d);
    s.theta_b = 0.5 * (theta_s + theta_d);
    return s;
  }

  bool is_lossy() const { return !lossless && (eta_a < 1.0 || eta_b < 1.0); }

  // Register: 2 signal modes, plus ancillas 2 (arm a) and 3 (arm b) when lossy.
  std::size_t register_size() const { return is_lossy() ? 4 : 2; }
};

inline void validate(const Scenario& s) {
  if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag())) {
    throw InvalidArgument("scenario: alpha must be finite");
  }
  if (!(s.r >= 0.0) || !std::isfinite(s.r)) throw InvalidArgument("scenario: r must be finite and >= 0");
  if (s.l < 1) throw InvalidArgument("scenario: l must be a positive integer");
  if (!(s.T >= 0.0 && s.T <= 1.0)) throw InvalidArgument("scenario: T must lie in [0, 1]");
  if (!std::isfinite(s.theta_a) || !std::isfinite(s.theta_b)) {
    throw InvalidArgument("scenario: rotation angles must be finite");
  }
  if (!(s.eta_a > 0.0 && s.eta_a <= 1.0) || !(s.eta_b > 0.0 && s.eta_b <= 1.0)) {
    throw InvalidArgument("scenario: eta must lie in (0, 1]");
  }
  if (s.lossless && (s.eta_a != 1.0 || s.eta_b != 1.0)) {
    throw InvalidArgument("scenario: lossless scenario requires eta_a = eta_b = 1");
  }
}

// Where the arm losses sit relative to the Dove-prism phases.
enum class LossPlacement {
  reference,  // arm a before its phase, arm b after its phase
  before_phase,
  after_phase,
};

inline std::vector<Element> circuit_elements(const Scenario& s,
                                             LossPlacement placement = LossPlacement::reference) {
  validate(s);
  const bool lossy = s.is_lossy();
  const bool a_before = placement != LossPlacement::after_phase;
  const bool b_before = placement == LossPlacement::before_phase;
  const Loss loss_a{s.eta_a, 0, 2};
  const Loss loss_b{s.eta_b, 1, 3};

  std::vector<Element> chain;
  chain.emplace_back(BeamSplitter{s.T, 0, 1, BsConvention::splitter});
  chain.emplace_back(Squeezer{s.r, 0});
  chain.emplace_back(Squeezer{s.r, 1});
  if (lossy && a_before) chain.emplace_back(loss_a);
  if (lossy && b_before) chain.emplace_back(loss_b);
  chain.emplace_back(OamPhase{s.l, s.theta_a, 0});
  chain.emplace_back(OamPhase{s.l, s.theta_b, 1});
  if (lossy && !a_before) chain.emplace_back(loss_a);
  if (lossy && !b_before) chain.emplace_back(loss_b);
  chain.emplace_back(BeamSplitter{s.T, 0, 1, BsConvention::recombiner});
  return chain;
}

inline BogoliubovTransform build_circuit(const Scenario& s,
                                         LossPlacement placement = LossPlacement::reference) {
  return compose_chain(circuit_elements(s, placement), s.register_size());
}

// State preparation up to the probe: splitter BS followed by both PAs.
inline BogoliubovTransform build_probe(const Scenario& s) {
  validate(s);
  const std::vector<Element> chain{BeamSplitter{s.T, 0, 1, BsConvention::splitter},
                                   Squeezer{s.r, 0}, Squeezer{s.r, 1}};
  return compose_chain(chain, 2);
}

inline InputState scenario_input(const Scenario& s) {
  return InputState::coherent(s.alpha, s.register_size());
}

}  // namespace oamwb
