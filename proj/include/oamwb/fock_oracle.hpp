#pragma once

// Brute-force cross-check for the Gaussian engine: truncated Fock-space state
// vectors evolved by exponentiating each element's generator.
//
//   beam splitter   U = exp(t (a_i^+ a_j - a_j^+ a_i))
//   squeezer        U = exp((r/2) (a^+2 - a^2))
//   SPP + DP phase  U = exp(i 2 l theta n)
//   loss            beam splitter onto a vacuum ancilla, ancilla then traced
//
// U^+ c U reproduces the Heisenberg maps of elements.hpp exactly. Each
// generator is truncated to the retained levels and exponentiated by scaling
// and squaring, sector by sector where it conserves a quantum number.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "oamwb/bogoliubov.hpp"
#include "oamwb/elements.hpp"
#include "oamwb/errors.hpp"

namespace oamwb::fock {

inline constexpr double kTailTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-10;

// Row-major register: mode 0 is the most significant digit of the index.
class FockState {
 public:
  FockState(std::size_t cutoff, std::size_t n_modes, std::vector<cplx> amplitudes)
      : cutoff_(cutoff), n_modes_(n_modes), amplitudes_(std::move(amplitudes)) {
    if (cutoff_ < 2) throw InvalidArgument("FockState: cutoff must be >= 2");
    if (n_modes_ < 1 || n_modes_ > 3) throw InvalidArgument("FockState: supports 1 to 3 modes");
    std::size_t dim = 1;
    for (std::size_t m = 0; m < n_modes_; ++m) dim *= cutoff_;
    if (amplitudes_.size() != dim) throw InvalidArgument("FockState: amplitude vector has wrong size");
  }

  std::size_t cutoff() const { return cutoff_; }
  std::size_t n_modes() const { return n_modes_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<cplx>& amplitudes() const { return amplitudes_; }

  std::size_t stride(std::size_t mode) const {
    std::size_t s = 1;
    for (std::size_t m = mode + 1; m < n_modes_; ++m) s *= cutoff_;
    return s;
  }

  std::size_t occupation(std::size_t index, std::size_t mode) const {
    return (index / stride(mode)) % cutoff_;
  }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& a : amplitudes_) n += std::norm(a);
    return n;
  }

  // Probability of any mode sitting in the top two retained levels. The
  // squeezer moves quanta in pairs, so each parity sector has its own top
  // level; a single-level check misses an even-only state at odd cutoffs.
  double tail_weight() const {
    double t = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      for (std::size_t m = 0; m < n_modes_; ++m) {
        if (occupation(i, m) + 2 >= cutoff_) {
          t += std::norm(amplitudes_[i]);
          break;
        }
      }
    }
    return t;
  }

 private:
  std::size_t cutoff_;
  std::size_t n_modes_;
  std::vector<cplx> amplitudes_;
};

// Conservative starting cutoff for a coherent amplitude. prepare() itself
// checks the actual truncated mass, so smaller cutoffs are fine when it fits.
inline std::size_t minimum_cutoff(cplx alpha) {
  const double a = std::abs(alpha);
  return static_cast<std::size_t>(std::ceil(a * a + 10.0 * a + 20.0));
}

namespace detail {

using Amps = std::vector<cplx>;

inline void check_tail(const FockState& psi, double tail_tol, const char* who) {
  const double tail = psi.tail_weight();
  if (!(tail < tail_tol)) {
    std::ostringstream msg;
    msg << who << ": tail weight " << tail << " at cutoff " << psi.cutoff()
        << " exceeds tolerance " << tail_tol;
    throw TailOverflow(msg.str());
  }
}

// Applies a c x c single-mode unitary to every fibre of `mode`.
inline FockState apply_single_mode(const FockState& psi, std::size_t mode, const CMatrix& u) {
  const std::size_t c = psi.cutoff();
  const std::size_t s = psi.stride(mode);
  const std::size_t block = s * c;
  const Amps& in = psi.amplitudes();
  Amps out(in.size());
  CVector fibre(static_cast<Eigen::Index>(c));
  for (std::size_t outer = 0; outer < in.size(); outer += block) {
    for (std::size_t inner = 0; inner < s; ++inner) {
      const std::size_t base = outer + inner;
      for (std::size_t n = 0; n < c; ++n) fibre[Eigen::Index(n)] = in[base + n * s];
      const CVector res = u * fibre;
      for (std::size_t n = 0; n < c; ++n) out[base + n * s] = res[Eigen::Index(n)];
    }
  }
  return {c, psi.n_modes(), std::move(out)};
}

// exp(t (a_i^+ a_j - a_j^+ a_i)) maps a_i -> cos t a_i + sin t a_j. The
// generator conserves n_i + n_j, so it is exponentiated block by block over
// the truncated photon-number sectors; sector N holds (n_i, N - n_i).
inline std::vector<Eigen::MatrixXd> pair_rotation_blocks(std::size_t c, double t) {
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t total = 0; total + 1 < 2 * c; ++total) {
    const std::size_t lo = total >= c ? total - (c - 1) : 0;
    const std::size_t hi = std::min(total, c - 1);
    const auto d = static_cast<Eigen::Index>(hi - lo + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t ni = lo; ni < hi; ++ni) {
      const std::size_t nj = total - ni;
      // <ni+1, nj-1| a_i^+ a_j |ni, nj> = sqrt((ni+1) nj)
      const double amp = t * std::sqrt(static_cast<double>((ni + 1) * nj));
      const auto k = static_cast<Eigen::Index>(ni - lo);
      g(k + 1, k) = amp;
      g(k, k + 1) = -amp;
    }
    blocks.push_back(g.exp());
  }
  return blocks;
}

inline FockState apply_pair_blocks(const FockState& psi, std::size_t i, std::size_t j,
                                   const std::vector<Eigen::MatrixXd>& blocks) {
  const std::size_t c = psi.cutoff();
  const std::size_t si = psi.stride(i);
  const std::size_t sj = psi.stride(j);
  const Amps& in = psi.amplitudes();
  Amps out(in.size());
  std::vector<std::size_t> spectators{0};
  for (std::size_t m = 0; m < psi.n_modes(); ++m) {
    if (m == i || m == j) continue;
    std::vector<std::size_t> grown;
    for (auto off : spectators) {
      for (std::size_t n = 0; n < c; ++n) grown.push_back(off + n * psi.stride(m));
    }
    spectators = std::move(grown);
  }
  for (auto off : spectators) {
    for (std::size_t total = 0; total + 1 < 2 * c; ++total) {
      const std::size_t lo = total >= c ? total - (c - 1) : 0;
      const std::size_t hi = std::min(total, c - 1);
      const auto& u = blocks[total];
      for (std::size_t row = lo; row <= hi; ++row) {
        cplx acc{};
        for (std::size_t col = lo; col <= hi; ++col) {
          acc += u(Eigen::Index(row - lo), Eigen::Index(col - lo)) *
                 in[off + col * si + (total - col) * sj];
        }
        out[off + row * si + (total - row) * sj] = acc;
      }
    }
  }
  return {c, psi.n_modes(), std::move(out)};
}

// exp((r/2) (a^+2 - a^2)) on the retained levels.
inline CMatrix squeeze_matrix(std::size_t cutoff, double r) {
  const auto c = static_cast<Eigen::Index>(cutoff);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(c, c);
  for (Eigen::Index n = 0; n + 2 < c; ++n) {
    // <n+2| a^+2 |n> = sqrt((n+1)(n+2))
    const double amp = 0.5 * r * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    g(n + 2, n) = amp;
    g(n, n + 2) = -amp;
  }
  return g.exp().cast<cplx>();
}

inline FockState phase(const FockState& psi, std::size_t mode, double phi) {
  Amps out = psi.amplitudes();
  const std::size_t c = psi.cutoff();
  const std::size_t s = psi.stride(mode);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] *= std::polar(1.0, phi * static_cast<double>((idx / s) % c));
  }
  return {c, psi.n_modes(), std::move(out)};
}

}  // namespace detail

inline FockState prepare(std::span<const cplx> alphas, std::size_t cutoff,
                         double tail_tol = kTailTolerance) {
  if (alphas.empty() || alphas.size() > 3) throw InvalidArgument("prepare: supports 1 to 3 modes");
  if (cutoff < 2) throw InvalidArgument("prepare: cutoff must be at least 2");
  std::vector<std::vector<cplx>> per_mode;
  for (const auto& a : alphas) {
    std::vector<cplx> coeffs(cutoff);
    coeffs[0] = std::exp(-0.5 * std::norm(a));
    double kept = std::norm(coeffs[0]);
    for (std::size_t n = 1; n < cutoff; ++n) {
      coeffs[n] = coeffs[n - 1] * a / std::sqrt(double(n));
      kept += std::norm(coeffs[n]);
    }
    // Poisson mass lost above the cutoff plus the top two retained levels.
    const double tail = std::max(0.0, 1.0 - kept) + std::norm(coeffs[cutoff - 1]) + std::norm(coeffs[cutoff - 2]);
    if (!(tail < tail_tol)) {
      std::ostringstream msg;
      msg << "prepare: coherent tail " << tail << " at cutoff " << cutoff << " exceeds " << tail_tol
          << " for |alpha| = " << std::abs(a) << " (recommended cutoff " << minimum_cutoff(a) << ")";
      throw TailOverflow(msg.str());
    }
    per_mode.push_back(std::move(coeffs));
  }
  std::size_t dim = 1;
  for (std::size_t m = 0; m < alphas.size(); ++m) dim *= cutoff;
  std::vector<cplx> amps(dim, cplx{1.0, 0.0});
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rest = idx;
    for (std::size_t m = alphas.size(); m-- > 0;) {
      amps[idx] *= per_mode[m][rest % cutoff];
      rest /= cutoff;
    }
  }
  double norm = 0.0;
  for (const auto& a : amps) norm += std::norm(a);
  for (auto& a : amps) a /= std::sqrt(norm);
  FockState psi(cutoff, alphas.size(), std::move(amps));
  detail::check_tail(psi, tail_tol, "prepare");
  return psi;
}

// Unitary of one element at a fixed cutoff, built once and applied to any
// number of states. Loss acts as the beam splitter coupling `mode` to
// `ancilla`, both of which must be inside the state's register.
class Propagator {
 public:
  Propagator(const Element& element, std::size_t cutoff) : cutoff_(cutoff) {
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, BeamSplitter>) {
            if (!(e.transmissivity >= 0.0 && e.transmissivity <= 1.0)) {
              throw InvalidArgument("fock::Propagator: transmissivity must lie in [0, 1]");
            }
            if (e.first == e.second) throw InvalidArgument("fock::Propagator: modes must be distinct");
            const double st = std::sqrt(e.transmissivity);
            const double sr = std::sqrt(1.0 - e.transmissivity);
            const double t = e.convention == BsConvention::splitter ? std::atan2(-sr, st)
                                                                    : std::atan2(sr, st);
            modes_ = {e.first, e.second};
            blocks_ = detail::pair_rotation_blocks(cutoff, t);
          } else if constexpr (std::is_same_v<E, Squeezer>) {
            if (!(e.r >= 0.0)) throw InvalidArgument("fock::Propagator: r must be >= 0");
            modes_ = {e.mode};
            single_ = detail::squeeze_matrix(cutoff, e.r);
          } else if constexpr (std::is_same_v<E, OamPhase>) {
            if (e.l < 1) throw InvalidArgument("fock::Propagator: l must be >= 1");
            modes_ = {e.mode};
            phase_ = 2.0 * e.l * e.theta;
          } else {
            if (!(e.eta > 0.0 && e.eta <= 1.0)) {
              throw InvalidArgument("fock::Propagator: eta must lie in (0, 1]");
            }
            if (e.mode == e.ancilla) throw InvalidArgument("fock::Propagator: modes must be distinct");
            modes_ = {e.mode, e.ancilla};
            blocks_ = detail::pair_rotation_blocks(
                cutoff, std::atan2(std::sqrt(1.0 - e.eta), std::sqrt(e.eta)));
          }
        },
        element);
  }

  FockState operator()(const FockState& psi, double tail_tol = kTailTolerance) const {
    if (psi.cutoff() != cutoff_) throw InvalidArgument("fock::Propagator: cutoff mismatch");
    for (auto m : modes_) {
      if (m >= psi.n_modes()) throw InvalidArgument("fock::apply: element mode outside register");
    }
    FockState out = modes_.size() == 2 ? detail::apply_pair_blocks(psi, modes_[0], modes_[1], blocks_)
                    : phase_ ? detail::phase(psi, modes_[0], *phase_)
                             : detail::apply_single_mode(psi, modes_[0], single_);
    const double drift = std::abs(std::sqrt(out.norm_squared()) - std::sqrt(psi.norm_squared()));
    if (drift > kNormTolerance) {
      std::ostringstream msg;
      msg << "fock::apply: norm drift " << drift;
      throw std::runtime_error(msg.str());
    }
    detail::check_tail(out, tail_tol, "fock::apply");
    return out;
  }

 private:
  std::size_t cutoff_;
  std::vector<std::size_t> modes_;
  std::vector<Eigen::MatrixXd> blocks_;
  CMatrix single_;
  std::optional<double> phase_;
};

inline FockState apply(const Element& element, const FockState& psi,
                       double tail_tol = kTailTolerance) {
  return Propagator(element, psi.cutoff())(psi, tail_tol);
}

// Convex mixture of pure two-mode signal states; arises when loss ancillas
// are traced out.
struct Branch {
  double weight = 1.0;
  FockState state;
};

class FockEnsemble {
 public:
  explicit FockEnsemble(FockState pure) { branches_.push_back({1.0, std::move(pure)}); }
  explicit FockEnsemble(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw InvalidArgument("FockEnsemble: no branches");
  }

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t n_modes() const { return branches_.front().state.n_modes(); }
  std::size_t cutoff() const { return branches_.front().state.cutoff(); }
  bool is_pure() const { return branches_.size() == 1; }

  const FockState& pure_state() const {
    if (!is_pure()) throw Unsupported("FockEnsemble: state is mixed");
    return branches_.front().state;
  }

 private:
  std::vector<Branch> branches_;
};

namespace detail {

inline FockState append_vacuum_mode(const FockState& psi) {
  std::vector<cplx> amps(psi.dim() * psi.cutoff());
  for (std::size_t i = 0; i < psi.dim(); ++i) amps[i * psi.cutoff()] = psi.amplitudes()[i];
  return {psi.cutoff(), psi.n_modes() + 1, std::move(amps)};
}

// Traces the last mode by splitting on its Fock occupation.
inline void trace_last_mode(const FockState& psi, double weight, std::vector<Branch>& out) {
  const std::size_t c = psi.cutoff();
  const std::size_t reduced = psi.dim() / c;
  for (std::size_t k = 0; k < c; ++k) {
    std::vector<cplx> amps(reduced);
    double p = 0.0;
    for (std::size_t i = 0; i < reduced; ++i) {
      amps[i] = psi.amplitudes()[i * c + k];
      p += std::norm(amps[i]);
    }
    if (weight * p < 1e-20) continue;
    for (auto& a : amps) a /= std::sqrt(p);
    out.push_back({weight * p, FockState(c, psi.n_modes() - 1, std::move(amps))});
  }
}

}  // namespace detail

// Runs a two-signal-mode element chain on a product coherent input. Loss
// channels borrow a fresh vacuum ancilla that is traced out immediately.
inline FockEnsemble run_chain(const std::vector<Element>& chain, cplx alpha_a, cplx alpha_b,
                              std::size_t cutoff, double tail_tol = kTailTolerance) {
  const std::vector<cplx> alphas{alpha_a, alpha_b};
  std::vector<Branch> branches{{1.0, prepare(alphas, cutoff, tail_tol)}};
  for (const auto& element : chain) {
    std::vector<Branch> next;
    if (const auto* loss = std::get_if<Loss>(&element)) {
      if (loss->mode > 1) throw InvalidArgument("fock::run_chain: loss must act on a signal mode");
      const Propagator couple(Loss{loss->eta, loss->mode, 2}, cutoff);
      for (const auto& b : branches) {
        const FockState joint = couple(detail::append_vacuum_mode(b.state), tail_tol / b.weight);
        detail::trace_last_mode(joint, b.weight, next);
      }
    } else {
      const Propagator step(element, cutoff);
      for (const auto& b : branches) next.push_back({b.weight, step(b.state, tail_tol / b.weight)});
    }
    branches = std::move(next);
  }
  return FockEnsemble(std::move(branches));
}

inline FockEnsemble run_scenario(const Scenario& s, std::size_t cutoff,
                                 LossPlacement placement = LossPlacement::reference,
                                 double tail_tol = kTailTolerance) {
  return run_chain(circuit_elements(s, placement), s.alpha, cplx{}, cutoff, tail_tol);
}

// ---------------------------------------------------------------------------
// Expectation values

namespace detail {

inline std::vector<cplx> lower(const FockState& psi, const std::vector<cplx>& v, std::size_t mode) {
  std::vector<cplx> out(v.size());
  const std::size_t c = psi.cutoff();
  const std::size_t s = psi.stride(mode);
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    const std::size_t n = (idx / s) % c;
    if (n > 0) out[idx - s] = std::sqrt(static_cast<double>(n)) * v[idx];
  }
  return out;
}

inline cplx inner(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  cplx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace detail

// Mean field and fluctuation moments of the signal modes, in the same layout
// as the Gaussian engine.
inline GaussianMoments oracle_moments(const FockEnsemble& rho) {
  const auto n = static_cast<Eigen::Index>(rho.n_modes());
  CVector mean = CVector::Zero(n);
  CMatrix raw_m = CMatrix::Zero(n, n);
  CMatrix raw_s = CMatrix::Zero(n, n);
  for (const auto& b : rho.branches()) {
    const auto& psi = b.state.amplitudes();
    std::vector<std::vector<cplx>> lowered;
    for (Eigen::Index i = 0; i < n; ++i) lowered.push_back(detail::lower(b.state, psi, std::size_t(i)));
    for (Eigen::Index i = 0; i < n; ++i) {
      mean[i] += b.weight * detail::inner(psi, lowered[i]);
      for (Eigen::Index j = 0; j < n; ++j) {
        raw_m(i, j) += b.weight * detail::inner(lowered[i], lowered[j]);
        raw_s(i, j) += b.weight * detail::inner(psi, detail::lower(b.state, lowered[j], std::size_t(i)));
      }
    }
  }
  GaussianMoments m;
  m.mean = mean;
  m.M = raw_m - mean.conjugate() * mean.transpose();
  m.S = raw_s - mean * mean.transpose();
  return m;
}

struct NumberOperator {
  std::vector<double> weights;  // sum_i w_i n_i
};

struct QuadratureOperator {
  std::size_t mode = 1;
  double phase = std::numbers::pi / 2.0;  // X = a e^{-i phase} + a^+ e^{i phase}
};

using OperatorSpec = std::variant<NumberOperator, QuadratureOperator>;

// Mean and variance of a number combination (read off the Fock-basis
// distribution) or of a quadrature (by direct operator action).
inline Stats moments_of(const FockEnsemble& rho, const OperatorSpec& spec) {
  double first = 0.0;
  double second = 0.0;
  if (const auto* num = std::get_if<NumberOperator>(&spec)) {
    if (num->weights.size() != rho.n_modes()) throw InvalidArgument("moments_of: weight length mismatch");
    for (const auto& b : rho.branches()) {
      const auto& psi = b.state.amplitudes();
      for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        const double p = b.weight * std::norm(psi[idx]);
        if (p == 0.0) continue;
        double value = 0.0;
        for (std::size_t m = 0; m < rho.n_modes(); ++m) {
          value += num->weights[m] * static_cast<double>(b.state.occupation(idx, m));
        }
        first += p * value;
        second += p * value * value;
      }
    }
  } else {
    const auto& q = std::get<QuadratureOperator>(spec);
    if (q.mode >= rho.n_modes()) throw InvalidArgument("moments_of: mode out of range");
    const cplx rot = std::polar(1.0, -q.phase);
    for (const auto& b : rho.branches()) {
      const auto& psi = b.state.amplitudes();
      const auto low = detail::lower(b.state, psi, q.mode);
      // X psi = rot a psi + conj(rot) a^+ psi; a^+ is the adjoint of the truncated a.
      std::vector<cplx> x(psi.size());
      const std::size_t c = b.state.cutoff();
      const std::size_t s = b.state.stride(q.mode);
      for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        x[idx] += rot * low[idx];
        const std::size_t n = (idx / s) % c;
        if (n + 1 < c) x[idx + s] += std::conj(rot) * std::sqrt(static_cast<double>(n + 1)) * psi[idx];
      }
      first += b.weight * detail::inner(psi, x).real();
      second += b.weight * detail::inner(x, x).real();
    }
  }
  return {first, second - first * first};
}

// ---------------------------------------------------------------------------
// Quantum Fisher information by finite differences of the probe state

enum class Angle { theta_a, theta_b, theta_d, theta_s };

namespace detail {

inline Scenario shifted(const Scenario& s, Angle wrt, double h) {
  Scenario out = s;
  switch (wrt) {
    case Angle::theta_a: out.theta_a += h; break;
    case Angle::theta_b: out.theta_b += h; break;
    case Angle::theta_d: out = s.with_difference_sum(s.theta_d() + h, s.theta_s()); break;
    case Angle::theta_s: out = s.with_difference_sum(s.theta_d(), s.theta_s() + h); break;
  }
  return out;
}

// State right after the Dove prisms.
inline FockState sensing_state(const Scenario& s, std::size_t cutoff, double tail_tol) {
  std::vector<Element> chain = circuit_elements(s);
  chain.pop_back();
  return run_chain(chain, s.alpha, cplx{}, cutoff, tail_tol).pure_state();
}

}  // namespace detail

// F = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2) with a central-difference derivative.
inline double qfi_finite_difference(const Scenario& s, Angle wrt, double delta = 1e-4,
                                    std::size_t cutoff = 40, double tail_tol = kTailTolerance) {
  validate(s);
  if (s.is_lossy()) throw Unsupported("qfi_finite_difference: probe must be pure (lossless)");
  if (!(delta > 0.0)) throw InvalidArgument("qfi_finite_difference: delta must be positive");
  const FockState psi = detail::sensing_state(s, cutoff, tail_tol);
  const FockState plus = detail::sensing_state(detail::shifted(s, wrt, delta), cutoff, tail_tol);
  const FockState minus = detail::sensing_state(detail::shifted(s, wrt, -delta), cutoff, tail_tol);
  std::vector<cplx> d(psi.dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (plus.amplitudes()[i] - minus.amplitudes()[i]) / (2.0 * delta);
  }
  const double dd = detail::inner(d, d).real();
  const double overlap = std::norm(detail::inner(psi.amplitudes(), d));
  return 4.0 * (dd - overlap);
}

}  // namespace oamwb::fock

namespace oamwb::fock {

struct AdaptiveRun {
  FockEnsemble ensemble;
  std::size_t cutoff = 0;
};

// Runs at `start` and raises the cutoff in `step` increments until the tail
// guard holds. Throws the last TailOverflow once `max_cutoff` is exceeded.
inline AdaptiveRun run_scenario_adaptive(const Scenario& s, std::size_t start = 40,
                                         std::size_t max_cutoff = 80, std::size_t step = 10,
                                         LossPlacement placement = LossPlacement::reference,
                                         double tail_tol = kTailTolerance) {
  for (std::size_t c = start;; c += step) {
    try {
      return {run_scenario(s, c, placement, tail_tol), c};
    } catch (const TailOverflow&) {
      if (c + step > max_cutoff) throw;
    }
  }
}

}  // namespace oamwb::fock
