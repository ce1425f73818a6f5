#pragma once

// Heisenberg-picture algebra for multimode linear optics with single-mode
// squeezing. A transform maps output annihilators onto input ladder operators:
//
//   c_i = sum_j ( A_ij a_j + B_ij a_j^dagger )
//
// Moments are taken on product coherent inputs, for which every fluctuation
// operator is Gaussian and Wick contraction is exact.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "oamwb/errors.hpp"

namespace oamwb {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kInvariantTolerance = 1e-12;

enum class ModeRole { signal_a, signal_b, loss_ancilla };

// Register convention: signal_a is mode 0, signal_b is mode 1, loss ancillas
// follow in the order they were attached.
struct ModeLabel {
  std::size_t index = 0;
  ModeRole role = ModeRole::signal_a;

  static constexpr ModeLabel signal_a() { return {0, ModeRole::signal_a}; }
  static constexpr ModeLabel signal_b() { return {1, ModeRole::signal_b}; }
  static constexpr ModeLabel ancilla(std::size_t ordinal) {
    return {2 + ordinal, ModeRole::loss_ancilla};
  }
  static constexpr ModeLabel at(std::size_t index) {
    if (index == 0) return signal_a();
    if (index == 1) return signal_b();
    return ancilla(index - 2);
  }
};

class BogoliubovTransform {
 public:
  BogoliubovTransform(CMatrix a, CMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || a_.rows() != a_.cols() || b_.rows() != a_.rows() ||
        b_.cols() != a_.cols()) {
      throw InvalidArgument("BogoliubovTransform: A and B must be equal non-empty square matrices");
    }
  }

  static BogoliubovTransform identity(std::size_t n_modes) {
    if (n_modes == 0) throw InvalidArgument("identity: n_modes must be >= 1");
    const auto n = static_cast<Eigen::Index>(n_modes);
    return {CMatrix::Identity(n, n), CMatrix::Zero(n, n)};
  }

  std::size_t n_modes() const { return static_cast<std::size_t>(a_.rows()); }
  const CMatrix& A() const { return a_; }
  const CMatrix& B() const { return b_; }

  // Same transform acting on a larger register; new modes pass through.
  BogoliubovTransform extended(std::size_t n_modes) const {
    if (n_modes < this->n_modes()) throw InvalidArgument("extended: cannot shrink a register");
    const auto n = static_cast<Eigen::Index>(n_modes);
    const auto k = a_.rows();
    CMatrix a = CMatrix::Identity(n, n);
    CMatrix b = CMatrix::Zero(n, n);
    a.topLeftCorner(k, k) = a_;
    b.topLeftCorner(k, k) = b_;
    return {std::move(a), std::move(b)};
  }

  // max( |A A^+ - B B^+ - I|_max , |A B^T - (A B^T)^T|_max )
  double symplectic_defect() const {
    const auto n = a_.rows();
    const CMatrix comm = a_ * a_.adjoint() - b_ * b_.adjoint() - CMatrix::Identity(n, n);
    const CMatrix sym = a_ * b_.transpose();
    const CMatrix asym = sym - sym.transpose();
    return std::max(comm.cwiseAbs().maxCoeff(), asym.cwiseAbs().maxCoeff());
  }

  bool is_symplectic(double tol = kInvariantTolerance) const { return symplectic_defect() < tol; }

 private:
  CMatrix a_;
  CMatrix b_;
};

// Chains `first` then `second`: substitutes the first element's output
// operators into the second element's input.
inline BogoliubovTransform compose(const BogoliubovTransform& second,
                                   const BogoliubovTransform& first) {
  if (second.n_modes() != first.n_modes()) {
    throw InvalidArgument("compose: mode count mismatch (" + std::to_string(second.n_modes()) +
                          " vs " + std::to_string(first.n_modes()) + ")");
  }
  return {second.A() * first.A() + second.B() * first.B().conjugate(),
          second.A() * first.B() + second.B() * first.A().conjugate()};
}

// Coherent amplitude per input mode; zero means vacuum. Modes from index 2 on
// are loss ancillas and are always vacuum.
class InputState {
 public:
  explicit InputState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InvalidArgument("InputState: empty register");
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
      if (!std::isfinite(amplitudes_[i].real()) || !std::isfinite(amplitudes_[i].imag())) {
        throw InvalidArgument("InputState: non-finite amplitude");
      }
      if (i >= 2 && amplitudes_[i] != cplx{0.0, 0.0}) {
        throw InvalidArgument("InputState: loss-ancilla modes must start in vacuum");
      }
    }
  }

  // |alpha> on signal_a, vacuum everywhere else.
  static InputState coherent(cplx alpha, std::size_t n_modes) {
    if (n_modes == 0) throw InvalidArgument("InputState: empty register");
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(n_modes));
    amps[0] = alpha;
    return InputState(std::move(amps));
  }

  std::size_t n_modes() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }

 private:
  CVector amplitudes_;
};

// mean_i = <c_i>, M_ij = <dc_i^+ dc_j>, S_ij = <dc_i dc_j>, with dc = c - mean.
struct GaussianMoments {
  CVector mean;
  CMatrix M;
  CMatrix S;

  std::size_t n_modes() const { return static_cast<std::size_t>(mean.size()); }
};

inline GaussianMoments moments(const BogoliubovTransform& t, const InputState& in) {
  if (t.n_modes() != in.n_modes()) {
    throw InvalidArgument("moments: transform has " + std::to_string(t.n_modes()) +
                          " modes, input has " + std::to_string(in.n_modes()));
  }
  const CVector& alpha = in.amplitudes();
  GaussianMoments m;
  m.mean = t.A() * alpha + t.B() * alpha.conjugate();
  m.M = t.B().conjugate() * t.B().transpose();
  m.S = t.A() * t.B().transpose();
  return m;
}

struct Stats {
  double mean = 0.0;
  double variance = 0.0;
};

// Cov(n_i, n_j) for all mode pairs, by Wick expansion around the mean field.
inline RMatrix number_covariance(const GaussianMoments& m) {
  const auto n = m.mean.size();
  RMatrix cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx mi = m.mean[i];
      const cplx mj = m.mean[j];
      const cplx mij = m.M(i, j);
      const cplx sij = m.S(i, j);
      // <dc_i dc_j^+> = delta_ij + <dc_j^+ dc_i>
      const cplx dij = (i == j ? 1.0 : 0.0) + std::conj(mij);
      const cplx linear = std::conj(mi) * mj * dij + mi * std::conj(mj) * mij +
                          std::conj(mi) * std::conj(mj) * sij + mi * mj * std::conj(sij);
      const cplx quadratic = mij * dij + std::conj(sij) * sij;
      cov(i, j) = (linear + quadratic).real();
    }
  }
  return cov;
}

inline double photon_number(const GaussianMoments& m, std::size_t mode) {
  if (mode >= m.n_modes()) throw InvalidArgument("photon_number: mode out of range");
  const auto i = static_cast<Eigen::Index>(mode);
  return std::norm(m.mean[i]) + m.M(i, i).real();
}

// Mean and variance of sum_i w_i n_i.
inline Stats number_stats(const GaussianMoments& m, const RVector& weights) {
  if (static_cast<std::size_t>(weights.size()) != m.n_modes()) {
    throw InvalidArgument("number_stats: weight vector length does not match mode count");
  }
  Stats out;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    out.mean += weights[i] * photon_number(m, static_cast<std::size_t>(i));
  }
  out.variance = weights.dot(number_covariance(m) * weights);
  return out;
}

// Cov(sum_i u_i n_i, sum_j v_j n_j).
inline double number_cross_covariance(const GaussianMoments& m, const RVector& u,
                                      const RVector& v) {
  if (static_cast<std::size_t>(u.size()) != m.n_modes() ||
      static_cast<std::size_t>(v.size()) != m.n_modes()) {
    throw InvalidArgument("number_cross_covariance: weight vector length does not match mode count");
  }
  return u.dot(number_covariance(m) * v);
}

// X_phi = c e^{-i phi} + c^+ e^{i phi}; vacuum variance is 1. phi = pi/2 gives
// Y = -i (c - c^+).
inline Stats quadrature_stats(const GaussianMoments& m, ModeLabel mode, double phase) {
  if (mode.index >= m.n_modes()) throw InvalidArgument("quadrature_stats: mode out of range");
  const auto i = static_cast<Eigen::Index>(mode.index);
  const cplx rot = std::polar(1.0, -phase);
  return {2.0 * (m.mean[i] * rot).real(),
          1.0 + 2.0 * m.M(i, i).real() + 2.0 * (rot * rot * m.S(i, i)).real()};
}

}  // namespace oamwb
