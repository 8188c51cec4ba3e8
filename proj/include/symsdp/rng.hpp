#pragma once

// Deterministic random sampling for the relaxation engine.
//
// All randomness flows through Rng, a thin wrapper around std::mt19937_64
// (whose output sequence is pinned by the C++ standard). The uniform and
// Gaussian transforms are implemented here instead of using
// std::*_distribution, which the standard leaves implementation-defined:
// fixtures seeded with the same value must produce the same matrices on
// every platform and standard library.

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace symsdp {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent child stream; pure function of (seed, index).
  Rng child(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x51ed2701)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1p-53;
  }

  // Uniform integer in [0, n) by rejection; unbiased and portable.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Standard normal via Box-Muller. One value per call; the partner
  // sample is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_gaussian() {
    return {gaussian(), gaussian()};
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Eigen::MatrixXd gaussian_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

inline Eigen::MatrixXcd complex_gaussian_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
  return m;
}

// Symmetric matrix with GOE-distributed spectrum (unnormalised scale).
inline Eigen::MatrixXd goe_matrix(Rng& rng, int n) {
  Eigen::MatrixXd g = gaussian_matrix(rng, n, n);
  return (g + g.transpose()) / std::sqrt(2.0);
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// phases of the R diagonal absorbed into Q.
inline Eigen::MatrixXcd haar_unitary(Rng& rng, int n) {
  Eigen::MatrixXcd g = complex_gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0) ? (d / a) : 1.0;
  }
  return q;
}

inline Eigen::VectorXcd haar_pure_state(Rng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  v.normalize();
  return v;
}

// Full-rank density matrix from the Hilbert-Schmidt ensemble.
inline Eigen::MatrixXcd random_density(Rng& rng, int n) {
  Eigen::MatrixXcd g = complex_gaussian_matrix(rng, n, n);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// Rank-r orthogonal projector from the first r columns of a Haar unitary.
inline Eigen::MatrixXcd random_projector(Rng& rng, int n, int rank) {
  if (rank <= 0) return Eigen::MatrixXcd::Zero(n, n);
  if (rank >= n) return Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd u = haar_unitary(rng, n);
  Eigen::MatrixXcd v = u.leftCols(rank);
  return v * v.adjoint();
}

}  // namespace symsdp
