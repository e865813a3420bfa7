/**
 * @brief Small dense complex matrix kernel.
 *
 * Storage and products come from Eigen. The Hermitian eigensolver is a cyclic
 * complex Jacobi iteration, adequate for the N <= 16 envelope this library
 * targets. Unitary exponentials are formed from the eigendecomposition.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lca/error.hpp"

namespace lca {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kHermiticityTol = 1e-10;

inline double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator needs square matrices of equal size");
  }
  return a * b - b * a;
}

inline ComplexMatrix diagonal_matrix(std::span<const double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return m;
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

inline bool is_hermitian(const ComplexMatrix& h) {
  return h.rows() == h.cols() && (h - h.adjoint()).norm() <= kHermiticityTol * std::max(1.0, h.norm());
}

/// Nearest unitary in Frobenius norm (polar factor W V^dagger of the SVD).
inline ComplexMatrix reunitarize(const ComplexMatrix& u) {
  Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// A square complex matrix with ||U^dagger U - I||_F <= 1e-10, checked on construction.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "unitary must be square");
    if (!m_.allFinite()) throw Error(ErrorCode::NotUnitary, "matrix has non-finite entries");
    const double defect = unitarity_defect(m_);
    if (defect > kUnitarityTol) {
      throw Error(ErrorCode::NotUnitary, "||U^dagger U - I||_F = " + std::to_string(defect));
    }
  }

  /// Project onto U(N) first when the drift is above tolerance.
  static UnitaryMatrix repaired(ComplexMatrix m) {
    if (unitarity_defect(m) > kUnitarityTol) m = reunitarize(m);
    return UnitaryMatrix(std::move(m));
  }

  static UnitaryMatrix identity(int n) { return UnitaryMatrix(ComplexMatrix::Identity(n, n)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return repaired(a.m_ * b.m_);
  }

 private:
  ComplexMatrix m_;
};

struct HermitianEigen {
  std::vector<double> values;  // descending
  UnitaryMatrix vectors;       // column k pairs with values[k]
};

/**
 * Eigendecomposition H = V diag(values) V^dagger by cyclic complex Jacobi
 * rotations. Stops when the off-diagonal norm falls to 1e-12 ||H||_F, or
 * after 100 sweeps.
 */
inline HermitianEigen hermitian_eigen(const ComplexMatrix& h_in) {
  if (!is_hermitian(h_in)) throw Error(ErrorCode::NotHermitian, "hermitian_eigen needs a Hermitian matrix");
  const Eigen::Index n = h_in.rows();
  ComplexMatrix h = 0.5 * (h_in + h_in.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = h.norm();
  const double target = 1e-12 * scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
  };

  bool converged = scale == 0.0 || off_norm() <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(h(p, q));
        if (mag == 0.0) continue;
        // Phase-rotate to a real symmetric 2x2 block, then apply the classical rotation.
        const Complex phase = h(p, q) / mag;
        const double theta = (h(q, q).real() - h(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {  // h <- h G
          const Complex hp = h(k, p), hq = h(k, q);
          h(k, p) = hp * gpp + hq * gqp;
          h(k, q) = hp * gpq + hq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // h <- G^dagger h
          const Complex hp = h(p, k), hq = h(q, k);
          h(p, k) = std::conj(gpp) * hp + std::conj(gqp) * hq;
          h(q, k) = std::conj(gpq) * hp + std::conj(gqq) * hq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {  // v <- v G
          const Complex vp = v(k, p), vq = v(k, q);
          v(k, p) = vp * gpp + vq * gqp;
          v(k, q) = vp * gpq + vq * gqq;
        }
      }
    }
    converged = off_norm() <= target;
  }
  if (!converged) throw Error(ErrorCode::EigenNoConvergence, "Jacobi did not converge in 100 sweeps");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return h(a, a).real() > h(b, b).real(); });
  HermitianEigen out;
  ComplexMatrix sorted(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values.push_back(h(order[k], order[k]).real());
    sorted.col(k) = v.col(order[k]);
  }
  out.vectors = UnitaryMatrix::repaired(std::move(sorted));
  return out;
}

/// exp(i s H) = V diag(e^{i s h}) V^dagger for a given eigendecomposition of H.
inline UnitaryMatrix unitary_exp(const HermitianEigen& eig, double s) {
  const ComplexMatrix& v = eig.vectors.matrix();
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(eig.values.size()));
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    phases(static_cast<Eigen::Index>(k)) = std::polar(1.0, s * eig.values[k]);
  }
  return UnitaryMatrix::repaired(v * phases.asDiagonal() * v.adjoint());
}

inline UnitaryMatrix unitary_exp(const ComplexMatrix& h, double s) { return unitary_exp(hermitian_eigen(h), s); }

/**
 * Reproducible random stream. A stream is keyed by (seed, stream id); split()
 * derives an independent child keyed by a hash of the parent key and the
 * child index, so tasks never share generator state.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  Rng split(std::uint64_t child) const { return Rng(seed_, mix(stream_ ^ mix(child + 0x9e3779b97f4a7c15ULL))); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of diag(R) divided out.
inline UnitaryMatrix random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "random_unitary needs dim >= 1");
  ComplexMatrix z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) z(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return UnitaryMatrix::repaired(std::move(q));
}

inline UnitaryMatrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

/// Random Hermitian matrix (GUE-like) scaled to the given Frobenius norm.
inline ComplexMatrix random_hermitian(int dim, Rng& rng, double frobenius = 1.0) {
  ComplexMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = Complex(rng.normal(), rng.normal());
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  const double nrm = h.norm();
  if (nrm > 0.0) h *= frobenius / nrm;
  return h;
}

}  // namespace lca
