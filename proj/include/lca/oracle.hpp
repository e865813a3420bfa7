/**
 * @brief Brute-force and numeric cross-checks for the closed-form results.
 *
 * Nothing in this header calls into topology.hpp: the checks here are the
 * independent side of every closed-form/oracle pair.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "lca/error.hpp"
#include "lca/matcore.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"

namespace lca {

/// Hard cap on brute-force permutation sweeps (10! permutations).
inline constexpr int kBruteForceMaxN = 10;

/// Diagonals paired by a permutation point: a_p (rho) against b_p (theta).
struct ExpandedDiagonal {
  std::vector<double> a;
  std::vector<double> b;
};

struct SignatureTriple {
  std::int64_t d0 = 0;
  std::int64_t dplus = 0;
  std::int64_t dminus = 0;
  friend bool operator==(const SignatureTriple&, const SignatureTriple&) = default;
};

/// a = rho expanded (non-increasing), b_p = theta expanded at position pi(p).
inline ExpandedDiagonal expanded_diagonal(const Permutation& pi, const std::vector<double>& rho_expanded,
                                          const std::vector<double>& theta_expanded) {
  if (pi.size() != static_cast<int>(rho_expanded.size()) || rho_expanded.size() != theta_expanded.size()) {
    throw Error(ErrorCode::DimensionMismatch, "permutation and diagonals differ in length");
  }
  ExpandedDiagonal d{rho_expanded, std::vector<double>(theta_expanded.size())};
  for (int p = 0; p < pi.size(); ++p) d.b[p] = theta_expanded[pi[p]];
  return d;
}

/// Expanded diagonal with integer stand-in eigenvalues (r-1, ..., 0) for each profile.
inline ExpandedDiagonal expanded_diagonal(const Permutation& pi, const DegeneracyProfile& rows,
                                          const DegeneracyProfile& cols) {
  auto ladder = [](const DegeneracyProfile& prof) {
    std::vector<double> out;
    for (int b = 0; b < prof.parts(); ++b) out.insert(out.end(), prof.margins[b], double(prof.parts() - 1 - b));
    return out;
  };
  return expanded_diagonal(pi, ladder(rows), ladder(cols));
}

/// Default sign tolerance: 1e-12 times the largest |gap product|.
inline double default_sign_tol(const ExpandedDiagonal& d) {
  double m = 0.0;
  for (std::size_t x = 0; x < d.a.size(); ++x)
    for (std::size_t y = x + 1; y < d.a.size(); ++y) m = std::max(m, std::abs((d.a[x] - d.a[y]) * (d.b[x] - d.b[y])));
  return 1e-12 * m;
}

/**
 * Signature of the Hessian form -sum_{b<c} (a_b - a_c)(b_b - b_c)(x^2 + y^2):
 * each off-diagonal pair contributes two directions, the N diagonal phase
 * directions are flat.
 */
inline SignatureTriple numeric_signature(const ExpandedDiagonal& d, double tol) {
  if (d.a.size() != d.b.size()) throw Error(ErrorCode::DimensionMismatch, "diagonals differ in length");
  const std::size_t n = d.a.size();
  SignatureTriple t;
  t.d0 = static_cast<std::int64_t>(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double s = (d.a[x] - d.a[y]) * (d.b[x] - d.b[y]);
      if (s < -tol) t.dplus += 2;
      else if (s > tol) t.dminus += 2;
      else t.d0 += 2;
    }
  }
  return t;
}

inline SignatureTriple numeric_signature(const ExpandedDiagonal& d) { return numeric_signature(d, default_sign_tol(d)); }

struct BruteForceEntry {
  ContingencyTable table;
  std::uint64_t permutations = 0;
};

/// Every table reached by some permutation of S_N, in canonical order, with the number of permutations reaching it.
inline std::vector<BruteForceEntry> brute_force_tables(const DegeneracyProfile& rows, const DegeneracyProfile& cols) {
  if (rows.n != cols.n) throw Error(ErrorCode::MarginMismatch, "margins have different totals");
  if (rows.n > kBruteForceMaxN) {
    throw Error(ErrorCode::BruteForceCapExceeded,
                "N=" + std::to_string(rows.n) + " exceeds the brute-force cap of " + std::to_string(kBruteForceMaxN));
  }
  std::map<ContingencyTable, std::uint64_t> seen;
  std::vector<int> m(static_cast<std::size_t>(rows.n));
  std::iota(m.begin(), m.end(), 0);
  do {
    ++seen[table_of_permutation(Permutation(m), rows, cols)];
  } while (std::next_permutation(m.begin(), m.end()));
  std::vector<BruteForceEntry> out;
  out.reserve(seen.size());
  for (auto& [k, c] : seen) out.push_back({k, c});
  return out;
}

/// Permutation matrix with column p carrying its 1 in row pi(p).
inline UnitaryMatrix permutation_matrix(const Permutation& pi) {
  ComplexMatrix m = ComplexMatrix::Zero(pi.size(), pi.size());
  for (int p = 0; p < pi.size(); ++p) m(pi[p], p) = 1.0;
  return UnitaryMatrix(std::move(m));
}

/// Block-diagonal unitary with independent Haar blocks of the given sizes.
inline UnitaryMatrix random_block_unitary(const std::vector<int>& blocks, Rng& rng) {
  const int n = std::accumulate(blocks.begin(), blocks.end(), 0);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  int off = 0;
  for (int b : blocks) {
    m.block(off, off, b, b) = random_unitary(b, rng).matrix();
    off += b;
  }
  return UnitaryMatrix(std::move(m));
}

/// True when u only mixes indices inside the given consecutive blocks.
inline bool is_block_diagonal(const ComplexMatrix& u, const std::vector<int>& blocks, double tol = 1e-14) {
  const auto label = detail::block_labels(blocks);
  if (static_cast<Eigen::Index>(label.size()) != u.rows()) return false;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if (label[i] != label[j] && std::abs(u(i, j)) > tol) return false;
  return true;
}

struct CriticalPoint {
  UnitaryMatrix u;
  UnitaryMatrix p;  // stabilizer of theta (column margins)
  UnitaryMatrix q;  // stabilizer of rho (row margins)
};

/// U = P pi Q with Haar-random P in U(m) and Q in U(n): a point of the double coset of pi.
inline CriticalPoint random_critical_point(const Permutation& pi, const DegeneracyProfile& rows,
                                           const DegeneracyProfile& cols, std::uint64_t seed) {
  if (rows.n != cols.n || pi.size() != rows.n) throw Error(ErrorCode::MarginMismatch, "inconsistent margins");
  Rng rng(seed);
  Rng rp = rng.split(0), rq = rng.split(1);
  UnitaryMatrix p = random_block_unitary(cols.margins, rp);
  UnitaryMatrix q = random_block_unitary(rows.margins, rq);
  UnitaryMatrix u = p * permutation_matrix(pi) * q;
  return {std::move(u), std::move(p), std::move(q)};
}

/// ||[theta, U rho U^dagger]||_F.
inline double commutator_residual(const UnitaryMatrix& u, const std::vector<double>& rho_diag,
                                  const std::vector<double>& theta_diag) {
  if (static_cast<int>(rho_diag.size()) != u.dim() || rho_diag.size() != theta_diag.size()) {
    throw Error(ErrorCode::DimensionMismatch, "diagonals do not match the unitary's dimension");
  }
  const ComplexMatrix x = u.matrix() * diagonal_matrix(rho_diag) * u.matrix().adjoint();
  return commutator(diagonal_matrix(theta_diag), x).norm();
}

/// J(U) = Re tr(U rho U^dagger theta).
inline double landscape_at(const ComplexMatrix& u, const std::vector<double>& rho_diag,
                           const std::vector<double>& theta_diag) {
  double j = 0.0;
  const Eigen::Index n = u.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    // (U rho U^dagger)_{ii} = sum_k |u_ik|^2 rho_k
    double xi = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) xi += std::norm(u(i, k)) * rho_diag[k];
    j += xi * theta_diag[i];
  }
  return j;
}

/// Hessian quadratic form tr(A X A theta - A^2 X theta) with X = U rho U^dagger.
inline double hessian_form_value(const ComplexMatrix& a, const UnitaryMatrix& u, const std::vector<double>& rho_diag,
                                 const std::vector<double>& theta_diag) {
  if (!is_hermitian(a)) throw Error(ErrorCode::NotHermitian, "Hessian direction must be Hermitian");
  if (a.rows() != u.dim()) throw Error(ErrorCode::DimensionMismatch, "direction and unitary differ in size");
  const ComplexMatrix x = u.matrix() * diagonal_matrix(rho_diag) * u.matrix().adjoint();
  const ComplexMatrix th = diagonal_matrix(theta_diag);
  return (a * x * a * th - a * a * x * th).trace().real();
}

/// Elementary Hermitian direction: real (E_bc + E_cb) or imaginary (i E_bc - i E_cb); b == c gives E_bb.
inline ComplexMatrix elementary_direction(int n, int b, int c, bool imaginary) {
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  if (b == c) {
    a(b, b) = 1.0;
  } else if (imaginary) {
    a(b, c) = Complex(0, 1);
    a(c, b) = Complex(0, -1);
  } else {
    a(b, c) = 1.0;
    a(c, b) = 1.0;
  }
  return a;
}

}  // namespace lca
