/**
 * @brief Eigenvalue spectra of the initial state and the observable.
 *
 * A Spectrum holds the distinct eigenvalues of a diagonal operator in strictly
 * decreasing order together with their multiplicities. The multiplicities
 * (the degeneracy profile) are the margins that drive all of the
 * contingency-table combinatorics downstream.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lca/error.hpp"

namespace lca {

/// Default tolerance used to merge nearly equal diagonal entries.
inline constexpr double kDefaultClusterTol = 1e-9;

/// Threshold on |tr(rho) - 1| above which reports carry a warning.
inline constexpr double kTraceWarningTol = 1e-9;

class Spectrum {
 public:
  Spectrum() = default;

  /// Validating constructor: distinct must be strictly decreasing and finite,
  /// multiplicities positive and of the same length.
  Spectrum(std::vector<double> distinct, std::vector<int> multiplicities)
      : distinct_(std::move(distinct)), multiplicities_(std::move(multiplicities)) {
    if (distinct_.empty()) throw Error(ErrorCode::InvalidSpectrum, "spectrum has no eigenvalues");
    if (distinct_.size() != multiplicities_.size()) {
      throw Error(ErrorCode::InvalidSpectrum,
                  "distinct and multiplicities differ in length (" + std::to_string(distinct_.size()) +
                      " vs " + std::to_string(multiplicities_.size()) + ")");
    }
    for (std::size_t i = 0; i < distinct_.size(); ++i) {
      if (!std::isfinite(distinct_[i])) {
        throw Error(ErrorCode::InvalidSpectrum, "eigenvalue " + std::to_string(i) + " is not finite");
      }
      if (multiplicities_[i] < 1) {
        throw Error(ErrorCode::InvalidSpectrum, "multiplicity " + std::to_string(i) + " is not positive");
      }
      if (i > 0 && !(distinct_[i - 1] > distinct_[i])) {
        std::ostringstream os;
        os.precision(17);
        os << "distinct eigenvalues not strictly decreasing at index " << i << " (" << distinct_[i - 1]
           << " then " << distinct_[i] << ")";
        throw Error(ErrorCode::InvalidSpectrum, os.str());
      }
    }
  }

  const std::vector<double>& distinct() const noexcept { return distinct_; }
  const std::vector<int>& multiplicities() const noexcept { return multiplicities_; }

  /// Number of distinct eigenvalues.
  int levels() const noexcept { return static_cast<int>(distinct_.size()); }

  /// Total dimension N.
  int dim() const noexcept { return std::accumulate(multiplicities_.begin(), multiplicities_.end(), 0); }

  /// Eigenvalues repeated by multiplicity, non-increasing.
  std::vector<double> expanded() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dim()));
    for (std::size_t i = 0; i < distinct_.size(); ++i) out.insert(out.end(), multiplicities_[i], distinct_[i]);
    return out;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < distinct_.size(); ++i) t += distinct_[i] * multiplicities_[i];
    return t;
  }

  /// Largest absolute eigenvalue.
  double spectral_norm() const {
    double m = 0.0;
    for (double v : distinct_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> distinct_;
  std::vector<int> multiplicities_;
};

/// The multiplicities of a spectrum, in the spectrum's (decreasing) order.
struct DegeneracyProfile {
  std::vector<int> margins;
  int n = 0;

  DegeneracyProfile() = default;

  explicit DegeneracyProfile(std::vector<int> m) : margins(std::move(m)) {
    if (margins.empty()) throw Error(ErrorCode::InvalidArgument, "degeneracy profile is empty");
    for (int v : margins) {
      if (v < 1) throw Error(ErrorCode::InvalidArgument, "degeneracy profile entries must be positive");
    }
    n = std::accumulate(margins.begin(), margins.end(), 0);
  }

  int parts() const noexcept { return static_cast<int>(margins.size()); }

  friend bool operator==(const DegeneracyProfile&, const DegeneracyProfile&) = default;
};

/**
 * Cluster raw diagonal entries into a Spectrum.
 *
 * Values are sorted descending, then grouped greedily: a value joins the
 * current cluster when it lies within cluster_tol of that cluster's first
 * member. Each cluster is represented by the mean of its members.
 */
inline Spectrum build_spectrum(std::vector<double> values, double cluster_tol = kDefaultClusterTol) {
  if (values.empty()) throw Error(ErrorCode::InvalidSpectrum, "no diagonal values given");
  if (!(cluster_tol >= 0.0) || !std::isfinite(cluster_tol)) {
    throw Error(ErrorCode::InvalidArgument, "cluster_tol must be a finite non-negative number");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpectrum, "diagonal value is not finite");
  }
  std::sort(values.begin(), values.end(), std::greater<>());

  std::vector<double> reps;
  std::vector<int> mult;
  std::size_t start = 0;
  while (start < values.size()) {
    const double anchor = values[start];
    std::size_t end = start + 1;
    while (end < values.size() && anchor - values[end] <= cluster_tol) ++end;
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += values[k];
    reps.push_back(sum / static_cast<double>(end - start));
    mult.push_back(static_cast<int>(end - start));
    start = end;
  }
  for (std::size_t i = 1; i < reps.size(); ++i) {
    if (!(reps[i - 1] > reps[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "cluster representatives " << reps[i - 1] << " and " << reps[i] << " are not strictly decreasing";
      throw Error(ErrorCode::ClusterOverlap, os.str());
    }
  }
  return Spectrum(std::move(reps), std::move(mult));
}

inline DegeneracyProfile degeneracy_profile(const Spectrum& s) { return DegeneracyProfile(s.multiplicities()); }

/// Smallest gap between consecutive distinct eigenvalues (infinity for a single level).
inline double min_gap(const Spectrum& s) {
  double gap = std::numeric_limits<double>::infinity();
  const auto& d = s.distinct();
  for (std::size_t i = 1; i < d.size(); ++i) gap = std::min(gap, d[i - 1] - d[i]);
  return gap;
}

/**
 * Split every eigenvalue of multiplicity k into {v, v - delta, ..., v - (k-1) delta}.
 * Requires delta * max(multiplicity) < min_gap / 2 so the global order survives.
 */
inline Spectrum perturbed_spectrum(const Spectrum& s, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::PerturbationTooLarge, "delta must be a finite positive number");
  }
  const int kmax = *std::max_element(s.multiplicities().begin(), s.multiplicities().end());
  const double gap = min_gap(s);
  if (!(delta * kmax < 0.5 * gap)) {
    std::ostringstream os;
    os << "delta*max_multiplicity = " << delta * kmax << " is not below half the minimum gap " << 0.5 * gap;
    throw Error(ErrorCode::PerturbationTooLarge, os.str());
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(s.dim()));
  for (int i = 0; i < s.levels(); ++i) {
    for (int k = 0; k < s.multiplicities()[i]; ++k) out.push_back(s.distinct()[i] - k * delta);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i - 1] > out[i])) {
      throw Error(ErrorCode::PerturbationTooLarge, "split eigenvalues collide at index " + std::to_string(i));
    }
  }
  return Spectrum(std::move(out), std::vector<int>(static_cast<std::size_t>(s.dim()), 1));
}

}  // namespace lca
