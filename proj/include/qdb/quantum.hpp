#pragma once

// Small dense complex linear algebra for belief-action dynamics: Hermitian
// generators, the unitary e^{-iHt}, measurement projectors and transition
// probabilities. Intended for dimensions of a handful of basis states.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdb::quantum {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-9;

class StateVector {
 public:
  // Throws DimensionMismatch if labels are given with the wrong length, and
  // OutOfRange if `normalized` is claimed but the squared norm is not 1.
  StateVector(ComplexVector amplitudes, std::vector<std::string> labels = {},
              bool normalized = true);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  bool normalized() const { return normalized_; }

  double squared_norm() const { return amplitudes_.squaredNorm(); }
  double probability(std::size_t index) const { return std::norm(amplitudes_(index)); }
  Complex operator[](std::size_t index) const { return amplitudes_(index); }

 private:
  ComplexVector amplitudes_;
  std::vector<std::string> labels_;
  bool normalized_;
};

class HermitianGenerator {
 public:
  // Throws NotHermitian when the matrix is not square or H != H^dagger.
  explicit HermitianGenerator(ComplexMatrix entries);

  const ComplexMatrix& entries() const { return entries_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  ComplexMatrix entries_;
};

class UnitaryOperator {
 public:
  // Throws OutOfRange when U^dagger U deviates from I by more than 1e-9.
  explicit UnitaryOperator(ComplexMatrix entries);

  const ComplexMatrix& entries() const { return entries_; }
  std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }

  UnitaryOperator operator*(const UnitaryOperator& rhs) const {
    return UnitaryOperator(entries_ * rhs.entries_);
  }

 private:
  ComplexMatrix entries_;
};

// Doubly stochastic matrix T_ij = |U_ij|^2.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(RealMatrix entries);

  const RealMatrix& entries() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  RealMatrix entries_;
};

// Diagonal 0/1 projector given by the retained basis indices.
class MeasurementMask {
 public:
  MeasurementMask(std::size_t dimension, std::vector<std::size_t> selected);

  static MeasurementMask all(std::size_t dimension);
  static MeasurementMask none(std::size_t dimension);
  static MeasurementMask range(std::size_t dimension, std::size_t first, std::size_t count);

  std::size_t dimension() const { return dimension_; }
  const std::vector<std::size_t>& selected() const { return selected_; }
  bool selects(std::size_t index) const;

 private:
  std::size_t dimension_;
  std::vector<std::size_t> selected_;
};

struct Projection {
  StateVector state;   // un-normalized masked vector
  double probability;  // ||M psi||^2
};

// e^{-iHt} through the eigendecomposition H = V diag(lambda) V^dagger.
UnitaryOperator unitary_of(const HermitianGenerator& h, double t);

StateVector evolve(const HermitianGenerator& h, double t, const StateVector& psi);
StateVector apply(const UnitaryOperator& u, const StateVector& psi);

TransitionMatrix transition_probs(const UnitaryOperator& u);

Projection project(const MeasurementMask& mask, const StateVector& psi);

// Masked state divided by its norm. Throws ZeroProbabilityBranch when the
// mask carries no probability.
StateVector condition_renormalize(const MeasurementMask& mask, const StateVector& psi);

// Independent route to e^{-iHt}: scaling and squaring of a truncated Taylor
// series. Used to cross-check unitary_of.
UnitaryOperator series_exponential_oracle(const HermitianGenerator& h, double t);

}  // namespace qdb::quantum
