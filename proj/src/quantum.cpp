#include "qdb/quantum.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qdb/error.hpp"

namespace qdb::quantum {

namespace {

void require_dimension(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(actual) +
                    " does not match " + std::to_string(expected));
  }
}

void require_finite_time(double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::OutOfRange, "evolution time must be finite");
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes, std::vector<std::string> labels,
                         bool normalized)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)), normalized_(normalized) {
  if (!labels_.empty()) {
    require_dimension(dimension(), labels_.size(), "basis labels");
  }
  if (normalized_ && std::abs(squared_norm() - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::OutOfRange, "state vector is flagged normalized but has norm^2 " +
                                           std::to_string(squared_norm()));
  }
}

HermitianGenerator::HermitianGenerator(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw Error(ErrorCode::NotHermitian, "generator must be a nonempty square matrix");
  }
  const double deviation = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!(deviation <= kHermitianTolerance)) {
    throw Error(ErrorCode::NotHermitian,
                "H - H^dagger has an entry of magnitude " + std::to_string(deviation));
  }
}

UnitaryOperator::UnitaryOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "unitary must be square");
  }
  const auto n = entries_.rows();
  const double deviation =
      (entries_.adjoint() * entries_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(deviation <= kNormTolerance)) {
    throw Error(ErrorCode::OutOfRange, "matrix is not unitary within 1e-9");
  }
}

TransitionMatrix::TransitionMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "transition matrix must be square");
  }
}

MeasurementMask::MeasurementMask(std::size_t dimension, std::vector<std::size_t> selected)
    : dimension_(dimension), selected_(std::move(selected)) {
  std::sort(selected_.begin(), selected_.end());
  selected_.erase(std::unique(selected_.begin(), selected_.end()), selected_.end());
  if (!selected_.empty() && selected_.back() >= dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "measurement index out of range");
  }
}

MeasurementMask MeasurementMask::all(std::size_t dimension) {
  std::vector<std::size_t> idx(dimension);
  for (std::size_t i = 0; i < dimension; ++i) idx[i] = i;
  return MeasurementMask(dimension, std::move(idx));
}

MeasurementMask MeasurementMask::none(std::size_t dimension) {
  return MeasurementMask(dimension, {});
}

MeasurementMask MeasurementMask::range(std::size_t dimension, std::size_t first,
                                       std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = first + i;
  return MeasurementMask(dimension, std::move(idx));
}

bool MeasurementMask::selects(std::size_t index) const {
  return std::binary_search(selected_.begin(), selected_.end(), index);
}

UnitaryOperator unitary_of(const HermitianGenerator& h, double t) {
  require_finite_time(t);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.entries());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigendecompositionFailure, "Hermitian eigensolver did not converge");
  }
  const ComplexMatrix& v = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  ComplexVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::polar(1.0, -lambda(k) * t);
  }
  return UnitaryOperator(v * phases.asDiagonal() * v.adjoint());
}

StateVector apply(const UnitaryOperator& u, const StateVector& psi) {
  require_dimension(u.dimension(), psi.dimension(), "evolve");
  return StateVector(u.entries() * psi.amplitudes(), psi.labels(), psi.normalized());
}

StateVector evolve(const HermitianGenerator& h, double t, const StateVector& psi) {
  require_dimension(h.dimension(), psi.dimension(), "evolve");
  return apply(unitary_of(h, t), psi);
}

TransitionMatrix transition_probs(const UnitaryOperator& u) {
  return TransitionMatrix(u.entries().cwiseAbs2());
}

Projection project(const MeasurementMask& mask, const StateVector& psi) {
  require_dimension(mask.dimension(), psi.dimension(), "project");
  ComplexVector masked = ComplexVector::Zero(psi.amplitudes().size());
  for (std::size_t i : mask.selected()) {
    masked(static_cast<Eigen::Index>(i)) = psi[i];
  }
  const double probability = masked.squaredNorm();
  return {StateVector(std::move(masked), psi.labels(), false), probability};
}

StateVector condition_renormalize(const MeasurementMask& mask, const StateVector& psi) {
  auto [masked, probability] = project(mask, psi);
  if (!(probability > 0.0)) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "conditioning on a zero-probability event");
  }
  return StateVector(masked.amplitudes() / std::sqrt(probability), psi.labels(), true);
}

UnitaryOperator series_exponential_oracle(const HermitianGenerator& h, double t) {
  require_finite_time(t);
  const auto n = static_cast<Eigen::Index>(h.dimension());
  const ComplexMatrix a = Complex(0.0, -t) * h.entries();

  // Scale so that the 1-norm of the exponent is at most 1/2.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);

  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return UnitaryOperator(std::move(result));
}

}  // namespace qdb::quantum
