#include "qdb/baselines.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "qdb/error.hpp"

namespace qdb::baselines {

namespace {

using quantum::ComplexMatrix;
using quantum::ComplexVector;

constexpr std::size_t kDimension = 4;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, std::string(what) + " must lie in [0, 1]");
  }
}

double target_probability(const quantum::UnitaryOperator& u, const ComplexVector& psi) {
  const quantum::StateVector evolved = quantum::apply(u, quantum::StateVector(psi));
  return quantum::project(quantum::MeasurementMask(kDimension, {0, 2}), evolved).probability;
}

// Conditional target probability of one belief when c = 0.
double uncoupled_conditional(double h, double t) {
  return bae_predict({.h_g = h, .h_b = 0.0, .c = 0.0, .t = t, .p_b1 = 1.0}).p_cond_target_b1;
}

double fit_payoff(double target, double t, const char* what) {
  require_probability(target, what);
  const double p_lo = uncoupled_conditional(kBaeLowerH, t);
  const double p_hi = uncoupled_conditional(kBaeUpperH, t);
  if (!(p_hi > p_lo)) {
    throw Error(ErrorCode::NonMonotoneBracket, "BAE conditional does not increase with h");
  }
  if (target < p_lo || target > p_hi) {
    throw Error(ErrorCode::TargetUnreachable,
                std::string(what) + " = " + std::to_string(target) + " is not reachable");
  }
  double lo = kBaeLowerH;
  double hi = kBaeUpperH;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (uncoupled_conditional(mid, t) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double markov_total_probability(double p_b1, double p_cond_b1, double p_cond_b2) {
  require_probability(p_b1, "p_b1");
  require_probability(p_cond_b1, "p_cond_b1");
  require_probability(p_cond_b2, "p_cond_b2");
  return p_b1 * p_cond_b1 + (1.0 - p_b1) * p_cond_b2;
}

void BaeParams::validate() const {
  for (double v : {h_g, h_b, c, t}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::OutOfRange, "BAE parameters must be finite");
  }
  require_probability(p_b1, "p_b1");
}

quantum::HermitianGenerator bae_hamiltonian(const BaeParams& params) {
  params.validate();
  ComplexMatrix h = ComplexMatrix::Zero(kDimension, kDimension);
  const double hs[2] = {params.h_g, params.h_b};
  for (int b = 0; b < 2; ++b) {
    const double scale = 1.0 / std::sqrt(1.0 + hs[b] * hs[b]);
    const int o = 2 * b;
    h(o, o) = scale * hs[b];
    h(o, o + 1) = scale;
    h(o + 1, o) = scale;
    h(o + 1, o + 1) = -scale * hs[b];
  }
  const double k = params.c / std::sqrt(2.0);
  // clang-format off
  Eigen::Matrix4d coupling;
  coupling << -1, 0, 1,  0,
               0, 1, 0,  1,
               1, 0, 1,  0,
               0, 1, 0, -1;
  // clang-format on
  h += k * coupling.cast<quantum::Complex>();
  return quantum::HermitianGenerator(std::move(h));
}

BaePrediction bae_predict(const BaeParams& params) {
  const auto u = quantum::unitary_of(bae_hamiltonian(params), params.t);
  const double a = 1.0 / std::sqrt(2.0);

  ComplexVector known_b1(kDimension);
  known_b1 << a, a, 0, 0;
  ComplexVector known_b2(kDimension);
  known_b2 << 0, 0, a, a;
  const double w1 = std::sqrt(params.p_b1);
  const double w2 = std::sqrt(1.0 - params.p_b1);
  const ComplexVector unknown = w1 * known_b1 + w2 * known_b2;

  BaePrediction out;
  out.p_cond_target_b1 = target_probability(u, known_b1);
  out.p_cond_target_b2 = target_probability(u, known_b2);
  out.p_total = params.p_b1 * out.p_cond_target_b1 + (1.0 - params.p_b1) * out.p_cond_target_b2;
  out.p_unknown = target_probability(u, unknown);
  return out;
}

BaeFit bae_fit(const ExperimentRow& observed, double t) {
  observed.validate();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::OutOfRange, "evolution time must be positive and finite");
  }
  BaeParams params{.h_g = fit_payoff(observed.p_a_given_g, t, "p_a_given_g"),
                   .h_b = fit_payoff(observed.p_a_given_b, t, "p_a_given_b"),
                   .c = 0.0,
                   .t = t,
                   .p_b1 = observed.p_g};

  auto mismatch = [&](double c) {
    BaeParams trial = params;
    trial.c = c;
    return bae_predict(trial).p_unknown - observed.p_a;
  };

  constexpr int kGrid = 400;
  constexpr double kStep = (kBaeUpperC - kBaeLowerC) / kGrid;
  constexpr double kRootTolerance = 1e-13;
  std::optional<double> best_root;
  double best_c = 0.0;
  double best_abs = std::numeric_limits<double>::infinity();
  double prev_c = kBaeLowerC;
  double prev_f = mismatch(prev_c);
  auto consider_root = [&](double c) {
    if (!best_root || std::abs(c) < std::abs(*best_root)) best_root = c;
  };
  for (int i = 0; i <= kGrid; ++i) {
    // Computed from the span so that c = 0 is hit exactly.
    const double c = kBaeLowerC + (kBaeUpperC - kBaeLowerC) * i / kGrid;
    const double f = i == 0 ? prev_f : mismatch(c);
    if (std::abs(f) < best_abs) {
      best_abs = std::abs(f);
      best_c = c;
    }
    if (std::abs(f) <= kRootTolerance) {
      consider_root(c);
    } else if (i > 0 && std::abs(prev_f) > kRootTolerance && (f < 0.0) != (prev_f < 0.0)) {
      double lo = prev_c;
      double hi = c;
      double f_lo = prev_f;
      for (int k = 0; k < 100 && hi - lo > 1e-14; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = mismatch(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      consider_root(0.5 * (lo + hi));
    }
    prev_c = c;
    prev_f = f;
  }

  if (best_root) {
    params.c = *best_root;
  } else {
    // No exact match: golden-section refinement of |mismatch| near the best grid point.
    double a = std::max(kBaeLowerC, best_c - kStep);
    double b = std::min(kBaeUpperC, best_c + kStep);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 100 && b - a > 1e-12; ++k) {
      const double c1 = b - inv_phi * (b - a);
      const double c2 = a + inv_phi * (b - a);
      if (std::abs(mismatch(c1)) < std::abs(mismatch(c2))) {
        b = c2;
      } else {
        a = c1;
      }
    }
    const double refined = 0.5 * (a + b);
    params.c = std::abs(mismatch(refined)) < best_abs ? refined : best_c;
  }

  BaeFit out;
  out.params = params;
  out.prediction = bae_predict(params);
  out.residual = std::abs(out.prediction.p_unknown - observed.p_a);
  out.converged = out.residual <= kBaeFitTolerance;
  return out;
}

}  // namespace qdb::baselines
