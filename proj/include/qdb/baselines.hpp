#pragma once

// Comparison models: the Markov belief-action model (law of total
// probability) and a four-state quantum belief-action-entanglement model.
//
// BAE basis order: [b1*target, b1*other, b2*target, b2*other].

#include "qdb/dataset.hpp"
#include "qdb/model.hpp"
#include "qdb/quantum.hpp"

namespace qdb::baselines {

inline constexpr double kBaeLowerH = -1.0;
inline constexpr double kBaeUpperH = 1.0;
inline constexpr double kBaeLowerC = -2.0;
inline constexpr double kBaeUpperC = 2.0;
inline constexpr double kBaeFitTolerance = 1e-4;

double markov_total_probability(double p_b1, double p_cond_b1, double p_cond_b2);

struct BaeParams {
  double h_g = 0.0;
  double h_b = 0.0;
  double c = 0.0;  // entanglement strength
  double t = model::kDefaultTime;
  double p_b1 = 0.5;

  void validate() const;
};

struct BaePrediction {
  double p_cond_target_b1 = 0.0;
  double p_cond_target_b2 = 0.0;
  double p_total = 0.0;
  double p_unknown = 0.0;
};

struct BaeFit {
  BaeParams params;
  BaePrediction prediction;
  double residual = 0.0;  // |p_unknown - observed p_a|
  bool converged = false;  // residual <= kBaeFitTolerance
};

// H1 (normalized 2x2 payoff blocks) + H2 (belief-action coupling scaled by c).
quantum::HermitianGenerator bae_hamiltonian(const BaeParams& params);

BaePrediction bae_predict(const BaeParams& params);

// Fits h_g, h_b to the observed conditionals with c = 0, then picks the c in
// [-2, 2] that best matches p_a (the matching root closest to 0 when one
// exists). Throws TargetUnreachable when a conditional cannot be matched.
BaeFit bae_fit(const ExperimentRow& observed, double t = model::kDefaultTime);

}  // namespace qdb::baselines
