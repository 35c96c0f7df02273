#pragma once

// Quantum dynamic belief model over two beliefs x three actions.
//
// Basis order is fixed to
//   [b1*target, b1*uncertain, b1*other, b2*target, b2*uncertain, b2*other].
// Each belief block evolves under [[h,0,1],[0,1,0],[1,0,-h]]; the middle
// (uncertain) state decouples and only picks up a phase.
//
// Known-condition masses live on the frame {b1*target, b1*other, b2*target,
// b2*other}, with b*uncertain represented by the pair {b*target, b*other}.
// Unknown-condition masses live on the frame {target, other, b1|b2}, where
// the last element marks the unresolved belief; this yields the cardinalities
// 2 (target), 3 (uncertain) and 2 (other) used by the entanglement degree.

#include <array>
#include <numbers>
#include <optional>
#include <string>

#include "qdb/evidence.hpp"
#include "qdb/quantum.hpp"

namespace qdb::model {

inline constexpr double kDefaultTime = std::numbers::pi / 2.0;
inline constexpr double kFitLowerH = -0.7;
inline constexpr double kFitUpperH = 1.0;

enum class InterferenceSign : int { Positive = 1, Negative = -1 };

constexpr double sign_value(InterferenceSign s) { return static_cast<int>(s); }

struct BeliefActionBasis {
  std::array<std::string, 2> beliefs{"G", "B"};
  std::array<std::string, 3> actions{"A", "U", "W"};  // target, uncertain, other

  void validate() const;
  // Six labels in basis order, action first ("AG", "UG", ...).
  std::array<std::string, 6> basis_labels() const;
  evidence::Frame known_frame() const;
  evidence::Frame unknown_frame() const;
};

struct QdbParams {
  double h1 = 0.0;    // payoff parameter for belief b1
  double h2 = 0.0;    // payoff parameter for belief b2
  double p_b1 = 0.5;  // prior probability of belief b1
  double t = kDefaultTime;
  InterferenceSign sign = InterferenceSign::Positive;

  // Throws OutOfRange.
  void validate() const;
};

struct ActionProbabilities {
  double target = 0.0;
  double uncertain = 0.0;
  double other = 0.0;

  // Target probability once the uncertain share is split evenly.
  double pignistic_target() const { return target + 0.5 * uncertain; }
};

struct EntanglementDegree {
  double ed_known = 0.0;
  double ed_unknown = 0.0;
  double gamma = 0.0;
};

struct KnownDistribution {
  std::optional<double> p_cond_target_b1;
  std::optional<double> p_cond_target_b2;
  double p_total = 0.0;
  bool degenerate_belief = false;  // a prior of 0 or 1 left a conditional undefined
};

struct UnknownDistribution {
  double p_unknown = 0.0;
  double interference = 0.0;
  bool clamped = false;
};

struct QdbResult {
  evidence::MassFunction m_known;
  evidence::MassFunction m_unknown;
  double ed_known = 0.0;
  double ed_unknown = 0.0;
  double gamma = 0.0;
  std::optional<double> p_cond_target_b1;
  std::optional<double> p_cond_target_b2;
  double p_total = 0.0;
  double p_unknown = 0.0;
  double interference = 0.0;
  bool clamped = false;
  bool degenerate_belief = false;

  // Masses in basis order (m_known) and action order (m_unknown).
  std::array<double, 6> known_masses() const;
  std::array<double, 3> unknown_masses() const;
};

quantum::StateVector initial_state(double p_b1, const BeliefActionBasis& basis = {});

quantum::HermitianGenerator build_hamiltonian(double h1, double h2);

// Evolves (1,1,1)/sqrt(3) under one belief block and measures each action.
ActionProbabilities conditional_action_probs(double h, double t);

// Analytic form of the same probabilities.
ActionProbabilities conditional_action_probs_closed_form(double h, double t);

evidence::MassFunction bpa_known(const QdbParams& params, const BeliefActionBasis& basis = {});
evidence::MassFunction bpa_unknown(const QdbParams& params, const BeliefActionBasis& basis = {});

// gamma = (E_d2 - E_d1) / E_d2. Throws ZeroEntropyDenominator when E_d2 == 0.
EntanglementDegree entanglement_degree(const evidence::MassFunction& m_known,
                                       const evidence::MassFunction& m_unknown);

KnownDistribution distribute_known(const evidence::MassFunction& m_known, double p_b1);

UnknownDistribution distribute_unknown(const evidence::MassFunction& m_unknown, double gamma,
                                       InterferenceSign sign);

QdbResult run_pipeline(const QdbParams& params, const BeliefActionBasis& basis = {});

// Segment of the fitting bracket on which the pignistic target probability
// increases with h.
struct FitBracket {
  double h_low = 0.0;
  double h_high = 0.0;
  double p_low = 0.0;   // pignistic target probability at h_low
  double p_high = 0.0;  // pignistic target probability at h_high
};

// Throws NonMonotoneBracket when no increasing segment through h = 0 exists.
FitBracket fit_bracket(double t);

// Solves conditional_action_probs(h, t).pignistic_target() == target by
// bisection on fit_bracket(t). Throws TargetUnreachable outside its range.
double fit_h(double target_cond_prob, double t = kDefaultTime);

}  // namespace qdb::model
