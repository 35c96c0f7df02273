#include "qdb/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdb/error.hpp"

namespace qdb::model {

namespace {

using evidence::FocalSet;
using evidence::MassEntry;
using evidence::MassFunction;
using quantum::ComplexMatrix;
using quantum::ComplexVector;
using quantum::MeasurementMask;

constexpr std::size_t kActions = 3;
constexpr std::size_t kDimension = 6;

// Known frame element indices.
constexpr std::size_t kB1Target = 0;
constexpr std::size_t kB1Other = 1;
constexpr std::size_t kB2Target = 2;
constexpr std::size_t kB2Other = 3;

// Unknown frame element indices.
constexpr std::size_t kTarget = 0;
constexpr std::size_t kOther = 1;
constexpr std::size_t kUnresolvedBelief = 2;

ComplexMatrix payoff_block(double h) {
  ComplexMatrix block = ComplexMatrix::Zero(3, 3);
  block(0, 0) = h;
  block(0, 2) = 1.0;
  block(1, 1) = 1.0;
  block(2, 0) = 1.0;
  block(2, 2) = -h;
  return block;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, std::string(what) + " must lie in [0, 1]");
  }
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(ErrorCode::OutOfRange, std::string(what) + " must be finite");
}

std::array<FocalSet, 6> known_focal_sets() {
  const auto b1t = FocalSet::singleton(kB1Target);
  const auto b1o = FocalSet::singleton(kB1Other);
  const auto b2t = FocalSet::singleton(kB2Target);
  const auto b2o = FocalSet::singleton(kB2Other);
  return {b1t, b1t | b1o, b1o, b2t, b2t | b2o, b2o};
}

std::array<FocalSet, 3> unknown_focal_sets() {
  const auto target = FocalSet::singleton(kTarget);
  const auto other = FocalSet::singleton(kOther);
  const auto belief = FocalSet::singleton(kUnresolvedBelief);
  return {target | belief, target | other | belief, other | belief};
}

void require_frame_size(const MassFunction& m, std::size_t n, const char* what) {
  if (m.frame().size() != n) {
    throw Error(ErrorCode::InvariantViolation,
                std::string(what) + " must be defined on a " + std::to_string(n) +
                    "-element frame");
  }
}

double pignistic_target_closed_form(double h, double t) {
  return conditional_action_probs_closed_form(h, t).pignistic_target();
}

// Golden-section search for a local minimum of f on [a, b].
template <typename F>
double golden_minimize(F&& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  // Endpoints are candidates too; golden section only sees the interior.
  return std::min({x, a, b}, [&](double u, double v) { return f(u) < f(v); });
}

}  // namespace

void BeliefActionBasis::validate() const {
  std::set<std::string> labels;
  for (const auto& b : beliefs) labels.insert(b);
  for (const auto& a : actions) labels.insert(a);
  if (labels.size() != 5 || labels.count("")) {
    throw Error(ErrorCode::InvalidFrame, "belief and action labels must be nonempty and distinct");
  }
}

std::array<std::string, 6> BeliefActionBasis::basis_labels() const {
  std::array<std::string, 6> out;
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t a = 0; a < kActions; ++a) out[b * kActions + a] = actions[a] + beliefs[b];
  }
  return out;
}

evidence::Frame BeliefActionBasis::known_frame() const {
  return evidence::Frame({actions[0] + beliefs[0], actions[2] + beliefs[0],
                          actions[0] + beliefs[1], actions[2] + beliefs[1]});
}

evidence::Frame BeliefActionBasis::unknown_frame() const {
  return evidence::Frame({actions[0], actions[2], beliefs[0] + "|" + beliefs[1]});
}

void QdbParams::validate() const {
  require_finite(h1, "h1");
  require_finite(h2, "h2");
  if (h1 < kFitLowerH || h1 > kFitUpperH || h2 < kFitLowerH || h2 > kFitUpperH) {
    throw Error(ErrorCode::OutOfRange, "payoff parameters must lie in [-0.7, 1.0]");
  }
  require_probability(p_b1, "p_b1");
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::OutOfRange, "evolution time must be positive and finite");
  }
  if (sign != InterferenceSign::Positive && sign != InterferenceSign::Negative) {
    throw Error(ErrorCode::OutOfRange, "interference sign must be +1 or -1");
  }
}

std::array<double, 6> QdbResult::known_masses() const {
  std::array<double, 6> out{};
  const auto sets = known_focal_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) out[i] = m_known.mass_of(sets[i]);
  return out;
}

std::array<double, 3> QdbResult::unknown_masses() const {
  std::array<double, 3> out{};
  const auto sets = unknown_focal_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) out[i] = m_unknown.mass_of(sets[i]);
  return out;
}

quantum::StateVector initial_state(double p_b1, const BeliefActionBasis& basis) {
  require_probability(p_b1, "p_b1");
  basis.validate();
  const double a1 = std::sqrt(p_b1 / 3.0);
  const double a2 = std::sqrt((1.0 - p_b1) / 3.0);
  ComplexVector psi(kDimension);
  psi << a1, a1, a1, a2, a2, a2;
  const auto labels = basis.basis_labels();
  return quantum::StateVector(std::move(psi), {labels.begin(), labels.end()});
}

quantum::HermitianGenerator build_hamiltonian(double h1, double h2) {
  require_finite(h1, "h1");
  require_finite(h2, "h2");
  ComplexMatrix h = ComplexMatrix::Zero(kDimension, kDimension);
  h.block(0, 0, 3, 3) = payoff_block(h1);
  h.block(3, 3, 3, 3) = payoff_block(h2);
  return quantum::HermitianGenerator(std::move(h));
}

ActionProbabilities conditional_action_probs(double h, double t) {
  require_finite(h, "h");
  require_finite(t, "t");
  const quantum::HermitianGenerator block(payoff_block(h));
  const double a = 1.0 / std::sqrt(3.0);
  const quantum::StateVector psi(ComplexVector::Constant(3, a));
  const auto evolved = quantum::evolve(block, t, psi);
  return {evolved.probability(0), evolved.probability(1), evolved.probability(2)};
}

ActionProbabilities conditional_action_probs_closed_form(double h, double t) {
  require_finite(h, "h");
  require_finite(t, "t");
  // The target/other pair rotates under (h sigma_z + sigma_x), whose square
  // is lambda^2 I.
  const double lambda2 = 1.0 + h * h;
  const double lambda = std::sqrt(lambda2);
  const double c2 = std::cos(lambda * t) * std::cos(lambda * t);
  const double s2 = std::sin(lambda * t) * std::sin(lambda * t);
  const double target = (c2 + s2 * (1.0 + h) * (1.0 + h) / lambda2) / 3.0;
  const double other = (c2 + s2 * (1.0 - h) * (1.0 - h) / lambda2) / 3.0;
  return {target, 1.0 / 3.0, other};
}

MassFunction bpa_known(const QdbParams& params, const BeliefActionBasis& basis) {
  params.validate();
  const auto psi0 = initial_state(params.p_b1, basis);
  const auto u = quantum::unitary_of(build_hamiltonian(params.h1, params.h2), params.t);
  const std::array<double, 2> priors{params.p_b1, 1.0 - params.p_b1};
  const auto sets = known_focal_sets();

  std::vector<MassEntry> entries;
  entries.reserve(sets.size());
  for (std::size_t b = 0; b < 2; ++b) {
    if (priors[b] == 0.0) continue;
    const auto block = MeasurementMask::range(kDimension, b * kActions, kActions);
    const auto evolved = quantum::apply(u, quantum::condition_renormalize(block, psi0));
    for (std::size_t a = 0; a < kActions; ++a) {
      const std::size_t index = b * kActions + a;
      const double p = quantum::project(MeasurementMask(kDimension, {index}), evolved).probability;
      entries.push_back({sets[index], priors[b] * p});
    }
  }
  return MassFunction::create(basis.known_frame(), entries);
}

MassFunction bpa_unknown(const QdbParams& params, const BeliefActionBasis& basis) {
  params.validate();
  const auto psi0 = initial_state(params.p_b1, basis);
  const auto evolved = quantum::evolve(build_hamiltonian(params.h1, params.h2), params.t, psi0);
  const auto sets = unknown_focal_sets();

  std::vector<MassEntry> entries;
  entries.reserve(sets.size());
  for (std::size_t a = 0; a < kActions; ++a) {
    const MeasurementMask action(kDimension, {a, kActions + a});
    entries.push_back({sets[a], quantum::project(action, evolved).probability});
  }
  return MassFunction::create(basis.unknown_frame(), entries);
}

EntanglementDegree entanglement_degree(const MassFunction& m_known,
                                       const MassFunction& m_unknown) {
  EntanglementDegree out;
  out.ed_known = evidence::deng_entropy(m_known);
  out.ed_unknown = evidence::deng_entropy(m_unknown);
  if (!(out.ed_unknown > 0.0)) {
    throw Error(ErrorCode::ZeroEntropyDenominator,
                "unknown-condition BPA has zero Deng entropy");
  }
  out.gamma = (out.ed_unknown - out.ed_known) / out.ed_unknown;
  return out;
}

KnownDistribution distribute_known(const MassFunction& m_known, double p_b1) {
  require_frame_size(m_known, 4, "known-condition BPA");
  require_probability(p_b1, "p_b1");
  const auto bet = evidence::ppt(m_known);
  const double joint_b1 = bet[kB1Target];
  const double joint_b2 = bet[kB2Target];

  KnownDistribution out;
  out.p_total = joint_b1 + joint_b2;
  if (p_b1 > 0.0) out.p_cond_target_b1 = joint_b1 / p_b1;
  if (p_b1 < 1.0) out.p_cond_target_b2 = joint_b2 / (1.0 - p_b1);
  out.degenerate_belief = !(p_b1 > 0.0 && p_b1 < 1.0);
  return out;
}

UnknownDistribution distribute_unknown(const MassFunction& m_unknown, double gamma,
                                       InterferenceSign sign) {
  require_frame_size(m_unknown, 3, "unknown-condition BPA");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::OutOfRange, "entanglement degree must be finite and nonnegative");
  }
  const auto sets = unknown_focal_sets();
  const double target = m_unknown.mass_of(sets[0]);
  const double uncertain = m_unknown.mass_of(sets[1]);

  UnknownDistribution out;
  out.interference = sign_value(sign) * gamma * uncertain;
  const double raw = target + (0.5 + sign_value(sign) * gamma) * uncertain;
  out.p_unknown = std::clamp(raw, 0.0, 1.0);
  out.clamped = out.p_unknown != raw;
  return out;
}

QdbResult run_pipeline(const QdbParams& params, const BeliefActionBasis& basis) {
  auto m_known = bpa_known(params, basis);
  auto m_unknown = bpa_unknown(params, basis);
  const auto degree = entanglement_degree(m_known, m_unknown);
  const auto known = distribute_known(m_known, params.p_b1);
  const auto unknown = distribute_unknown(m_unknown, degree.gamma, params.sign);

  return QdbResult{
      .m_known = std::move(m_known),
      .m_unknown = std::move(m_unknown),
      .ed_known = degree.ed_known,
      .ed_unknown = degree.ed_unknown,
      .gamma = degree.gamma,
      .p_cond_target_b1 = known.p_cond_target_b1,
      .p_cond_target_b2 = known.p_cond_target_b2,
      .p_total = known.p_total,
      .p_unknown = unknown.p_unknown,
      .interference = unknown.interference,
      .clamped = unknown.clamped,
      .degenerate_belief = known.degenerate_belief,
  };
}

FitBracket fit_bracket(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::OutOfRange, "evolution time must be positive and finite");
  }
  auto f = [t](double h) { return pignistic_target_closed_form(h, t); };
  constexpr double kProbe = 1e-4;
  if (!(f(kProbe) > f(-kProbe))) {
    throw Error(ErrorCode::NonMonotoneBracket,
                "target probability does not increase with h at h = 0");
  }

  FitBracket out;
  out.h_low = golden_minimize(f, kFitLowerH, 0.0);
  out.h_high = golden_minimize([&](double h) { return -f(h); }, 0.0, kFitUpperH);
  out.p_low = f(out.h_low);
  out.p_high = f(out.h_high);

  constexpr int kSamples = 512;
  double previous = out.p_low;
  for (int i = 1; i <= kSamples; ++i) {
    const double h = out.h_low + (out.h_high - out.h_low) * i / kSamples;
    const double current = f(h);
    if (current < previous - 1e-14) {
      throw Error(ErrorCode::NonMonotoneBracket,
                  "target probability is not monotone on the fitting bracket");
    }
    previous = current;
  }
  return out;
}

double fit_h(double target_cond_prob, double t) {
  require_probability(target_cond_prob, "target probability");
  const auto bracket = fit_bracket(t);
  if (target_cond_prob < bracket.p_low || target_cond_prob > bracket.p_high) {
    throw Error(ErrorCode::TargetUnreachable,
                "target " + std::to_string(target_cond_prob) + " outside reachable range [" +
                    std::to_string(bracket.p_low) + ", " + std::to_string(bracket.p_high) + "]");
  }
  double lo = bracket.h_low;
  double hi = bracket.h_high;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pignistic_target_closed_form(mid, t) < target_cond_prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qdb::model
