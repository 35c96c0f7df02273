#include "qdb/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "qdb/error.hpp"

namespace qdb::evidence {

Frame::Frame(std::vector<std::string> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw Error(ErrorCode::InvalidFrame, "frame must have at least one element");
  }
  if (elements_.size() > kMaxFrameSize) {
    throw Error(ErrorCode::InvalidFrame,
                "frame has " + std::to_string(elements_.size()) +
                    " elements; at most 64 are supported");
  }
  std::unordered_set<std::string> seen;
  for (const auto& e : elements_) {
    if (!seen.insert(e).second) {
      throw Error(ErrorCode::InvalidFrame, "duplicate frame element '" + e + "'");
    }
  }
}

std::optional<std::size_t> Frame::index_of(const std::string& label) const {
  auto it = std::find(elements_.begin(), elements_.end(), label);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

FocalSet Frame::full() const {
  if (elements_.size() == 64) return FocalSet{~std::uint64_t{0}};
  return FocalSet{(std::uint64_t{1} << elements_.size()) - 1};
}

FocalSet Frame::complement(FocalSet set) const {
  return FocalSet{full().bits() & ~set.bits()};
}

FocalSet Frame::subset(std::span<const std::string> labels) const {
  if (labels.empty()) {
    throw Error(ErrorCode::EmptyFocalSet, "focal set must be nonempty");
  }
  FocalSet out;
  for (const auto& label : labels) {
    auto idx = index_of(label);
    if (!idx) {
      throw Error(ErrorCode::NotSubsetOfFrame, "'" + label + "' is not a frame element");
    }
    out = out | FocalSet::singleton(*idx);
  }
  return out;
}

std::string Frame::describe(FocalSet set) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!set.contains(i)) continue;
    if (!first) os << ',';
    os << elements_[i];
    first = false;
  }
  os << '}';
  return os.str();
}

MassFunction MassFunction::create(Frame frame, std::span<const MassEntry> raw) {
  std::vector<MassEntry> kept;
  kept.reserve(raw.size());
  std::unordered_set<std::uint64_t> seen;
  double total = 0.0;
  for (const auto& entry : raw) {
    if (entry.set.empty()) {
      throw Error(ErrorCode::EmptyFocalSet, "the empty set cannot carry mass");
    }
    if (!frame.contains(entry.set)) {
      throw Error(ErrorCode::NotSubsetOfFrame, "focal set is not a subset of the frame");
    }
    if (!std::isfinite(entry.mass)) {
      throw Error(ErrorCode::OutOfRange, "mass must be finite");
    }
    if (entry.mass < 0.0) {
      throw Error(ErrorCode::NegativeMass,
                  "negative mass on " + frame.describe(entry.set));
    }
    if (!seen.insert(entry.set.bits()).second) {
      throw Error(ErrorCode::DuplicateFocalSet,
                  "duplicate focal set " + frame.describe(entry.set));
    }
    total += entry.mass;
    if (entry.mass > 0.0) kept.push_back(entry);
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "masses sum to " << total << ", expected 1";
    throw Error(ErrorCode::MassSumViolation, os.str());
  }
  return MassFunction(std::move(frame), std::move(kept));
}

double MassFunction::mass_of(FocalSet set) const {
  for (const auto& e : entries_) {
    if (e.set == set) return e.mass;
  }
  return 0.0;
}

bool MassFunction::is_bayesian() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const MassEntry& e) { return e.set.cardinality() == 1; });
}

MassFunction validate_bpa(
    const Frame& frame,
    std::span<const std::pair<std::vector<std::string>, double>> raw_entries) {
  std::vector<MassEntry> entries;
  entries.reserve(raw_entries.size());
  for (const auto& [labels, mass] : raw_entries) {
    entries.push_back({frame.subset(labels), mass});
  }
  return MassFunction::create(frame, entries);
}

DiscreteDistribution DiscreteDistribution::create(Frame frame,
                                                  std::vector<double> probabilities) {
  if (probabilities.size() != frame.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "distribution length does not match frame size");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p)) throw Error(ErrorCode::OutOfRange, "probability must be finite");
    if (p < 0.0) throw Error(ErrorCode::NegativeMass, "negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    throw Error(ErrorCode::MassSumViolation, "probabilities do not sum to 1");
  }
  return DiscreteDistribution(std::move(frame), std::move(probabilities));
}

double bel(const MassFunction& m, FocalSet a) {
  if (!m.frame().contains(a)) {
    throw Error(ErrorCode::NotSubsetOfFrame, "query set is not a subset of the frame");
  }
  double sum = 0.0;
  for (const auto& e : m.entries()) {
    if (e.set.is_subset_of(a)) sum += e.mass;
  }
  return sum;
}

double pl(const MassFunction& m, FocalSet a) {
  if (!m.frame().contains(a)) {
    throw Error(ErrorCode::NotSubsetOfFrame, "query set is not a subset of the frame");
  }
  double sum = 0.0;
  for (const auto& e : m.entries()) {
    if (e.set.intersects(a)) sum += e.mass;
  }
  return sum;
}

DiscreteDistribution ppt(const MassFunction& m) {
  std::vector<double> bet(m.frame().size(), 0.0);
  for (const auto& e : m.entries()) {
    const double share = e.mass / static_cast<double>(e.set.cardinality());
    for (std::size_t i = 0; i < bet.size(); ++i) {
      if (e.set.contains(i)) bet[i] += share;
    }
  }
  return DiscreteDistribution::create(m.frame(), std::move(bet));
}

double log2_nonempty_subsets(std::size_t k) {
  if (k == 0 || k > 64) {
    throw Error(ErrorCode::OutOfRange, "cardinality must be in [1, 64]");
  }
  // 2^k - 1 is exact in a double only while k <= 53.
  if (k <= 53) return std::log2(std::ldexp(1.0, static_cast<int>(k)) - 1.0);
  return static_cast<double>(k) +
         std::log1p(-std::ldexp(1.0, -static_cast<int>(k))) / std::numbers::ln2;
}

double deng_entropy(const MassFunction& m) {
  double h = 0.0;
  for (const auto& e : m.entries()) {
    h -= e.mass * (std::log2(e.mass) - log2_nonempty_subsets(e.set.cardinality()));
  }
  return h;
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double shannon_entropy(const DiscreteDistribution& d) {
  return shannon_entropy(d.probabilities());
}

double deng_entropy_uniform_powerset(std::size_t n) {
  if (n < 1 || n > 64) {
    throw Error(ErrorCode::OutOfRange, "frame size must be in [1, 64]");
  }
  // Every focal set has mass 1/N with N = 2^n - 1, and C(n,k) of them have
  // cardinality k, so E = log2 N + (1/N) * sum_k C(n,k) log2(2^k - 1).
  const double log2_count = log2_nonempty_subsets(n);
  double weighted = 0.0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    weighted += binom * log2_nonempty_subsets(k);
  }
  return log2_count + weighted * std::exp2(-log2_count);
}

MassFunction uniform_powerset_mass(const Frame& frame) {
  const std::size_t n = frame.size();
  if (n > kMaxEnumerableFrameSize) {
    throw Error(ErrorCode::OutOfRange, "frame too large to enumerate its power set");
  }
  const std::uint64_t count = (std::uint64_t{1} << n) - 1;
  const double mass = 1.0 / static_cast<double>(count);
  std::vector<MassEntry> entries;
  entries.reserve(count);
  for (std::uint64_t bits = 1; bits <= count; ++bits) {
    entries.push_back({FocalSet{bits}, mass});
  }
  return MassFunction::create(frame, entries);
}

}  // namespace qdb::evidence
