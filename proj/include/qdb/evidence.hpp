#pragma once

// Dempster-Shafer kernel: frames of discernment, mass functions, belief and
// plausibility, the pignistic transform, and Deng / Shannon entropies.
//
// Subsets of a frame are bit sets (bit i <=> element i), so a frame holds at
// most 64 elements. Operations that enumerate the power set explicitly are
// further limited to kMaxEnumerableFrameSize elements.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qdb::evidence {

inline constexpr std::size_t kMaxFrameSize = 64;
inline constexpr std::size_t kMaxEnumerableFrameSize = 32;
inline constexpr double kMassSumTolerance = 1e-9;

class FocalSet {
 public:
  constexpr FocalSet() = default;
  constexpr explicit FocalSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr FocalSet singleton(std::size_t index) {
    return FocalSet{std::uint64_t{1} << index};
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr std::size_t cardinality() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t index) const {
    return (bits_ >> index) & 1U;
  }
  constexpr bool is_subset_of(FocalSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(FocalSet other) const {
    return (bits_ & other.bits_) != 0;
  }

  constexpr FocalSet operator|(FocalSet other) const {
    return FocalSet{bits_ | other.bits_};
  }
  constexpr FocalSet operator&(FocalSet other) const {
    return FocalSet{bits_ & other.bits_};
  }
  constexpr auto operator<=>(const FocalSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

class Frame {
 public:
  // Throws InvalidFrame when empty, oversized, or labels repeat.
  explicit Frame(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& label(std::size_t index) const { return elements_.at(index); }
  std::optional<std::size_t> index_of(const std::string& label) const;

  FocalSet full() const;
  FocalSet complement(FocalSet set) const;
  bool contains(FocalSet set) const { return set.is_subset_of(full()); }

  // Builds a subset from labels. Throws NotSubsetOfFrame for unknown labels
  // and EmptyFocalSet for an empty list.
  FocalSet subset(std::span<const std::string> labels) const;
  FocalSet subset(std::initializer_list<std::string> labels) const {
    return subset(std::span<const std::string>(labels.begin(), labels.size()));
  }

  // Human-readable "{a,b}" form.
  std::string describe(FocalSet set) const;

  bool operator==(const Frame&) const = default;

 private:
  std::vector<std::string> elements_;
};

struct MassEntry {
  FocalSet set;
  double mass = 0.0;
};

// A basic probability assignment. Entries keep their construction order;
// every stored entry has strictly positive mass.
class MassFunction {
 public:
  // Validates raw entries: rejects empty or out-of-frame sets, negative or
  // non-finite masses, duplicates, and |sum - 1| > kMassSumTolerance.
  // Zero-mass entries are dropped.
  static MassFunction create(Frame frame, std::span<const MassEntry> raw);

  const Frame& frame() const { return frame_; }
  std::span<const MassEntry> entries() const { return entries_; }
  std::size_t focal_count() const { return entries_.size(); }

  // Mass of exactly this set (0 when it is not focal).
  double mass_of(FocalSet set) const;
  bool is_bayesian() const;

 private:
  MassFunction(Frame frame, std::vector<MassEntry> entries)
      : frame_(std::move(frame)), entries_(std::move(entries)) {}

  Frame frame_;
  std::vector<MassEntry> entries_;
};

// Label-based construction, as read from BPA files.
MassFunction validate_bpa(
    const Frame& frame,
    std::span<const std::pair<std::vector<std::string>, double>> raw_entries);

class DiscreteDistribution {
 public:
  // Throws NegativeMass / MassSumViolation / DimensionMismatch.
  static DiscreteDistribution create(Frame frame, std::vector<double> probabilities);

  const Frame& frame() const { return frame_; }
  std::span<const double> probabilities() const& { return probabilities_; }
  std::vector<double> probabilities() && { return std::move(probabilities_); }
  double operator[](std::size_t index) const { return probabilities_.at(index); }

 private:
  DiscreteDistribution(Frame frame, std::vector<double> probabilities)
      : frame_(std::move(frame)), probabilities_(std::move(probabilities)) {}

  Frame frame_;
  std::vector<double> probabilities_;
};

double bel(const MassFunction& m, FocalSet a);
double pl(const MassFunction& m, FocalSet a);

// Pignistic transform: each focal mass split evenly among its members.
DiscreteDistribution ppt(const MassFunction& m);

// log2(2^k - 1), accurate for every k in [1, 64].
double log2_nonempty_subsets(std::size_t k);

// Deng entropy in bits.
double deng_entropy(const MassFunction& m);

double shannon_entropy(const DiscreteDistribution& d);
double shannon_entropy(std::span<const double> probabilities);

// Deng entropy of the uniform mass over all 2^n - 1 nonempty subsets of an
// n-element frame, grouped by cardinality (no enumeration). 1 <= n <= 64.
double deng_entropy_uniform_powerset(std::size_t n);

// The same mass function built explicitly; n <= kMaxEnumerableFrameSize.
MassFunction uniform_powerset_mass(const Frame& frame);

}  // namespace qdb::evidence
