#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace qaoace {

inline constexpr std::size_t kMaxBruteForceItems = 25;
inline constexpr std::size_t kMaxQubits = 24;

/// A 0-1 knapsack problem: choose items maximizing total value subject to
/// total weight not exceeding the capacity. Weights, values and capacity are
/// positive integers; the unary slack encoding needs one qubit per unit of
/// capacity, so the encoded problem uses item_count() + capacity() qubits.
class KnapsackInstance {
 public:
  /// Throws InvalidArgument unless there is at least one item, the weight and
  /// value lists have equal length, and every number is >= 1.
  KnapsackInstance(std::string label, std::vector<std::int64_t> weights,
                   std::vector<std::int64_t> values, std::int64_t capacity);

  const std::string& label() const noexcept { return label_; }
  const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  std::int64_t capacity() const noexcept { return capacity_; }

  std::size_t item_count() const noexcept { return weights_.size(); }
  std::size_t slack_count() const noexcept { return static_cast<std::size_t>(capacity_); }
  std::size_t qubit_count() const noexcept { return item_count() + slack_count(); }
  std::int64_t max_value() const noexcept;

  friend bool operator==(const KnapsackInstance&, const KnapsackInstance&) = default;

 private:
  std::string label_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> values_;
  std::int64_t capacity_;
};

void to_json(nlohmann::json& j, const KnapsackInstance& instance);
KnapsackInstance instance_from_json(const nlohmann::json& j);

/// Constraint weight `a` and objective weight `b`.
struct PenaltyPair {
  double a = 0.0;
  double b = 0.0;

  /// 0 < b * max(c) < a: any constraint violation costs more than the best
  /// value gain it could buy.
  bool valid_for(const KnapsackInstance& instance) const noexcept;

  friend bool operator==(const PenaltyPair&, const PenaltyPair&) = default;
};

/// Computational-basis assignment. Positions [0, N) are item bits x_1..x_N,
/// positions [N, N+W) are slack bits y_1..y_W. The leftmost bit is the most
/// significant bit of the basis index.
class AssignmentBits {
 public:
  AssignmentBits() = default;
  explicit AssignmentBits(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters.
  static AssignmentBits from_string(std::string_view text);
  static AssignmentBits from_index(std::uint64_t index, std::size_t length);

  std::uint64_t to_index() const;
  std::string to_string() const;

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// Spin vector s = 2 * bit - 1.
  std::vector<int> spins() const;

  friend bool operator==(const AssignmentBits&, const AssignmentBits&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Item/slack interpretation of an assignment against an instance.
struct DecodedAssignment {
  std::vector<std::size_t> items;  // 0-based packed item indices
  std::int64_t packed_weight = 0;
  std::int64_t packed_value = 0;
  std::size_t slack_ones = 0;
  std::int64_t claimed_weight = 0;  // sum of n * y_n

  bool fits(std::int64_t capacity) const noexcept { return packed_weight <= capacity; }
  /// Exactly one slack bit set and it names the packed weight.
  bool slack_consistent() const noexcept {
    return slack_ones == 1 && claimed_weight == packed_weight;
  }
};

DecodedAssignment decode(const KnapsackInstance& instance, const AssignmentBits& assignment);

struct BruteForceSolution {
  std::int64_t best_value = 0;
  /// Every optimal packing as sorted 0-based item indices, in lexicographic
  /// order of those index lists.
  std::vector<std::vector<std::size_t>> best_packings;
};

/// Exhaustive search over all 2^N packings. Throws SizeError for N > 25.
BruteForceSolution solve_bruteforce(const KnapsackInstance& instance);

/// Assignment of the lexicographically first optimal packing with its unique
/// consistent slack (y_n = 1 exactly at n = packed weight). Throws
/// UnrepresentableOptimum when every optimal packing is empty.
AssignmentBits canonical_bks_bitstring(const KnapsackInstance& instance);

/// Constraint plus objective energy in binary variables with all constants:
///   A (1 - sum y_n)^2 + A (sum n y_n - sum w x)^2 - B sum c x
/// Throws DimensionMismatch if the assignment length is not N + W.
double evaluate_binary(const KnapsackInstance& instance, const PenaltyPair& penalties,
                       const AssignmentBits& assignment);

/// Cost operator as one real energy per basis state.
class DiagonalHamiltonian {
 public:
  DiagonalHamiltonian(std::vector<double> energies, PenaltyPair penalties, std::string label);

  /// Only the energies; used for synthetic operators in tests and benchmarks.
  explicit DiagonalHamiltonian(std::vector<double> energies);

  std::span<const double> energies() const noexcept { return energies_; }
  double operator[](std::size_t z) const { return energies_[z]; }
  std::size_t size() const noexcept { return energies_.size(); }
  std::size_t qubit_count() const noexcept { return qubits_; }
  const PenaltyPair& penalties() const noexcept { return penalties_; }
  const std::string& label() const noexcept { return label_; }

  double min() const;
  double max() const;
  double mean() const;
  /// First index attaining the minimum.
  std::size_t argmin() const;

  /// Same operator shifted by a constant.
  DiagonalHamiltonian shifted(double offset) const;

 private:
  std::vector<double> energies_;
  std::size_t qubits_ = 0;
  PenaltyPair penalties_{};
  std::string label_;
};

/// energies[z] = evaluate_binary(instance, penalties, bits(z)) for all 2^q
/// basis states. Throws SizeError for q > 24. Pairs that violate
/// PenaltyPair::valid_for are accepted; a warning goes to std::clog.
DiagonalHamiltonian build_diagonal(const KnapsackInstance& instance, const PenaltyPair& penalties);

/// Spin form  sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset.
/// Item spins occupy [0, N), slack spins [N, N+W).
class IsingCoefficients {
 public:
  explicit IsingCoefficients(std::size_t spin_count);

  std::size_t spin_count() const noexcept { return linear_.size(); }

  double linear(std::size_t i) const { return linear_[i]; }
  double& linear(std::size_t i) { return linear_[i]; }
  /// Requires i < j.
  double coupling(std::size_t i, std::size_t j) const;
  double& coupling(std::size_t i, std::size_t j);

  double constant_offset() const noexcept { return offset_; }
  void set_constant_offset(double offset) noexcept { offset_ = offset; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::vector<double> linear_;
  std::vector<double> couplings_;  // dense q*q, only i < j used
  double offset_ = 0.0;
};

/// Spin expansion of the knapsack energy via x = (s+1)/2, y = (u+1)/2.
/// The closed-form h and J drop constant terms; they are restored in
/// constant_offset() so the result reproduces evaluate_binary exactly.
IsingCoefficients expand_ising(const KnapsackInstance& instance, const PenaltyPair& penalties);

/// Throws DimensionMismatch if spins.size() != coeffs.spin_count().
double evaluate_ising(const IsingCoefficients& coeffs, std::span<const int> spins);

}  // namespace qaoace
