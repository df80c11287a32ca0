#include "qaoace/knapsack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qaoace/errors.hpp"

namespace qaoace {

KnapsackInstance::KnapsackInstance(std::string label, std::vector<std::int64_t> weights,
                                   std::vector<std::int64_t> values, std::int64_t capacity)
    : label_(std::move(label)),
      weights_(std::move(weights)),
      values_(std::move(values)),
      capacity_(capacity) {
  if (weights_.empty()) throw InvalidArgument("knapsack instance needs at least one item");
  if (weights_.size() != values_.size()) {
    throw InvalidArgument("knapsack instance has " + std::to_string(weights_.size()) +
                          " weights but " + std::to_string(values_.size()) + " values");
  }
  if (capacity_ < 1) throw InvalidArgument("knapsack capacity must be >= 1");
  auto positive = [](std::int64_t v) { return v >= 1; };
  if (!std::all_of(weights_.begin(), weights_.end(), positive)) {
    throw InvalidArgument("knapsack weights must be positive integers");
  }
  if (!std::all_of(values_.begin(), values_.end(), positive)) {
    throw InvalidArgument("knapsack values must be positive integers");
  }
}

std::int64_t KnapsackInstance::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

void to_json(nlohmann::json& j, const KnapsackInstance& instance) {
  j = nlohmann::json{{"label", instance.label()},
                     {"weights", instance.weights()},
                     {"values", instance.values()},
                     {"capacity", instance.capacity()}};
}

KnapsackInstance instance_from_json(const nlohmann::json& j) {
  try {
    return KnapsackInstance(j.value("label", std::string{}),
                            j.at("weights").get<std::vector<std::int64_t>>(),
                            j.at("values").get<std::vector<std::int64_t>>(),
                            j.at("capacity").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed knapsack instance: ") + e.what());
  }
}

bool PenaltyPair::valid_for(const KnapsackInstance& instance) const noexcept {
  return b > 0.0 && b * static_cast<double>(instance.max_value()) < a;
}

AssignmentBits::AssignmentBits(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw InvalidArgument("assignment bits must be 0 or 1");
  }
}

AssignmentBits AssignmentBits::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InvalidArgument("assignment string may only contain '0' and '1': " +
                            std::string(text));
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return AssignmentBits(std::move(bits));
}

AssignmentBits AssignmentBits::from_index(std::uint64_t index, std::size_t length) {
  if (length > 63) throw SizeError("assignment longer than 63 bits");
  if (length < 64 && (index >> length) != 0) {
    throw InvalidArgument("basis index out of range for assignment length");
  }
  std::vector<std::uint8_t> bits(length);
  for (std::size_t i = 0; i < length; ++i) {
    bits[i] = static_cast<std::uint8_t>((index >> (length - 1 - i)) & 1U);
  }
  return AssignmentBits(std::move(bits));
}

std::uint64_t AssignmentBits::to_index() const {
  if (bits_.size() > 63) throw SizeError("assignment longer than 63 bits");
  std::uint64_t index = 0;
  for (auto b : bits_) index = (index << 1) | b;
  return index;
}

std::string AssignmentBits::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

std::vector<int> AssignmentBits::spins() const {
  std::vector<int> s(bits_.size());
  std::transform(bits_.begin(), bits_.end(), s.begin(), [](std::uint8_t b) { return 2 * b - 1; });
  return s;
}

namespace {

void require_length(const KnapsackInstance& instance, const AssignmentBits& assignment) {
  if (assignment.size() != instance.qubit_count()) {
    std::ostringstream msg;
    msg << "assignment has " << assignment.size() << " bits, instance '" << instance.label()
        << "' needs " << instance.qubit_count();
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

DecodedAssignment decode(const KnapsackInstance& instance, const AssignmentBits& assignment) {
  require_length(instance, assignment);
  DecodedAssignment out;
  const std::size_t n_items = instance.item_count();
  for (std::size_t i = 0; i < n_items; ++i) {
    if (assignment[i]) {
      out.items.push_back(i);
      out.packed_weight += instance.weights()[i];
      out.packed_value += instance.values()[i];
    }
  }
  for (std::size_t n = 1; n <= instance.slack_count(); ++n) {
    if (assignment[n_items + n - 1]) {
      ++out.slack_ones;
      out.claimed_weight += static_cast<std::int64_t>(n);
    }
  }
  return out;
}

BruteForceSolution solve_bruteforce(const KnapsackInstance& instance) {
  const std::size_t n = instance.item_count();
  if (n > kMaxBruteForceItems) {
    throw SizeError("brute force limited to " + std::to_string(kMaxBruteForceItems) +
                    " items, instance has " + std::to_string(n));
  }
  BruteForceSolution best;
  std::vector<std::uint32_t> optimal_masks;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::int64_t weight = 0;
    std::int64_t value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) {
        weight += instance.weights()[i];
        value += instance.values()[i];
      }
    }
    if (weight > instance.capacity()) continue;
    if (value > best.best_value || optimal_masks.empty()) {
      best.best_value = value;
      optimal_masks.clear();
    }
    if (value == best.best_value) optimal_masks.push_back(mask);
  }
  for (auto mask : optimal_masks) {
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) items.push_back(i);
    }
    best.best_packings.push_back(std::move(items));
  }
  std::sort(best.best_packings.begin(), best.best_packings.end());
  return best;
}

AssignmentBits canonical_bks_bitstring(const KnapsackInstance& instance) {
  const auto solution = solve_bruteforce(instance);
  for (const auto& packing : solution.best_packings) {
    if (packing.empty()) continue;
    std::vector<std::uint8_t> bits(instance.qubit_count(), 0);
    std::int64_t weight = 0;
    for (auto i : packing) {
      bits[i] = 1;
      weight += instance.weights()[i];
    }
    bits[instance.item_count() + static_cast<std::size_t>(weight) - 1] = 1;
    return AssignmentBits(std::move(bits));
  }
  throw UnrepresentableOptimum("instance '" + instance.label() +
                               "': the only optimal packing is empty, which has no unary "
                               "slack representation");
}

double evaluate_binary(const KnapsackInstance& instance, const PenaltyPair& penalties,
                       const AssignmentBits& assignment) {
  const auto d = decode(instance, assignment);
  const double one_hot = 1.0 - static_cast<double>(d.slack_ones);
  const double mismatch = static_cast<double>(d.claimed_weight - d.packed_weight);
  return penalties.a * one_hot * one_hot + penalties.a * mismatch * mismatch -
         penalties.b * static_cast<double>(d.packed_value);
}

DiagonalHamiltonian::DiagonalHamiltonian(std::vector<double> energies, PenaltyPair penalties,
                                         std::string label)
    : energies_(std::move(energies)), penalties_(penalties), label_(std::move(label)) {
  const std::size_t size = energies_.size();
  if (size < 2 || (size & (size - 1)) != 0) {
    throw DimensionMismatch("diagonal length must be a power of two >= 2, got " +
                            std::to_string(size));
  }
  qubits_ = static_cast<std::size_t>(std::countr_zero(size));
  if (qubits_ > kMaxQubits) throw SizeError("diagonal exceeds the 24-qubit limit");
  for (double e : energies_) {
    if (!std::isfinite(e)) throw InvalidArgument("diagonal energies must be finite");
  }
}

DiagonalHamiltonian::DiagonalHamiltonian(std::vector<double> energies)
    : DiagonalHamiltonian(std::move(energies), PenaltyPair{}, std::string{}) {}

double DiagonalHamiltonian::min() const {
  return *std::min_element(energies_.begin(), energies_.end());
}

double DiagonalHamiltonian::max() const {
  return *std::max_element(energies_.begin(), energies_.end());
}

double DiagonalHamiltonian::mean() const {
  return std::accumulate(energies_.begin(), energies_.end(), 0.0) /
         static_cast<double>(energies_.size());
}

std::size_t DiagonalHamiltonian::argmin() const {
  return static_cast<std::size_t>(
      std::distance(energies_.begin(), std::min_element(energies_.begin(), energies_.end())));
}

DiagonalHamiltonian DiagonalHamiltonian::shifted(double offset) const {
  std::vector<double> e = energies_;
  for (double& v : e) v += offset;
  return DiagonalHamiltonian(std::move(e), penalties_, label_);
}

DiagonalHamiltonian build_diagonal(const KnapsackInstance& instance, const PenaltyPair& penalties) {
  const std::size_t q = instance.qubit_count();
  if (q > kMaxQubits) {
    throw SizeError("instance '" + instance.label() + "' needs " + std::to_string(q) +
                    " qubits, limit is " + std::to_string(kMaxQubits));
  }
  if (!penalties.valid_for(instance)) {
    std::clog << "warning: penalty pair (A=" << penalties.a << ", B=" << penalties.b
              << ") violates 0 < B*max(c) < A for instance '" << instance.label() << "'\n";
  }
  const std::size_t dim = std::size_t{1} << q;
  std::vector<double> energies(dim);
  for (std::size_t z = 0; z < dim; ++z) {
    energies[z] = evaluate_binary(instance, penalties, AssignmentBits::from_index(z, q));
  }
  return DiagonalHamiltonian(std::move(energies), penalties, instance.label());
}

IsingCoefficients::IsingCoefficients(std::size_t spin_count)
    : linear_(spin_count, 0.0), couplings_(spin_count * spin_count, 0.0) {}

std::size_t IsingCoefficients::index(std::size_t i, std::size_t j) const {
  if (!(i < j) || j >= spin_count()) {
    throw InvalidArgument("coupling index requires i < j < spin_count");
  }
  return i * spin_count() + j;
}

double IsingCoefficients::coupling(std::size_t i, std::size_t j) const {
  return couplings_[index(i, j)];
}

double& IsingCoefficients::coupling(std::size_t i, std::size_t j) {
  return couplings_[index(i, j)];
}

IsingCoefficients expand_ising(const KnapsackInstance& instance, const PenaltyPair& penalties) {
  const std::size_t n_items = instance.item_count();
  const std::size_t n_slack = instance.slack_count();
  const double a = penalties.a;
  const double b = penalties.b;
  const double cap = static_cast<double>(instance.capacity());
  const double w_sum = static_cast<double>(
      std::accumulate(instance.weights().begin(), instance.weights().end(), std::int64_t{0}));
  const double tri = (cap * cap + cap) / 2.0;  // sum of n for n = 1..W

  IsingCoefficients c(instance.qubit_count());
  auto slack = [n_items](std::size_t n) { return n_items + n - 1; };  // n is 1-based

  // Constraint term, slack spins.
  for (std::size_t n = 1; n <= n_slack; ++n) {
    const double nd = static_cast<double>(n);
    c.linear(slack(n)) += a * (cap / 2.0 - 1.0 + nd * (tri / 2.0 - w_sum / 2.0));
    for (std::size_t l = n + 1; l <= n_slack; ++l) {
      c.coupling(slack(n), slack(l)) += a * 0.5 * (1.0 + nd * static_cast<double>(l));
    }
  }
  // Constraint term, item spins and item-slack couplings.
  for (std::size_t i = 0; i < n_items; ++i) {
    const double wi = static_cast<double>(instance.weights()[i]);
    c.linear(i) += a * 0.5 * (-tri + w_sum) * wi;
    for (std::size_t j = i + 1; j < n_items; ++j) {
      c.coupling(i, j) += a * 0.5 * wi * static_cast<double>(instance.weights()[j]);
    }
    for (std::size_t n = 1; n <= n_slack; ++n) {
      c.coupling(i, slack(n)) -= a * 0.5 * static_cast<double>(n) * wi;
    }
  }
  // Objective term.
  double c_sum = 0.0;
  for (std::size_t i = 0; i < n_items; ++i) {
    const double ci = static_cast<double>(instance.values()[i]);
    c.linear(i) -= b * ci / 2.0;
    c_sum += ci;
  }

  double squares = 0.0;  // sum n^2 + sum w^2
  for (std::size_t n = 1; n <= n_slack; ++n) squares += static_cast<double>(n * n);
  for (auto w : instance.weights()) squares += static_cast<double>(w * w);
  const double one_hot = 1.0 - cap / 2.0;
  const double constraint_offset =
      one_hot * one_hot + cap / 4.0 + (tri - w_sum) * (tri - w_sum) / 4.0 + squares / 4.0;
  c.set_constant_offset(a * constraint_offset - b * c_sum / 2.0);
  return c;
}

double evaluate_ising(const IsingCoefficients& coeffs, std::span<const int> spins) {
  const std::size_t q = coeffs.spin_count();
  if (spins.size() != q) {
    throw DimensionMismatch("spin vector has " + std::to_string(spins.size()) +
                            " entries, coefficients have " + std::to_string(q));
  }
  double energy = coeffs.constant_offset();
  for (std::size_t i = 0; i < q; ++i) {
    energy += coeffs.linear(i) * spins[i];
    for (std::size_t j = i + 1; j < q; ++j) {
      energy += coeffs.coupling(i, j) * spins[i] * spins[j];
    }
  }
  return energy;
}

}  // namespace qaoace
