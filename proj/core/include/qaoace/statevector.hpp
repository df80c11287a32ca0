#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qaoace/knapsack.hpp"
#include "qaoace/random.hpp"

namespace qaoace {

using Amplitude = std::complex<double>;

/// Dense pure state on q qubits. Basis index bit (q-1-k) belongs to qubit k,
/// matching the most-significant-first layout of AssignmentBits.
class StateVector {
 public:
  /// Takes ownership of 2^q amplitudes, q in [1, 24]. No normalization check.
  explicit StateVector(std::vector<Amplitude> amplitudes);

  static StateVector uniform_superposition(std::size_t qubits);
  static StateVector basis_state(std::size_t qubits, std::uint64_t index);

  std::size_t qubit_count() const noexcept { return qubits_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }

  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  std::span<Amplitude> amplitudes() noexcept { return amplitudes_; }
  const Amplitude& operator[](std::size_t z) const { return amplitudes_[z]; }

  double norm_squared() const noexcept;
  double probability(std::uint64_t index) const;
  std::vector<double> probabilities() const;

 private:
  std::vector<Amplitude> amplitudes_;
  std::size_t qubits_ = 0;
};

/// Measurement histogram keyed by basis index.
struct ShotCounts {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total_shots = 0;

  std::uint64_t count(std::uint64_t index) const {
    auto it = counts.find(index);
    return it == counts.end() ? 0 : it->second;
  }
};

/// amplitude_z *= exp(-i * gamma * energy_z).
void apply_cost_propagator(StateVector& state, const DiagonalHamiltonian& diagonal, double gamma);

/// exp(-i * beta * X / 2) on every qubit, i.e. exp(-i * beta * H_D) for
/// H_D = 1/2 sum_k X_k.
void apply_driver_layer(StateVector& state, double beta);

/// <psi| H |psi> for a diagonal H.
double expectation_diagonal(const StateVector& state, const DiagonalHamiltonian& diagonal);

/// Draws `shots` basis indices by inverse CDF over the cumulative
/// probabilities. Throws InvalidArgument for shots == 0.
ShotCounts sample_shots(const StateVector& state, std::uint64_t shots, Rng& rng);

double probability_of(const StateVector& state, const AssignmentBits& assignment);

}  // namespace qaoace
