#include "qaoace/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qaoace/errors.hpp"

namespace qaoace {

namespace {

void require_qubits(std::size_t qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw SizeError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                    std::to_string(qubits));
  }
}

void require_same_dimension(const StateVector& state, const DiagonalHamiltonian& diagonal) {
  if (state.size() != diagonal.size()) {
    throw DimensionMismatch("state has " + std::to_string(state.qubit_count()) +
                            " qubits, diagonal has " + std::to_string(diagonal.qubit_count()));
  }
}

}  // namespace

StateVector::StateVector(std::vector<Amplitude> amplitudes) : amplitudes_(std::move(amplitudes)) {
  const std::size_t size = amplitudes_.size();
  if (size < 2 || !std::has_single_bit(size)) {
    throw DimensionMismatch("state length must be a power of two >= 2, got " +
                            std::to_string(size));
  }
  qubits_ = static_cast<std::size_t>(std::countr_zero(size));
  require_qubits(qubits_);
}

StateVector StateVector::uniform_superposition(std::size_t qubits) {
  require_qubits(qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  return StateVector(std::vector<Amplitude>(dim, Amplitude(amp, 0.0)));
}

StateVector StateVector::basis_state(std::size_t qubits, std::uint64_t index) {
  require_qubits(qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  if (index >= dim) throw InvalidArgument("basis index out of range");
  std::vector<Amplitude> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return sum;
}

double StateVector::probability(std::uint64_t index) const {
  if (index >= amplitudes_.size()) throw InvalidArgument("basis index out of range");
  return std::norm(amplitudes_[index]);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(),
                 [](const Amplitude& a) { return std::norm(a); });
  return p;
}

void apply_cost_propagator(StateVector& state, const DiagonalHamiltonian& diagonal, double gamma) {
  require_same_dimension(state, diagonal);
  auto amps = state.amplitudes();
  const auto energies = diagonal.energies();
  for (std::size_t z = 0; z < amps.size(); ++z) {
    const double phase = -gamma * energies[z];
    amps[z] *= Amplitude(std::cos(phase), std::sin(phase));
  }
}

void apply_driver_layer(StateVector& state, double beta) {
  const double c = std::cos(beta / 2.0);
  const Amplitude mis(0.0, -std::sin(beta / 2.0));
  auto amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (std::size_t stride = 1; stride < dim; stride <<= 1) {
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
      for (std::size_t z = block; z < block + stride; ++z) {
        const Amplitude lo = amps[z];
        const Amplitude hi = amps[z + stride];
        amps[z] = c * lo + mis * hi;
        amps[z + stride] = mis * lo + c * hi;
      }
    }
  }
}

double expectation_diagonal(const StateVector& state, const DiagonalHamiltonian& diagonal) {
  require_same_dimension(state, diagonal);
  const auto amps = state.amplitudes();
  const auto energies = diagonal.energies();
  double sum = 0.0;
  for (std::size_t z = 0; z < amps.size(); ++z) sum += std::norm(amps[z]) * energies[z];
  return sum;
}

ShotCounts sample_shots(const StateVector& state, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw InvalidArgument("shot count must be >= 1");
  std::vector<double> cumulative = state.probabilities();
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
  const double total = cumulative.back();

  ShotCounts out;
  out.total_shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++out.counts[static_cast<std::uint64_t>(std::distance(cumulative.begin(), it))];
  }
  return out;
}

double probability_of(const StateVector& state, const AssignmentBits& assignment) {
  if (assignment.size() != state.qubit_count()) {
    throw DimensionMismatch("assignment has " + std::to_string(assignment.size()) +
                            " bits, state has " + std::to_string(state.qubit_count()) +
                            " qubits");
  }
  return state.probability(assignment.to_index());
}

}  // namespace qaoace
