// Copyright 2026 The QSBM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file statevector.hpp
 * Exact dense statevector with in-place gate kernels, Born-rule
 * probabilities, partial traces and multinomial shot sampling.
 *
 * Bit order: qubit q is bit q of the basis index (qubit 0 is the least
 * significant bit).
 */
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qsbm {

class RandomStream;

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Gate1 = Eigen::Matrix2cd;
using Gate2 = Eigen::Matrix4cd;

/// Hard cap on register size; 2^14 amplitudes.
inline constexpr int kMaxQubits = 14;

class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

enum class Pauli { X, Y, Z };

namespace gates {
/// R_x(t) = exp(-i t X / 2); likewise for ry and rz.
Gate1 rx(double theta);
Gate1 ry(double theta);
Gate1 rz(double theta);
Gate1 rotation(Pauli axis, double theta);
Gate1 hadamard();
Gate1 pauli(Pauli axis);
/// Two-qubit gates use the local index 2 * bit(qubit_a) + bit(qubit_b).
Gate2 cnot();
Gate2 swap();
} // namespace gates

class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits);
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm_squared() const;

    void apply_single_qubit_gate(int qubit, const Gate1 &gate);
    void apply_two_qubit_gate(int qubit_a, int qubit_b, const Gate2 &gate);
    void apply_dense_unitary(const ComplexMatrix &unitary);
    void apply_dense_unitary_adjoint(const ComplexMatrix &unitary);
    void apply_pauli(int qubit, Pauli axis);

    /// In-place U on a raw amplitude view; used by kernels that keep their
    /// own buffers.
    static void apply_dense(std::span<Complex> amps, const ComplexMatrix &u, bool adjoint);

  private:
    StateVector(int num_qubits, std::vector<Complex> amps);
    void check_qubit(int qubit) const;

    int num_qubits_;
    std::vector<Complex> amps_;
};

StateVector zero_state(int num_qubits);

/// <lhs| sigma^axis_qubit |rhs>, evaluated without materializing sigma|rhs>.
Complex pauli_matrix_element(const StateVector &lhs, const StateVector &rhs, int qubit, Pauli axis);
Complex inner_product(const StateVector &lhs, const StateVector &rhs);

std::vector<double> full_probabilities(const StateVector &state);

/// q(x) = sum_a |<x, a|psi>|^2 where `a` ranges over the ancilla qubits and
/// x is the compacted index of the remaining qubits (ascending order).
std::vector<double> marginal_probabilities(const StateVector &state,
                                           std::span<const int> ancilla_qubits);

/// Ancillas are the `num_ancillas` highest-index qubits; the measured
/// register keeps its natural low-bit index.
std::vector<double> marginal_probabilities_high(const StateVector &state, int num_ancillas);

struct ReducedDensityMatrix {
    int num_kept_qubits = 0;
    ComplexMatrix entries;
};

/// Tr_{complement}(|psi><psi|); the kept qubits are compacted in ascending
/// order into the row index.
ReducedDensityMatrix reduced_density_matrix(const StateVector &state, std::span<const int> kept_qubits);

/// Entropy in nats; eigenvalues are clamped to [0, 1] before the logarithm.
double von_neumann_entropy(const ReducedDensityMatrix &rdm);

/// Entropy of the lower floor(N/2) qubits; 0 for N = 1.
double half_chain_entropy(const StateVector &state);

/// Multinomial draw of `num_shots` samples from `probs`.
std::vector<std::int64_t> sample_counts(std::span<const double> probs, std::int64_t num_shots,
                                        RandomStream &rng);

} // namespace qsbm
