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
 * @file scramblers.hpp
 * Fixed entangling unitaries: global Haar, brickwork random circuits and
 * exact analog evolution under open nearest-neighbor spin chains.
 */
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsbm/linalg.hpp"
#include "qsbm/statevector.hpp"

namespace qsbm {

class RandomStream;

struct PauliFactor {
    int qubit;
    Pauli axis;
};

struct PauliTerm {
    double coefficient;
    std::vector<PauliFactor> factors;
};

using PauliTermList = std::vector<PauliTerm>;

/// H = -sum_i (Jxx X_i X_{i+1} + Jyy Y_i Y_{i+1} + Jzz Z_i Z_{i+1}) - hx sum_i X_i,
/// open boundary.
struct HamiltonianSpec {
    int num_qubits = 2;
    double j_xx = 0.0;
    double j_yy = 0.0;
    double j_zz = 0.0;
    double h_x = 0.0;

    static HamiltonianSpec tfim(int num_qubits);
    static HamiltonianSpec xx(int num_qubits);
    /// "tfim" or "xx".
    static HamiltonianSpec preset(const std::string &name, int num_qubits);
};

/// Terms with a zero coefficient are omitted.
PauliTermList build_hamiltonian(const HamiltonianSpec &spec);
ComplexMatrix dense_hamiltonian(const PauliTermList &terms, int num_qubits);
/// <psi|H|psi>.
double expectation(const PauliTermList &terms, const StateVector &state);

/// exp(-i tau H) |psi> through the dense eigenbasis.
StateVector expm_apply(const PauliTermList &terms, double tau, StateVector state);

struct IdentityScrambler {};
struct HaarScrambler {};
struct BrickworkScrambler {
    int depth = 1;
};
struct AnalogScrambler {
    HamiltonianSpec hamiltonian;
    double tau = 0.0;
};

using ScramblerSpec = std::variant<IdentityScrambler, HaarScrambler, BrickworkScrambler, AnalogScrambler>;

/// "identity", "haar", "brickwork" or "analog".
std::string scrambler_kind(const ScramblerSpec &spec);

/// Qubit pairs of brickwork layer `layer` (0-based): even layers pair
/// (0,1),(2,3),..., odd layers pair (1,2),(3,4),....
std::vector<std::pair<int, int>> brickwork_pairs(int num_qubits, int layer);

struct BrickGate {
    int qubit_a;
    int qubit_b;
    Gate2 gate;
};

/// Executable scrambler. Immutable once compiled, safe to share across
/// threads.
class CompiledScrambler {
  public:
    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const ScramblerSpec &spec() const { return spec_; }
    [[nodiscard]] std::string kind() const { return scrambler_kind(spec_); }

    void apply(StateVector &state) const;
    void apply_adjoint(StateVector &state) const;

    [[nodiscard]] const std::vector<BrickGate> &gates() const { return gates_; }
    [[nodiscard]] const std::optional<ComplexMatrix> &dense() const { return dense_; }
    [[nodiscard]] const std::optional<EigenDecomposition> &eigen() const { return eigen_; }

    /// Full 2^N x 2^N matrix (built on demand for gate-list scramblers).
    [[nodiscard]] ComplexMatrix to_dense() const;

    friend CompiledScrambler compile_scrambler(const ScramblerSpec &, int, RandomStream &);

  private:
    CompiledScrambler(ScramblerSpec spec, int num_qubits) : spec_(std::move(spec)), num_qubits_(num_qubits) {}

    void check(const StateVector &state) const;

    ScramblerSpec spec_;
    int num_qubits_;
    std::optional<ComplexMatrix> dense_;
    std::vector<BrickGate> gates_;
    std::optional<EigenDecomposition> eigen_;
};

CompiledScrambler compile_scrambler(const ScramblerSpec &spec, int num_qubits, RandomStream &rng);

inline void apply_scrambler(StateVector &state, const CompiledScrambler &scrambler) { scrambler.apply(state); }

/// Mean entanglement entropy (nats) of a Haar-random pure state on a
/// d_a x d_b bipartition, by direct harmonic summation. Requires 2 <= d_a <= d_b.
double page_entropy(long d_a, long d_b);

} // namespace qsbm
