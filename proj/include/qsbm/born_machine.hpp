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
 * @file born_machine.hpp
 * The layered scrambling Born machine and its exact adjoint gradients.
 *
 * Fixed-scrambler layer l (applied in order, l = 0 first):
 *   R_x(theta[l,i,x]) on every qubit, R_z(theta[l,i,z]) on every qubit,
 *   the scrambler, then R_y(theta[l,i,y]) on every qubit.
 *
 * Trainable-Hamiltonian layer l: exp(-i tau H_l) with
 *   H_l = -J_l sum_i X_i X_{i+1} - sum_i (hx_{l,i} X_i + hy_{l,i} Y_i + hz_{l,i} Z_i).
 *
 * Ancillas are the highest-index qubits and are traced out before the Born
 * rule is applied to the remaining register.
 */
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "qsbm/scramblers.hpp"
#include "qsbm/statevector.hpp"

namespace qsbm {

class RandomStream;

/// ln q is evaluated as ln(max(q, kProbabilityFloor)).
inline constexpr double kProbabilityFloor = 1e-12;

struct FixedScramblerModel {
    ScramblerSpec scrambler;
};

struct TrainableHamiltonianModel {
    double tau = 0.5;
    double energy_offset = 0.0;  ///< constant added to every layer Hamiltonian
};

using ModelVariant = std::variant<FixedScramblerModel, TrainableHamiltonianModel>;

struct ModelSpec {
    int num_qubits = 1;
    int num_ancillas = 0;
    int num_layers = 1;
    ModelVariant variant = FixedScramblerModel{IdentityScrambler{}};

    [[nodiscard]] int num_system_qubits() const { return num_qubits - num_ancillas; }
    [[nodiscard]] std::size_t num_bins() const { return std::size_t{1} << num_system_qubits(); }
    [[nodiscard]] bool is_trainable_hamiltonian() const {
        return std::holds_alternative<TrainableHamiltonianModel>(variant);
    }
    /// 3 L N for rotations, (3N + 1) L for the trainable Hamiltonian.
    [[nodiscard]] std::size_t num_parameters() const;
    void validate() const;
};

enum class RotationSlot { XPre = 0, ZPre = 1, YPost = 2 };
enum class HamiltonianSlot { Coupling, FieldX, FieldY, FieldZ };

/// Flat index of theta[layer][qubit][slot].
std::size_t rotation_index(int num_qubits, int layer, int qubit, RotationSlot slot);
/// Per-layer block [J, hx_0..hx_{N-1}, hy_0.., hz_0..]; `site` ignored for the coupling.
std::size_t hamiltonian_index(int num_qubits, int layer, HamiltonianSlot slot, int site = 0);

/// Per-layer Hamiltonian of the trainable variant as Pauli terms.
PauliTermList layer_hamiltonian(int num_qubits, std::span<const double> layer_params);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> gradient;
    std::vector<double> probabilities;  ///< model distribution at the evaluated point
};

class BornMachine {
  public:
    /// `scrambler` is required for the fixed-scrambler variant and must be
    /// compiled for `spec.num_qubits`.
    explicit BornMachine(ModelSpec spec, std::shared_ptr<const CompiledScrambler> scrambler = nullptr);

    [[nodiscard]] const ModelSpec &spec() const { return spec_; }
    [[nodiscard]] std::size_t num_parameters() const { return spec_.num_parameters(); }
    [[nodiscard]] const CompiledScrambler *scrambler() const { return scrambler_.get(); }

    [[nodiscard]] StateVector forward(std::span<const double> params) const;
    [[nodiscard]] std::vector<double> output_distribution(std::span<const double> params) const;
    [[nodiscard]] double loss(std::span<const double> params, std::span<const double> target) const;

    /// Negative log-likelihood and its exact gradient by one forward and one
    /// reverse statevector sweep.
    [[nodiscard]] LossGradient loss_and_gradient(std::span<const double> params,
                                                 std::span<const double> target) const;

    /// Angles and fields uniform on (-pi, pi); couplings start at 1.
    [[nodiscard]] std::vector<double> initial_parameters(RandomStream &rng) const;

  private:
    void check_params(std::span<const double> params) const;
    void check_target(std::span<const double> target) const;
    LossGradient fixed_scrambler_gradient(std::span<const double> params, std::span<const double> target) const;
    LossGradient hamiltonian_gradient(std::span<const double> params, std::span<const double> target) const;

    ModelSpec spec_;
    std::shared_ptr<const CompiledScrambler> scrambler_;
};

/// -sum p ln max(q, floor) and the co-state weights d loss / d q (zero where
/// the floor is active).
double nll_with_weights(std::span<const double> target, std::span<const double> q, std::vector<double> *weights);

} // namespace qsbm
