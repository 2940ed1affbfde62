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


// Reference computations used as independent oracles by the test suites.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qsbm/born_machine.hpp"
#include "qsbm/rbm.hpp"
#include "qsbm/statevector.hpp"

namespace qsbm::oracle {

/// Full-register matrix of a one-qubit operator, qubit 0 least significant.
ComplexMatrix embed_single(int num_qubits, int qubit, const Gate1 &op);

/// Product of Paulis on the listed qubits as a full matrix.
ComplexMatrix pauli_string(int num_qubits, std::span<const PauliFactor> factors);

/// Sum of Pauli strings built from Kronecker products.
ComplexMatrix hamiltonian_by_kron(const PauliTermList &terms, int num_qubits);

/// Circuit unitary of a rotation-ansatz model assembled from Kronecker products.
ComplexMatrix model_unitary(const BornMachine &model, std::span<const double> params);

/// Ancilla-traced Born probabilities of a state by explicit double loops.
std::vector<double> traced_probabilities(const Eigen::VectorXcd &psi, int num_ancillas);

/// Fourth-order central differences of f with step h.
std::vector<double> central_difference(const std::function<double(std::span<const double>)> &f,
                                       std::span<const double> params, double h = 1e-5);

/// Parameter-shift rule applied to each Born probability and chained
/// through d nll / d q (rotation models only).
std::vector<double> parameter_shift_gradient(const BornMachine &model, std::span<const double> params,
                                             std::span<const double> target);

/// |g - ref| / max(|ref|, 1e-3), maximized over components.
double max_relative_error(std::span<const double> g, std::span<const double> ref);

/// RBM marginal by summing exp(-E(v, h)) over every joint configuration.
std::vector<double> rbm_brute_force(const RbmParams &params);

/// Page average entropy by ascending summation in long double.
double page_reference(long d_a, long d_b);

/// Strictly positive random distribution over `bins` entries.
std::vector<double> random_distribution(std::size_t bins, RandomStream &rng);

} // namespace qsbm::oracle
