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

#include "qsbm/scramblers.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qsbm/random.hpp"

namespace qsbm {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

HamiltonianSpec HamiltonianSpec::tfim(int num_qubits) {
    HamiltonianSpec h;
    h.num_qubits = num_qubits;
    h.j_zz = 1.0;
    h.h_x = 1.0;
    return h;
}

HamiltonianSpec HamiltonianSpec::xx(int num_qubits) {
    HamiltonianSpec h;
    h.num_qubits = num_qubits;
    h.j_xx = 1.0;
    h.j_yy = 1.0;
    h.h_x = 1.0;
    return h;
}

HamiltonianSpec HamiltonianSpec::preset(const std::string &name, int num_qubits) {
    if (name == "tfim") {
        return tfim(num_qubits);
    }
    if (name == "xx") {
        return xx(num_qubits);
    }
    throw std::invalid_argument("unknown Hamiltonian preset '" + name + "' (expected tfim or xx)");
}

PauliTermList build_hamiltonian(const HamiltonianSpec &spec) {
    if (spec.num_qubits < 2) {
        throw std::invalid_argument("spin chain needs at least 2 sites");
    }
    if (spec.num_qubits > kMaxQubits) {
        throw CapacityError("spin chain longer than the qubit cap");
    }
    PauliTermList terms;
    const std::pair<double, Pauli> couplings[] = {
        {spec.j_xx, Pauli::X}, {spec.j_yy, Pauli::Y}, {spec.j_zz, Pauli::Z}};
    for (const auto &[j, axis] : couplings) {
        if (j == 0.0) {
            continue;
        }
        for (int i = 0; i + 1 < spec.num_qubits; ++i) {
            terms.push_back({-j, {{i, axis}, {i + 1, axis}}});
        }
    }
    if (spec.h_x != 0.0) {
        for (int i = 0; i < spec.num_qubits; ++i) {
            terms.push_back({-spec.h_x, {{i, Pauli::X}}});
        }
    }
    return terms;
}

ComplexMatrix dense_hamiltonian(const PauliTermList &terms, int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("Hamiltonian qubit count outside the supported range");
    }
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    if (dim > kMaxDenseDim) {
        throw CapacityError("dense Hamiltonian capped at dimension " + std::to_string(kMaxDenseDim));
    }
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (const auto &term : terms) {
        std::size_t flip = 0;
        std::size_t ymask = 0;
        std::size_t zmask = 0;
        for (const auto &f : term.factors) {
            if (f.qubit < 0 || f.qubit >= num_qubits) {
                throw std::out_of_range("Pauli factor on qubit outside the register");
            }
            const std::size_t bit = std::size_t{1} << f.qubit;
            if (f.axis == Pauli::X || f.axis == Pauli::Y) {
                flip |= bit;
            }
            if (f.axis == Pauli::Y) {
                ymask |= bit;
            }
            if (f.axis == Pauli::Z) {
                zmask |= bit;
            }
        }
        for (std::size_t col = 0; col < static_cast<std::size_t>(dim); ++col) {
            // Y|0> = i|1>, Y|1> = -i|0>, Z|b> = (-1)^b |b>.
            Complex phase = term.coefficient;
            const int ones_y = std::popcount(col & ymask);
            const int zeros_y = std::popcount(ymask) - ones_y;
            const int exp_i = (zeros_y - ones_y) & 3;
            static const Complex kPowI[4] = {1.0, kI, -1.0, -kI};
            phase *= kPowI[exp_i];
            if (std::popcount(col & zmask) & 1) {
                phase = -phase;
            }
            h(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += phase;
        }
    }
    return h;
}

double expectation(const PauliTermList &terms, const StateVector &state) {
    Complex e{0.0, 0.0};
    for (const auto &term : terms) {
        StateVector tmp = state;
        for (const auto &f : term.factors) {
            tmp.apply_pauli(f.qubit, f.axis);
        }
        e += term.coefficient * inner_product(state, tmp);
    }
    return e.real();
}

StateVector expm_apply(const PauliTermList &terms, double tau, StateVector state) {
    const ComplexMatrix h = dense_hamiltonian(terms, state.num_qubits());
    const EigenDecomposition eig = hermitian_eigendecomposition(h);
    Eigen::Map<Eigen::VectorXcd> v(state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
    Eigen::VectorXcd coeffs = eig.vectors.adjoint() * v;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::polar(1.0, -tau * eig.values(k));
    }
    v.noalias() = eig.vectors * coeffs;
    return state;
}

std::string scrambler_kind(const ScramblerSpec &spec) {
    return std::visit(overloaded{[](const IdentityScrambler &) { return std::string("identity"); },
                                 [](const HaarScrambler &) { return std::string("haar"); },
                                 [](const BrickworkScrambler &) { return std::string("brickwork"); },
                                 [](const AnalogScrambler &) { return std::string("analog"); }},
                      spec);
}

std::vector<std::pair<int, int>> brickwork_pairs(int num_qubits, int layer) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = layer % 2; a + 1 < num_qubits; a += 2) {
        pairs.emplace_back(a, a + 1);
    }
    return pairs;
}

void CompiledScrambler::check(const StateVector &state) const {
    if (state.num_qubits() != num_qubits_) {
        throw std::invalid_argument("scrambler compiled for " + std::to_string(num_qubits_) +
                                    " qubits applied to a " + std::to_string(state.num_qubits()) +
                                    "-qubit state");
    }
}

void CompiledScrambler::apply(StateVector &state) const {
    check(state);
    if (dense_) {
        state.apply_dense_unitary(*dense_);
        return;
    }
    for (const auto &g : gates_) {
        state.apply_two_qubit_gate(g.qubit_a, g.qubit_b, g.gate);
    }
}

void CompiledScrambler::apply_adjoint(StateVector &state) const {
    check(state);
    if (dense_) {
        state.apply_dense_unitary_adjoint(*dense_);
        return;
    }
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        state.apply_two_qubit_gate(it->qubit_a, it->qubit_b, it->gate.adjoint());
    }
}

ComplexMatrix CompiledScrambler::to_dense() const {
    if (dense_) {
        return *dense_;
    }
    const Eigen::Index dim = Eigen::Index{1} << num_qubits_;
    ComplexMatrix u(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        std::vector<Complex> basis(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
        basis[static_cast<std::size_t>(c)] = 1.0;
        StateVector col = StateVector::from_amplitudes(std::move(basis));
        apply(col);
        for (Eigen::Index r = 0; r < dim; ++r) {
            u(r, c) = col[static_cast<std::size_t>(r)];
        }
    }
    return u;
}

CompiledScrambler compile_scrambler(const ScramblerSpec &spec, int num_qubits, RandomStream &rng) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("scrambler qubit count outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    CompiledScrambler out(spec, num_qubits);
    const int dim = 1 << num_qubits;
    std::visit(overloaded{
                   [&](const IdentityScrambler &) {},
                   [&](const HaarScrambler &) {
                       if (dim > kMaxDenseDim) {
                           throw CapacityError("Haar scrambler capped at dimension " +
                                               std::to_string(kMaxDenseDim));
                       }
                       out.dense_ = haar_unitary(dim, rng);
                   },
                   [&](const BrickworkScrambler &b) {
                       if (b.depth < 1) {
                           throw std::invalid_argument("brickwork depth must be >= 1");
                       }
                       if (num_qubits < 2) {
                           throw std::invalid_argument("brickwork scrambler needs at least 2 qubits");
                       }
                       for (int layer = 0; layer < b.depth; ++layer) {
                           for (const auto &[a, c] : brickwork_pairs(num_qubits, layer)) {
                               out.gates_.push_back({a, c, haar_unitary(4, rng)});
                           }
                       }
                   },
                   [&](const AnalogScrambler &a) {
                       if (a.tau < 0.0) {
                           throw std::invalid_argument("evolution time must be >= 0");
                       }
                       if (a.hamiltonian.num_qubits != num_qubits) {
                           throw std::invalid_argument("Hamiltonian size does not match the register");
                       }
                       const auto terms = build_hamiltonian(a.hamiltonian);
                       out.eigen_ = hermitian_eigendecomposition(dense_hamiltonian(terms, num_qubits));
                       out.dense_ = evolution_operator(*out.eigen_, a.tau);
                   },
               },
               spec);
    return out;
}

double page_entropy(long d_a, long d_b) {
    if (d_a < 2 || d_b < 2) {
        throw std::invalid_argument("Page entropy needs subsystem dimensions >= 2");
    }
    if (d_a > d_b) {
        throw std::invalid_argument("Page entropy needs d_a <= d_b");
    }
    double s = 0.0;
    // Summing small terms first keeps the rounding error at the 1e-16 level.
    for (long k = d_a * d_b; k > d_b; --k) {
        s += 1.0 / static_cast<double>(k);
    }
    return s - static_cast<double>(d_a - 1) / (2.0 * static_cast<double>(d_b));
}

} // namespace qsbm
