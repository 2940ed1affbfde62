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

#include "qsbm/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qsbm/random.hpp"

namespace qsbm {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
}

/// Insert a zero bit at position `pos` of `x`.
inline std::size_t insert_zero(std::size_t x, int pos) {
    const std::size_t low = x & ((std::size_t{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

/// Bitmask of the qubit set; validates range and duplicates.
std::size_t qubit_mask(std::span<const int> qubits, int num_qubits) {
    std::size_t mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= num_qubits) {
            throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
        }
        const std::size_t bit = std::size_t{1} << q;
        if (mask & bit) {
            throw std::invalid_argument("duplicate qubit index " + std::to_string(q));
        }
        mask |= bit;
    }
    return mask;
}

/// Gather the bits of `x` selected by `mask` into a compact integer.
inline std::size_t extract_bits(std::size_t x, std::size_t mask) {
    std::size_t out = 0;
    int k = 0;
    while (mask) {
        const int pos = std::countr_zero(mask);
        out |= ((x >> pos) & 1U) << k;
        ++k;
        mask &= mask - 1;
    }
    return out;
}

} // namespace

namespace gates {

Gate1 rx(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Gate1 g;
    g << c, -kI * s, -kI * s, c;
    return g;
}

Gate1 ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Gate1 g;
    g << c, -s, s, c;
    return g;
}

Gate1 rz(double theta) {
    Gate1 g;
    g << std::exp(-kI * (theta / 2)), 0.0, 0.0, std::exp(kI * (theta / 2));
    return g;
}

Gate1 rotation(Pauli axis, double theta) {
    switch (axis) {
    case Pauli::X:
        return rx(theta);
    case Pauli::Y:
        return ry(theta);
    case Pauli::Z:
        return rz(theta);
    }
    throw std::invalid_argument("unknown axis");
}

Gate1 hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    Gate1 g;
    g << r, r, r, -r;
    return g;
}

Gate1 pauli(Pauli axis) {
    Gate1 g;
    switch (axis) {
    case Pauli::X:
        g << 0.0, 1.0, 1.0, 0.0;
        break;
    case Pauli::Y:
        g << 0.0, -kI, kI, 0.0;
        break;
    case Pauli::Z:
        g << 1.0, 0.0, 0.0, -1.0;
        break;
    }
    return g;
}

Gate2 cnot() {
    Gate2 g = Gate2::Zero();
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    g(2, 3) = 1.0;
    g(3, 2) = 1.0;
    return g;
}

Gate2 swap() {
    Gate2 g = Gate2::Zero();
    g(0, 0) = 1.0;
    g(1, 2) = 1.0;
    g(2, 1) = 1.0;
    g(3, 3) = 1.0;
    return g;
}

} // namespace gates

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    const int num_qubits = std::countr_zero(n);
    check_qubit_count(num_qubits);
    for (const auto &a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("non-finite amplitude");
        }
    }
    return StateVector(num_qubits, std::move(amplitudes));
}

StateVector zero_state(int num_qubits) { return StateVector(num_qubits); }

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(num_qubits_) + " qubits");
    }
}

void StateVector::apply_single_qubit_gate(int qubit, const Gate1 &gate) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t half = amps_.size() / 2;
    const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    Complex *a = amps_.data();
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, qubit);
        const std::size_t i1 = i0 | bit;
        const Complex v0 = a[i0];
        const Complex v1 = a[i1];
        a[i0] = g00 * v0 + g01 * v1;
        a[i1] = g10 * v0 + g11 * v1;
    }
}

void StateVector::apply_two_qubit_gate(int qubit_a, int qubit_b, const Gate2 &gate) {
    check_qubit(qubit_a);
    check_qubit(qubit_b);
    if (qubit_a == qubit_b) {
        throw std::invalid_argument("two-qubit gate needs distinct qubits");
    }
    const int lo = std::min(qubit_a, qubit_b);
    const int hi = std::max(qubit_a, qubit_b);
    const std::size_t bit_a = std::size_t{1} << qubit_a;
    const std::size_t bit_b = std::size_t{1} << qubit_b;
    const std::size_t quarter = amps_.size() / 4;
    Complex *a = amps_.data();
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::size_t idx[4] = {base, base | bit_b, base | bit_a, base | bit_a | bit_b};
        const Complex v[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
        for (int r = 0; r < 4; ++r) {
            a[idx[r]] = gate(r, 0) * v[0] + gate(r, 1) * v[1] + gate(r, 2) * v[2] + gate(r, 3) * v[3];
        }
    }
}

void StateVector::apply_dense(std::span<Complex> amps, const ComplexMatrix &u, bool adjoint) {
    const auto dim = static_cast<Eigen::Index>(amps.size());
    if (u.rows() != dim || u.cols() != dim) {
        throw std::invalid_argument("unitary dimension " + std::to_string(u.rows()) +
                                    " does not match state dimension " + std::to_string(dim));
    }
    Eigen::Map<Eigen::VectorXcd> v(amps.data(), dim);
    Eigen::VectorXcd out;
    if (adjoint) {
        out.noalias() = u.adjoint() * v;
    } else {
        out.noalias() = u * v;
    }
    v = out;
}

void StateVector::apply_dense_unitary(const ComplexMatrix &unitary) { apply_dense(amps_, unitary, false); }

void StateVector::apply_dense_unitary_adjoint(const ComplexMatrix &unitary) {
    apply_dense(amps_, unitary, true);
}

void StateVector::apply_pauli(int qubit, Pauli axis) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        switch (axis) {
        case Pauli::X:
            if (!(i & bit)) {
                std::swap(amps_[i], amps_[i | bit]);
            }
            break;
        case Pauli::Y:
            if (!(i & bit)) {
                const Complex v0 = amps_[i];
                const Complex v1 = amps_[i | bit];
                amps_[i] = -kI * v1;
                amps_[i | bit] = kI * v0;
            }
            break;
        case Pauli::Z:
            if (i & bit) {
                amps_[i] = -amps_[i];
            }
            break;
        }
    }
}

Complex inner_product(const StateVector &lhs, const StateVector &rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw std::invalid_argument("inner product of mismatched states");
    }
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < lhs.dim(); ++i) {
        s += std::conj(lhs[i]) * rhs[i];
    }
    return s;
}

Complex pauli_matrix_element(const StateVector &lhs, const StateVector &rhs, int qubit, Pauli axis) {
    if (lhs.dim() != rhs.dim()) {
        throw std::invalid_argument("matrix element of mismatched states");
    }
    if (qubit < 0 || qubit >= lhs.num_qubits()) {
        throw std::out_of_range("qubit index out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const auto l = lhs.amplitudes();
    const auto r = rhs.amplitudes();
    Complex s{0.0, 0.0};
    switch (axis) {
    case Pauli::X:
        for (std::size_t i = 0; i < l.size(); ++i) {
            s += std::conj(l[i]) * r[i ^ bit];
        }
        break;
    case Pauli::Y:
        // (Y r)_i = -i r_{i^bit} if bit(i) = 0, +i r_{i^bit} otherwise.
        for (std::size_t i = 0; i < l.size(); ++i) {
            const Complex t = std::conj(l[i]) * r[i ^ bit];
            s += (i & bit) ? kI * t : -kI * t;
        }
        break;
    case Pauli::Z:
        for (std::size_t i = 0; i < l.size(); ++i) {
            const Complex t = std::conj(l[i]) * r[i];
            s += (i & bit) ? -t : t;
        }
        break;
    }
    return s;
}

std::vector<double> full_probabilities(const StateVector &state) {
    std::vector<double> p(state.dim());
    const auto a = state.amplitudes();
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(a[i]);
    }
    return p;
}

std::vector<double> marginal_probabilities(const StateVector &state, std::span<const int> ancilla_qubits) {
    const std::size_t anc_mask = qubit_mask(ancilla_qubits, state.num_qubits());
    const std::size_t kept_mask = (state.dim() - 1) & ~anc_mask;
    std::vector<double> q(std::size_t{1} << std::popcount(kept_mask), 0.0);
    const auto a = state.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        q[extract_bits(i, kept_mask)] += std::norm(a[i]);
    }
    return q;
}

std::vector<double> marginal_probabilities_high(const StateVector &state, int num_ancillas) {
    if (num_ancillas < 0 || num_ancillas >= state.num_qubits()) {
        throw std::out_of_range("ancilla count must lie in [0, N)");
    }
    const std::size_t bins = state.dim() >> num_ancillas;
    std::vector<double> q(bins, 0.0);
    const auto a = state.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        q[i & (bins - 1)] += std::norm(a[i]);
    }
    return q;
}

ReducedDensityMatrix reduced_density_matrix(const StateVector &state, std::span<const int> kept_qubits) {
    const std::size_t kept_mask = qubit_mask(kept_qubits, state.num_qubits());
    const int kept = std::popcount(kept_mask);
    if (kept == 0 || kept == state.num_qubits()) {
        throw std::invalid_argument("kept set must be a nonempty proper subset of the qubits");
    }
    const std::size_t env_mask = (state.dim() - 1) & ~kept_mask;
    const Eigen::Index rows = Eigen::Index{1} << kept;
    const Eigen::Index cols = static_cast<Eigen::Index>(state.dim()) / rows;
    ComplexMatrix psi(rows, cols);
    const auto a = state.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        psi(static_cast<Eigen::Index>(extract_bits(i, kept_mask)),
            static_cast<Eigen::Index>(extract_bits(i, env_mask))) = a[i];
    }
    ReducedDensityMatrix rdm;
    rdm.num_kept_qubits = kept;
    rdm.entries.noalias() = psi * psi.adjoint();
    return rdm;
}

double von_neumann_entropy(const ReducedDensityMatrix &rdm) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rdm.entries, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lambda : solver.eigenvalues()) {
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda > 0.0) {
            s -= lambda * std::log(lambda);
        }
    }
    return s;
}

double half_chain_entropy(const StateVector &state) {
    const int half = state.num_qubits() / 2;
    if (half == 0) {
        return 0.0;
    }
    std::vector<int> kept(static_cast<std::size_t>(half));
    std::iota(kept.begin(), kept.end(), 0);
    return von_neumann_entropy(reduced_density_matrix(state, kept));
}

std::vector<std::int64_t> sample_counts(std::span<const double> probs, std::int64_t num_shots,
                                        RandomStream &rng) {
    if (probs.empty()) {
        throw std::invalid_argument("empty probability vector");
    }
    if (num_shots < 0) {
        throw std::invalid_argument("negative shot count");
    }
    std::vector<double> cdf(probs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= -1e-12)) {
            throw std::invalid_argument("probability " + std::to_string(probs[i]) + " at bin " +
                                        std::to_string(i) + " is negative");
        }
        total += std::max(probs[i], 0.0);
        cdf[i] = total;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
    }
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (std::int64_t s = 0; s < num_shots; ++s) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        // Zero-probability bins share their cdf value with the previous bin;
        // upper_bound never lands on them.
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
}

} // namespace qsbm
