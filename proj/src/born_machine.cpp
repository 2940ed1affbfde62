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

#include "qsbm/born_machine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsbm/linalg.hpp"
#include "qsbm/random.hpp"

namespace qsbm {

namespace {

constexpr Complex kI{0.0, 1.0};

/// Eigenvalue gaps below this use the analytic diagonal limit of the
/// divided difference.
constexpr double kDegeneracyGap = 1e-8;

constexpr Pauli kRotationAxis[3] = {Pauli::X, Pauli::Z, Pauli::Y};

std::size_t layer_block(int num_qubits) { return 3 * static_cast<std::size_t>(num_qubits) + 1; }

/// Applies U^dag of a dense scrambler to two states with a single pass over U.
void apply_dense_adjoint_pair(const ComplexMatrix &u, StateVector &a, StateVector &b) {
    const auto dim = static_cast<Eigen::Index>(a.dim());
    Eigen::Matrix<Complex, Eigen::Dynamic, 2> block(dim, 2);
    block.col(0) = Eigen::Map<const Eigen::VectorXcd>(a.amplitudes().data(), dim);
    block.col(1) = Eigen::Map<const Eigen::VectorXcd>(b.amplitudes().data(), dim);
    Eigen::Matrix<Complex, Eigen::Dynamic, 2> out;
    out.noalias() = u.adjoint() * block;
    Eigen::Map<Eigen::VectorXcd>(a.amplitudes().data(), dim) = out.col(0);
    Eigen::Map<Eigen::VectorXcd>(b.amplitudes().data(), dim) = out.col(1);
}

/// Dense Hamiltonian of one trainable layer, assembled directly.
ComplexMatrix layer_hamiltonian_dense(int num_qubits, std::span<const double> p, double offset) {
    const auto dim = Eigen::Index{1} << num_qubits;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    h.diagonal().setConstant(offset);
    const double j = p[0];
    const auto hx = p.subspan(1, static_cast<std::size_t>(num_qubits));
    const auto hy = p.subspan(1 + static_cast<std::size_t>(num_qubits), static_cast<std::size_t>(num_qubits));
    const auto hz = p.subspan(1 + 2 * static_cast<std::size_t>(num_qubits), static_cast<std::size_t>(num_qubits));
    for (Eigen::Index col = 0; col < dim; ++col) {
        double diag = 0.0;
        for (int i = 0; i < num_qubits; ++i) {
            const Eigen::Index bit = Eigen::Index{1} << i;
            const bool one = (col & bit) != 0;
            diag -= hz[static_cast<std::size_t>(i)] * (one ? -1.0 : 1.0);
            // -(hx X + hy Y)|b> = -(hx + i hy (-1)^b) |b^1>
            h(col ^ bit, col) -= Complex{hx[static_cast<std::size_t>(i)],
                                         one ? -hy[static_cast<std::size_t>(i)] : hy[static_cast<std::size_t>(i)]};
            if (i + 1 < num_qubits) {
                h(col ^ bit ^ (bit << 1), col) -= j;
            }
        }
        h(col, col) += diag;
    }
    return h;
}

} // namespace

std::size_t ModelSpec::num_parameters() const {
    const auto n = static_cast<std::size_t>(num_qubits);
    const auto l = static_cast<std::size_t>(num_layers);
    return is_trainable_hamiltonian() ? (3 * n + 1) * l : 3 * l * n;
}

void ModelSpec::validate() const {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("model qubit count " + std::to_string(num_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    if (num_ancillas < 0 || num_ancillas >= num_qubits) {
        throw std::invalid_argument("ancilla count must satisfy 0 <= N_A < N");
    }
    if (num_layers < 1) {
        throw std::invalid_argument("layer count must be >= 1");
    }
    if (const auto *th = std::get_if<TrainableHamiltonianModel>(&variant)) {
        if (num_qubits < 2) {
            throw std::invalid_argument("trainable Hamiltonian needs at least 2 qubits");
        }
        if (!(th->tau > 0.0)) {
            throw std::invalid_argument("trainable-Hamiltonian tau must be > 0");
        }
        if ((Eigen::Index{1} << num_qubits) > kMaxDenseDim) {
            throw CapacityError("trainable Hamiltonian exceeds the dense eigensolver cap");
        }
    }
}

std::size_t rotation_index(int num_qubits, int layer, int qubit, RotationSlot slot) {
    return (static_cast<std::size_t>(layer) * static_cast<std::size_t>(num_qubits) +
            static_cast<std::size_t>(qubit)) *
               3 +
           static_cast<std::size_t>(slot);
}

std::size_t hamiltonian_index(int num_qubits, int layer, HamiltonianSlot slot, int site) {
    const std::size_t base = static_cast<std::size_t>(layer) * layer_block(num_qubits);
    const auto n = static_cast<std::size_t>(num_qubits);
    const auto s = static_cast<std::size_t>(site);
    switch (slot) {
    case HamiltonianSlot::Coupling:
        return base;
    case HamiltonianSlot::FieldX:
        return base + 1 + s;
    case HamiltonianSlot::FieldY:
        return base + 1 + n + s;
    case HamiltonianSlot::FieldZ:
        return base + 1 + 2 * n + s;
    }
    throw std::invalid_argument("unknown Hamiltonian slot");
}

PauliTermList layer_hamiltonian(int num_qubits, std::span<const double> p) {
    if (p.size() != layer_block(num_qubits)) {
        throw std::invalid_argument("layer parameter block has the wrong size");
    }
    PauliTermList terms;
    for (int i = 0; i + 1 < num_qubits; ++i) {
        terms.push_back({-p[0], {{i, Pauli::X}, {i + 1, Pauli::X}}});
    }
    const auto n = static_cast<std::size_t>(num_qubits);
    for (int i = 0; i < num_qubits; ++i) {
        const auto s = static_cast<std::size_t>(i);
        terms.push_back({-p[1 + s], {{i, Pauli::X}}});
        terms.push_back({-p[1 + n + s], {{i, Pauli::Y}}});
        terms.push_back({-p[1 + 2 * n + s], {{i, Pauli::Z}}});
    }
    return terms;
}

double nll_with_weights(std::span<const double> target, std::span<const double> q, std::vector<double> *weights) {
    if (target.size() != q.size()) {
        throw std::invalid_argument("target has " + std::to_string(target.size()) + " bins, model has " +
                                    std::to_string(q.size()));
    }
    if (weights) {
        weights->assign(q.size(), 0.0);
    }
    double loss = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
        if (target[x] == 0.0) {
            continue;
        }
        if (q[x] > kProbabilityFloor) {
            loss -= target[x] * std::log(q[x]);
            if (weights) {
                (*weights)[x] = -target[x] / q[x];
            }
        } else {
            loss -= target[x] * std::log(kProbabilityFloor);
        }
    }
    return loss;
}

BornMachine::BornMachine(ModelSpec spec, std::shared_ptr<const CompiledScrambler> scrambler)
    : spec_(std::move(spec)), scrambler_(std::move(scrambler)) {
    spec_.validate();
    if (!spec_.is_trainable_hamiltonian()) {
        if (!scrambler_) {
            throw std::invalid_argument("fixed-scrambler model needs a compiled scrambler");
        }
        if (scrambler_->num_qubits() != spec_.num_qubits) {
            throw std::invalid_argument("scrambler compiled for a different register size");
        }
    }
}

void BornMachine::check_params(std::span<const double> params) const {
    if (params.size() != num_parameters()) {
        throw std::invalid_argument("expected " + std::to_string(num_parameters()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
}

void BornMachine::check_target(std::span<const double> target) const {
    if (target.size() != spec_.num_bins()) {
        throw std::invalid_argument("target has " + std::to_string(target.size()) + " bins, model measures " +
                                    std::to_string(spec_.num_bins()));
    }
    double s = 0.0;
    for (double p : target) {
        if (p < 0.0) {
            throw std::invalid_argument("target has a negative probability");
        }
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-10) {
        throw std::invalid_argument("target is not normalized (sum = " + std::to_string(s) + ")");
    }
}

StateVector BornMachine::forward(std::span<const double> params) const {
    check_params(params);
    const int n = spec_.num_qubits;
    StateVector psi(n);
    if (const auto *th = std::get_if<TrainableHamiltonianModel>(&spec_.variant)) {
        const std::size_t block = layer_block(n);
        for (int l = 0; l < spec_.num_layers; ++l) {
            const auto eig = hermitian_eigendecomposition(
                layer_hamiltonian_dense(n, params.subspan(static_cast<std::size_t>(l) * block, block), th->energy_offset));
            psi.apply_dense_unitary(evolution_operator(eig, th->tau));
        }
        return psi;
    }
    for (int l = 0; l < spec_.num_layers; ++l) {
        for (int slot = 0; slot < 2; ++slot) {
            for (int i = 0; i < n; ++i) {
                psi.apply_single_qubit_gate(
                    i, gates::rotation(kRotationAxis[slot],
                                       params[rotation_index(n, l, i, static_cast<RotationSlot>(slot))]));
            }
        }
        scrambler_->apply(psi);
        for (int i = 0; i < n; ++i) {
            psi.apply_single_qubit_gate(i, gates::ry(params[rotation_index(n, l, i, RotationSlot::YPost)]));
        }
    }
    return psi;
}

std::vector<double> BornMachine::output_distribution(std::span<const double> params) const {
    return marginal_probabilities_high(forward(params), spec_.num_ancillas);
}

double BornMachine::loss(std::span<const double> params, std::span<const double> target) const {
    check_target(target);
    return nll_with_weights(target, output_distribution(params), nullptr);
}

LossGradient BornMachine::loss_and_gradient(std::span<const double> params, std::span<const double> target) const {
    check_params(params);
    check_target(target);
    return spec_.is_trainable_hamiltonian() ? hamiltonian_gradient(params, target)
                                            : fixed_scrambler_gradient(params, target);
}

LossGradient BornMachine::fixed_scrambler_gradient(std::span<const double> params,
                                                   std::span<const double> target) const {
    const int n = spec_.num_qubits;
    StateVector psi = forward(params);

    LossGradient out;
    out.probabilities = marginal_probabilities_high(psi, spec_.num_ancillas);
    std::vector<double> w;
    out.loss = nll_with_weights(target, out.probabilities, &w);

    // Co-state lambda = dL/dpsi^*: w(x) psi_{x,a}.
    const std::size_t bins = spec_.num_bins();
    std::vector<Complex> seed(psi.dim());
    const auto a = psi.amplitudes();
    for (std::size_t i = 0; i < seed.size(); ++i) {
        seed[i] = w[i & (bins - 1)] * a[i];
    }
    StateVector lambda = StateVector::from_amplitudes(std::move(seed));

    // dL/dtheta = 2 Re <lambda| (-i/2) sigma |psi> = Im <lambda|sigma|psi>,
    // with both states taken just after the rotation.
    out.gradient.assign(params.size(), 0.0);
    const auto unrotate = [&](int l, int i, RotationSlot slot) {
        const std::size_t k = rotation_index(n, l, i, slot);
        const Pauli axis = kRotationAxis[static_cast<int>(slot)];
        out.gradient[k] = pauli_matrix_element(lambda, psi, i, axis).imag();
        const Gate1 inverse = gates::rotation(axis, -params[k]);
        psi.apply_single_qubit_gate(i, inverse);
        lambda.apply_single_qubit_gate(i, inverse);
    };
    for (int l = spec_.num_layers - 1; l >= 0; --l) {
        for (int i = n - 1; i >= 0; --i) {
            unrotate(l, i, RotationSlot::YPost);
        }
        if (scrambler_->dense()) {
            apply_dense_adjoint_pair(*scrambler_->dense(), psi, lambda);
        } else {
            scrambler_->apply_adjoint(psi);
            scrambler_->apply_adjoint(lambda);
        }
        for (int i = n - 1; i >= 0; --i) {
            unrotate(l, i, RotationSlot::ZPre);
        }
        for (int i = n - 1; i >= 0; --i) {
            unrotate(l, i, RotationSlot::XPre);
        }
    }
    return out;
}

LossGradient BornMachine::hamiltonian_gradient(std::span<const double> params, std::span<const double> target) const {
    const int n = spec_.num_qubits;
    const double tau = std::get<TrainableHamiltonianModel>(spec_.variant).tau;
    const double offset = std::get<TrainableHamiltonianModel>(spec_.variant).energy_offset;
    const std::size_t block = layer_block(n);
    const auto layers = static_cast<std::size_t>(spec_.num_layers);
    const auto dim = Eigen::Index{1} << n;

    // Forward sweep, keeping every layer's eigenbasis and input state.
    std::vector<EigenDecomposition> eigs;
    std::vector<Eigen::VectorXcd> inputs;
    eigs.reserve(layers);
    inputs.reserve(layers);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    for (std::size_t l = 0; l < layers; ++l) {
        eigs.push_back(hermitian_eigendecomposition(layer_hamiltonian_dense(n, params.subspan(l * block, block), offset)));
        inputs.push_back(psi);
        const auto &e = eigs.back();
        Eigen::VectorXcd c = e.vectors.adjoint() * psi;
        for (Eigen::Index k = 0; k < dim; ++k) {
            c(k) *= std::polar(1.0, -tau * e.values(k));
        }
        psi.noalias() = e.vectors * c;
    }

    LossGradient out;
    {
        const StateVector final_state =
            StateVector::from_amplitudes(std::vector<Complex>(psi.data(), psi.data() + dim));
        out.probabilities = marginal_probabilities_high(final_state, spec_.num_ancillas);
    }
    std::vector<double> w;
    out.loss = nll_with_weights(target, out.probabilities, &w);

    const auto bins = static_cast<Eigen::Index>(spec_.num_bins());
    Eigen::VectorXcd lambda(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        lambda(i) = w[static_cast<std::size_t>(i & (bins - 1))] * psi(i);
    }

    out.gradient.assign(params.size(), 0.0);
    ComplexMatrix m(dim, dim);
    Eigen::VectorXd alpha(dim), cos_a(dim), sin_a(dim);
    Eigen::VectorXcd left(dim), right(dim), diag(dim);
    ComplexMatrix yt;
    ComplexMatrix vt;
    for (std::size_t li = layers; li-- > 0;) {
        const auto &e = eigs[li];
        const Eigen::VectorXcd a = e.vectors.adjoint() * inputs[li];
        const Eigen::VectorXcd b = e.vectors.adjoint() * lambda;

        // dU = V (Phi o (V^dag dH V)) V^dag with the divided differences of
        // exp(-i tau x):
        //   Phi_jk = -i tau exp(-i tau (d_j + d_k)/2) sinc(tau (d_j - d_k)/2).
        // dL/dp = 2 Re sum_jk conj(b_j) Phi_jk G_jk a_k = 2 Re tr(dH X),
        //   X = V M^T V^dag,  M_jk = conj(b_j) Phi_jk a_k.
        // Only O(N dim) entries of X are needed, so X is never formed:
        //   X_{nm} = sum_k Y_{nk} conj(V_{mk}),  Y^T = M V^T.
        // With alpha = tau d / 2 the kernel factorizes into per-eigenvalue
        // phases and a real sinc, so no trig is evaluated inside the loop.
        for (Eigen::Index k = 0; k < dim; ++k) {
            alpha(k) = 0.5 * tau * e.values(k);
            cos_a(k) = std::cos(alpha(k));
            sin_a(k) = std::sin(alpha(k));
            const Complex half_phase{cos_a(k), -sin_a(k)};
            left(k) = -kI * tau * std::conj(b(k)) * half_phase;
            right(k) = half_phase * a(k);
        }
        for (Eigen::Index k = 0; k < dim; ++k) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                const double half = alpha(j) - alpha(k);
                double sinc = 1.0;
                if (std::abs(e.values(j) - e.values(k)) >= kDegeneracyGap) {
                    sinc = (sin_a(j) * cos_a(k) - cos_a(j) * sin_a(k)) / half;
                }
                m(j, k) = left(j) * right(k) * sinc;
            }
        }
        vt = e.vectors.transpose();
        yt.noalias() = m * vt;
        // X_{nm} = conj(vt.col(m)) . yt.col(n)
        const auto x_entry = [&](Eigen::Index row, Eigen::Index col) { return vt.col(col).dot(yt.col(row)); };

        const std::size_t base = li * block;
        // Coupling: dH/dJ = -sum_i X_i X_{i+1}.
        Complex tr_j{0.0, 0.0};
        for (int i = 0; i + 1 < n; ++i) {
            const Eigen::Index flip = Eigen::Index{3} << i;
            for (Eigen::Index r = 0; r < dim; ++r) {
                tr_j += x_entry(r, r ^ flip);
            }
        }
        out.gradient[base] = -2.0 * tr_j.real();
        for (Eigen::Index r = 0; r < dim; ++r) {
            diag(r) = x_entry(r, r);
        }
        for (int i = 0; i < n; ++i) {
            const Eigen::Index bit = Eigen::Index{1} << i;
            Complex tr_x{0.0, 0.0};
            Complex tr_y{0.0, 0.0};
            Complex tr_z{0.0, 0.0};
            for (Eigen::Index r = 0; r < dim; ++r) {
                const Complex off = x_entry(r, r ^ bit);
                tr_x += off;
                // tr(Y X) = sum_r Y_{r^bit, r} X_{r, r^bit}; Y_{r^bit, r} = i (-1)^{bit(r)}.
                tr_y += (r & bit) ? -kI * off : kI * off;
                tr_z += (r & bit) ? -diag(r) : diag(r);
            }
            const auto s = static_cast<std::size_t>(i);
            const auto nn = static_cast<std::size_t>(n);
            out.gradient[base + 1 + s] = -2.0 * tr_x.real();
            out.gradient[base + 1 + nn + s] = -2.0 * tr_y.real();
            out.gradient[base + 1 + 2 * nn + s] = -2.0 * tr_z.real();
        }

        // lambda <- U^dag lambda = V exp(+i tau D) b.
        Eigen::VectorXcd c = b;
        for (Eigen::Index k = 0; k < dim; ++k) {
            c(k) *= std::polar(1.0, tau * e.values(k));
        }
        lambda.noalias() = e.vectors * c;
    }
    return out;
}

std::vector<double> BornMachine::initial_parameters(RandomStream &rng) const {
    std::vector<double> p(num_parameters());
    for (double &v : p) {
        v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    if (spec_.is_trainable_hamiltonian()) {
        for (int l = 0; l < spec_.num_layers; ++l) {
            p[hamiltonian_index(spec_.num_qubits, l, HamiltonianSlot::Coupling)] = 1.0;
        }
    }
    return p;
}

} // namespace qsbm
