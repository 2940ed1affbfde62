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


#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

namespace qsbm::oracle {

namespace {

Gate1 pauli_matrix(Pauli axis) {
    Gate1 m;
    switch (axis) {
    case Pauli::X:
        m << 0, 1, 1, 0;
        break;
    case Pauli::Y:
        m << 0, Complex(0, -1), Complex(0, 1), 0;
        break;
    case Pauli::Z:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

Gate1 rotation_matrix(Pauli axis, double theta) {
    // exp(-i theta P / 2) = cos(theta/2) I - i sin(theta/2) P
    return std::cos(theta / 2) * Gate1::Identity() - Complex(0, std::sin(theta / 2)) * pauli_matrix(axis);
}

} // namespace

ComplexMatrix embed_single(int num_qubits, int qubit, const Gate1 &op) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int q = num_qubits - 1; q >= 0; --q) {
        const ComplexMatrix factor = q == qubit ? ComplexMatrix(op) : ComplexMatrix::Identity(2, 2);
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

ComplexMatrix pauli_string(int num_qubits, std::span<const PauliFactor> factors) {
    const auto dim = Eigen::Index{1} << num_qubits;
    ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
    for (const auto &f : factors) {
        out = embed_single(num_qubits, f.qubit, pauli_matrix(f.axis)) * out;
    }
    return out;
}

ComplexMatrix hamiltonian_by_kron(const PauliTermList &terms, int num_qubits) {
    const auto dim = Eigen::Index{1} << num_qubits;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (const auto &t : terms) {
        h += t.coefficient * pauli_string(num_qubits, t.factors);
    }
    return h;
}

ComplexMatrix model_unitary(const BornMachine &model, std::span<const double> params) {
    const ModelSpec &spec = model.spec();
    const int n = spec.num_qubits;
    const auto dim = Eigen::Index{1} << n;
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix scr = model.scrambler()->to_dense();
    for (int l = 0; l < spec.num_layers; ++l) {
        for (int i = 0; i < n; ++i) {
            u = embed_single(n, i, rotation_matrix(Pauli::X, params[rotation_index(n, l, i, RotationSlot::XPre)])) * u;
        }
        for (int i = 0; i < n; ++i) {
            u = embed_single(n, i, rotation_matrix(Pauli::Z, params[rotation_index(n, l, i, RotationSlot::ZPre)])) * u;
        }
        u = scr * u;
        for (int i = 0; i < n; ++i) {
            u = embed_single(n, i, rotation_matrix(Pauli::Y, params[rotation_index(n, l, i, RotationSlot::YPost)])) * u;
        }
    }
    return u;
}

std::vector<double> traced_probabilities(const Eigen::VectorXcd &psi, int num_ancillas) {
    const auto dim = static_cast<std::size_t>(psi.size());
    const std::size_t anc = std::size_t{1} << num_ancillas;
    const std::size_t bins = dim / anc;
    std::vector<double> q(bins, 0.0);
    for (std::size_t x = 0; x < bins; ++x) {
        for (std::size_t a = 0; a < anc; ++a) {
            q[x] += std::norm(psi[static_cast<Eigen::Index>(a * bins + x)]);
        }
    }
    return q;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)> &f,
                                       std::span<const double> params, double h) {
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double keep = p[i];
        double f_at[4];
        const double offsets[4] = {2 * h, h, -h, -2 * h};
        for (int k = 0; k < 4; ++k) {
            p[i] = keep + offsets[k];
            f_at[k] = f(p);
        }
        p[i] = keep;
        g[i] = (-f_at[0] + 8 * f_at[1] - 8 * f_at[2] + f_at[3]) / (12 * h);
    }
    return g;
}

std::vector<double> parameter_shift_gradient(const BornMachine &model, std::span<const double> params,
                                             std::span<const double> target) {
    const auto q = model.output_distribution(params);
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> g(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double keep = p[i];
        p[i] = keep + std::numbers::pi / 2;
        const auto up = model.output_distribution(p);
        p[i] = keep - std::numbers::pi / 2;
        const auto down = model.output_distribution(p);
        p[i] = keep;
        for (std::size_t x = 0; x < q.size(); ++x) {
            g[i] += -target[x] / q[x] * 0.5 * (up[x] - down[x]);
        }
    }
    return g;
}

double max_relative_error(std::span<const double> g, std::span<const double> ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(g[i] - ref[i]) / std::max(std::abs(ref[i]), 1e-3));
    }
    return worst;
}

std::vector<double> rbm_brute_force(const RbmParams &params) {
    const int nv = params.num_visible();
    const int nh = params.num_hidden();
    std::vector<double> p(std::size_t{1} << nv, 0.0);
    double z = 0.0;
    for (std::size_t v = 0; v < p.size(); ++v) {
        for (std::size_t h = 0; h < (std::size_t{1} << nh); ++h) {
            double minus_energy = 0.0;
            for (int i = 0; i < nv; ++i) {
                const double vi = static_cast<double>((v >> i) & 1U);
                minus_energy += params.visible_bias[i] * vi;
                for (int j = 0; j < nh; ++j) {
                    minus_energy += vi * params.weights(i, j) * static_cast<double>((h >> j) & 1U);
                }
            }
            for (int j = 0; j < nh; ++j) {
                minus_energy += params.hidden_bias[j] * static_cast<double>((h >> j) & 1U);
            }
            p[v] += std::exp(minus_energy);
        }
        z += p[v];
    }
    for (double &x : p) {
        x /= z;
    }
    return p;
}

double page_reference(long d_a, long d_b) {
    long double s = 0.0L;
    for (long k = d_b + 1; k <= d_a * d_b; ++k) {
        s += 1.0L / static_cast<long double>(k);
    }
    return static_cast<double>(s - static_cast<long double>(d_a - 1) / (2.0L * static_cast<long double>(d_b)));
}

std::vector<double> random_distribution(std::size_t bins, RandomStream &rng) {
    std::vector<double> p(bins);
    double s = 0.0;
    for (double &x : p) {
        x = rng.uniform(0.1, 1.0);
        s += x;
    }
    for (double &x : p) {
        x /= s;
    }
    return p;
}

} // namespace qsbm::oracle
