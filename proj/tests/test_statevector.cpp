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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsbm/linalg.hpp"
#include "qsbm/random.hpp"
#include "qsbm/statevector.hpp"
#include "support/oracles.hpp"

using namespace qsbm;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StateVector ghz3() {
    std::vector<Complex> a(8, 0.0);
    a[0] = kInvSqrt2;
    a[7] = kInvSqrt2;
    return StateVector::from_amplitudes(a);
}

StateVector bell() {
    std::vector<Complex> a(4, 0.0);
    a[0] = kInvSqrt2;
    a[3] = kInvSqrt2;
    return StateVector::from_amplitudes(a);
}

StateVector random_state(int n, RandomStream &rng) {
    std::vector<Complex> a(std::size_t{1} << n);
    double s = 0.0;
    for (auto &x : a) {
        x = Complex(rng.normal(), rng.normal());
        s += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(s);
    }
    return StateVector::from_amplitudes(a);
}

} // namespace

TEST_CASE("zero state and capacity") {
    const auto s1 = zero_state(1);
    CHECK(s1.dim() == 2);
    CHECK(s1[0] == Complex(1, 0));
    CHECK(s1[1] == Complex(0, 0));
    const auto s3 = zero_state(3);
    CHECK(s3.dim() == 8);
    CHECK(s3[0] == Complex(1, 0));
    CHECK_THROWS_AS(zero_state(15), CapacityError);
    CHECK_THROWS_AS(zero_state(0), CapacityError);
}

TEST_CASE("single-qubit gates and bit order") {
    StateVector s(1);
    s.apply_single_qubit_gate(0, gates::ry(std::numbers::pi));
    CHECK(std::abs(s[0]) < 1e-16);
    CHECK(std::abs(s[1] - Complex(1, 0)) < 1e-15);

    StateVector z(1);
    z.apply_single_qubit_gate(0, gates::rz(0.7));
    CHECK(full_probabilities(z)[0] == doctest::Approx(1.0));

    StateVector h(2);
    h.apply_single_qubit_gate(1, gates::hadamard());
    CHECK(h[0].real() == doctest::Approx(kInvSqrt2));
    CHECK(h[2].real() == doctest::Approx(kInvSqrt2));
    CHECK(std::abs(h[1]) == 0.0);
    CHECK_THROWS(h.apply_single_qubit_gate(2, gates::hadamard()));
}

TEST_CASE("two-qubit gates") {
    StateVector s(2);
    s.apply_single_qubit_gate(0, gates::hadamard());
    s.apply_two_qubit_gate(0, 1, gates::cnot());
    const auto b = bell();
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(s[i] - b[i]) < 1e-15);
    }

    RandomStream rng(3);
    auto r = random_state(3, rng);
    const auto before = r;
    r.apply_two_qubit_gate(2, 0, Gate2::Identity());
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(r[i] == before[i]);
    }

    // |01> in qubit-0-least-significant order is index 1.
    auto sw = StateVector::from_amplitudes({0, 1, 0, 0});
    sw.apply_two_qubit_gate(0, 1, gates::swap());
    CHECK(std::abs(sw[2] - Complex(1, 0)) < 1e-15);
    CHECK_THROWS(sw.apply_two_qubit_gate(1, 1, gates::swap()));
}

TEST_CASE("two-qubit gate matches the Kronecker embedding") {
    RandomStream rng(17);
    const ComplexMatrix g = haar_unitary(4, rng);
    auto s = random_state(3, rng);
    const auto in = s;
    s.apply_two_qubit_gate(0, 2, g);
    // Build the 8x8 operator: local index 2*bit(a) + bit(b) with a = 0, b = 2.
    ComplexMatrix full = ComplexMatrix::Zero(8, 8);
    for (int col = 0; col < 8; ++col) {
        const int lc = 2 * (col & 1) + ((col >> 2) & 1);
        for (int lr = 0; lr < 4; ++lr) {
            const int row = (col & 2) | (lr >> 1) | ((lr & 1) << 2);
            full(row, col) += g(lr, lc);
        }
    }
    Eigen::VectorXcd v(8);
    for (int i = 0; i < 8; ++i) {
        v(i) = in[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd ref = full * v;
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(s[static_cast<std::size_t>(i)] - ref(i)) < 1e-14);
    }
}

TEST_CASE("dense unitaries") {
    RandomStream rng(5);
    const ComplexMatrix u = haar_unitary(16, rng);
    StateVector s(4);
    s.apply_dense_unitary(u);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(std::abs(s[i] - u(static_cast<Eigen::Index>(i), 0)) < 1e-15);
    }
    auto r = random_state(4, rng);
    const auto before = r;
    r.apply_dense_unitary(u);
    r.apply_dense_unitary_adjoint(u);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(std::abs(r[i] - before[i]) < 1e-10);
    }
    r.apply_dense_unitary(ComplexMatrix::Identity(16, 16));
    CHECK_THROWS(r.apply_dense_unitary(ComplexMatrix::Identity(8, 8)));
}

TEST_CASE("norm preservation and locality") {
    RandomStream rng(8);
    auto s = random_state(5, rng);
    for (int step = 0; step < 40; ++step) {
        const int q = static_cast<int>(rng.below(5));
        s.apply_single_qubit_gate(q, gates::rotation(static_cast<Pauli>(rng.below(3)), rng.uniform(-3, 3)));
        const int a = static_cast<int>(rng.below(5));
        const int b = (a + 1 + static_cast<int>(rng.below(4))) % 5;
        s.apply_two_qubit_gate(a, b, haar_unitary(4, rng));
    }
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));

    auto x = random_state(3, rng);
    auto y = x;
    const Gate1 g1 = gates::rx(0.3);
    const Gate1 g2 = gates::ry(1.1);
    x.apply_single_qubit_gate(0, g1);
    x.apply_single_qubit_gate(2, g2);
    y.apply_single_qubit_gate(2, g2);
    y.apply_single_qubit_gate(0, g1);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(x[i] - y[i]) < 1e-12);
    }
}

TEST_CASE("rotations follow exp(-i theta sigma / 2)") {
    for (Pauli axis : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const double theta = 0.83;
        const Gate1 p = gates::pauli(axis);
        const Gate1 expected = std::cos(theta / 2) * Gate1::Identity() - Complex(0, std::sin(theta / 2)) * p;
        CHECK((gates::rotation(axis, theta) - expected).norm() < 1e-15);
    }
}

TEST_CASE("probabilities and marginals") {
    const auto one = StateVector::from_amplitudes({0, 1});
    CHECK(full_probabilities(one) == std::vector<double>{0, 1});
    const auto plus = StateVector::from_amplitudes({kInvSqrt2, kInvSqrt2});
    CHECK(full_probabilities(plus)[0] == doctest::Approx(0.5));
    const auto g = full_probabilities(ghz3());
    CHECK(g[0] == doctest::Approx(0.5));
    CHECK(g[7] == doctest::Approx(0.5));

    const int anc[] = {2};
    const auto m = marginal_probabilities(ghz3(), anc);
    REQUIRE(m.size() == 4);
    CHECK(m[0] == doctest::Approx(0.5));
    CHECK(m[1] == 0.0);
    CHECK(m[2] == 0.0);
    CHECK(m[3] == doctest::Approx(0.5));
    CHECK(marginal_probabilities(ghz3(), {}) == full_probabilities(ghz3()));

    // Product state: system (qubits 0,1) times ancilla (qubit 2).
    RandomStream rng(1);
    const auto sys = random_state(2, rng);
    const auto anc_state = random_state(1, rng);
    std::vector<Complex> prod(8);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t x = 0; x < 4; ++x) {
            prod[a * 4 + x] = anc_state[a] * sys[x];
        }
    }
    const auto q = marginal_probabilities_high(StateVector::from_amplitudes(prod), 1);
    for (std::size_t x = 0; x < 4; ++x) {
        CHECK(q[x] == doctest::Approx(std::norm(sys[x])).epsilon(1e-13));
    }
    CHECK(marginal_probabilities_high(ghz3(), 1) == m);
}

TEST_CASE("reduced density matrices and entropy") {
    const int keep0[] = {0};
    const auto rb = reduced_density_matrix(bell(), keep0);
    CHECK((rb.entries - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK(von_neumann_entropy(rb) == doctest::Approx(std::log(2.0)));

    const int keep01[] = {0, 1};
    const auto rg = reduced_density_matrix(ghz3(), keep01);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    CHECK((rg.entries - expected).norm() < 1e-15);

    RandomStream rng(4);
    StateVector product(3);
    product.apply_single_qubit_gate(0, gates::rx(0.4));
    product.apply_single_qubit_gate(1, gates::ry(1.2));
    const auto rp = reduced_density_matrix(product, keep01);
    CHECK((rp.entries * rp.entries - rp.entries).norm() < 1e-14);
    CHECK(von_neumann_entropy(rp) == doctest::Approx(0.0).epsilon(1e-10));

    ReducedDensityMatrix mixed4{2, 0.25 * ComplexMatrix::Identity(4, 4)};
    CHECK(von_neumann_entropy(mixed4) == doctest::Approx(std::log(4.0)));

    const int keep_all[] = {0, 1, 2};
    CHECK_THROWS(reduced_density_matrix(ghz3(), keep_all));
    CHECK_THROWS(reduced_density_matrix(ghz3(), {}));
    CHECK(half_chain_entropy(zero_state(1)) == 0.0);
}

TEST_CASE("marginals equal the RDM diagonal and entropies are bounded") {
    RandomStream rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_state(5, rng);
        const int anc[] = {3, 4};
        const int kept[] = {0, 1, 2};
        const auto q = marginal_probabilities(s, anc);
        const auto rdm = reduced_density_matrix(s, kept);
        for (std::size_t x = 0; x < q.size(); ++x) {
            CHECK(std::abs(q[x] - rdm.entries(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)).real()) <
                  1e-12);
        }
        const double e = von_neumann_entropy(rdm);
        CHECK(e >= 0.0);
        CHECK(e <= 3 * std::log(2.0) + 1e-12);
    }
}

TEST_CASE("sampling") {
    RandomStream rng(99);
    const std::vector<double> delta{1.0, 0.0};
    CHECK(sample_counts(delta, 5000, rng) == std::vector<std::int64_t>{5000, 0});
    const std::vector<double> half{0.5, 0.5};
    const auto c = sample_counts(half, 1000000, rng);
    CHECK(std::abs(static_cast<double>(c[0]) - 5e5) < 5 * 500);
    CHECK(c[0] + c[1] == 1000000);
    RandomStream a(5);
    RandomStream b(5);
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    CHECK(sample_counts(p, 777, a) == sample_counts(p, 777, b));
    CHECK_THROWS(sample_counts(std::vector<double>{0.5, 0.6}, 10, rng));
    CHECK_THROWS(sample_counts(std::vector<double>{1.5, -0.5}, 10, rng));
}
