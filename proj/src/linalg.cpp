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

#include "qsbm/linalg.hpp"

#include <cmath>
#include <string>

#include "qsbm/random.hpp"

namespace qsbm {

EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix &matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("eigendecomposition needs a square matrix");
    }
    if (matrix.rows() > kMaxDenseDim) {
        throw CapacityError("dense eigensolver capped at dimension " + std::to_string(kMaxDenseDim));
    }
    const double asym = (matrix - matrix.adjoint()).norm();
    if (asym > 1e-10 * std::max(1.0, matrix.norm())) {
        throw std::invalid_argument("matrix is not Hermitian (||H - H^dag||_F = " + std::to_string(asym) +
                                    ")");
    }
    // Eigen's solver is Householder tridiagonalization followed by implicit
    // symmetric QR with Wilkinson shifts; eigenvalues come out ascending.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix evolution_operator(const EigenDecomposition &eig, double tau) {
    const Eigen::Index n = eig.values.size();
    Eigen::VectorXcd phases(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phases(k) = std::polar(1.0, -tau * eig.values(k));
    }
    ComplexMatrix out;
    out.noalias() = (eig.vectors * phases.asDiagonal()) * eig.vectors.adjoint();
    return out;
}

ComplexMatrix haar_unitary(int dim, RandomStream &rng) {
    if (dim < 2) {
        throw std::invalid_argument("Haar unitary needs dim >= 2");
    }
    const double scale = 1.0 / std::sqrt(2.0);
    ComplexMatrix z(dim, dim);
    // Column-major fill keeps the draw order independent of Eigen internals.
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(r, c) = Complex{re * scale, im * scale};
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix &packed = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Complex r = packed(k, k);
        const double mag = std::abs(r);
        const Complex phase = mag > 0.0 ? r / mag : Complex{1.0, 0.0};
        q.col(k) *= phase;
    }
    return q;
}

double unitarity_defect(const ComplexMatrix &u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

} // namespace qsbm
