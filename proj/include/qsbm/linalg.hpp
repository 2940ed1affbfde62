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

#pragma once

#include <Eigen/Dense>

#include "qsbm/statevector.hpp"

namespace qsbm {

class RandomStream;

/// Largest matrix the dense eigensolver accepts (N <= 12).
inline constexpr Eigen::Index kMaxDenseDim = 4096;

struct EigenDecomposition {
    Eigen::VectorXd values;  ///< ascending
    ComplexMatrix vectors;   ///< columns are eigenvectors
};

/// Householder tridiagonalization + implicit-shift QL/QR.
/// Throws std::invalid_argument when ||H - H^dag||_F > 1e-10 * max(1, ||H||_F).
EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix &matrix);

/// V diag(exp(-i tau d)) V^dag.
ComplexMatrix evolution_operator(const EigenDecomposition &eig, double tau);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q.
ComplexMatrix haar_unitary(int dim, RandomStream &rng);

/// ||U^dag U - I||_F.
double unitarity_defect(const ComplexMatrix &u);

} // namespace qsbm
