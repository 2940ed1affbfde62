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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qsbm {

/// Default seed for the random peak weights of the 1D benchmark.
inline constexpr std::uint64_t kDefaultWeightSeed = 42;

struct Grid1D {
    int n = 0;  ///< bins x = 0 .. 2^n - 1
};

/// Two registers mapped onto [lo, hi]^2. The joint bin index stores the x
/// register in the low n_x bits and the y register above it.
struct Grid2D {
    int n_x = 0;
    int n_y = 0;
    double lo = -3.0;
    double hi = 3.0;

    [[nodiscard]] std::size_t bins_x() const { return std::size_t{1} << n_x; }
    [[nodiscard]] std::size_t bins_y() const { return std::size_t{1} << n_y; }
    [[nodiscard]] double center_x(std::size_t k) const;
    [[nodiscard]] double center_y(std::size_t k) const;
    [[nodiscard]] std::size_t index(std::size_t kx, std::size_t ky) const { return kx | (ky << n_x); }
    [[nodiscard]] std::size_t x_of(std::size_t bin) const { return bin & (bins_x() - 1); }
    [[nodiscard]] std::size_t y_of(std::size_t bin) const { return bin >> n_x; }
};

struct TargetDistribution {
    std::vector<double> probs;
    std::variant<Grid1D, Grid2D> grid;
    std::string name;        ///< "multimodal_1d", "bivariate_gaussian_2d", "four_mode_2d"
    std::string provenance;  ///< construction parameters, for output metadata

    [[nodiscard]] std::size_t num_bins() const { return probs.size(); }
    [[nodiscard]] int num_bits() const;
};

/// Five Gaussian peaks at mu_j = (j - 0.5) 2^n / 5 with sigma = 2^n / 20 and
/// weights U(0.5, 1.5) drawn from `weight_seed`.
TargetDistribution multimodal_1d(int n, std::uint64_t weight_seed = kDefaultWeightSeed);
TargetDistribution multimodal_1d_with_weights(int n, const std::array<double, 5> &weights);
std::array<double, 5> multimodal_weights(std::uint64_t weight_seed);

TargetDistribution bivariate_gaussian_2d(int n_x, int n_y, double rho);

/// Isotropic Gaussians (sigma 0.5) centred at (+-1.5, +-1.5).
TargetDistribution four_mode_mixture_2d(int n_x, int n_y);

/// Centres of the four-mode mixture.
inline constexpr std::array<std::array<double, 2>, 4> kFourModeCenters = {
    {{-1.5, -1.5}, {1.5, -1.5}, {-1.5, 1.5}, {1.5, 1.5}}};

/// Bins whose centre is nearest to (x, y) (several on exact ties).
std::vector<std::size_t> nearest_bins(const Grid2D &grid, double x, double y);

/// Local maxima of a 2D distribution: connected plateaus whose value is >= every
/// 8-neighbour and at least `rel_threshold` times the global maximum. Each
/// plateau is reported as its member bins.
std::vector<std::vector<std::size_t>> find_modes(const Grid2D &grid, std::span<const double> probs,
                                                 double rel_threshold = 0.05);

/// -sum p ln max(q, 1e-12).
double nll(std::span<const double> p, std::span<const double> q);
/// -sum p ln p with 0 ln 0 = 0, in nats.
double shannon_entropy(std::span<const double> p);
/// D(p || q) with the same q floor as nll.
double kld(std::span<const double> p, std::span<const double> q);

/// Default additive smoothing (Jeffreys) for empirical distributions.
inline constexpr double kDefaultSmoothing = 0.5;

/// (count + alpha) / (shots + alpha * bins).
std::vector<double> empirical_distribution(std::span<const std::int64_t> counts,
                                           double smoothing_alpha = kDefaultSmoothing);

} // namespace qsbm
