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

#include "qsbm/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qsbm/born_machine.hpp"
#include "qsbm/random.hpp"

namespace qsbm {

namespace {

void normalize(std::vector<double> &p) {
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double &v : p) {
        v /= s;
    }
}

void check_grid_bits(int n_x, int n_y, int min_bits) {
    if (n_x < min_bits || n_y < min_bits) {
        throw std::invalid_argument("2D grid needs at least " + std::to_string(min_bits) + " bits per register");
    }
    if (n_x + n_y > 20) {
        throw std::invalid_argument("2D grid larger than 2^20 bins");
    }
}

void check_same_length(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("distributions have different lengths (" + std::to_string(p.size()) + " vs " +
                                    std::to_string(q.size()) + ")");
    }
}

} // namespace

double Grid2D::center_x(std::size_t k) const {
    return lo + (static_cast<double>(k) + 0.5) * (hi - lo) / static_cast<double>(bins_x());
}

double Grid2D::center_y(std::size_t k) const {
    return lo + (static_cast<double>(k) + 0.5) * (hi - lo) / static_cast<double>(bins_y());
}

int TargetDistribution::num_bits() const {
    return std::visit(
        [](const auto &g) {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Grid1D>) {
                return g.n;
            } else {
                return g.n_x + g.n_y;
            }
        },
        grid);
}

std::array<double, 5> multimodal_weights(std::uint64_t weight_seed) {
    RandomStream rng(weight_seed);
    std::array<double, 5> w{};
    for (double &v : w) {
        v = rng.uniform(0.5, 1.5);
    }
    return w;
}

TargetDistribution multimodal_1d_with_weights(int n, const std::array<double, 5> &weights) {
    if (n < 3 || n > 20) {
        throw std::invalid_argument("multimodal target needs 3 <= n <= 20");
    }
    const double bins = std::ldexp(1.0, n);
    const double sigma = bins / 20.0;
    TargetDistribution t;
    t.probs.assign(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t x = 0; x < t.probs.size(); ++x) {
        double v = 0.0;
        for (int j = 1; j <= 5; ++j) {
            const double mu = (j - 0.5) * bins / 5.0;
            const double d = static_cast<double>(x) - mu;
            v += weights[static_cast<std::size_t>(j - 1)] * std::exp(-d * d / (2.0 * sigma * sigma));
        }
        t.probs[x] = v;
    }
    normalize(t.probs);
    t.grid = Grid1D{n};
    t.name = "multimodal_1d";
    std::ostringstream os;
    os.precision(17);
    os << "multimodal_1d(n=" << n << ", weights=[";
    for (std::size_t j = 0; j < weights.size(); ++j) {
        os << (j ? "," : "") << weights[j];
    }
    os << "])";
    t.provenance = os.str();
    return t;
}

TargetDistribution multimodal_1d(int n, std::uint64_t weight_seed) {
    TargetDistribution t = multimodal_1d_with_weights(n, multimodal_weights(weight_seed));
    t.provenance += " weight_seed=" + std::to_string(weight_seed);
    return t;
}

TargetDistribution bivariate_gaussian_2d(int n_x, int n_y, double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw std::invalid_argument("correlation must satisfy |rho| < 1");
    }
    check_grid_bits(n_x, n_y, 1);
    Grid2D g{n_x, n_y};
    TargetDistribution t;
    t.probs.assign(g.bins_x() * g.bins_y(), 0.0);
    for (std::size_t ky = 0; ky < g.bins_y(); ++ky) {
        for (std::size_t kx = 0; kx < g.bins_x(); ++kx) {
            const double x = g.center_x(kx);
            const double y = g.center_y(ky);
            t.probs[g.index(kx, ky)] = std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * (1.0 - rho * rho)));
        }
    }
    normalize(t.probs);
    t.grid = g;
    t.name = "bivariate_gaussian_2d";
    std::ostringstream os;
    os.precision(17);
    os << "bivariate_gaussian_2d(n_x=" << n_x << ", n_y=" << n_y << ", rho=" << rho << ")";
    t.provenance = os.str();
    return t;
}

TargetDistribution four_mode_mixture_2d(int n_x, int n_y) {
    check_grid_bits(n_x, n_y, 2);
    constexpr double sigma = 0.5;
    Grid2D g{n_x, n_y};
    TargetDistribution t;
    t.probs.assign(g.bins_x() * g.bins_y(), 0.0);
    for (std::size_t ky = 0; ky < g.bins_y(); ++ky) {
        for (std::size_t kx = 0; kx < g.bins_x(); ++kx) {
            const double x = g.center_x(kx);
            const double y = g.center_y(ky);
            double v = 0.0;
            for (const auto &c : kFourModeCenters) {
                const double dx = x - c[0];
                const double dy = y - c[1];
                v += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            }
            t.probs[g.index(kx, ky)] = v;
        }
    }
    normalize(t.probs);
    t.grid = g;
    t.name = "four_mode_2d";
    t.provenance = "four_mode_2d(n_x=" + std::to_string(n_x) + ", n_y=" + std::to_string(n_y) +
                   ", centers=(+-1.5,+-1.5), sigma=0.5)";
    return t;
}

std::vector<std::size_t> nearest_bins(const Grid2D &grid, double x, double y) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> out;
    for (std::size_t ky = 0; ky < grid.bins_y(); ++ky) {
        for (std::size_t kx = 0; kx < grid.bins_x(); ++kx) {
            const double dx = grid.center_x(kx) - x;
            const double dy = grid.center_y(ky) - y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < best - 1e-9) {
                best = d;
                out.clear();
            }
            if (d <= best + 1e-9) {
                out.push_back(grid.index(kx, ky));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::size_t>> find_modes(const Grid2D &grid, std::span<const double> probs,
                                                 double rel_threshold) {
    const std::size_t nx = grid.bins_x();
    const std::size_t ny = grid.bins_y();
    if (probs.size() != nx * ny) {
        throw std::invalid_argument("distribution does not match the grid");
    }
    const double peak = *std::max_element(probs.begin(), probs.end());
    std::vector<char> is_max(probs.size(), 0);
    for (std::size_t ky = 0; ky < ny; ++ky) {
        for (std::size_t kx = 0; kx < nx; ++kx) {
            const double v = probs[grid.index(kx, ky)];
            if (v < rel_threshold * peak) {
                continue;
            }
            bool ok = true;
            for (int dy = -1; dy <= 1 && ok; ++dy) {
                for (int dx = -1; dx <= 1 && ok; ++dx) {
                    const auto sx = static_cast<long>(kx) + dx;
                    const auto sy = static_cast<long>(ky) + dy;
                    if ((dx == 0 && dy == 0) || sx < 0 || sy < 0 || sx >= static_cast<long>(nx) ||
                        sy >= static_cast<long>(ny)) {
                        continue;
                    }
                    ok = probs[grid.index(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy))] <= v;
                }
            }
            is_max[grid.index(kx, ky)] = ok ? 1 : 0;
        }
    }
    // Merge 8-connected maxima into plateaus.
    std::vector<std::vector<std::size_t>> modes;
    std::vector<char> seen(probs.size(), 0);
    for (std::size_t start = 0; start < probs.size(); ++start) {
        if (!is_max[start] || seen[start]) {
            continue;
        }
        std::vector<std::size_t> cluster;
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t b = stack.back();
            stack.pop_back();
            cluster.push_back(b);
            const auto bx = static_cast<long>(grid.x_of(b));
            const auto by = static_cast<long>(grid.y_of(b));
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const long sx = bx + dx;
                    const long sy = by + dy;
                    if (sx < 0 || sy < 0 || sx >= static_cast<long>(nx) || sy >= static_cast<long>(ny)) {
                        continue;
                    }
                    const std::size_t nb = grid.index(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
                    if (is_max[nb] && !seen[nb]) {
                        seen[nb] = 1;
                        stack.push_back(nb);
                    }
                }
            }
        }
        std::sort(cluster.begin(), cluster.end());
        modes.push_back(std::move(cluster));
    }
    return modes;
}

double nll(std::span<const double> p, std::span<const double> q) {
    check_same_length(p, q);
    return nll_with_weights(p, q, nullptr);
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            h -= v * std::log(v);
        }
    }
    return h;
}

double kld(std::span<const double> p, std::span<const double> q) {
    check_same_length(p, q);
    // Per-bin form avoids the cancellation of nll - entropy.
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] > 0.0) {
            d += p[x] * (std::log(p[x]) - std::log(std::max(q[x], kProbabilityFloor)));
        }
    }
    return d;
}

std::vector<double> empirical_distribution(std::span<const std::int64_t> counts, double smoothing_alpha) {
    if (counts.empty()) {
        throw std::invalid_argument("empty count vector");
    }
    if (smoothing_alpha < 0.0) {
        throw std::invalid_argument("smoothing must be >= 0");
    }
    std::int64_t shots = 0;
    for (auto c : counts) {
        if (c < 0) {
            throw std::invalid_argument("negative count");
        }
        shots += c;
    }
    if (shots == 0) {
        throw std::invalid_argument("all-zero counts");
    }
    const double denom = static_cast<double>(shots) + smoothing_alpha * static_cast<double>(counts.size());
    std::vector<double> q(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        q[i] = (static_cast<double>(counts[i]) + smoothing_alpha) / denom;
    }
    return q;
}

} // namespace qsbm
