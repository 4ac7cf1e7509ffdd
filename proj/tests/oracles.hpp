// Copyright 2026 The edgeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference implementations used only by the tests. Nothing here
// calls into the code path it checks.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "edgeforge/grid.hpp"

namespace edgeforge::testing {

/// Otsu by brute force: for every cut t in [0, 254] split the raw pixel list
/// into {<= t} and {> t}, compute w0 w1 (mu0 - mu1)^2 from class sums, keep
/// the smallest maximizer. Scores are compared exactly via cross
/// multiplication (score = (n1 S0 - n0 S1)^2 / (n0 n1 N^2)), which fits in
/// 128 bits for images up to a few thousand pixels.
inline int brute_force_otsu(const std::vector<std::uint8_t>& pixels) {
    int best = -1;
    __int128 best_num = -1;
    __int128 best_den = 1;
    for (int t = 0; t <= 254; ++t) {
        __int128 n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (auto p : pixels) {
            if (p <= t) {
                ++n0;
                s0 += p;
            } else {
                ++n1;
                s1 += p;
            }
        }
        __int128 num = 0;
        __int128 den = 1;
        if (n0 > 0 && n1 > 0) {
            const __int128 d = n1 * s0 - n0 * s1;
            num = d * d;
            den = n0 * n1;
        }
        if (best < 0 || num * best_den > best_num * den) {
            best = t;
            best_num = num;
            best_den = den;
        }
    }
    return best;
}

/// Breadth-first flood fill with 8-adjacency. Components are numbered in
/// raster order of their first pixel.
inline Grid<std::uint32_t> flood_fill_labels(const Grid<std::uint8_t>& map, std::size_t* count = nullptr) {
    Grid<std::uint32_t> labels(map.width(), map.height(), 0);
    std::uint32_t next = 0;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (!map(r, c) || labels(r, c)) continue;
            ++next;
            std::deque<std::pair<int, int>> q{{r, c}};
            labels(r, c) = next;
            while (!q.empty()) {
                const auto [pr, pc] = q.front();
                q.pop_front();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr, nc = pc + dc;
                        if (!map.contains(nr, nc) || !map(nr, nc) || labels(nr, nc)) continue;
                        labels(nr, nc) = next;
                        q.emplace_back(nr, nc);
                    }
                }
            }
        }
    }
    if (count) *count = next;
    return labels;
}

/// Weighted plane-fit objective sum w^2 (a r + b c + g - I)^2 over a window
/// centred at (0, 0), evaluated directly.
inline double plane_objective(const Grid<double>& patch, const Grid<double>& weights, double a, double b, double g) {
    const int l = patch.width() / 2;
    double j = 0.0;
    for (int r = -l; r <= l; ++r) {
        for (int c = -l; c <= l; ++c) {
            const double w = weights(r + l, c + l);
            const double e = a * r + b * c + g - patch(r + l, c + l);
            j += w * w * e * e;
        }
    }
    return j;
}

struct GridSearchResult {
    double a, b, g;
};

/// Minimizes the objective by repeated dense grid search, shrinking the box
/// around the incumbent until the step falls below `tol`.
inline GridSearchResult grid_search_plane(const Grid<double>& patch, const Grid<double>& weights, double tol = 1e-7) {
    double ca = 0, cb = 0, cg = 128, span = 512;
    constexpr int steps = 20;
    while (span / steps > tol) {
        double best = std::numeric_limits<double>::infinity();
        double ba = ca, bb = cb, bg = cg;
        for (int i = -steps; i <= steps; ++i) {
            for (int j = -steps; j <= steps; ++j) {
                for (int k = -steps; k <= steps; ++k) {
                    const double a = ca + span * i / steps;
                    const double b = cb + span * j / steps;
                    const double g = cg + span * k / steps;
                    const double v = plane_objective(patch, weights, a, b, g);
                    if (v < best) {
                        best = v;
                        ba = a;
                        bb = b;
                        bg = g;
                    }
                }
            }
        }
        ca = ba;
        cb = bb;
        cg = bg;
        span *= 0.25;
    }
    return {ca, cb, cg};
}

inline Grid<std::uint8_t> random_binary(std::mt19937& rng, int w, int h, double density = 0.5) {
    std::bernoulli_distribution on(density);
    Grid<std::uint8_t> g(w, h, 0);
    for (auto& v : g.values()) v = on(rng) ? 1 : 0;
    return g;
}

}  // namespace edgeforge::testing
