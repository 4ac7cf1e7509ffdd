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

#pragma once

#include <algorithm>
#include <cstdlib>
#include <random>

#include "edgeforge/canny.hpp"
#include "edgeforge/image.hpp"

namespace edgeforge::testing {

/// size x size black image with a centred white square of side `side`.
inline Image square_fixture(int size = 64, int side = 32) {
    Image img(size, size, 0.0);
    const int lo = (size - side) / 2;
    for (int r = lo; r < lo + side; ++r) {
        for (int c = lo; c < lo + side; ++c) img(r, c) = 255.0;
    }
    return img;
}

/// Chebyshev distance from pixel (r, c) to the boundary pixels of the square
/// occupying [lo, hi] x [lo, hi].
inline int distance_to_square_boundary(int r, int c, int lo, int hi) {
    const bool inside = r >= lo && r <= hi && c >= lo && c <= hi;
    if (inside) {
        return std::min({r - lo, hi - r, c - lo, hi - c});
    }
    const int dr = r < lo ? lo - r : (r > hi ? r - hi : 0);
    const int dc = c < lo ? lo - c : (c > hi ? c - hi : 0);
    return std::max(dr, dc);
}

/// Columns [0, step) are `lo`, the rest `hi`.
inline Image step_fixture(int width, int height, int step, double lo = 0.0, double hi = 255.0) {
    Image img(width, height, lo);
    for (int r = 0; r < height; ++r) {
        for (int c = step; c < width; ++c) img(r, c) = hi;
    }
    return img;
}

inline Image random_image(std::mt19937& rng, int w, int h, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> d(lo, hi);
    Image img(w, h, 0.0);
    for (auto& v : img.values()) v = d(rng);
    return img;
}

inline GradientField field_from(const Field& magnitude, Direction dir) {
    return {Field(magnitude.width(), magnitude.height(), 0.0), Field(magnitude.width(), magnitude.height(), 0.0),
            magnitude, Grid<Direction>(magnitude.width(), magnitude.height(), dir)};
}

}  // namespace edgeforge::testing
