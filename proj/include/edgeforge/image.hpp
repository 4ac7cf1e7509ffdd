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
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edgeforge/errors.hpp"
#include "edgeforge/grid.hpp"

namespace edgeforge {

/// Grayscale intensities in [0, 255], kept real-valued between IO boundaries.
using Image = Grid<double>;

/// Signed real-valued raster (derivative responses, magnitudes).
using Field = Grid<double>;

/// Interleaved 8-bit RGB raster.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // r,g,b per pixel, row-major
};

enum class Padding { replicate, reflect, zero };

inline std::string_view to_string(Padding p) {
    switch (p) {
        case Padding::replicate: return "replicate";
        case Padding::reflect: return "reflect";
        case Padding::zero: return "zero";
    }
    return "replicate";
}

inline Padding parse_padding(std::string_view s) {
    if (s == "replicate") return Padding::replicate;
    if (s == "reflect") return Padding::reflect;
    if (s == "zero") return Padding::zero;
    throw ParameterError("unknown padding mode '" + std::string(s) + "' (expected replicate|reflect|zero)");
}

/// Round half up, the single rounding rule used wherever reals meet 8-bit.
inline double round_half_up(double v) { return std::floor(v + 0.5); }

inline std::uint8_t to_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(round_half_up(v), 0.0, 255.0));
}

namespace detail {

/// Maps an arbitrary coordinate into [0, n). Returns -1 for zero padding
/// outside the raster.
inline int padded_index(int i, int n, Padding mode) noexcept {
    if (i >= 0 && i < n) return i;
    switch (mode) {
        case Padding::replicate:
            return i < 0 ? 0 : n - 1;
        case Padding::reflect: {
            // mirror about the edge pixel without repeating it (reflect-101)
            if (n == 1) return 0;
            const int period = 2 * (n - 1);
            int m = i % period;
            if (m < 0) m += period;
            return m < n ? m : period - m;
        }
        case Padding::zero:
            return -1;
    }
    return -1;
}

}  // namespace detail

/// Value of `img` at (row, col) under the given border mode. Total for any
/// coordinate.
template <typename T>
T padded_at(const Grid<T>& img, int row, int col, Padding mode) noexcept {
    const int r = detail::padded_index(row, img.height(), mode);
    const int c = detail::padded_index(col, img.width(), mode);
    if (r < 0 || c < 0) return T{};
    return img(r, c);
}

/// BT.601 luma, rounded half up.
inline Image to_grayscale(const RgbImage& rgb) {
    if (rgb.width < 1 || rgb.height < 1) {
        throw DimensionError("to_grayscale: zero-sized input");
    }
    const auto n = static_cast<std::size_t>(rgb.width) * static_cast<std::size_t>(rgb.height);
    if (rgb.data.size() != 3 * n) {
        throw DimensionError("to_grayscale: expected " + std::to_string(3 * n) + " channel values, got " +
                             std::to_string(rgb.data.size()));
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double luma = 0.299 * rgb.data[3 * i] + 0.587 * rgb.data[3 * i + 1] + 0.114 * rgb.data[3 * i + 2];
        out[i] = std::min(255.0, round_half_up(luma));
    }
    return Image(rgb.width, rgb.height, std::move(out));
}

/// Quantizes to integers in [0, 255] (round half up, clamped).
inline Grid<std::uint8_t> quantize(const Field& f) {
    std::vector<std::uint8_t> out(f.size());
    std::transform(f.values().begin(), f.values().end(), out.begin(), to_u8);
    return Grid<std::uint8_t>(f.width(), f.height(), std::move(out));
}

/**
 * 2-D cross-correlation (the kernel is not flipped):
 *   out(r, c) = sum_{dr, dc} k(dr, dc) * img(r + dr, c + dc)
 * with offsets centred on the kernel's middle cell. Output has the input's
 * dimensions; out-of-range reads follow `padding`.
 */
template <typename K>
Field convolve(const Image& img, const Grid<K>& kernel, Padding padding = Padding::replicate) {
    if (img.empty()) {
        throw DimensionError("convolve: empty image");
    }
    if (kernel.width() != kernel.height() || kernel.width() % 2 == 0) {
        throw InvalidKernelError("convolve: kernel must be square with odd side, got " +
                                 std::to_string(kernel.width()) + "x" + std::to_string(kernel.height()));
    }
    const int half = kernel.width() / 2;
    const int w = img.width();
    const int h = img.height();
    Field out(w, h, 0.0);

    // Precompute the padded column index for every (x + dc) so the inner loop
    // is branch-free.
    std::vector<int> col_map(static_cast<std::size_t>(w + 2 * half));
    for (int x = -half; x < w + half; ++x) {
        col_map[static_cast<std::size_t>(x + half)] = detail::padded_index(x, w, padding);
    }

    for (int r = 0; r < h; ++r) {
        auto out_row = out.row(r);
        for (int dr = -half; dr <= half; ++dr) {
            const int src_r = detail::padded_index(r + dr, h, padding);
            if (src_r < 0) continue;
            const auto src = img.row(src_r);
            for (int dc = -half; dc <= half; ++dc) {
                const double k = static_cast<double>(kernel(dr + half, dc + half));
                if (k == 0.0) continue;
                for (int c = 0; c < w; ++c) {
                    const int src_c = col_map[static_cast<std::size_t>(c + dc + half)];
                    if (src_c < 0) continue;
                    out_row[static_cast<std::size_t>(c)] += k * src[static_cast<std::size_t>(src_c)];
                }
            }
        }
    }
    return out;
}

/// Normalized discrete Gaussian g(k) ~ exp(-k^2 / 2 sigma^2), k in [-radius, radius].
inline std::vector<double> gaussian_kernel_1d(double sigma, int radius) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    if (radius < 1) {
        throw ParameterError("gaussian radius must be >= 1, got " + std::to_string(radius));
    }
    std::vector<double> g(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double v = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
        g[static_cast<std::size_t>(k + radius)] = v;
        sum += v;
    }
    for (auto& v : g) v /= sum;
    return g;
}

/// Separable Gaussian smoothing; the result is clamped to [0, 255].
inline Image gaussian_blur(const Image& img, double sigma = 1.4, int radius = 2,
                           Padding padding = Padding::replicate) {
    const auto g = gaussian_kernel_1d(sigma, radius);
    const auto weight = [&](int k) { return g[static_cast<std::size_t>(k + radius)]; };
    const int w = img.width();
    const int h = img.height();
    Field tmp(w, h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += weight(k) * padded_at(img, r, c + k, padding);
            }
            tmp(r, c) = acc;
        }
    }
    Image out(w, h, 0.0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += weight(k) * padded_at(tmp, r + k, c, padding);
            }
            out(r, c) = std::clamp(acc, 0.0, 255.0);
        }
    }
    return out;
}

}  // namespace edgeforge
