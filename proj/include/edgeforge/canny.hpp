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
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgeforge/errors.hpp"
#include "edgeforge/grid.hpp"
#include "edgeforge/image.hpp"
#include "edgeforge/kernels.hpp"

namespace edgeforge {

/// Binary edge raster: 1 = edge, 0 = background.
using EdgeMap = Grid<std::uint8_t>;

enum class Norm { l2, l1 };

inline std::string_view to_string(Norm n) { return n == Norm::l2 ? "l2" : "l1"; }

inline Norm parse_norm(std::string_view s) {
    if (s == "l2" || s == "L2") return Norm::l2;
    if (s == "l1" || s == "L1") return Norm::l1;
    throw ParameterError("unknown norm '" + std::string(s) + "' (expected l2|l1)");
}

/// Which raster Otsu's method is run on to find val_otsu.
enum class OtsuSource { magnitude, blurred_input };

inline std::string_view to_string(OtsuSource s) {
    return s == OtsuSource::magnitude ? "magnitude" : "blurred-input";
}

inline OtsuSource parse_otsu_source(std::string_view s) {
    if (s == "magnitude") return OtsuSource::magnitude;
    if (s == "blurred-input" || s == "blurred_input") return OtsuSource::blurred_input;
    throw ParameterError("unknown otsu source '" + std::string(s) + "' (expected magnitude|blurred-input)");
}

/// Quantized gradient direction. Values are the bin angle / 45.
enum class Direction : std::uint8_t { deg0 = 0, deg45 = 1, deg90 = 2, deg135 = 3 };

struct GradientField {
    Field gx;
    Field gy;
    Field magnitude;               // min-max rescaled to [0, 255]
    Grid<Direction> orientation;
};

inline double gradient_magnitude(double gx, double gy, Norm norm) {
    return norm == Norm::l2 ? std::sqrt(gx * gx + gy * gy) : std::abs(gx) + std::abs(gy);
}

/// Nearest of {0, 45, 90, 135} degrees to atan2(gy, gx) mod 180. Exact
/// half-way angles go to the larger bin (mod 180).
inline Direction quantize_direction(double gx, double gy) {
    double deg = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
    if (deg < 0) deg += 180.0;
    const int bin = static_cast<int>(std::floor((deg + 22.5) / 45.0)) % 4;
    return static_cast<Direction>(bin);
}

/**
 * Gradient of `img` under a kernel pair. The pair is first reduced by the
 * GCD of its coefficients, so integer multiples of a pair give bit-identical
 * fields. Magnitude is min-max rescaled to [0, 255]; a flat magnitude field
 * maps to all zeros.
 */
inline GradientField gradient(const Image& img, const Kernel& gx_kernel, const Kernel& gy_kernel,
                              Norm norm = Norm::l2, Padding padding = Padding::replicate) {
    require_pair(gx_kernel, gy_kernel);
    const auto pair = reduce_pair({gx_kernel, gy_kernel});
    GradientField f{convolve(img, pair.x, padding), convolve(img, pair.y, padding),
                    Field(img.width(), img.height(), 0.0),
                    Grid<Direction>(img.width(), img.height(), Direction::deg0)};

    const auto n = f.gx.size();
    const auto gx = f.gx.values();
    const auto gy = f.gy.values();
    auto mag = f.magnitude.values();
    auto dir = f.orientation.values();
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = gradient_magnitude(gx[i], gy[i], norm);
        dir[i] = quantize_direction(gx[i], gy[i]);
    }
    const auto [lo, hi] = std::minmax_element(mag.begin(), mag.end());
    const double min = *lo;
    const double range = *hi - min;
    for (auto& m : mag) {
        m = range > 0.0 ? (m - min) / range * 255.0 : 0.0;
    }
    return f;
}

inline GradientField gradient(const Image& img, const KernelPair& pair, Norm norm = Norm::l2,
                              Padding padding = Padding::replicate) {
    return gradient(img, pair.x, pair.y, norm, padding);
}

// ---------------------------------------------------------------------------
// Otsu
// ---------------------------------------------------------------------------

struct OtsuResult {
    int threshold = 0;                    // class 0 = {<= threshold}
    double between_class_variance = 0.0;  // w0 w1 (mu0 - mu1)^2
};

namespace detail {

/// Exact a/b < c/d for b, d > 0 without overflow (continued-fraction descent).
inline bool fraction_less(unsigned __int128 a, unsigned __int128 b, unsigned __int128 c, unsigned __int128 d) {
    for (;;) {
        const auto qa = a / b;
        const auto qc = c / d;
        if (qa != qc) return qa < qc;
        const auto ra = a % b;
        const auto rc = c % d;
        if (rc == 0) return false;
        if (ra == 0) return true;
        // ra/b < rc/d  <=>  d/rc < b/ra
        const auto next_a = d;
        const auto next_c = b;
        a = next_a;
        b = rc;
        c = next_c;
        d = ra;
    }
}

}  // namespace detail

/**
 * Otsu's method over the 256-bin histogram. Returns the smallest cut t in
 * [0, 254] maximizing w0 w1 (mu0 - mu1)^2 with classes {<= t} and {> t}.
 * Candidate scores are compared as exact rationals so ties resolve
 * deterministically.
 */
inline OtsuResult otsu_threshold(const Grid<std::uint8_t>& img) {
    if (img.empty()) throw DimensionError("otsu_threshold: empty image");
    std::array<std::uint64_t, 256> hist{};
    for (auto v : img.values()) ++hist[v];
    int distinct = 0;
    for (auto h : hist) distinct += h > 0 ? 1 : 0;
    if (distinct < 2) {
        throw NoContrastError("otsu_threshold: image has no contrast (a single intensity value)");
    }

    std::uint64_t total_n = 0;
    std::uint64_t total_s = 0;
    for (int v = 0; v < 256; ++v) {
        total_n += hist[static_cast<std::size_t>(v)];
        total_s += hist[static_cast<std::size_t>(v)] * static_cast<std::uint64_t>(v);
    }

    // score(t) = (n1 S0 - n0 S1)^2 / (n0 n1) is N^2 times the between-class variance.
    int best_t = 0;
    unsigned __int128 best_num = 0;
    unsigned __int128 best_den = 1;
    std::uint64_t n0 = 0;
    std::uint64_t s0 = 0;
    for (int t = 0; t < 255; ++t) {
        n0 += hist[static_cast<std::size_t>(t)];
        s0 += hist[static_cast<std::size_t>(t)] * static_cast<std::uint64_t>(t);
        const std::uint64_t n1 = total_n - n0;
        const std::uint64_t s1 = total_s - s0;
        if (n0 == 0 || n1 == 0) continue;
        const __int128 diff = static_cast<__int128>(n1) * s0 - static_cast<__int128>(n0) * s1;
        const unsigned __int128 mag = static_cast<unsigned __int128>(diff < 0 ? -diff : diff);
        const unsigned __int128 num = mag * mag;
        const unsigned __int128 den = static_cast<unsigned __int128>(n0) * n1;
        if (detail::fraction_less(best_num, best_den, num, den)) {
            best_t = t;
            best_num = num;
            best_den = den;
        }
    }
    const double n = static_cast<double>(total_n);
    const double variance = static_cast<double>(best_num) / static_cast<double>(best_den) / (n * n);
    return {best_t, variance};
}

inline OtsuResult otsu_threshold(const Image& img) { return otsu_threshold(quantize(img)); }

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

struct ThresholdConfig {
    double sigma_fraction = 0.33;

    void validate() const {
        if (!(sigma_fraction > 0.0 && sigma_fraction < 1.0)) {
            throw ParameterError("sigma fraction must lie in (0, 1), got " + std::to_string(sigma_fraction));
        }
    }
};

struct HysteresisThresholds {
    double low = 0.0;
    double high = 0.0;
};

/// low = (1 - sigma) * val_otsu, high = (1 + sigma) * val_otsu, each rounded
/// half up and clamped to [0, 255].
inline HysteresisThresholds hysteresis_thresholds(const OtsuResult& otsu, const ThresholdConfig& cfg = {}) {
    cfg.validate();
    const double v = otsu.threshold;
    const auto clamp255 = [](double x) { return std::clamp(round_half_up(x), 0.0, 255.0); };
    return {clamp255((1.0 - cfg.sigma_fraction) * v), clamp255((1.0 + cfg.sigma_fraction) * v)};
}

// ---------------------------------------------------------------------------
// Non-maximum suppression and hysteresis
// ---------------------------------------------------------------------------

namespace detail {

/// (dr, dc) of the forward neighbour along each quantized gradient direction.
/// Rows grow downward and gy is positive downward, so 45 degrees points to
/// (+1, +1).
constexpr std::array<std::array<int, 2>, 4> kDirectionStep{{{0, 1}, {1, 1}, {1, 0}, {1, -1}}};

}  // namespace detail

/// Keeps a pixel's magnitude iff it is >= both neighbours along its
/// quantized direction; ties survive. Border lookups replicate.
inline Field non_max_suppression(const GradientField& field) {
    const auto& mag = field.magnitude;
    Field out(mag.width(), mag.height(), 0.0);
    for (int r = 0; r < mag.height(); ++r) {
        for (int c = 0; c < mag.width(); ++c) {
            const double m = mag(r, c);
            if (m <= 0.0) continue;
            const auto [dr, dc] = detail::kDirectionStep[static_cast<std::size_t>(field.orientation(r, c))];
            const double ahead = padded_at(mag, r + dr, c + dc, Padding::replicate);
            const double behind = padded_at(mag, r - dr, c - dc, Padding::replicate);
            if (m >= ahead && m >= behind) out(r, c) = m;
        }
    }
    return out;
}

/**
 * Double-threshold edge tracking. Strong pixels (>= high) seed an 8-connected
 * flood through weak pixels (>= low). Zero-valued pixels are never edges,
 * even when a threshold is 0.
 */
inline EdgeMap hysteresis(const Field& suppressed, const HysteresisThresholds& th) {
    if (th.low > th.high) {
        throw ParameterError("hysteresis: low threshold exceeds high threshold");
    }
    const int w = suppressed.width();
    const int h = suppressed.height();
    EdgeMap edges(w, h, 0);
    const auto candidate = [&](int r, int c) {
        const double v = suppressed(r, c);
        return v > 0.0 && v >= th.low;
    };

    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double v = suppressed(r, c);
            if (edges(r, c) || !(v > 0.0 && v >= th.high)) continue;
            edges(r, c) = 1;
            stack.emplace_back(r, c);
            while (!stack.empty()) {
                const auto [pr, pc] = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr;
                        const int nc = pc + dc;
                        if (!edges.contains(nr, nc) || edges(nr, nc) || !candidate(nr, nc)) continue;
                        edges(nr, nc) = 1;
                        stack.emplace_back(nr, nc);
                    }
                }
            }
        }
    }
    return edges;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct CannyParams {
    double gaussian_sigma = 1.4;
    int gaussian_radius = 2;
    ThresholdConfig thresholds;
    Norm norm = Norm::l2;
    OtsuSource otsu_source = OtsuSource::magnitude;
    Padding padding = Padding::replicate;
};

/// Wall-clock milliseconds per stage. Not part of the deterministic output.
struct StageTimings {
    double blur_ms = 0;
    double gradient_ms = 0;
    double otsu_ms = 0;
    double nms_ms = 0;
    double hysteresis_ms = 0;
};

struct CannyResult {
    EdgeMap edges;
    OtsuResult otsu;
    HysteresisThresholds thresholds;
    GradientField gradient;
    StageTimings timings;
};

/**
 * blur -> gradient -> Otsu (on the 8-bit magnitude field by default) ->
 * thresholds -> NMS -> hysteresis.
 */
inline CannyResult canny_pipeline(const Image& img, const KernelPair& kernels, const CannyParams& params = {}) {
    using clock = std::chrono::steady_clock;
    const auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    params.thresholds.validate();
    CannyResult res;

    auto t0 = clock::now();
    const Image blurred = gaussian_blur(img, params.gaussian_sigma, params.gaussian_radius, params.padding);
    res.timings.blur_ms = ms_since(t0);

    t0 = clock::now();
    res.gradient = gradient(blurred, kernels, params.norm, params.padding);
    res.timings.gradient_ms = ms_since(t0);

    t0 = clock::now();
    res.otsu = otsu_threshold(params.otsu_source == OtsuSource::magnitude ? res.gradient.magnitude : blurred);
    res.thresholds = hysteresis_thresholds(res.otsu, params.thresholds);
    res.timings.otsu_ms = ms_since(t0);

    t0 = clock::now();
    const Field suppressed = non_max_suppression(res.gradient);
    res.timings.nms_ms = ms_since(t0);

    t0 = clock::now();
    res.edges = hysteresis(suppressed, res.thresholds);
    res.timings.hysteresis_ms = ms_since(t0);
    return res;
}

inline CannyResult canny_pipeline(const Image& img, std::string_view operator_name, int size,
                                  const CannyParams& params = {}) {
    return canny_pipeline(img, registry_get(operator_name, size), params);
}

inline CannyResult canny_pipeline(const RgbImage& img, const KernelPair& kernels, const CannyParams& params = {}) {
    return canny_pipeline(to_grayscale(img), kernels, params);
}

}  // namespace edgeforge
