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

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgeforge/errors.hpp"
#include "edgeforge/grid.hpp"
#include "edgeforge/image.hpp"

namespace edgeforge {

/// x: derivative along columns (horizontal), y: along rows (vertical).
enum class Axis { x, y };

inline std::string_view to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

using Coefficients = Grid<std::int64_t>;

/**
 * First-derivative kernel with integer coefficients.
 *
 * Construction enforces: odd square side >= 3, and antisymmetry about the
 * centre line perpendicular to the axis (which also forces a zero centre
 * line and a zero coefficient sum).
 */
class Kernel {
public:
    Kernel(Coefficients coefficients, Axis axis) : coeffs_(std::move(coefficients)), axis_(axis) {
        const int side = coeffs_.width();
        if (side != coeffs_.height() || side < 3 || side % 2 == 0) {
            throw InvalidKernelError("kernel must be odd-square with side >= 3, got " + std::to_string(side) + "x" +
                                     std::to_string(coeffs_.height()));
        }
        const int half = side / 2;
        for (int r = -half; r <= half; ++r) {
            for (int c = -half; c <= half; ++c) {
                const auto v = at(r, c);
                const auto mirrored = axis_ == Axis::x ? at(r, -c) : at(-r, c);
                if (v != -mirrored) {
                    throw InvalidKernelError("kernel is not antisymmetric along its " + std::string(to_string(axis_)) +
                                             " axis at offset (" + std::to_string(r) + "," + std::to_string(c) +
                                             ")");
                }
            }
        }
    }

    static Kernel from_rows(const std::vector<std::vector<std::int64_t>>& rows, Axis axis) {
        return Kernel(Coefficients::from_rows(rows), axis);
    }

    [[nodiscard]] int side() const noexcept { return coeffs_.width(); }
    [[nodiscard]] int radius() const noexcept { return coeffs_.width() / 2; }
    [[nodiscard]] Axis axis() const noexcept { return axis_; }
    [[nodiscard]] const Coefficients& coefficients() const noexcept { return coeffs_; }

    /// Coefficient at offset (dr, dc) from the centre.
    [[nodiscard]] std::int64_t at(int dr, int dc) const noexcept { return coeffs_(dr + radius(), dc + radius()); }

    /// Same coefficients swapped to the other axis.
    [[nodiscard]] Kernel transposed() const {
        return Kernel(coeffs_.transposed(), axis_ == Axis::x ? Axis::y : Axis::x);
    }

    [[nodiscard]] Kernel scaled(std::int64_t k) const {
        if (k <= 0) throw ParameterError("kernel scale must be positive");
        auto c = coeffs_;
        for (auto& v : c.values()) v *= k;
        return Kernel(std::move(c), axis_);
    }

    /// Greatest common divisor of all coefficients (0 for the zero kernel).
    [[nodiscard]] std::int64_t gcd() const noexcept {
        std::int64_t g = 0;
        for (auto v : coeffs_.values()) g = std::gcd(g, v);
        return g;
    }

    friend bool operator==(const Kernel& a, const Kernel& b) {
        return a.axis_ == b.axis_ && a.coeffs_ == b.coeffs_;
    }

private:
    Coefficients coeffs_;
    Axis axis_;
};

struct KernelPair {
    Kernel x;
    Kernel y;
};

/// Throws InvalidPairError unless `gx`/`gy` are an x/y pair of equal side.
inline void require_pair(const Kernel& gx, const Kernel& gy) {
    if (gx.axis() != Axis::x || gy.axis() != Axis::y) {
        throw InvalidPairError("kernel pair must be (x, y), got (" + std::string(to_string(gx.axis())) + ", " +
                               std::string(to_string(gy.axis())) + ")");
    }
    if (gx.side() != gy.side()) {
        throw InvalidPairError("kernel pair sizes differ: " + std::to_string(gx.side()) + " vs " +
                               std::to_string(gy.side()));
    }
}

/// Divides both kernels by the GCD of all their coefficients.
inline KernelPair reduce_pair(const KernelPair& pair) {
    const auto g = std::gcd(pair.x.gcd(), pair.y.gcd());
    if (g <= 1) return pair;
    auto divide = [g](const Kernel& k) {
        auto c = k.coefficients();
        for (auto& v : c.values()) v /= g;
        return Kernel(std::move(c), k.axis());
    };
    return {divide(pair.x), divide(pair.y)};
}

inline Field convolve(const Image& img, const Kernel& kernel, Padding padding = Padding::replicate) {
    return convolve(img, kernel.coefficients(), padding);
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

struct RegistryEntry {
    std::string name;
    int size;
    std::vector<std::string> aliases;  // other names resolving to the same pair
    KernelPair kernels;
};

namespace detail {

inline Kernel x_kernel(const std::vector<std::vector<std::int64_t>>& rows) {
    return Kernel::from_rows(rows, Axis::x);
}

inline const std::vector<RegistryEntry>& registry_table() {
    static const std::vector<RegistryEntry> table = [] {
        std::vector<RegistryEntry> t;
        auto add = [&t](std::string name, int size, std::vector<std::string> aliases, const Kernel& gx) {
            t.push_back({std::move(name), size, std::move(aliases), KernelPair{gx, gx.transposed()}});
        };
        add("sobel", 3, {}, x_kernel({{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}));
        add("prewitt", 3, {}, x_kernel({{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}}));
        add("scharr", 3, {}, x_kernel({{-3, 0, 3}, {-10, 0, 10}, {-3, 0, 3}}));
        add("sobel", 5, {},
            x_kernel({{-5, -4, 0, 4, 5},
                      {-8, -10, 0, 10, 8},
                      {-10, -20, 0, 20, 10},
                      {-8, -10, 0, 10, 8},
                      {-5, -4, 0, 4, 5}}));
        add("prewitt", 5, {},
            x_kernel({{-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2}}));
        // Row 1 is commonly printed as (-2, -2, 0, 1, 2); the antisymmetric
        // form (-2, -2, 0, 2, 2) is stored.
        add("scharr", 5, {},
            x_kernel({{-1, -1, 0, 1, 1},
                      {-2, -2, 0, 2, 2},
                      {-3, -6, 0, 6, 3},
                      {-2, -2, 0, 2, 2},
                      {-1, -1, 0, 1, 1}}));
        // Both distance-weighted schemes give the same 3x3 operator.
        add("proposed_a", 3, {"proposed_b"}, x_kernel({{-1, 0, 1}, {-4, 0, 4}, {-1, 0, 1}}));
        // Gy is stored as the transpose of Gx. The widely circulated Gy for
        // this operator is not a transpose and breaks antisymmetry.
        add("proposed_a", 5, {},
            x_kernel({{-25, -4, 0, 4, 25},
                      {-64, -10, 0, 10, 64},
                      {-100, -20, 0, 20, 100},
                      {-64, -10, 0, 10, 64},
                      {-25, -4, 0, 4, 25}}));
        add("proposed_b", 5, {},
            x_kernel({{-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2},
                      {-8, -4, 0, 4, 8},
                      {-2, -1, 0, 1, 2},
                      {-2, -1, 0, 1, 2}}));
        return t;
    }();
    return table;
}

}  // namespace detail

/// Operator ids accepted by registry_get.
inline const std::array<std::string_view, 5>& operator_names() {
    static const std::array<std::string_view, 5> names{"sobel", "prewitt", "scharr", "proposed_a", "proposed_b"};
    return names;
}

/// The nine distinct (Gx, Gy) pairs.
inline const std::vector<RegistryEntry>& registry_entries() { return detail::registry_table(); }

inline const RegistryEntry& registry_entry(std::string_view name, int size) {
    for (const auto& e : detail::registry_table()) {
        if (e.size != size) continue;
        if (e.name == name) return e;
        for (const auto& a : e.aliases) {
            if (a == name) return e;
        }
    }
    std::string valid;
    for (auto n : operator_names()) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw LookupError("unknown operator '" + std::string(name) + "' of size " + std::to_string(size) +
                      " (valid operators: " + valid + "; sizes: 3, 5)");
}

inline KernelPair registry_get(std::string_view name, int size) { return registry_entry(name, size).kernels; }

// ---------------------------------------------------------------------------
// Weight matrices and the weighted plane-fit derivation
// ---------------------------------------------------------------------------

/**
 * Square (2L+1) window of nonnegative integer weights. Rational schemes are
 * stored scaled to their smallest all-integer multiple; the fit is invariant
 * to a common scale. The centre cell never enters the fit and is stored as 0.
 */
class WeightMatrix {
public:
    explicit WeightMatrix(Coefficients weights) : w_(std::move(weights)) {
        const int side = w_.width();
        if (side != w_.height() || side < 3 || side % 2 == 0) {
            throw ParameterError("weight matrix must be odd-square with side >= 3");
        }
        const int l = side / 2;
        for (int r = -l; r <= l; ++r) {
            for (int c = -l; c <= l; ++c) {
                const auto v = at(r, c);
                if (v < 0) throw ParameterError("weights must be nonnegative");
                if (v != at(-r, c) || v != at(r, -c)) {
                    throw ParameterError("weight matrix must be symmetric under row and column reflection");
                }
            }
        }
        w_(l, l) = 0;
    }

    static WeightMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
        return WeightMatrix(Coefficients::from_rows(rows));
    }

    [[nodiscard]] int radius() const noexcept { return w_.width() / 2; }
    [[nodiscard]] int side() const noexcept { return w_.width(); }
    [[nodiscard]] std::int64_t at(int r, int c) const noexcept { return w_(r + radius(), c + radius()); }
    [[nodiscard]] const Coefficients& weights() const noexcept { return w_; }

    friend bool operator==(const WeightMatrix& a, const WeightMatrix& b) { return a.w_ == b.w_; }

private:
    Coefficients w_;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ParameterError("integer overflow in weight/kernel arithmetic; radius too large");
    }
    return out;
}

}  // namespace detail

/// All off-centre weights equal to 1 (unweighted plane fit).
inline WeightMatrix build_weights_uniform(int radius) {
    if (radius < 1) throw ParameterError("radius must be >= 1");
    const int side = 2 * radius + 1;
    return WeightMatrix(Coefficients(side, side, 1));
}

/// w(r, c) proportional to 1 / (r^2 + c^2), scaled to the minimal integer matrix.
inline WeightMatrix build_weights_inverse_distance(int radius) {
    if (radius < 1) throw ParameterError("radius must be >= 1");
    std::int64_t lcm = 1;
    for (int r = -radius; r <= radius; ++r) {
        for (int c = -radius; c <= radius; ++c) {
            if (r == 0 && c == 0) continue;
            const std::int64_t d2 = static_cast<std::int64_t>(r) * r + static_cast<std::int64_t>(c) * c;
            lcm = detail::checked_mul(lcm / std::gcd(lcm, d2), d2);
        }
    }
    const int side = 2 * radius + 1;
    Coefficients w(side, side, 0);
    std::int64_t g = 0;
    for (int r = -radius; r <= radius; ++r) {
        for (int c = -radius; c <= radius; ++c) {
            if (r == 0 && c == 0) continue;
            const auto v = lcm / (static_cast<std::int64_t>(r) * r + static_cast<std::int64_t>(c) * c);
            w(r + radius, c + radius) = v;
            g = std::gcd(g, v);
        }
    }
    for (auto& v : w.values()) v /= g;
    return WeightMatrix(std::move(w));
}

/**
 * Radial distance weights. Only the two published windows are available:
 * the written rule for this scheme does not determine a unique matrix.
 */
inline WeightMatrix build_weights_radial(int radius) {
    switch (radius) {
        case 1:
            return WeightMatrix::from_rows({{1, 2, 1}, {2, 0, 2}, {1, 2, 1}});
        case 2:
            return WeightMatrix::from_rows(
                {{1, 1, 2, 1, 1}, {1, 1, 2, 1, 1}, {2, 2, 0, 2, 2}, {1, 1, 2, 1, 1}, {1, 1, 2, 1, 1}});
        default:
            throw ParameterError("radial weights are only defined for radius 1 or 2, got " + std::to_string(radius));
    }
}

/**
 * Unreduced estimator coefficients of the weighted plane fit: w(r,c)^2 * c
 * for the x axis, w(r,c)^2 * r for the y axis. Dividing the correlation of a
 * patch with these by sum(w^2 c^2) (resp. r^2) yields the fitted slope.
 */
inline Coefficients derive_kernel_raw(const WeightMatrix& weights, Axis axis) {
    const int l = weights.radius();
    Coefficients k(weights.side(), weights.side(), 0);
    for (int r = -l; r <= l; ++r) {
        for (int c = -l; c <= l; ++c) {
            const auto w2 = detail::checked_mul(weights.at(r, c), weights.at(r, c));
            k(r + l, c + l) = detail::checked_mul(w2, axis == Axis::x ? c : r);
        }
    }
    return k;
}

/// Minimal integer derivative kernel implied by a weight matrix.
inline Kernel derive_kernel(const WeightMatrix& weights, Axis axis) {
    auto k = derive_kernel_raw(weights, axis);
    std::int64_t g = 0;
    for (auto v : k.values()) g = std::gcd(g, v);
    if (g == 0) throw SingularFitError("derive_kernel: all off-centre weights are zero");
    for (auto& v : k.values()) v /= g;
    return Kernel(std::move(k), axis);
}

/// Weighted least-squares plane I(r, c) ~ alpha * r + beta * c + gamma.
struct PlaneFit {
    double alpha = 0.0;  // slope along rows
    double beta = 0.0;   // slope along columns
    double gamma = 0.0;  // weighted mean
};

/**
 * Minimizes sum w(r,c)^2 (alpha r + beta c + gamma - I(r,c))^2 over the window.
 * The reflection symmetry of the weights decouples the normal equations, so
 * each parameter has a closed form.
 */
inline PlaneFit plane_fit(const Grid<double>& patch, const WeightMatrix& weights) {
    if (patch.width() != weights.side() || patch.height() != weights.side()) {
        throw DimensionError("plane_fit: patch is " + std::to_string(patch.width()) + "x" +
                             std::to_string(patch.height()) + ", weights are " + std::to_string(weights.side()) +
                             "x" + std::to_string(weights.side()));
    }
    const int l = weights.radius();
    double s_w = 0, s_rr = 0, s_cc = 0, s_i = 0, s_ri = 0, s_ci = 0;
    for (int r = -l; r <= l; ++r) {
        for (int c = -l; c <= l; ++c) {
            const double w = static_cast<double>(weights.at(r, c));
            const double w2 = w * w;
            const double v = patch(r + l, c + l);
            s_w += w2;
            s_rr += w2 * r * r;
            s_cc += w2 * c * c;
            s_i += w2 * v;
            s_ri += w2 * r * v;
            s_ci += w2 * c * v;
        }
    }
    if (s_w == 0.0 || s_rr == 0.0 || s_cc == 0.0) {
        throw SingularFitError("plane_fit: weights leave the normal equations singular");
    }
    return {s_ri / s_rr, s_ci / s_cc, s_i / s_w};
}

/// Weight scheme whose plane fit yields the named operator, when one exists.
inline std::optional<WeightMatrix> weight_scheme_for(std::string_view name, int size) {
    const int radius = size / 2;
    if (name == "prewitt") return build_weights_uniform(radius);
    if (name == "proposed_a") return build_weights_inverse_distance(radius);
    if (name == "proposed_b") return build_weights_radial(radius);
    return std::nullopt;
}

}  // namespace edgeforge
