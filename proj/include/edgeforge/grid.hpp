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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgeforge/errors.hpp"

namespace edgeforge {

/**
 * Dense row-major 2-D array. Every raster in the library (intensity images,
 * signed derivative fields, binary edge maps, kernels) is a Grid of some
 * scalar type.
 */
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;

    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width < 1 || height < 1) {
            throw DimensionError("grid dimensions must be >= 1, got " + std::to_string(width) +
                                 "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
        if (width < 1 || height < 1) {
            throw DimensionError("grid dimensions must be >= 1, got " + std::to_string(width) +
                                 "x" + std::to_string(height));
        }
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw DimensionError("grid data length " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(width) + "x" + std::to_string(height));
        }
    }

    /// Builds a grid from nested rows; all rows must have equal length.
    static Grid from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty() || rows.front().empty()) {
            throw DimensionError("from_rows: empty input");
        }
        const auto w = rows.front().size();
        std::vector<T> flat;
        flat.reserve(w * rows.size());
        for (const auto& row : rows) {
            if (row.size() != w) {
                throw DimensionError("from_rows: ragged rows");
            }
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return Grid(static_cast<int>(w), static_cast<int>(rows.size()), std::move(flat));
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] T& operator()(int row, int col) noexcept {
        return data_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)];
    }
    [[nodiscard]] const T& operator()(int row, int col) const noexcept {
        return data_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col)];
    }

    [[nodiscard]] bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    [[nodiscard]] std::span<T> row(int r) noexcept {
        return {data_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(width_),
                static_cast<std::size_t>(width_)};
    }
    [[nodiscard]] std::span<const T> row(int r) const noexcept {
        return {data_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(width_),
                static_cast<std::size_t>(width_)};
    }

    [[nodiscard]] std::span<T> values() noexcept { return data_; }
    [[nodiscard]] std::span<const T> values() const noexcept { return data_; }
    [[nodiscard]] const std::vector<T>& data() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const Grid& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    template <typename U>
    [[nodiscard]] bool same_shape(const Grid<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    [[nodiscard]] Grid transposed() const {
        Grid out(height_, width_);
        for (int r = 0; r < height_; ++r) {
            for (int c = 0; c < width_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    /// Element-wise conversion to another scalar type.
    template <typename U>
    [[nodiscard]] Grid<U> cast() const {
        std::vector<U> out(data_.begin(), data_.end());
        return Grid<U>(width_, height_, std::move(out));
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

template <typename U, typename T>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionError(std::string(what) + ": dimension mismatch " + std::to_string(a.width()) + "x" +
                             std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()));
    }
}

}  // namespace edgeforge
