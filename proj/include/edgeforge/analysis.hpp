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
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edgeforge/canny.hpp"
#include "edgeforge/errors.hpp"
#include "edgeforge/grid.hpp"
#include "edgeforge/image.hpp"
#include "edgeforge/kernels.hpp"

namespace edgeforge {

// ---------------------------------------------------------------------------
// Connected components
// ---------------------------------------------------------------------------

struct ComponentLabeling {
    Grid<std::uint32_t> labels;               // 0 = background, 1..count
    std::size_t component_count = 0;
    std::vector<std::size_t> component_sizes;  // index i holds the size of label i + 1
};

namespace detail {

class DisjointSet {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }

    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const auto next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) {
            parent_[b] = a;
        } else {
            parent_[a] = b;
        }
    }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/**
 * 8-connected component labeling (two-pass, union-find). Labels are dense,
 * numbered by the raster-scan order of each component's first pixel. Any
 * nonzero cell counts as foreground.
 */
inline ComponentLabeling label_components(const EdgeMap& edges) {
    const int w = edges.width();
    const int h = edges.height();
    Grid<std::uint32_t> provisional(w, h, 0);
    detail::DisjointSet sets;
    sets.make();  // provisional label 0 is background

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!edges(r, c)) continue;
            // already-visited neighbours: W, NW, N, NE
            std::uint32_t label = 0;
            const int nbr[4][2] = {{r, c - 1}, {r - 1, c - 1}, {r - 1, c}, {r - 1, c + 1}};
            for (const auto& [nr, nc] : nbr) {
                if (!provisional.contains(nr, nc)) continue;
                const auto l = provisional(nr, nc);
                if (l == 0) continue;
                if (label == 0) {
                    label = l;
                } else if (l != label) {
                    sets.unite(label, l);
                }
            }
            provisional(r, c) = label != 0 ? label : sets.make();
        }
    }

    ComponentLabeling out{Grid<std::uint32_t>(w, h, 0), 0, {}};
    std::vector<std::uint32_t> dense;  // root -> final label
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const auto p = provisional(r, c);
            if (p == 0) continue;
            const auto root = sets.find(p);
            if (dense.size() <= root) dense.resize(root + 1, 0);
            if (dense[root] == 0) {
                dense[root] = static_cast<std::uint32_t>(++out.component_count);
                out.component_sizes.push_back(0);
            }
            out.labels(r, c) = dense[root];
            ++out.component_sizes[dense[root] - 1];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Edge statistics
// ---------------------------------------------------------------------------

struct EdgeStats {
    std::size_t edge_pixels = 0;
    std::size_t num_edges = 0;
    double avg_pixels_per_edge = 0.0;

    friend bool operator==(const EdgeStats&, const EdgeStats&) = default;
};

/// Component statistics, ignoring components with fewer than `min_size` pixels.
inline EdgeStats edge_stats(const EdgeMap& edges, std::size_t min_size = 1) {
    const auto labeling = label_components(edges);
    EdgeStats s;
    for (auto size : labeling.component_sizes) {
        if (size < min_size) continue;
        s.edge_pixels += size;
        ++s.num_edges;
    }
    s.avg_pixels_per_edge =
        s.num_edges > 0 ? static_cast<double>(s.edge_pixels) / static_cast<double>(s.num_edges) : 0.0;
    return s;
}

inline std::size_t popcount(const EdgeMap& edges) {
    return static_cast<std::size_t>(
        std::count_if(edges.values().begin(), edges.values().end(), [](std::uint8_t v) { return v != 0; }));
}

// ---------------------------------------------------------------------------
// Pairwise comparison
// ---------------------------------------------------------------------------

struct DiffMaps {
    EdgeMap only_in_a;
    EdgeMap only_in_b;
    EdgeMap in_both;
};

inline DiffMaps diff_maps(const EdgeMap& a, const EdgeMap& b) {
    require_same_shape(a, b, "diff_maps");
    DiffMaps d{EdgeMap(a.width(), a.height(), 0), EdgeMap(a.width(), a.height(), 0),
               EdgeMap(a.width(), a.height(), 0)};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ea = a.values()[i] != 0;
        const bool eb = b.values()[i] != 0;
        d.only_in_a.values()[i] = ea && !eb;
        d.only_in_b.values()[i] = eb && !ea;
        d.in_both.values()[i] = ea && eb;
    }
    return d;
}

/// Single-image rendering of a DiffMaps: a-only in red, both in green,
/// b-only in blue, black elsewhere.
inline RgbImage diff_composite(const DiffMaps& d) {
    RgbImage out{d.in_both.width(), d.in_both.height(), {}};
    out.data.assign(3 * d.in_both.size(), 0);
    for (std::size_t i = 0; i < d.in_both.size(); ++i) {
        out.data[3 * i + 0] = d.only_in_a.values()[i] ? 255 : 0;
        out.data[3 * i + 1] = d.in_both.values()[i] ? 255 : 0;
        out.data[3 * i + 2] = d.only_in_b.values()[i] ? 255 : 0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corpus comparison
// ---------------------------------------------------------------------------

struct OperatorSpec {
    std::string name;
    int size = 3;

    [[nodiscard]] std::string label() const { return name + "_" + std::to_string(size) + "x" + std::to_string(size); }
    [[nodiscard]] KernelPair kernels() const { return registry_get(name, size); }
};

/// One corpus image; `load` may throw, which is recorded as a failure.
struct CorpusItem {
    std::string name;
    std::function<Image()> load;
};

struct ComparisonRow {
    std::string image;
    EdgeStats a;
    EdgeStats b;
    std::optional<std::string> error;  // set when the image could not be processed
    std::optional<DiffMaps> diff;      // kept only when requested
};

struct ComparisonSummary {
    std::size_t images = 0;    // successfully processed
    std::size_t failures = 0;
    std::size_t a_more_edge_pixels = 0;
    std::size_t a_longer_edges = 0;  // a's avg_pixels_per_edge > b's
};

struct ComparisonReport {
    OperatorSpec op_a;
    OperatorSpec op_b;
    std::vector<ComparisonRow> rows;  // corpus order
    ComparisonSummary summary;
};

struct CompareOptions {
    CannyParams params;
    std::size_t min_edge_size = 1;
    unsigned threads = 1;
    bool keep_diffs = false;
};

/**
 * Runs the Canny pipeline with both operators on every corpus image. Images
 * are processed concurrently up to `threads`; rows stay in corpus order.
 */
inline ComparisonReport compare_operators(const std::vector<CorpusItem>& corpus, const OperatorSpec& op_a,
                                          const OperatorSpec& op_b, const CompareOptions& opts = {}) {
    if (corpus.empty()) throw ParameterError("compare_operators: empty corpus");
    const auto kernels_a = op_a.kernels();
    const auto kernels_b = op_b.kernels();

    ComparisonReport report{op_a, op_b, std::vector<ComparisonRow>(corpus.size()), {}};
    auto process = [&](std::size_t i) {
        auto& row = report.rows[i];
        row.image = corpus[i].name;
        try {
            const Image img = corpus[i].load();
            const auto ea = canny_pipeline(img, kernels_a, opts.params).edges;
            const auto eb = canny_pipeline(img, kernels_b, opts.params).edges;
            row.a = edge_stats(ea, opts.min_edge_size);
            row.b = edge_stats(eb, opts.min_edge_size);
            if (opts.keep_diffs) row.diff = diff_maps(ea, eb);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(corpus.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < corpus.size(); ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < corpus.size(); i = next++) process(i);
            });
        }
    }

    for (const auto& row : report.rows) {
        if (row.error) {
            ++report.summary.failures;
            continue;
        }
        ++report.summary.images;
        if (row.a.edge_pixels > row.b.edge_pixels) ++report.summary.a_more_edge_pixels;
        if (row.a.avg_pixels_per_edge > row.b.avg_pixels_per_edge) ++report.summary.a_longer_edges;
    }
    return report;
}

}  // namespace edgeforge
