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

// JSON and CSV serialization of kernels, pipeline diagnostics and stats.

#pragma once

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "edgeforge/analysis.hpp"
#include "edgeforge/canny.hpp"
#include "edgeforge/kernels.hpp"

namespace edgeforge::report {

using nlohmann::json;

inline json coefficients_json(const Coefficients& c) { return json(c.data()); }

inline json kernel_json(const std::string& name, const Kernel& k) {
    return {{"name", name},
            {"size", k.side()},
            {"axis", std::string(to_string(k.axis()))},
            {"coefficients", coefficients_json(k.coefficients())}};
}

inline json entry_json(const RegistryEntry& e) {
    return {{"name", e.name},
            {"size", e.size},
            {"aliases", e.aliases},
            {"gx", kernel_json(e.name, e.kernels.x)},
            {"gy", kernel_json(e.name, e.kernels.y)}};
}

/**
 * Registry entry plus the kernel derived from its weight scheme, when the
 * operator has one. "derivation" is "match", "mismatch" or "none".
 */
inline json entry_with_derivation_json(const RegistryEntry& e) {
    json j = entry_json(e);
    const auto weights = weight_scheme_for(e.name, e.size);
    if (!weights) {
        j["derivation"] = "none";
        return j;
    }
    const auto gx = derive_kernel(*weights, Axis::x);
    const auto gy = derive_kernel(*weights, Axis::y);
    j["weights"] = coefficients_json(weights->weights());
    j["derived_gx"] = kernel_json(e.name, gx);
    j["derived_gy"] = kernel_json(e.name, gy);
    j["derivation"] = (gx == e.kernels.x && gy == e.kernels.y) ? "match" : "mismatch";
    return j;
}

inline json stats_json(const EdgeStats& s) {
    return {{"edge_pixels", s.edge_pixels}, {"num_edges", s.num_edges}, {"avg_pixels_per_edge", s.avg_pixels_per_edge}};
}

/// Deterministic diagnostics; timings only when asked for.
inline json diagnostics_json(const CannyResult& r, bool include_timings = false) {
    json j = {{"otsu", r.otsu.threshold},
              {"between_class_variance", r.otsu.between_class_variance},
              {"low", r.thresholds.low},
              {"high", r.thresholds.high},
              {"edge_pixels", popcount(r.edges)},
              {"width", r.edges.width()},
              {"height", r.edges.height()}};
    if (include_timings) {
        j["timings_ms"] = {{"blur", r.timings.blur_ms},
                           {"gradient", r.timings.gradient_ms},
                           {"otsu", r.timings.otsu_ms},
                           {"nms", r.timings.nms_ms},
                           {"hysteresis", r.timings.hysteresis_ms}};
    }
    return j;
}

inline json params_json(const CannyParams& p) {
    return {{"gaussian_sigma", p.gaussian_sigma},
            {"gaussian_radius", p.gaussian_radius},
            {"sigma_fraction", p.thresholds.sigma_fraction},
            {"norm", std::string(to_string(p.norm))},
            {"otsu_source", std::string(to_string(p.otsu_source))},
            {"padding", std::string(to_string(p.padding))}};
}

inline const char* kCsvHeader = "image,operator,edge_pixels,num_edges,avg_pixels_per_edge";

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string format_avg(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

}  // namespace detail

/// Two rows per processed image (operator a, then b). Failed images emit no
/// rows; see failures_json.
inline std::string stats_csv(const ComparisonReport& rep) {
    std::string out = std::string(kCsvHeader) + "\n";
    const auto emit = [&](const std::string& image, const OperatorSpec& op, const EdgeStats& s) {
        out += detail::csv_field(image) + "," + op.label() + "," + std::to_string(s.edge_pixels) + "," +
               std::to_string(s.num_edges) + "," + detail::format_avg(s.avg_pixels_per_edge) + "\n";
    };
    for (const auto& row : rep.rows) {
        if (row.error) continue;
        emit(row.image, rep.op_a, row.a);
        emit(row.image, rep.op_b, row.b);
    }
    return out;
}

inline json report_json(const ComparisonReport& rep) {
    json rows = json::array();
    json failures = json::array();
    for (const auto& row : rep.rows) {
        if (row.error) {
            failures.push_back({{"image", row.image}, {"error", *row.error}});
            continue;
        }
        rows.push_back({{"image", row.image}, {"a", stats_json(row.a)}, {"b", stats_json(row.b)}});
    }
    return {{"operator_a", rep.op_a.label()},
            {"operator_b", rep.op_b.label()},
            {"rows", rows},
            {"failures", failures},
            {"summary",
             {{"images", rep.summary.images},
              {"failures", rep.summary.failures},
              {"a_more_edge_pixels", rep.summary.a_more_edge_pixels},
              {"a_longer_edges", rep.summary.a_longer_edges}}}};
}

inline std::string summary_line(const ComparisonReport& rep) {
    const auto& s = rep.summary;
    return "summary: images=" + std::to_string(s.images) + " failures=" + std::to_string(s.failures) + " " +
           rep.op_a.label() + " more edge pixels on " + std::to_string(s.a_more_edge_pixels) + "/" +
           std::to_string(s.images) + ", longer edges on " + std::to_string(s.a_longer_edges) + "/" +
           std::to_string(s.images) + " vs " + rep.op_b.label();
}

}  // namespace edgeforge::report
