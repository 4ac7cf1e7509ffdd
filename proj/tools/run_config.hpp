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

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "edgeforge/canny.hpp"
#include "edgeforge/io.hpp"

namespace edgeforge::cli {

/// Everything that determines a run's outputs. A manifest stores the
/// resolved config so a run can be replayed exactly.
struct RunConfig {
    std::string operator_name = "proposed_a";
    std::string operator_b = "sobel";  // compare only
    int size = 3;
    double gaussian_sigma = 1.4;
    int gaussian_radius = 2;
    bool blur = true;  // gradient only
    double sigma_fraction = 0.33;
    std::string norm = "l2";
    std::string otsu_source = "magnitude";
    std::string padding = "replicate";
    std::size_t min_edge_size = 1;
    std::string out = ".";
    std::string format = "png";

    [[nodiscard]] CannyParams canny_params() const {
        CannyParams p;
        p.gaussian_sigma = gaussian_sigma;
        p.gaussian_radius = gaussian_radius;
        p.thresholds.sigma_fraction = sigma_fraction;
        p.norm = parse_norm(norm);
        p.otsu_source = parse_otsu_source(otsu_source);
        p.padding = parse_padding(padding);
        p.thresholds.validate();
        gaussian_kernel_1d(gaussian_sigma, gaussian_radius);  // validates
        return p;
    }

    [[nodiscard]] io::Format image_format() const { return io::parse_format(format); }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = {{"operator", c.operator_name},
         {"operator_b", c.operator_b},
         {"size", c.size},
         {"gaussian_sigma", c.gaussian_sigma},
         {"gaussian_radius", c.gaussian_radius},
         {"blur", c.blur},
         {"sigma_fraction", c.sigma_fraction},
         {"norm", c.norm},
         {"otsu_source", c.otsu_source},
         {"padding", c.padding},
         {"min_edge_size", c.min_edge_size},
         {"out", c.out},
         {"format", c.format}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    const RunConfig d;
    c.operator_name = j.value("operator", d.operator_name);
    c.operator_b = j.value("operator_b", d.operator_b);
    c.size = j.value("size", d.size);
    c.gaussian_sigma = j.value("gaussian_sigma", d.gaussian_sigma);
    c.gaussian_radius = j.value("gaussian_radius", d.gaussian_radius);
    c.blur = j.value("blur", d.blur);
    c.sigma_fraction = j.value("sigma_fraction", d.sigma_fraction);
    c.norm = j.value("norm", d.norm);
    c.otsu_source = j.value("otsu_source", d.otsu_source);
    c.padding = j.value("padding", d.padding);
    c.min_edge_size = j.value("min_edge_size", d.min_edge_size);
    c.out = j.value("out", d.out);
    c.format = j.value("format", d.format);
}

inline std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr)) {
        throw Error("sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

inline std::string file_sha256(const std::filesystem::path& p) {
    try {
        return sha256_hex(io::read_bytes(p));
    } catch (const IoError&) {
        return "";
    }
}

}  // namespace edgeforge::cli
