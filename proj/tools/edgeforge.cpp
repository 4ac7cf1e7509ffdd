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

// edgeforge command-line tool.
//
//   edgeforge gradient <image>          normalized gradient magnitude image
//   edgeforge canny <image>             edge map + diagnostics JSON
//   edgeforge compare <image|dir>       per-image stats CSV/JSON + diff composites
//   edgeforge kernels                   registry (and derived) kernels as JSON
//
// Exit codes: 0 success, 2 usage/input error, 3 processing error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "edgeforge/analysis.hpp"
#include "edgeforge/canny.hpp"
#include "edgeforge/io.hpp"
#include "edgeforge/kernels.hpp"
#include "edgeforge/report.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace edgeforge::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitProcessing = 3;

/// Input problems (bad path, unknown operator, bad parameter) map to exit 2.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Invocation {
    RunConfig config;
    std::string input;
    std::string manifest;
    bool out_given = false;
    bool timings = false;
};

unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EDGEFORGE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring invalid EDGEFORGE_THREADS='" << env << "'\n";
        }
    }
    return n;
}

/// Applies a manifest's config and input; an explicit --out still wins.
void apply_manifest(Invocation& inv, const std::string& command) {
    if (inv.manifest.empty()) return;
    json m;
    try {
        m = json::parse(io::read_bytes(inv.manifest));
    } catch (const json::exception& e) {
        throw UsageError("cannot parse manifest '" + inv.manifest + "': " + e.what());
    }
    if (m.value("command", "") != command) {
        throw UsageError("manifest '" + inv.manifest + "' was written by '" + m.value("command", "?") +
                         "', not '" + command + "'");
    }
    const std::string out = inv.config.out;
    inv.config = m.at("config").get<RunConfig>();
    if (inv.out_given) inv.config.out = out;
    const auto& inputs = m.at("inputs");
    if (inv.input.empty()) inv.input = m.value("input", inputs.empty() ? "" : inputs[0].value("path", ""));
    for (const auto& in : inputs) {
        const auto path = in.value("path", "");
        if (file_sha256(path) != in.value("sha256", "")) {
            std::cerr << "warning: input '" << path << "' differs from the manifest hash\n";
        }
    }
}

void write_manifest(const fs::path& path, const std::string& command, const Invocation& inv,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
    json in = json::array();
    for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha256", file_sha256(p)}});
    json out = json::array();
    for (const auto& p : outputs) out.push_back(p.filename().string());
    const json m = {{"command", command}, {"config", inv.config}, {"input", inv.input},
                    {"inputs", in},       {"outputs", out}};
    io::write_bytes_atomic(path, m.dump(2) + "\n");
}

fs::path prepare_out_dir(const RunConfig& c) {
    fs::path dir(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + c.out + "': " + ec.message());
    return dir;
}

Image load_input(const std::string& path) {
    if (path.empty()) throw UsageError("no input image given");
    if (!fs::is_regular_file(path)) throw UsageError("input file not found: '" + path + "'");
    try {
        return io::read_grayscale(path);
    } catch (const IoError& e) {
        throw UsageError(e.what());
    }
}

KernelPair resolve_operator(const std::string& name, int size) {
    try {
        return registry_get(name, size);
    } catch (const LookupError& e) {
        throw UsageError(e.what());
    }
}

CannyParams resolve_params(const RunConfig& c) {
    try {
        return c.canny_params();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
}

io::Format resolve_format(const RunConfig& c) {
    try {
        return c.image_format();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
}

std::string stem_for(const std::string& input) { return fs::path(input).stem().string(); }

std::string op_label(const RunConfig& c, const std::string& name) {
    return OperatorSpec{name, c.size}.label();
}

// ---------------------------------------------------------------------------

int cmd_gradient(Invocation& inv) {
    apply_manifest(inv, "gradient");
    const auto& c = inv.config;
    const auto kernels = resolve_operator(c.operator_name, c.size);
    const auto params = resolve_params(c);
    const auto fmt = resolve_format(c);
    const Image img = load_input(inv.input);
    const auto dir = prepare_out_dir(c);

    const Image src = c.blur ? gaussian_blur(img, params.gaussian_sigma, params.gaussian_radius, params.padding) : img;
    const auto field = gradient(src, kernels, params.norm, params.padding);
    const auto base = stem_for(inv.input) + "_" + op_label(c, c.operator_name);
    const auto out = dir / (base + "_magnitude" + std::string(io::extension(fmt)));
    io::write_image(out, field.magnitude, fmt);
    write_manifest(dir / (base + "_gradient.manifest.json"), "gradient", inv, {inv.input}, {out});
    std::cout << out.string() << "\n";
    return kExitOk;
}

int cmd_canny(Invocation& inv) {
    apply_manifest(inv, "canny");
    const auto& c = inv.config;
    const auto kernels = resolve_operator(c.operator_name, c.size);
    const auto params = resolve_params(c);
    const auto fmt = resolve_format(c);
    const Image img = load_input(inv.input);
    const auto dir = prepare_out_dir(c);

    const auto res = canny_pipeline(img, kernels, params);
    const auto base = stem_for(inv.input) + "_" + op_label(c, c.operator_name);
    const auto edges_path = dir / (base + "_edges" + std::string(io::extension(fmt)));
    const auto json_path = dir / (base + "_canny.json");
    io::write_image(edges_path, io::edge_map_to_gray(res.edges), fmt);

    json diag = report::diagnostics_json(res, inv.timings);
    diag["operator"] = op_label(c, c.operator_name);
    diag["params"] = report::params_json(params);
    io::write_bytes_atomic(json_path, diag.dump(2) + "\n");
    write_manifest(dir / (base + "_canny.manifest.json"), "canny", inv, {inv.input}, {edges_path, json_path});
    std::cout << edges_path.string() << "\n" << json_path.string() << "\n";
    return kExitOk;
}

int cmd_compare(Invocation& inv) {
    apply_manifest(inv, "compare");
    const auto& c = inv.config;
    resolve_operator(c.operator_name, c.size);
    resolve_operator(c.operator_b, c.size);
    const auto params = resolve_params(c);
    const auto fmt = resolve_format(c);
    if (inv.input.empty()) throw UsageError("no input given");

    std::vector<fs::path> files;
    if (fs::is_directory(inv.input)) {
        for (const auto& e : fs::directory_iterator(inv.input)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw UsageError("input directory '" + inv.input + "' is empty");
    } else if (fs::is_regular_file(inv.input)) {
        files.push_back(inv.input);
    } else {
        throw UsageError("input not found: '" + inv.input + "'");
    }
    const auto dir = prepare_out_dir(c);

    std::vector<CorpusItem> corpus;
    for (const auto& f : files) {
        corpus.push_back({f.filename().string(), [f] { return io::read_grayscale(f); }});
    }
    CompareOptions opts;
    opts.params = params;
    opts.min_edge_size = c.min_edge_size;
    opts.threads = thread_budget();
    opts.keep_diffs = true;
    const OperatorSpec op_a{c.operator_name, c.size};
    const OperatorSpec op_b{c.operator_b, c.size};
    const auto rep = compare_operators(corpus, op_a, op_b, opts);

    std::vector<fs::path> outputs;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        if (row.error) {
            std::cerr << "failed: " << row.image << ": " << *row.error << "\n";
            continue;
        }
        const auto ext = fmt == io::Format::png ? std::string(".png") : std::string(".ppm");
        const auto p = dir / (files[i].stem().string() + "_" + op_a.label() + "_vs_" + op_b.label() + "_diff" + ext);
        io::write_image(p, diff_composite(*row.diff), fmt);
        outputs.push_back(p);
    }
    const auto csv_path = dir / "compare_stats.csv";
    const auto json_path = dir / "compare_stats.json";
    io::write_bytes_atomic(csv_path, report::stats_csv(rep));
    io::write_bytes_atomic(json_path, report::report_json(rep).dump(2) + "\n");
    outputs.push_back(csv_path);
    outputs.push_back(json_path);
    write_manifest(dir / "compare.manifest.json", "compare", inv, files, outputs);
    std::cout << report::summary_line(rep) << "\n";
    return kExitOk;
}

int cmd_kernels(const std::optional<std::string>& name, const std::optional<int>& size, bool derive) {
    json out = json::array();
    bool any = false;
    for (const auto& e : registry_entries()) {
        if (size && e.size != *size) continue;
        if (name && e.name != *name && std::find(e.aliases.begin(), e.aliases.end(), *name) == e.aliases.end()) {
            continue;
        }
        any = true;
        json j = derive ? report::entry_with_derivation_json(e) : report::entry_json(e);
        if (name) j["requested"] = *name;
        out.push_back(std::move(j));
    }
    if (!any) {
        // reuse the registry's message listing valid names
        registry_get(name.value_or(""), size.value_or(3));
        throw UsageError("no kernels match the request");
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

void add_common(CLI::App* cmd, Invocation& inv) {
    auto& c = inv.config;
    cmd->add_option("--size", c.size, "Kernel side (3 or 5)")->capture_default_str();
    cmd->add_option("--gaussian-sigma", c.gaussian_sigma, "Gaussian smoothing sigma")->capture_default_str();
    cmd->add_option("--gaussian-radius", c.gaussian_radius, "Gaussian kernel radius in pixels")->capture_default_str();
    cmd->add_option("--norm", c.norm, "Gradient magnitude norm (l2|l1)")->capture_default_str();
    cmd->add_option("--padding", c.padding, "Border mode (replicate|reflect|zero)")->capture_default_str();
    cmd->add_option("--format", c.format, "Output image format (png|pgm)")->capture_default_str();
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str()->each([&inv](const std::string&) {
        inv.out_given = true;
    });
    cmd->add_option("--manifest", inv.manifest, "Replay the configuration and input recorded in a manifest");
}

void add_thresholds(CLI::App* cmd, Invocation& inv) {
    auto& c = inv.config;
    cmd->add_option("--sigma-fraction", c.sigma_fraction, "Hysteresis spread around the Otsu value")
        ->capture_default_str();
    cmd->add_option("--otsu-source", c.otsu_source, "Raster fed to Otsu (magnitude|blurred-input)")
        ->capture_default_str();
}

int run(int argc, char** argv) {
    CLI::App app{"edgeforge: distance-weighted edge operators, Otsu-thresholded Canny and edge statistics"};
    app.require_subcommand(1);
    Invocation inv;

    auto* grad = app.add_subcommand("gradient", "Write the normalized gradient magnitude of an image");
    grad->add_option("input", inv.input, "Input image (PNG or PGM)");
    grad->add_option("--operator", inv.config.operator_name, "Operator id")->capture_default_str();
    grad->add_flag("!--no-blur", inv.config.blur, "Skip Gaussian smoothing");
    add_common(grad, inv);

    auto* canny = app.add_subcommand("canny", "Run the Otsu-thresholded Canny pipeline");
    canny->add_option("input", inv.input, "Input image (PNG or PGM)");
    canny->add_option("--operator", inv.config.operator_name, "Operator id")->capture_default_str();
    canny->add_flag("--timings", inv.timings, "Include per-stage timings in the diagnostics JSON");
    add_common(canny, inv);
    add_thresholds(canny, inv);

    auto* compare = app.add_subcommand("compare", "Compare two operators over an image or directory");
    compare->add_option("input", inv.input, "Input image or directory");
    compare->add_option("--operator-a,--operator", inv.config.operator_name, "First operator id")
        ->capture_default_str();
    compare->add_option("--operator-b", inv.config.operator_b, "Second operator id")->capture_default_str();
    compare->add_option("--min-edge-size", inv.config.min_edge_size, "Ignore components smaller than this")
        ->capture_default_str();
    add_common(compare, inv);
    add_thresholds(compare, inv);

    std::optional<std::string> kname;
    std::optional<int> ksize;
    bool derive = false;
    auto* kernels = app.add_subcommand("kernels", "Print registry kernels as JSON");
    kernels->add_option("--name", kname, "Operator id");
    kernels->add_option("--size", ksize, "Kernel side (3 or 5)");
    kernels->add_flag("--derive", derive, "Also derive the kernel from its weight scheme and compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*grad) return cmd_gradient(inv);
        if (*canny) return cmd_canny(inv);
        if (*compare) return cmd_compare(inv);
        return cmd_kernels(kname, ksize, derive);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const LookupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoContrastError& e) {
        std::cerr << "error: no contrast: " << e.what() << "\n";
        return kExitProcessing;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProcessing;
    }
}

}  // namespace
}  // namespace edgeforge::cli

int main(int argc, char** argv) { return edgeforge::cli::run(argc, argv); }
