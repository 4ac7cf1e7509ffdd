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

// PNG (via libpng) and binary PNM image IO. Users of this header link libpng.

#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "edgeforge/canny.hpp"
#include "edgeforge/errors.hpp"
#include "edgeforge/grid.hpp"
#include "edgeforge/image.hpp"

namespace edgeforge::io {

/// Decoded 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
};

enum class Format { png, pgm };

inline std::string_view extension(Format f) { return f == Format::png ? ".png" : ".pgm"; }

inline Format parse_format(std::string_view s) {
    if (s == "png") return Format::png;
    if (s == "pgm") return Format::pgm;
    throw ParameterError("unknown image format '" + std::string(s) + "' (expected png|pgm)");
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes through a sibling temp file and renames it into place.
inline void write_bytes_atomic(const std::filesystem::path& path, std::string_view bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

namespace detail {

inline bool is_png(const std::vector<std::uint8_t>& bytes) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return bytes.size() >= 8 && std::equal(std::begin(sig), std::end(sig), bytes.begin());
}

inline Raster decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("'" + name + "': " + msg);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    Raster r{static_cast<int>(image.width), static_cast<int>(image.height), color ? 3 : 1, {}};
    r.data.resize(PNG_IMAGE_SIZE(image));
    // alpha, if present, is composited onto black
    if (!png_image_finish_read(&image, nullptr, r.data.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("'" + name + "': " + msg);
    }
    if (r.width < 1 || r.height < 1) throw IoError("'" + name + "': empty image");
    return r;
}

class PnmCursor {
public:
    PnmCursor(const std::vector<std::uint8_t>& bytes, const std::string& name) : b_(bytes), name_(name) {}

    int next_int() {
        skip_space_and_comments();
        if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) fail("expected a number in header");
        long v = 0;
        while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
            v = v * 10 + (b_[pos_++] - '0');
            if (v > (1L << 30)) fail("header value too large");
        }
        return static_cast<int>(v);
    }

    /// Consumes the single whitespace byte that ends the header.
    std::size_t data_offset() {
        if (pos_ >= b_.size() || !std::isspace(b_[pos_])) fail("malformed header terminator");
        return pos_ + 1;
    }

    [[noreturn]] void fail(const std::string& why) const { throw IoError("'" + name_ + "': " + why); }

private:
    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            if (std::isspace(b_[pos_])) {
                ++pos_;
            } else if (b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& b_;
    const std::string& name_;
    std::size_t pos_ = 2;
};

inline Raster decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    const int channels = bytes[1] == '5' ? 1 : 3;
    PnmCursor cur(bytes, name);
    const int w = cur.next_int();
    const int h = cur.next_int();
    const int maxval = cur.next_int();
    if (w < 1 || h < 1) cur.fail("zero-sized image");
    if (maxval < 1 || maxval > 255) cur.fail("only 8-bit PNM (maxval <= 255) is supported");
    const auto offset = cur.data_offset();
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(channels);
    if (bytes.size() < offset + n) cur.fail("truncated pixel data");
    Raster r{w, h, channels, std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                                      bytes.begin() + static_cast<std::ptrdiff_t>(offset + n))};
    if (maxval != 255) {
        for (auto& v : r.data) v = to_u8(std::min<int>(v, maxval) * 255.0 / maxval);
    }
    return r;
}

}  // namespace detail

/// Decodes PNG, binary PGM (P5) or binary PPM (P6) from memory.
inline Raster decode(const std::vector<std::uint8_t>& bytes, const std::string& name = "<memory>") {
    if (detail::is_png(bytes)) return detail::decode_png(bytes, name);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
        return detail::decode_pnm(bytes, name);
    }
    throw IoError("'" + name + "': unrecognized image format (expected PNG, P5 PGM or P6 PPM)");
}

inline Raster read_raster(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) throw IoError("no such file: '" + path.string() + "'");
    return decode(read_bytes(path), path.string());
}

inline RgbImage to_rgb(const Raster& r) {
    RgbImage out{r.width, r.height, {}};
    if (r.channels == 3) {
        out.data = r.data;
    } else {
        out.data.reserve(r.data.size() * 3);
        for (auto v : r.data) out.data.insert(out.data.end(), {v, v, v});
    }
    return out;
}

/// Grayscale view of any decoded raster; colour goes through BT.601 luma.
inline Image to_image(const Raster& r) {
    if (r.channels == 3) return to_grayscale(to_rgb(r));
    return Grid<std::uint8_t>(r.width, r.height, r.data).cast<double>();
}

inline Image read_grayscale(const std::filesystem::path& path) { return to_image(read_raster(path)); }

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace detail {

inline std::string encode_png(const std::uint8_t* data, int width, int height, int channels) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, data, 0, nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    std::string out(size, '\0');
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

inline std::string encode_pnm(const std::uint8_t* data, int width, int height, int channels) {
    std::string out = (channels == 3 ? "P6\n" : "P5\n") + std::to_string(width) + " " + std::to_string(height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(data),
               static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * static_cast<std::size_t>(channels));
    return out;
}

}  // namespace detail

inline std::string encode(const Grid<std::uint8_t>& gray, Format fmt) {
    return fmt == Format::png ? detail::encode_png(gray.data().data(), gray.width(), gray.height(), 1)
                              : detail::encode_pnm(gray.data().data(), gray.width(), gray.height(), 1);
}

/// RGB images always encode as PNG or, for Format::pgm, as binary PPM.
inline std::string encode(const RgbImage& rgb, Format fmt) {
    return fmt == Format::png ? detail::encode_png(rgb.data.data(), rgb.width, rgb.height, 3)
                              : detail::encode_pnm(rgb.data.data(), rgb.width, rgb.height, 3);
}

inline void write_image(const std::filesystem::path& path, const Grid<std::uint8_t>& gray, Format fmt) {
    write_bytes_atomic(path, encode(gray, fmt));
}

inline void write_image(const std::filesystem::path& path, const Image& img, Format fmt) {
    write_image(path, quantize(img), fmt);
}

inline void write_image(const std::filesystem::path& path, const RgbImage& rgb, Format fmt) {
    write_bytes_atomic(path, encode(rgb, fmt));
}

/// 255 = edge, 0 = background.
inline Grid<std::uint8_t> edge_map_to_gray(const EdgeMap& edges) {
    Grid<std::uint8_t> out(edges.width(), edges.height(), 0);
    std::transform(edges.values().begin(), edges.values().end(), out.values().begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
    return out;
}

inline EdgeMap gray_to_edge_map(const Grid<std::uint8_t>& gray) {
    EdgeMap out(gray.width(), gray.height(), 0);
    std::transform(gray.values().begin(), gray.values().end(), out.values().begin(),
                   [](std::uint8_t v) -> std::uint8_t { return v >= 128 ? 1 : 0; });
    return out;
}

}  // namespace edgeforge::io
