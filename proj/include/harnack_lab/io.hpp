#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "harnack_lab/elliptic.hpp"
#include "json.hpp"

namespace harnack::io {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form of a double (%.17g trimmed), so that
/// re-running a config byte-reproduces every artifact.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(const std::string& data);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

struct CsvSeries {
    std::string header;  // comment line, written as "# ..."
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::filesystem::path& path, const CsvSeries& series);

/// ScalarField dump as (i, j[, k], x, y[, z], value) rows over interior cells.
void write_field_csv(const std::filesystem::path& path, const elliptic::ScalarField& f,
                     const std::string& header);

/// Compact binary layout: magic "HLSF", u32 dim, u64 m[dim], f64 h,
/// f64 xmin[dim], u64 count, then count raw little-endian 64-bit floats in
/// interior-equation order.
void write_field_binary(const std::filesystem::path& path, const elliptic::ScalarField& f);

/// Wet mask as a bitmap-style CSV: one row per grid line of 0/1 cells.
void write_mask_csv(const std::filesystem::path& path, const GridDomain& g,
                    const std::vector<std::uint8_t>& per_eq_mask);

/// Minimal SVG polyline plot of one or more (x, y) series on log-free axes.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::string>& names,
                    const std::vector<std::vector<double>>& xs,
                    const std::vector<std::vector<double>>& ys);

}  // namespace harnack::io
