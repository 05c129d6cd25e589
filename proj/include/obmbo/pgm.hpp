#pragma once

#include "obmbo/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace obmbo {

/// 8-bit grayscale raster, row-major, pixel (0,0) top-left.
struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Binary (P5) PGM with maxval 255. Throws std::runtime_error on IO or
/// malformed input.
void save_pgm(const PgmImage& img, const std::string& path);
PgmImage load_pgm(const std::string& path);

/// Phase encoding: -1 -> 0 (black), +1 -> 255 (white).
void save_phase_pgm(const PhaseField& u, const std::string& path);
PhaseField load_phase_pgm(const std::string& path);

/// Mask encoding: 0 -> 0, set -> 255.
void save_mask_pgm(std::span<const std::uint8_t> mask, GridGeometry geom,
                   const std::string& path);
std::vector<std::uint8_t> load_mask_pgm(const std::string& path, GridGeometry& geom_out);

} // namespace obmbo
