#pragma once

#include <string>
#include <vector>

#include "orifield/monogenic.hpp"
#include "orifield/serialization.hpp"
#include "orifield/synth.hpp"

namespace orifield {

inline constexpr int kFormatVersion = 1;

/// `<stem>.f64` holds the channels one after another, each row-major
/// little-endian float64; `<stem>.json` describes it.
struct RasterFile {
  std::vector<Raster> channels;
  Json sidecar;
};

/// Strips a trailing .f64 or .json so either file names the pair.
std::string raster_stem(const std::string& path);

void write_raster(const std::string& stem, const std::vector<Raster>& channels, Json sidecar);

/// Throws Format on a missing file, a version mismatch or a size mismatch.
RasterFile read_raster(const std::string& path);

/// Writes `<stem>.f64` and `<stem>.json` (n, domain, model, seed, synthesis).
void write_realization(const std::string& stem, const FieldRealization& r);

/// Two channels (angle, coherency); masked pixels are NaN in both.
void write_orientation_field(const std::string& stem, const OrientationField& field, Json extra = {});

/// 8-bit binary PGM, min-max normalized.
void write_pgm(const std::string& path, const Raster& values);

/// Binary PPM: hue from the axial angle, brightness from coherency, black where masked.
void write_angle_ppm(const std::string& path, const OrientationField& field);

}  // namespace orifield
