#include "orifield/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace orifield {

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::Format, what); }

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xff) << (8 * (7 - b));
    return r;
  }
  return v;
}

void write_bytes(std::ofstream& out, const Raster& m) {
  std::vector<std::uint64_t> buf(std::size_t(m.size()));
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    std::uint64_t bits;
    std::memcpy(&bits, m.data() + k, 8);
    buf[std::size_t(k)] = to_little(bits);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size() * 8));
}

std::uint8_t to_byte(double t) { return std::uint8_t(std::lround(255 * std::clamp(t, 0.0, 1.0))); }

}  // namespace

std::string raster_stem(const std::string& path) {
  for (const char* ext : {".f64", ".json"}) {
    const std::string e(ext);
    if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0)
      return path.substr(0, path.size() - e.size());
  }
  return path;
}

void write_raster(const std::string& stem, const std::vector<Raster>& channels, Json sidecar) {
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "no channels to write");
  const auto rows = channels.front().rows();
  const auto cols = channels.front().cols();
  for (const Raster& c : channels)
    if (c.rows() != rows || c.cols() != cols)
      throw Error(ErrorCode::InvalidArgument, "channels differ in shape");

  std::ofstream out(stem + ".f64", std::ios::binary);
  if (!out) format_error("cannot write " + stem + ".f64");
  for (const Raster& c : channels) write_bytes(out, c);
  if (!out) format_error("cannot write " + stem + ".f64");

  Json meta = {{"format", "orifield-raster"},
               {"format_version", kFormatVersion},
               {"dtype", "float64-le"},
               {"rows", rows},
               {"cols", cols},
               {"channels", channels.size()}};
  if (sidecar.is_object())
    for (auto& [key, value] : sidecar.items()) meta[key] = value;
  write_json_file(stem + ".json", meta);
}

RasterFile read_raster(const std::string& path) {
  const std::string stem = raster_stem(path);
  RasterFile file;
  file.sidecar = read_json_file(stem + ".json");
  const Json& meta = file.sidecar;
  if (!meta.is_object() || meta.value("format", "") != "orifield-raster")
    format_error(stem + ".json is not an orifield raster sidecar");
  if (!meta.contains("format_version") || !meta["format_version"].is_number_integer())
    format_error(stem + ".json: missing format_version");
  if (meta["format_version"].get<int>() != kFormatVersion)
    format_error(stem + ".json: format_version " + meta["format_version"].dump() +
                 " is not supported (expected " + std::to_string(kFormatVersion) + ")");
  const long rows = meta.value("rows", 0L);
  const long cols = meta.value("cols", 0L);
  const long channels = meta.value("channels", 1L);
  if (rows <= 0 || cols <= 0 || channels <= 0) format_error(stem + ".json: bad shape");

  std::ifstream in(stem + ".f64", std::ios::binary | std::ios::ate);
  if (!in) format_error("cannot open " + stem + ".f64");
  const auto bytes = std::size_t(in.tellg());
  const std::size_t expected = std::size_t(rows) * cols * channels * 8;
  if (bytes != expected)
    format_error(stem + ".f64: " + std::to_string(bytes) + " bytes, sidecar implies " +
                 std::to_string(expected));
  in.seekg(0);
  std::vector<std::uint64_t> buf(std::size_t(rows) * cols);
  for (long c = 0; c < channels; ++c) {
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * 8));
    Raster m(rows, cols);
    for (std::size_t k = 0; k < buf.size(); ++k) {
      const std::uint64_t bits = to_little(buf[k]);
      std::memcpy(m.data() + k, &bits, 8);
    }
    file.channels.push_back(std::move(m));
  }
  if (!in) format_error("short read from " + stem + ".f64");
  return file;
}

void write_realization(const std::string& stem, const FieldRealization& r) {
  Json meta = {{"n", r.grid.n},
               {"domain", Json::array({r.grid.x0, r.grid.x1})},
               {"seed", r.seed},
               {"synthesis", to_json(r.params)}};
  try {
    meta["model"] = to_json(r.model);
  } catch (const Error&) {
    meta["model"] = {{"family", r.model.family()}, {"serializable", false}};
  }
  meta["channel_names"] = Json::array({"value"});
  write_raster(stem, {r.values}, std::move(meta));
}

void write_orientation_field(const std::string& stem, const OrientationField& field, Json extra) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Raster angle = field.angle;
  Raster coherency = field.coherency;
  for (int r = 0; r < field.rows(); ++r)
    for (int c = 0; c < field.cols(); ++c)
      if (!field.valid(r, c)) angle(r, c) = coherency(r, c) = nan;
  Json meta = extra.is_object() ? std::move(extra) : Json::object();
  meta["channel_names"] = Json::array({"angle", "coherency"});
  meta["masked"] = "nan";
  write_raster(stem, {angle, coherency}, std::move(meta));
}

void write_pgm(const std::string& path, const Raster& values) {
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << values.cols() << ' ' << values.rows() << "\n255\n";
  // Top row of the image is the largest x₂.
  for (Eigen::Index r = values.rows() - 1; r >= 0; --r)
    for (Eigen::Index c = 0; c < values.cols(); ++c)
      out.put(char(to_byte((values(r, c) - lo) / span)));
  if (!out) format_error("cannot write " + path);
}

void write_angle_ppm(const std::string& path, const OrientationField& field) {
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << field.cols() << ' ' << field.rows() << "\n255\n";
  for (int r = field.rows() - 1; r >= 0; --r)
    for (int c = 0; c < field.cols(); ++c) {
      std::uint8_t rgb[3] = {0, 0, 0};
      if (field.valid(r, c)) {
        // Hue covers the axial circle once; value is the coherency.
        const double hue = 6 * (field.angle(r, c) / std::numbers::pi + 0.5);
        const double v = std::clamp(field.coherency(r, c), 0.0, 1.0);
        const int sector = std::clamp(int(hue), 0, 5);
        const double f = hue - sector;
        const double ch[6][3] = {{1, f, 0}, {1 - f, 1, 0}, {0, 1, f},
                                 {0, 1 - f, 1}, {f, 0, 1}, {1, 0, 1 - f}};
        for (int k = 0; k < 3; ++k) rgb[k] = to_byte(v * ch[sector][k]);
      }
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  if (!out) format_error("cannot write " + path);
}

}  // namespace orifield
