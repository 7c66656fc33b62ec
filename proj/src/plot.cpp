#include "cpinn/plot.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cpinn {

namespace {

// Anchor colours of a viridis-like ramp, interpolated linearly.
constexpr std::array<std::array<double, 3>, 5> kStops{{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

int Raster::level(double v) const {
  if (!(vmax > vmin)) return 0;
  const double t = (v - vmin) / (vmax - vmin);
  return std::clamp(static_cast<int>(std::lround(t * 255.0)), 0, 255);
}

double Raster::level_value(int lvl) const {
  if (!(vmax > vmin)) return vmin;
  return vmin + (vmax - vmin) * lvl / 255.0;
}

Raster render(const BatchField& f, int n) {
  if (n < 1) throw std::invalid_argument("render: n must be positive");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n) * n, 2);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Eigen::Index q = static_cast<Eigen::Index>(row) * n + col;
      X(q, 0) = (col + 0.5) / n;
      X(q, 1) = 1.0 - (row + 0.5) / n;
    }
  }
  const Eigen::VectorXd v = f(X);
  if (v.size() != X.rows()) throw std::invalid_argument("render: field returned wrong number of values");
  Raster r;
  r.n = n;
  r.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
  if (!r.values.allFinite()) throw std::runtime_error("render: field has non-finite values");
  r.vmin = r.values.minCoeff();
  r.vmax = r.values.maxCoeff();
  return r;
}

Raster render(const ScalarField& f, int n) {
  return render(BatchField([&f](const Eigen::MatrixXd& X) { return sample(X, f); }), n);
}

Raster render(const Network& net, int n) {
  return render(BatchField([&net](const Eigen::MatrixXd& X) { return forward(net, X, false).value; }), n);
}

std::array<std::uint8_t, 3> colormap(int level) {
  const double t = std::clamp(level, 0, 255) / 255.0 * (kStops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
  const double w = t - static_cast<double>(i);
  std::array<std::uint8_t, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<std::uint8_t>(std::lround((1.0 - w) * kStops[i][c] + w * kStops[i + 1][c]));
  return rgb;
}

std::string encode_png(const Raster& raster) {
  const int n = raster.n;
  std::string scan;
  scan.reserve(static_cast<std::size_t>(n) * (3 * n + 1));
  for (int row = 0; row < n; ++row) {
    scan.push_back('\0');
    for (int col = 0; col < n; ++col) {
      const auto rgb = colormap(raster.level(raster.values(row, col)));
      scan.append(reinterpret_cast<const char*>(rgb.data()), 3);
    }
  }
  uLongf len = compressBound(static_cast<uLong>(scan.size()));
  std::string packed(len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(packed.data()), &len, reinterpret_cast<const Bytef*>(scan.data()),
                static_cast<uLong>(scan.size()), Z_BEST_COMPRESSION) != Z_OK)
    throw std::runtime_error("encode_png: compression failed");
  packed.resize(len);

  std::string png("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(n));
  put_u32(ihdr, static_cast<std::uint32_t>(n));
  ihdr += std::string("\x08\x02\x00\x00\x00", 5);  // 8-bit RGB
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", packed);
  put_chunk(png, "IEND", {});
  return png;
}

std::string base64(const std::string& bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                            (static_cast<std::uint8_t>(bytes[i + 1]) << 8) | static_cast<std::uint8_t>(bytes[i + 2]);
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = static_cast<std::uint8_t>(bytes[i]) << 16;
    if (i + 1 < bytes.size()) v |= static_cast<std::uint8_t>(bytes[i + 1]) << 8;
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::string svg_heatmap(const Raster& raster, const std::string& title) {
  constexpr int kSide = 400, kPad = 40, kBar = 20;
  const int width = kPad * 3 + kSide + kBar + 60;
  const int height = kPad * 2 + kSide;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  if (!title.empty())
    s << "  <text x=\"" << kPad << "\" y=\"" << kPad - 12 << "\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  s << "  <image x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSide << "\" height=\"" << kSide
    << "\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64," << base64(encode_png(raster))
    << "\"/>\n";
  const int bx = kPad * 2 + kSide;
  s << "  <defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (std::size_t i = 0; i < kStops.size(); ++i) {
    const auto rgb = colormap(static_cast<int>(std::lround(255.0 * i / (kStops.size() - 1))));
    s << "    <stop offset=\"" << fmt(static_cast<double>(i) / (kStops.size() - 1)) << "\" stop-color=\"rgb("
      << int(rgb[0]) << ',' << int(rgb[1]) << ',' << int(rgb[2]) << ")\"/>\n";
  }
  s << "  </linearGradient></defs>\n";
  s << "  <rect x=\"" << bx << "\" y=\"" << kPad << "\" width=\"" << kBar << "\" height=\"" << kSide
    << "\" fill=\"url(#scale)\"/>\n";
  s << "  <text class=\"max\" x=\"" << bx + kBar + 6 << "\" y=\"" << kPad + 10
    << "\" font-family=\"sans-serif\" font-size=\"12\">max " << fmt(raster.vmax) << "</text>\n";
  s << "  <text class=\"min\" x=\"" << bx + kBar + 6 << "\" y=\"" << kPad + kSide
    << "\" font-family=\"sans-serif\" font-size=\"12\">min " << fmt(raster.vmin) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void emit_plot(const Raster& raster, const std::string& path, const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << svg_heatmap(raster, title);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cpinn
