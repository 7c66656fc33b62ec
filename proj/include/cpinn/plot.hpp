#pragma once

// SVG heatmaps of scalar fields on [0,1]^2. The raster is embedded as a
// base64 PNG; min/max of the sampled values are annotated as text.

#include "cpinn/interp.hpp"
#include "cpinn/network.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cpinn {

/// Batched evaluation at the rows of an m x 2 matrix.
using BatchField = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

struct Raster {
  int n = 0;
  Eigen::MatrixXd values;  // n x n; row 0 is the top (y near 1), column 0 is x near 0
  double vmin = 0.0;
  double vmax = 0.0;

  /// Colormap level 0..255 of a value.
  int level(double v) const;
  /// Value represented by a level (inverse of the linear scale).
  double level_value(int level) const;
};

/// Samples f at the n x n cell centres.
Raster render(const BatchField& f, int n = 200);
Raster render(const ScalarField& f, int n = 200);
Raster render(const Network& net, int n = 200);

std::array<std::uint8_t, 3> colormap(int level);

std::string encode_png(const Raster& raster);
std::string base64(const std::string& bytes);
std::string svg_heatmap(const Raster& raster, const std::string& title = {});

/// Writes the SVG to path; throws std::runtime_error when the file cannot be written.
void emit_plot(const Raster& raster, const std::string& path, const std::string& title = {});

}  // namespace cpinn
