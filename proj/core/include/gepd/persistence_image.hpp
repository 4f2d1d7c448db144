#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gepd/diagram_metrics.hpp"

namespace gepd {

/// r x r grid over the square [lo, hi]^2 of the (birth, death - birth)
/// plane. values[row * r + col]; column index follows birth, row index
/// follows the signed persistence coordinate, both increasing.
struct PersistenceImage {
  std::size_t resolution = 5;
  double lo = 0.0;
  double hi = 1.0;
  double sigma = 0.2;
  std::string weight_mode = "linear";
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * resolution + col]; }
};

struct ImageParams {
  std::size_t resolution = 5;
  /// Embedding square; default is the tight bounding square of the
  /// transformed points padded by 10% of its side on each end.
  std::optional<std::pair<double, double>> bounds;
  /// Gaussian bandwidth; default 0.2 x the side of the square.
  std::optional<double> sigma;
  std::string weight_mode = "linear";
};

/// Bounds the defaults would choose for these points.
std::pair<double, double> default_image_bounds(std::span<const DiagramPoint> points);

/// Each point (b, d) becomes a Gaussian at (b, d - b) with weight
/// |d - b| / (largest |d - b| in the diagram), integrated exactly over every
/// cell. Weight modes: "linear" (above) or "constant" (weight 1).
PersistenceImage persistence_image(std::span<const DiagramPoint> points, const ImageParams& params = {});

/// Total squared difference. Throws DataError unless resolution and bounds
/// agree.
double pie(const PersistenceImage& a, const PersistenceImage& b);

/// Image file: header "r min max sigma weight_mode", then r lines of r values.
void write_image(std::ostream& out, const PersistenceImage& img, const std::vector<std::string>& comments = {});
void write_image(const std::filesystem::path& path, const PersistenceImage& img,
                 const std::vector<std::string>& comments = {});
PersistenceImage read_image(std::istream& in);
PersistenceImage read_image(const std::filesystem::path& path);

}  // namespace gepd
