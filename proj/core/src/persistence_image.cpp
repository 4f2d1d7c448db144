#include "gepd/persistence_image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gepd/diagram_io.hpp"
#include "gepd/error.hpp"

namespace gepd {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Gaussian mass of N(center, sigma^2) on each of the r cells along one axis.
std::vector<double> axis_masses(double center, double sigma, double lo, double hi, std::size_t r) {
  std::vector<double> out(r);
  const double step = (hi - lo) / static_cast<double>(r);
  double prev = normal_cdf((lo - center) / sigma);
  for (std::size_t k = 0; k < r; ++k) {
    const double edge = k + 1 == r ? hi : lo + static_cast<double>(k + 1) * step;
    const double cur = normal_cdf((edge - center) / sigma);
    out[k] = cur - prev;
    prev = cur;
  }
  return out;
}

}  // namespace

std::pair<double, double> default_image_bounds(std::span<const DiagramPoint> points) {
  if (points.empty()) return {0.0, 1.0};
  double lo = points[0].birth;
  double hi = points[0].birth;
  for (const auto& p : points) {
    const double y = p.death - p.birth;
    lo = std::min({lo, p.birth, y});
    hi = std::max({hi, p.birth, y});
  }
  const double side = hi - lo;
  if (side <= 0.0) return {lo - 0.5, hi + 0.5};
  return {lo - 0.1 * side, hi + 0.1 * side};
}

PersistenceImage persistence_image(std::span<const DiagramPoint> points, const ImageParams& params) {
  if (params.resolution == 0) throw DataError("persistence image resolution must be at least 1");
  if (params.weight_mode != "linear" && params.weight_mode != "constant") {
    throw DataError("unknown persistence image weight mode \"" + params.weight_mode + "\"");
  }
  PersistenceImage img;
  img.resolution = params.resolution;
  std::tie(img.lo, img.hi) = params.bounds ? *params.bounds : default_image_bounds(points);
  if (!(img.hi > img.lo)) throw DataError("persistence image bounds must satisfy min < max");
  img.sigma = params.sigma ? *params.sigma : 0.2 * (img.hi - img.lo);
  if (!(img.sigma > 0.0)) throw DataError("persistence image sigma must be positive");
  img.weight_mode = params.weight_mode;
  const std::size_t r = img.resolution;
  img.values.assign(r * r, 0.0);

  double max_pers = 0.0;
  for (const auto& p : points) max_pers = std::max(max_pers, std::abs(p.death - p.birth));

  for (const auto& p : points) {
    double w = 1.0;
    if (img.weight_mode == "linear") {
      w = max_pers > 0.0 ? std::abs(p.death - p.birth) / max_pers : 0.0;
    }
    if (w == 0.0) continue;
    const auto mx = axis_masses(p.birth, img.sigma, img.lo, img.hi, r);
    const auto my = axis_masses(p.death - p.birth, img.sigma, img.lo, img.hi, r);
    for (std::size_t row = 0; row < r; ++row) {
      for (std::size_t col = 0; col < r; ++col) img.values[row * r + col] += w * my[row] * mx[col];
    }
  }
  return img;
}

double pie(const PersistenceImage& a, const PersistenceImage& b) {
  if (a.resolution != b.resolution || a.lo != b.lo || a.hi != b.hi || a.values.size() != b.values.size()) {
    throw DataError("persistence images differ in resolution or bounds");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double d = a.values[k] - b.values[k];
    total += d * d;
  }
  return total;
}

void write_image(std::ostream& out, const PersistenceImage& img, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << img.resolution << ' ' << format_real(img.lo) << ' ' << format_real(img.hi) << ' ' << format_real(img.sigma)
      << ' ' << img.weight_mode << '\n';
  for (std::size_t row = 0; row < img.resolution; ++row) {
    for (std::size_t col = 0; col < img.resolution; ++col) {
      if (col) out << ' ';
      out << format_real(img.at(row, col));
    }
    out << '\n';
  }
}

void write_image(const std::filesystem::path& path, const PersistenceImage& img,
                 const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write image file " + path.string());
  write_image(out, img, comments);
}

PersistenceImage read_image(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> void {
    throw DataError("image line " + std::to_string(line_no) + ": " + what);
  };
  PersistenceImage img;
  if (!next()) fail("missing header");
  {
    std::istringstream head(line);
    if (!(head >> img.resolution >> img.lo >> img.hi >> img.sigma >> img.weight_mode) || img.resolution == 0) {
      fail("expected \"r min max sigma weight_mode\"");
    }
  }
  img.values.reserve(img.resolution * img.resolution);
  for (std::size_t row = 0; row < img.resolution; ++row) {
    if (!next()) fail("image ends early");
    std::istringstream fields(line);
    for (std::size_t col = 0; col < img.resolution; ++col) {
      double v = 0.0;
      if (!(fields >> v)) fail("expected " + std::to_string(img.resolution) + " values");
      img.values.push_back(v);
    }
    std::string rest;
    if (fields >> rest) fail("too many values");
  }
  return img;
}

PersistenceImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open image file " + path.string());
  try {
    return read_image(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace gepd
