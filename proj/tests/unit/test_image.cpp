#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gepd/error.hpp"
#include "gepd/persistence_image.hpp"
#include "gepd/rng.hpp"
#include "oracles.hpp"

using namespace gepd;

TEST_CASE("cell values are Gaussian integrals") {
  Rng r(3);
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<DiagramPoint> pts{{r.uniform(0.0, 2.0), r.uniform(-1.0, 3.0)}};
    ImageParams params;
    params.resolution = 4;
    params.bounds = std::pair{-1.5, 2.5};
    params.sigma = r.uniform(0.2, 0.8);
    params.weight_mode = "constant";
    const auto img = persistence_image(pts, params);
    const double step = 4.0 / 4;
    for (std::size_t row = 0; row < 4; ++row) {
      for (std::size_t col = 0; col < 4; ++col) {
        const double expect = oracle::gaussian_cell_numeric(
            pts[0].birth, pts[0].death - pts[0].birth, *params.sigma, -1.5 + col * step, -1.5 + (col + 1) * step,
            -1.5 + row * step, -1.5 + (row + 1) * step);
        CHECK(std::abs(img.at(row, col) - expect) < 1e-10);
      }
    }
  }
}

TEST_CASE("linear weights scale by relative persistence") {
  const std::vector<DiagramPoint> pts{{0.0, 1.0}, {0.5, 0.0}, {0.2, 0.2}};
  ImageParams params;
  params.bounds = std::pair{-1.0, 2.0};
  params.sigma = 0.3;
  const auto both = persistence_image(pts, params);
  ImageParams constant = params;
  constant.weight_mode = "constant";
  const auto first = persistence_image(std::span(pts.data(), 1), constant);
  const auto second = persistence_image(std::span(pts.data() + 1, 1), constant);
  for (std::size_t k = 0; k < both.values.size(); ++k) {
    CHECK(both.values[k] == doctest::Approx(first.values[k] + 0.5 * second.values[k]).epsilon(1e-12));
  }
}

TEST_CASE("default bounds and sigma") {
  const std::vector<DiagramPoint> pts{{1.0, 3.0}, {2.0, 1.0}};
  // Coordinates (1, 2) and (2, -1): square [-1, 2] padded by 0.3.
  const auto [lo, hi] = default_image_bounds(pts);
  CHECK(lo == doctest::Approx(-1.3));
  CHECK(hi == doctest::Approx(2.3));
  const auto img = persistence_image(pts);
  CHECK(img.resolution == 5);
  CHECK(img.sigma == doctest::Approx(0.2 * 3.6));
  CHECK(default_image_bounds({}) == std::pair{0.0, 1.0});
}

TEST_CASE("pie") {
  const std::vector<DiagramPoint> a{{0.0, 1.0}, {0.3, 0.1}};
  const std::vector<DiagramPoint> b{{0.1, 1.2}};
  ImageParams params;
  params.bounds = default_image_bounds(a);
  const auto ia = persistence_image(a, params), ib = persistence_image(b, params);
  CHECK(pie(ia, ia) == 0.0);
  CHECK(pie(ia, ib) > 0.0);
  CHECK(pie(ia, ib) == doctest::Approx(pie(ib, ia)));
  params.bounds = std::pair{0.0, 5.0};
  CHECK_THROWS_AS(pie(ia, persistence_image(b, params)), DataError);
  params.resolution = 0;
  CHECK_THROWS_AS(persistence_image(b, params), DataError);
}

TEST_CASE("image file round trip") {
  const std::vector<DiagramPoint> pts{{0.0, 1.0 / 3.0}, {0.7, 0.2}};
  const auto img = persistence_image(pts);
  std::ostringstream out;
  write_image(out, img, {"note"});
  std::istringstream in(out.str());
  const auto back = read_image(in);
  CHECK(back.values == img.values);
  CHECK(back.lo == img.lo);
  CHECK(back.hi == img.hi);
  CHECK(back.sigma == img.sigma);
  CHECK(back.weight_mode == img.weight_mode);
  std::istringstream truncated("2 0 1 0.2 linear\n1 2\n");
  CHECK_THROWS_AS(read_image(truncated), DataError);
}
