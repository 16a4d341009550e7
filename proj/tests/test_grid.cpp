#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "podrom/grid.hpp"
#include "testing_util.hpp"

using namespace podrom;

namespace {
constexpr double kPi = std::numbers::pi;

Field rotate(const Field& f, std::size_t shift) {
  Field out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[(j + shift) % f.size()] = f[j];
  }
  return out;
}

double max_abs_err(const Field& got, const Field& want) {
  double e = 0.0;
  for (std::size_t j = 0; j < got.size(); ++j) {
    e = std::max(e, std::abs(got[j] - want[j]));
  }
  return e;
}

// Max-norm error of a stencil against an analytic derivative of sin(x).
template <typename Stencil, typename Deriv>
double sin_error(std::size_t m, Stencil stencil, Deriv deriv) {
  const Grid g = make_grid(m);
  Field f(m), want(m);
  for (std::size_t j = 0; j < m; ++j) {
    f[j] = std::sin(g.x[j]);
    want[j] = deriv(g.x[j]);
  }
  return max_abs_err(stencil(f, g), want);
}
}  // namespace

TEST_CASE("make_grid basics") {
  const Grid g = make_grid(4);
  CHECK(g.m == 4);
  CHECK(g.dx == Catch::Approx(kPi / 2.0));
  CHECK(g.x[0] == 0.0);
  CHECK(g.x[1] == Catch::Approx(kPi / 2.0));
  CHECK(g.x[2] == Catch::Approx(kPi));
  CHECK(g.x[3] == Catch::Approx(3.0 * kPi / 2.0));

  const Grid g32 = make_grid(32);
  CHECK(g32.dx == Catch::Approx(2.0 * kPi / 32.0));
  CHECK(g32.x[31] == Catch::Approx(2.0 * kPi - g32.dx));
  CHECK(std::abs(g32.dx * 32.0 - g32.length) <= 1e-15 * g32.length);
  for (std::size_t j = 1; j < g32.m; ++j) CHECK(g32.x[j] > g32.x[j - 1]);
}

TEST_CASE("make_grid rejects tiny grids") {
  CHECK_THROWS_AS(make_grid(3), GridError);
  CHECK_THROWS_AS(make_grid(0), GridError);
}

TEST_CASE("cfl_timestep single and combined bounds") {
  const Grid g = make_grid(32);

  // Diffusive bound only (oracle: direct evaluation of cfl*dx^2/(2 nu)).
  const double dt_diff = cfl_timestep(g, 0.0, 0.01, 0.2);
  CHECK(dt_diff == Catch::Approx(0.2 * g.dx * g.dx / 0.02).epsilon(1e-14));

  // Convective bound only.
  const double dt_conv = cfl_timestep(g, 1.0, 0.0, 0.2);
  CHECK(dt_conv == Catch::Approx(0.2 * g.dx).epsilon(1e-14));

  // Both active: the minimum wins.
  CHECK(cfl_timestep(g, 1.0, 0.01, 0.2) ==
        Catch::Approx(std::min(dt_conv, dt_diff)).epsilon(1e-14));

  CHECK_THROWS_AS(cfl_timestep(g, 0.0, 0.0, 0.2), TimestepError);
  CHECK_THROWS_AS(cfl_timestep(g, 1.0, 0.01, 0.0), TimestepError);
  CHECK_THROWS_AS(cfl_timestep(g, -1.0, 0.01, 0.2), TimestepError);
}

TEST_CASE("stencils annihilate constant fields") {
  const Grid g = make_grid(8);
  // Dyadic constant: every coefficient product is exact, so the zeros are too.
  const Field c(8, 3.5);
  for (double v : upwind2(c, g)) CHECK(v == 0.0);
  for (double v : upwind1(c, g)) CHECK(v == 0.0);
  for (double v : central2(c, g)) CHECK(v == 0.0);
  // A generic constant only cancels to rounding.
  const Field d(8, 3.7);
  for (double v : upwind2(d, g)) CHECK(std::abs(v) < 1e-14);
  for (double v : upwind1(d, g)) CHECK(v == 0.0);
  for (double v : central2(d, g)) CHECK(v == 0.0);
}

TEST_CASE("stencil footprints on an impulse") {
  const Grid g = make_grid(8);
  Field f(8, 0.0);
  f[0] = 1.0;

  const Field d2 = upwind2(f, g);
  CHECK(d2[0] == Catch::Approx(3.0 / (2.0 * g.dx)));
  CHECK(d2[1] == Catch::Approx(-4.0 / (2.0 * g.dx)));
  CHECK(d2[2] == Catch::Approx(1.0 / (2.0 * g.dx)));
  for (std::size_t j = 3; j < 8; ++j) CHECK(d2[j] == 0.0);

  const Field d1 = upwind1(f, g);
  CHECK(d1[0] == Catch::Approx(1.0 / g.dx));
  CHECK(d1[1] == Catch::Approx(-1.0 / g.dx));
  for (std::size_t j = 2; j < 8; ++j) CHECK(d1[j] == 0.0);

  // Mirrored forward stencils reach ahead instead.
  const Field f2 = forward2(f, g);
  CHECK(f2[0] == Catch::Approx(-3.0 / (2.0 * g.dx)));
  CHECK(f2[7] == Catch::Approx(4.0 / (2.0 * g.dx)));
  CHECK(f2[6] == Catch::Approx(-1.0 / (2.0 * g.dx)));
  for (std::size_t j = 1; j < 6; ++j) CHECK(f2[j] == 0.0);

  const Field f1 = forward1(f, g);
  CHECK(f1[0] == Catch::Approx(-1.0 / g.dx));
  CHECK(f1[7] == Catch::Approx(1.0 / g.dx));
  for (std::size_t j = 1; j < 7; ++j) CHECK(f1[j] == 0.0);
}

TEST_CASE("central2 sees the wrap on a sawtooth") {
  const Grid g = make_grid(8);
  Field f(8);
  for (std::size_t j = 0; j < 8; ++j) f[j] = static_cast<double>(j);
  const Field d = central2(f, g);
  // Interior second differences vanish; only the wrap rows are large.
  for (std::size_t j = 1; j < 7; ++j) CHECK(d[j] == Catch::Approx(0.0).margin(1e-12));
  CHECK(std::abs(d[0]) > 1.0);
  CHECK(std::abs(d[7]) > 1.0);
}

TEST_CASE("stencils approximate derivatives of sin") {
  auto uw2 = [](const Field& f, const Grid& g) { return upwind2(f, g); };
  auto uw1 = [](const Field& f, const Grid& g) { return upwind1(f, g); };
  auto c2 = [](const Field& f, const Grid& g) { return central2(f, g); };
  auto cosx = [](double x) { return std::cos(x); };
  auto msinx = [](double x) { return -std::sin(x); };

  auto fw2 = [](const Field& f, const Grid& g) { return forward2(f, g); };
  auto fw1 = [](const Field& f, const Grid& g) { return forward1(f, g); };

  CHECK(sin_error(256, uw2, cosx) < 1e-3);
  CHECK(sin_error(256, uw1, cosx) < 0.03);
  CHECK(sin_error(256, c2, msinx) < 1e-3);
  CHECK(sin_error(256, fw2, cosx) < 1e-3);
  CHECK(sin_error(256, fw1, cosx) < 0.03);

  // Observed order: log2(err(m) / err(2m)).
  for (std::size_t m : {64UL, 128UL}) {
    CHECK(std::log2(sin_error(m, uw2, cosx) / sin_error(2 * m, uw2, cosx)) >= 1.9);
    CHECK(std::log2(sin_error(m, c2, msinx) / sin_error(2 * m, c2, msinx)) >= 1.9);
    CHECK(std::log2(sin_error(m, uw1, cosx) / sin_error(2 * m, uw1, cosx)) >= 0.9);
    CHECK(std::log2(sin_error(m, fw2, cosx) / sin_error(2 * m, fw2, cosx)) >= 1.9);
  }

  // cos(x) second-derivative error ratio between m=64 and m=128 is ~4.
  auto cos_c2_err = [&](std::size_t m) {
    const Grid g = make_grid(m);
    Field f(m), want(m);
    for (std::size_t j = 0; j < m; ++j) {
      f[j] = std::cos(g.x[j]);
      want[j] = -std::cos(g.x[j]);
    }
    return max_abs_err(central2(f, g), want);
  };
  CHECK(cos_c2_err(64) / cos_c2_err(128) == Catch::Approx(4.0).epsilon(0.05));
}

TEST_CASE("stencils commute with grid rotation") {
  auto gen = testutil::rng(42);
  const Grid g = make_grid(16);
  const auto fv = testutil::random_vector(16, gen);
  const Field f(fv.begin(), fv.end());
  for (std::size_t shift : {1UL, 5UL, 15UL}) {
    CHECK(max_abs_err(upwind2(rotate(f, shift), g), rotate(upwind2(f, g), shift)) == 0.0);
    CHECK(max_abs_err(upwind1(rotate(f, shift), g), rotate(upwind1(f, g), shift)) == 0.0);
    CHECK(max_abs_err(central2(rotate(f, shift), g), rotate(central2(f, g), shift)) == 0.0);
  }
}

TEST_CASE("stencils reject mismatched fields") {
  const Grid g = make_grid(8);
  const Field f(7, 1.0);
  CHECK_THROWS_AS(upwind2(f, g), ShapeError);
  CHECK_THROWS_AS(convection_derivative(f, g, ConvectionScheme::None), ShapeError);
}

TEST_CASE("convection_derivative dispatch") {
  const Grid g = make_grid(8);
  Field f(8);
  for (std::size_t j = 0; j < 8; ++j) f[j] = std::sin(g.x[j]);
  CHECK(max_abs_err(convection_derivative(f, g, ConvectionScheme::Upwind2), upwind2(f, g)) == 0.0);
  CHECK(max_abs_err(convection_derivative(f, g, ConvectionScheme::Upwind1), upwind1(f, g)) == 0.0);
  for (double v : convection_derivative(f, g, ConvectionScheme::None)) CHECK(v == 0.0);
}
