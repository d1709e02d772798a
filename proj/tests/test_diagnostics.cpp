#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/checks.hpp"
#include "thermoflow/diagnostics.hpp"

using namespace thermoflow;

namespace {

constexpr double kNGas = 358.2996;
constexpr double kNLiquid = 9058.3724;

// Liquid cells where inside(i, j), gas elsewhere.
template <class Inside>
CellField sharp_field(const Grid& g, Inside inside) {
  CellField n(g, kNGas);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (inside(i, j)) n(i, j) = kNLiquid;
  return n;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("energies of a fluid at rest") {
  const PengRobinson eos(Substance::n_butane());
  const Grid g = Grid::centered(6, 6, 3e-9, 3e-9);
  const SimState st = make_state(eos, g, CellField(g, 4000.0), CellField(g, 345.0));
  const Energies e = energies(g, st);
  CHECK(e.H == 0.0);
  const double area = g.lx * g.ly;
  const double theta = eos.internal_energy_bulk({4000.0, 345.0});
  CHECK(e.U_physical == doctest::Approx(theta * area).epsilon(1e-13));
  CHECK(e.U_scheme == e.U_physical);
  CHECK(e.E == e.U_scheme);
  CHECK(entropy_total(g, st) ==
        doctest::Approx(eos.gamma_s_bulk({4000.0, 345.0}).s_b * area).epsilon(1e-13));
}

TEST_CASE("kinetic energy of a uniform flow") {
  const PengRobinson eos(Substance::n_butane());
  const Grid g = Grid::centered(6, 5, 3e-9, 2.5e-9);
  SimState st = make_state(eos, g, CellField(g, 4000.0), CellField(g, 345.0));
  st.u = FaceField(g, 2.0);
  zero_boundary_faces(g, st.u);
  const double rho = st.rho(0, 0);
  const double faces = g.x_unknowns() + g.y_unknowns();
  CHECK(energies(g, st).H == doctest::Approx(0.5 * rho * 4.0 * faces * g.cell_volume()));
}

TEST_CASE("first law residual and records") {
  DiagnosticsRecord a, b;
  a.E = 10.0;
  b.E = 9.0;
  CHECK(first_law_residual(a, b, 0.5, 2.0) == doctest::Approx(0.0));
  CHECK(first_law_residual(a, b, 0.5, 0.0) == doctest::Approx(-1.0));

  const PengRobinson eos(Substance::n_butane());
  const Grid g = Grid::centered(5, 5, 2.5e-9, 2.5e-9);
  SimState st = make_state(eos, g, CellField(g, 4000.0), CellField(g, 345.0));
  const DiagnosticsRecord r0 = make_record(g, st);
  CHECK(r0.step == 0);
  CHECK(r0.mass == doctest::Approx(4000.0 * g.lx * g.ly));
  st.step_index = 1;
  st.time = 1e-13;
  const DiagnosticsRecord r1 = make_record(g, st, &r0, 1e-13, 3.0, 2);
  CHECK(r1.boundary_heat == doctest::Approx(3e-13));
  CHECK(r1.entropy_increment == 0.0);
  CHECK(r1.outer_iters == 2);
}

TEST_CASE("pressure of a uniform state is the bulk pressure") {
  const PengRobinson eos(Substance::n_butane());
  const Grid g = Grid::centered(5, 5, 2.5e-9, 2.5e-9);
  const CellField p = pressure_field(eos, g, CellField(g, 4000.0), CellField(g, 345.0));
  const double pb = eos.p_bulk({4000.0, 345.0});
  for (double v : p.values()) CHECK(v == doctest::Approx(pb).epsilon(1e-12));

  const CellField n = sharp_field(g, [](int i, int) { return i >= 2; });
  const CellField pi = pressure_field(eos, g, n, CellField(g, 345.0));
  CHECK(pi(2, 2) != doctest::Approx(eos.p_bulk({kNLiquid, 345.0})).epsilon(1e-6));
}

TEST_CASE("momentum identity residual converges at second order") {
  const PengRobinson eos(Substance::n_butane());
  const double r32 = checks::theorem_residual_max(eos, 32);
  const double r64 = checks::theorem_residual_max(eos, 64);
  CHECK(r64 < r32);
  CHECK(std::log2(r32 / r64) >= 1.9);
}

TEST_CASE("square droplet circularity") {
  const Grid g = Grid::make(20, 20, 20.0, 20.0, 0.0, 0.0);
  for (int s : {4, 6, 10}) {
    const CellField n = sharp_field(g, [s](int i, int j) { return i >= 5 && i < 5 + s && j >= 5 && j < 5 + s; });
    const ShapeMetrics m = shape_metrics(g, n, kNGas, kNLiquid, Phase::droplet);
    const double perimeter = 4.0 * (s - 1) + 2.0 * std::numbers::sqrt2;
    CHECK(m.area == doctest::Approx(s * s));
    CHECK(m.perimeter == doctest::Approx(perimeter).epsilon(1e-12));
    CHECK(m.circularity ==
          doctest::Approx(4.0 * std::numbers::pi * s * s / (perimeter * perimeter)).epsilon(1e-12));
    CHECK(m.centroid_x == doctest::Approx(5.0 + 0.5 * s));
    CHECK(m.centroid_y == doctest::Approx(5.0 + 0.5 * s));
  }
}

TEST_CASE("a disk is rounder than a square of equal area") {
  const Grid g = Grid::centered(40, 40, 40.0, 40.0);
  const CellField square = sharp_field(g, [&](int i, int j) {
    return std::abs(g.xc(i)) < 9.0 && std::abs(g.yc(j)) < 9.0;
  });
  const double radius = 18.0 / std::sqrt(std::numbers::pi);
  const CellField disk = sharp_field(g, [&](int i, int j) {
    return std::hypot(g.xc(i), g.yc(j)) < radius;
  });
  const ShapeMetrics ms = shape_metrics(g, square, kNGas, kNLiquid, Phase::droplet);
  const ShapeMetrics md = shape_metrics(g, disk, kNGas, kNLiquid, Phase::droplet);
  CHECK(md.circularity > ms.circularity);
  CHECK(md.circularity < 1.1);
  CHECK(std::abs(md.centroid_x) < 1e-12);
}

TEST_CASE("bubble phase and empty regions") {
  const Grid g = Grid::centered(10, 10, 10.0, 10.0);
  // gas bubble in the lower half
  const CellField n = sharp_field(g, [&](int i, int j) {
    return !(std::abs(g.xc(i)) < 2.0 && g.yc(j) < -1.0 && g.yc(j) > -4.0);
  });
  const ShapeMetrics m = shape_metrics(g, n, kNGas, kNLiquid, Phase::bubble);
  CHECK(m.area == doctest::Approx(12.0));
  CHECK(m.centroid_y == doctest::Approx(-2.5));
  CHECK(m.centroid_x == doctest::Approx(0.0));

  CHECK_THROWS_AS(shape_metrics(g, CellField(g, kNGas), kNGas, kNLiquid, Phase::droplet),
                  EmptyPhaseError);
  CHECK_THROWS_AS(shape_metrics(g, CellField(g, kNLiquid), kNGas, kNLiquid, Phase::bubble),
                  EmptyPhaseError);
  CHECK(contour_length(g, CellField(g, kNGas), 0.5 * (kNGas + kNLiquid)) == 0.0);
}

}  // TEST_SUITE
