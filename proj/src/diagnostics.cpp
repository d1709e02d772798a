#include "thermoflow/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace thermoflow {

Energies energies(const Grid& g, const SimState& st) {
  const FaceField rho_face = face_average(g, st.rho);
  const double h = 0.5 * face_inner(g, rho_face, st.u * st.u);
  const double us = domain_integral(g, st.theta_scheme);
  const double up = domain_integral(g, st.theta);
  return {h, us, up, h + us};
}

double entropy_total(const Grid& g, const SimState& st) { return domain_integral(g, st.s); }

double first_law_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& cur, double dt,
                          double boundary_heat_rate) {
  return cur.E - prev.E + dt * boundary_heat_rate;
}

DiagnosticsRecord make_record(const Grid& g, const SimState& st, const DiagnosticsRecord* prev,
                              double dt, double boundary_heat_rate, int outer_iters) {
  DiagnosticsRecord r;
  r.step = st.step_index;
  r.time = st.time;
  r.mass = domain_integral(g, st.n);
  const Energies e = energies(g, st);
  r.H = e.H;
  r.U_scheme = e.U_scheme;
  r.U_physical = e.U_physical;
  r.E = e.E;
  r.S = entropy_total(g, st);
  r.outer_iters = outer_iters;
  if (prev != nullptr) {
    r.boundary_heat = dt * boundary_heat_rate;
    r.first_law_residual = first_law_residual(*prev, r, dt, boundary_heat_rate);
    r.entropy_increment = r.S - prev->S;
  }
  return r;
}

CellField pressure_field(const PengRobinson& eos, const Grid& g, const CellField& n,
                         const CellField& T) {
  CellField c(g);
  for (std::size_t q = 0; q < c.size(); ++q) c.values()[q] = eos.influence_param(T.values()[q]).c;
  CellField lap(g);
  lap.vec() = diffusion_matrix(g, c) * n.vec();
  const CellField gsq = grad_sq_cell(g, n);
  CellField p(g);
  for (std::size_t q = 0; q < p.size(); ++q) {
    const double nq = n.values()[q];
    p.values()[q] = eos.p_bulk({nq, T.values()[q]}) - nq * lap.values()[q] -
                    0.5 * c.values()[q] * gsq.values()[q];
  }
  return p;
}

namespace {

// Centred cell differences; zero on the outer ring.
std::pair<CellField, CellField> central_grad(const Grid& g, const CellField& s) {
  CellField gx(g), gy(g);
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      gx(i, j) = (s(i + 1, j) - s(i - 1, j)) / (2.0 * g.dx);
      gy(i, j) = (s(i, j + 1) - s(i, j - 1)) / (2.0 * g.dy);
    }
  }
  return {gx, gy};
}

}  // namespace

TheoremResidual theorem_residual(const PengRobinson& eos, const Grid& g, const CellField& n,
                                 const CellField& T) {
  CellField c(g), gamma(g), mu(g);
  const CellField gsq = grad_sq_cell(g, n);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const ThermoPoint p{n(i, j), T(i, j)};
      const InfluenceParam ip = eos.influence_param(p.T);
      c(i, j) = ip.c;
      gamma(i, j) = eos.gamma_s_bulk(p).gamma_b + 0.5 * ip.dc * gsq(i, j);
      mu(i, j) = eos.mu_bulk(p).mu_b;
    }
  }
  mu.vec() -= diffusion_matrix(g, c) * n.vec();
  const CellField p = pressure_field(eos, g, n, T);

  const auto [mux, muy] = central_grad(g, mu);
  const auto [tx, ty] = central_grad(g, T);
  const auto [px, py] = central_grad(g, p);
  const auto [nx_, ny_] = central_grad(g, n);
  CellField txx(g), txy(g), tyy(g);
  for (std::size_t q = 0; q < txx.size(); ++q) {
    const double a = nx_.values()[q];
    const double b = ny_.values()[q];
    txx.values()[q] = c.values()[q] * a * a;
    txy.values()[q] = c.values()[q] * a * b;
    tyy.values()[q] = c.values()[q] * b * b;
  }
  const auto [dxx, unused0] = central_grad(g, txx);
  const auto [dxy_x, dxy_y] = central_grad(g, txy);
  const auto [unused1, dyy] = central_grad(g, tyy);

  TheoremResidual r{CellField(g), CellField(g), 0.0};
  for (int j = 2; j < g.ny - 2; ++j) {
    for (int i = 2; i < g.nx - 2; ++i) {
      r.rx(i, j) = n(i, j) * mux(i, j) - gamma(i, j) * tx(i, j) - px(i, j) - dxx(i, j) -
                   dxy_y(i, j);
      r.ry(i, j) = n(i, j) * muy(i, j) - gamma(i, j) * ty(i, j) - py(i, j) - dxy_x(i, j) -
                   dyy(i, j);
      r.max_abs = std::max({r.max_abs, std::abs(r.rx(i, j)), std::abs(r.ry(i, j))});
    }
  }
  return r;
}

double contour_length(const Grid& g, const CellField& n, double thr) {
  double total = 0.0;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      // corners counter-clockwise from lower-left; edge e joins corner e and e+1
      const std::array<double, 4> v = {n(i, j), n(i + 1, j), n(i + 1, j + 1), n(i, j + 1)};
      const std::array<double, 4> cx = {0.0, g.dx, g.dx, 0.0};
      const std::array<double, 4> cy = {0.0, 0.0, g.dy, g.dy};
      std::array<bool, 4> in{};
      int inside = 0;
      for (int k = 0; k < 4; ++k) {
        in[k] = v[k] > thr;
        inside += in[k] ? 1 : 0;
      }
      if (inside == 0 || inside == 4) continue;
      std::array<double, 4> px{}, py{};
      for (int e = 0; e < 4; ++e) {
        const int a = e;
        const int b = (e + 1) % 4;
        if (in[a] != in[b]) {
          const double t = (thr - v[a]) / (v[b] - v[a]);
          px[e] = cx[a] + t * (cx[b] - cx[a]);
          py[e] = cy[a] + t * (cy[b] - cy[a]);
        }
      }
      auto seg = [&](int e1, int e2) { return std::hypot(px[e1] - px[e2], py[e1] - py[e2]); };
      // corner k sits between edges k-1 and k
      auto cut = [&](int k) { return seg((k + 3) % 4, k); };
      if (inside == 1 || inside == 3) {
        for (int k = 0; k < 4; ++k) {
          if (in[k] == (inside == 1)) total += cut(k);
        }
      } else if (in[0] == in[2]) {
        // saddle: the centre value decides which diagonal is connected
        const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) > thr;
        for (int k = 0; k < 4; ++k) {
          if (in[k] != centre_in) total += cut(k);
        }
      } else {
        // two adjacent corners inside: the crossings sit on opposite edges
        total += in[0] != in[1] ? seg(0, 2) : seg(1, 3);
      }
    }
  }
  return total;
}

ShapeMetrics shape_metrics(const Grid& g, const CellField& n, double n_gas, double n_liquid,
                           Phase phase) {
  const double thr = 0.5 * (n_gas + n_liquid);
  ShapeMetrics m;
  long cells = 0;
  double wsum = 0.0, wx = 0.0, wy = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const bool liquid = n(i, j) > thr;
      if (liquid != (phase == Phase::droplet)) continue;
      ++cells;
      double phi = std::clamp((n(i, j) - n_gas) / (n_liquid - n_gas), 0.0, 1.0);
      if (phase == Phase::bubble) phi = 1.0 - phi;
      wsum += phi;
      wx += phi * g.xc(i);
      wy += phi * g.yc(j);
    }
  }
  if (cells == 0 || wsum == 0.0) throw EmptyPhaseError("phase region is empty");
  m.area = static_cast<double>(cells) * g.cell_volume();
  m.perimeter = contour_length(g, n, thr);
  if (m.perimeter > 0.0) {
    m.circularity = 4.0 * std::numbers::pi * m.area / (m.perimeter * m.perimeter);
  }
  m.centroid_x = wx / wsum;
  m.centroid_y = wy / wsum;
  return m;
}

}  // namespace thermoflow
