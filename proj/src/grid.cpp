#include "thermoflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermoflow {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

FaceField combine(const FaceField& a, const FaceField& b, double sa, double sb, bool multiply) {
  FaceField r = a;
  auto apply = [&](std::vector<double>& out, const std::vector<double>& lhs,
                   const std::vector<double>& rhs) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = multiply ? lhs[k] * rhs[k] : sa * lhs[k] + sb * rhs[k];
    }
  };
  apply(r.x.values(), a.x.values(), b.x.values());
  apply(r.y.values(), a.y.values(), b.y.values());
  return r;
}

// Strain-type operators from velocity unknowns. Rows index cells or corners.
struct StrainOperators {
  SparseMatrix ux;      // du/dx at cells
  SparseMatrix vy;      // dv/dy at cells
  SparseMatrix shear;   // du/dy + dv/dx at corners (ghost reflection at walls)
};

int corner_index(const Grid& g, int i, int j) { return j * (g.nx + 1) + i; }

StrainOperators strain_operators(const Grid& g) {
  const int nu = g.velocity_unknowns();
  Triplets tx, ty, te;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      if (i + 1 <= g.nx - 1) tx.emplace_back(c, g.ux_index(i + 1, j), 1.0 / g.dx);
      if (i >= 1) tx.emplace_back(c, g.ux_index(i, j), -1.0 / g.dx);
      if (j + 1 <= g.ny - 1) ty.emplace_back(c, g.uy_index(i, j + 1), 1.0 / g.dy);
      if (j >= 1) ty.emplace_back(c, g.uy_index(i, j), -1.0 / g.dy);
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int k = corner_index(g, i, j);
      // du/dy from x-faces (i, j-1) and (i, j)
      if (i >= 1 && i <= g.nx - 1) {
        if (j == 0) {
          te.emplace_back(k, g.ux_index(i, 0), 2.0 / g.dy);
        } else if (j == g.ny) {
          te.emplace_back(k, g.ux_index(i, g.ny - 1), -2.0 / g.dy);
        } else {
          te.emplace_back(k, g.ux_index(i, j), 1.0 / g.dy);
          te.emplace_back(k, g.ux_index(i, j - 1), -1.0 / g.dy);
        }
      }
      // dv/dx from y-faces (i-1, j) and (i, j)
      if (j >= 1 && j <= g.ny - 1) {
        if (i == 0) {
          te.emplace_back(k, g.uy_index(0, j), 2.0 / g.dx);
        } else if (i == g.nx) {
          te.emplace_back(k, g.uy_index(g.nx - 1, j), -2.0 / g.dx);
        } else {
          te.emplace_back(k, g.uy_index(i, j), 1.0 / g.dx);
          te.emplace_back(k, g.uy_index(i - 1, j), -1.0 / g.dx);
        }
      }
    }
  }
  StrainOperators ops;
  ops.ux.resize(g.cells(), nu);
  ops.vy.resize(g.cells(), nu);
  ops.shear.resize((g.nx + 1) * (g.ny + 1), nu);
  ops.ux.setFromTriplets(tx.begin(), tx.end());
  ops.vy.setFromTriplets(ty.begin(), ty.end());
  ops.shear.setFromTriplets(te.begin(), te.end());
  return ops;
}

// Corner viscosity (mean of adjacent cells) and the number of adjacent cells.
void corner_viscosity(const Grid& g, const CellField& eta, std::vector<double>& eta_k,
                      std::vector<int>& count_k) {
  eta_k.assign(static_cast<std::size_t>((g.nx + 1) * (g.ny + 1)), 0.0);
  count_k.assign(eta_k.size(), 0);
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      double sum = 0.0;
      int count = 0;
      for (int dj = -1; dj <= 0; ++dj) {
        for (int di = -1; di <= 0; ++di) {
          const int ci = i + di;
          const int cj = j + dj;
          if (ci >= 0 && ci < g.nx && cj >= 0 && cj < g.ny) {
            sum += eta(ci, cj);
            ++count;
          }
        }
      }
      const int k = corner_index(g, i, j);
      eta_k[k] = sum / count;
      count_k[k] = count;
    }
  }
}

}  // namespace

Grid Grid::make(int nx, int ny, double lx, double ly, double x0, double y0) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs nx, ny >= 3");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("grid extents must be positive");
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.x0 = x0;
  g.y0 = y0;
  g.dx = lx / nx;
  g.dy = ly / ny;
  return g;
}

Grid Grid::centered(int nx, int ny, double lx, double ly) {
  return make(nx, ny, lx, ly, -0.5 * lx, -0.5 * ly);
}

bool Lattice::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

FaceField operator*(const FaceField& a, const FaceField& b) { return combine(a, b, 0, 0, true); }
FaceField operator+(const FaceField& a, const FaceField& b) { return combine(a, b, 1, 1, false); }
FaceField operator-(const FaceField& a, const FaceField& b) { return combine(a, b, 1, -1, false); }
FaceField operator*(double s, const FaceField& a) { return combine(a, a, s, 0, false); }

bool BoundarySpec::all_adiabatic() const {
  return std::all_of(temperature.begin(), temperature.end(), [](const EdgeCondition& c) {
    return c.kind == EdgeCondition::Kind::neumann && c.value == 0.0;
  });
}

Vector pack_velocity(const Grid& g, const FaceField& u) {
  Vector v(g.velocity_unknowns());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) v[g.ux_index(i, j)] = u.x(i, j);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v[g.uy_index(i, j)] = u.y(i, j);
  return v;
}

FaceField unpack_velocity(const Grid& g, const Vector& v) {
  FaceField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) u.x(i, j) = v[g.ux_index(i, j)];
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.y(i, j) = v[g.uy_index(i, j)];
  return u;
}

void zero_boundary_faces(const Grid& g, FaceField& f) {
  for (int j = 0; j < g.ny; ++j) {
    f.x(0, j) = 0.0;
    f.x(g.nx, j) = 0.0;
  }
  for (int i = 0; i < g.nx; ++i) {
    f.y(i, 0) = 0.0;
    f.y(i, g.ny) = 0.0;
  }
}

FaceField grad_cell_to_face(const Grid& g, const CellField& s) {
  FaceField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) f.x(i, j) = (s(i, j) - s(i - 1, j)) / g.dx;
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.y(i, j) = (s(i, j) - s(i, j - 1)) / g.dy;
  return f;
}

FaceField grad_cell_to_face(const Grid& g, const CellField& s, const BoundarySpec& bc) {
  FaceField f = grad_cell_to_face(g, s);
  using Kind = EdgeCondition::Kind;
  const auto& l = bc.at(Edge::left);
  const auto& r = bc.at(Edge::right);
  const auto& b = bc.at(Edge::bottom);
  const auto& t = bc.at(Edge::top);
  for (int j = 0; j < g.ny; ++j) {
    if (l.kind == Kind::dirichlet) f.x(0, j) = (s(0, j) - l.value) / (0.5 * g.dx);
    if (r.kind == Kind::dirichlet) f.x(g.nx, j) = (r.value - s(g.nx - 1, j)) / (0.5 * g.dx);
  }
  for (int i = 0; i < g.nx; ++i) {
    if (b.kind == Kind::dirichlet) f.y(i, 0) = (s(i, 0) - b.value) / (0.5 * g.dy);
    if (t.kind == Kind::dirichlet) f.y(i, g.ny) = (t.value - s(i, g.ny - 1)) / (0.5 * g.dy);
  }
  return f;
}

CellField div_face_to_cell(const Grid& g, const FaceField& f) {
  CellField d(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      d(i, j) = (f.x(i + 1, j) - f.x(i, j)) / g.dx + (f.y(i, j + 1) - f.y(i, j)) / g.dy;
    }
  }
  return d;
}

FaceField face_average(const Grid& g, const CellField& s) {
  FaceField f(g);
  for (int j = 0; j < g.ny; ++j) {
    f.x(0, j) = s(0, j);
    f.x(g.nx, j) = s(g.nx - 1, j);
    for (int i = 1; i < g.nx; ++i) f.x(i, j) = 0.5 * (s(i - 1, j) + s(i, j));
  }
  for (int i = 0; i < g.nx; ++i) {
    f.y(i, 0) = s(i, 0);
    f.y(i, g.ny) = s(i, g.ny - 1);
    for (int j = 1; j < g.ny; ++j) f.y(i, j) = 0.5 * (s(i, j - 1) + s(i, j));
  }
  return f;
}

FaceField upwind_face_values(const Grid& g, const CellField& s, const FaceField& vel) {
  FaceField f = face_average(g, s);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      if (vel.x(i, j) > 0.0) {
        f.x(i, j) = s(i - 1, j);
      } else if (vel.x(i, j) < 0.0) {
        f.x(i, j) = s(i, j);
      }
    }
  }
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (vel.y(i, j) > 0.0) {
        f.y(i, j) = s(i, j - 1);
      } else if (vel.y(i, j) < 0.0) {
        f.y(i, j) = s(i, j);
      }
    }
  }
  return f;
}

CellField upwind_div(const Grid& g, const CellField& scalar, const FaceField& vel) {
  return div_face_to_cell(g, upwind_face_values(g, scalar, vel) * vel);
}

SparseMatrix diffusion_matrix(const Grid& g, const FaceField& coeff) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(5 * g.cells()));
  const double ax = 1.0 / (g.dx * g.dx);
  const double ay = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      double diag = 0.0;
      auto link = [&](int ni, int nj, double w) {
        t.emplace_back(c, g.cell(ni, nj), w);
        diag -= w;
      };
      if (i > 0) link(i - 1, j, coeff.x(i, j) * ax);
      if (i < g.nx - 1) link(i + 1, j, coeff.x(i + 1, j) * ax);
      if (j > 0) link(i, j - 1, coeff.y(i, j) * ay);
      if (j < g.ny - 1) link(i, j + 1, coeff.y(i, j + 1) * ay);
      t.emplace_back(c, c, diag);
    }
  }
  SparseMatrix m(g.cells(), g.cells());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix diffusion_matrix(const Grid& g, const CellField& coeff) {
  return diffusion_matrix(g, face_average(g, coeff));
}

AffineOperator diffusion_operator(const Grid& g, const CellField& coeff, const BoundarySpec& bc) {
  AffineOperator op{diffusion_matrix(g, coeff), Vector::Zero(g.cells())};
  using Kind = EdgeCondition::Kind;
  auto wall = [&](int i, int j, const EdgeCondition& ec, double h) {
    const int c = g.cell(i, j);
    if (ec.kind == Kind::dirichlet) {
      const double w = coeff(i, j) / (0.5 * h * h);
      op.matrix.coeffRef(c, c) -= w;
      op.offset[c] += w * ec.value;
    } else {
      op.offset[c] -= ec.value / h;
    }
  };
  for (int j = 0; j < g.ny; ++j) {
    wall(0, j, bc.at(Edge::left), g.dx);
    wall(g.nx - 1, j, bc.at(Edge::right), g.dx);
  }
  for (int i = 0; i < g.nx; ++i) {
    wall(i, 0, bc.at(Edge::bottom), g.dy);
    wall(i, g.ny - 1, bc.at(Edge::top), g.dy);
  }
  return op;
}

CellField varcoef_diffusion(const Grid& g, const CellField& coeff, const CellField& s) {
  CellField out(g);
  out.vec() = diffusion_matrix(g, coeff) * s.vec();
  return out;
}

CellField varcoef_diffusion(const Grid& g, const CellField& coeff, const CellField& s,
                            const BoundarySpec& bc) {
  const AffineOperator op = diffusion_operator(g, coeff, bc);
  CellField out(g);
  out.vec() = op.matrix * s.vec() + op.offset;
  return out;
}

SparseMatrix viscous_matrix(const Grid& g, const CellField& eta, const CellField& lambda) {
  const StrainOperators ops = strain_operators(g);
  std::vector<double> eta_k;
  std::vector<int> count_k;
  corner_viscosity(g, eta, eta_k, count_k);

  Vector w_normal = 2.0 * eta.vec();
  Vector w_bulk = lambda.vec();
  Vector w_shear(static_cast<Eigen::Index>(eta_k.size()));
  for (std::size_t k = 0; k < eta_k.size(); ++k) w_shear[k] = eta_k[k] * count_k[k] / 4.0;

  const SparseMatrix div = ops.ux + ops.vy;
  SparseMatrix a = SparseMatrix(ops.ux.transpose() * w_normal.asDiagonal() * ops.ux) +
                   SparseMatrix(ops.vy.transpose() * w_normal.asDiagonal() * ops.vy) +
                   SparseMatrix(div.transpose() * w_bulk.asDiagonal() * div) +
                   SparseMatrix(ops.shear.transpose() * w_shear.asDiagonal() * ops.shear);
  return -a;
}

FaceField viscous_operator(const Grid& g, const CellField& eta, const CellField& lambda,
                           const FaceField& u) {
  return unpack_velocity(g, viscous_matrix(g, eta, lambda) * pack_velocity(g, u));
}

CellField viscous_dissipation(const Grid& g, const CellField& eta, const CellField& lambda,
                              const FaceField& u) {
  const StrainOperators ops = strain_operators(g);
  const Vector v = pack_velocity(g, u);
  const Vector ux = ops.ux * v;
  const Vector vy = ops.vy * v;
  const Vector e = ops.shear * v;
  std::vector<double> eta_k;
  std::vector<int> count_k;
  corner_viscosity(g, eta, eta_k, count_k);

  CellField d(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      const double dv = ux[c] + vy[c];
      double sum = 2.0 * eta(i, j) * (ux[c] * ux[c] + vy[c] * vy[c]) + lambda(i, j) * dv * dv;
      for (int dj = 0; dj <= 1; ++dj) {
        for (int di = 0; di <= 1; ++di) {
          const int k = corner_index(g, i + di, j + dj);
          sum += 0.25 * eta_k[k] * e[k] * e[k];
        }
      }
      d(i, j) = sum;
    }
  }
  return d;
}

SparseMatrix convective_matrix(const Grid& g, const FaceField& F, ConvectionMode mode) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(5 * g.velocity_unknowns()));
  const double vol = g.cell_volume();
  // One momentum control-volume face with outward mass flow G (kg/s per unit
  // depth); nb < 0 marks a wall-face neighbour (u = 0) or a ghost across a wall.
  auto face = [&](int row, int nb, double G) {
    if (mode == ConvectionMode::skew) {
      t.emplace_back(row, row, -G / (2.0 * vol));
      if (nb >= 0) t.emplace_back(row, nb, G / (2.0 * vol));
    } else {
      const double inflow = std::max(-G, 0.0);
      t.emplace_back(row, row, inflow / vol);
      if (nb >= 0) t.emplace_back(row, nb, -inflow / vol);
    }
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      const int row = g.ux_index(i, j);
      const double ge = 0.5 * (F.x(i, j) + F.x(i + 1, j)) * g.dy;
      const double gw = -0.5 * (F.x(i - 1, j) + F.x(i, j)) * g.dy;
      const double gn = 0.5 * (F.y(i - 1, j + 1) + F.y(i, j + 1)) * g.dx;
      const double gs = -0.5 * (F.y(i - 1, j) + F.y(i, j)) * g.dx;
      face(row, i + 1 < g.nx ? g.ux_index(i + 1, j) : -1, ge);
      face(row, i - 1 > 0 ? g.ux_index(i - 1, j) : -1, gw);
      face(row, j + 1 < g.ny ? g.ux_index(i, j + 1) : -1, gn);
      face(row, j > 0 ? g.ux_index(i, j - 1) : -1, gs);
    }
  }
  for (int j = 1; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int row = g.uy_index(i, j);
      const double gn = 0.5 * (F.y(i, j) + F.y(i, j + 1)) * g.dx;
      const double gs = -0.5 * (F.y(i, j - 1) + F.y(i, j)) * g.dx;
      const double ge = 0.5 * (F.x(i + 1, j - 1) + F.x(i + 1, j)) * g.dy;
      const double gw = -0.5 * (F.x(i, j - 1) + F.x(i, j)) * g.dy;
      face(row, j + 1 < g.ny ? g.uy_index(i, j + 1) : -1, gn);
      face(row, j - 1 > 0 ? g.uy_index(i, j - 1) : -1, gs);
      face(row, i + 1 < g.nx ? g.uy_index(i + 1, j) : -1, ge);
      face(row, i > 0 ? g.uy_index(i - 1, j) : -1, gw);
    }
  }
  SparseMatrix m(g.velocity_unknowns(), g.velocity_unknowns());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

FaceField convective_operator(const Grid& g, const FaceField& mass_flux, const FaceField& u,
                              ConvectionMode mode) {
  return unpack_velocity(g, convective_matrix(g, mass_flux, mode) * pack_velocity(g, u));
}

FaceField convective_operator(const Grid& g, const CellField& rho, const FaceField& u_star,
                              const FaceField& u, ConvectionMode mode) {
  FaceField flux = face_average(g, rho) * u_star;
  zero_boundary_faces(g, flux);
  return convective_operator(g, flux, u, mode);
}

double domain_integral(const Grid& g, const CellField& s) {
  CompensatedSum sum;
  for (double v : s.values()) sum.add(v);
  return sum.value() * g.cell_volume();
}

double face_inner(const Grid& g, const FaceField& a, const FaceField& b) {
  CompensatedSum sum;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double w = (i == 0 || i == g.nx) ? 0.5 : 1.0;
      sum.add(w * a.x(i, j) * b.x(i, j));
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double w = (j == 0 || j == g.ny) ? 0.5 : 1.0;
      sum.add(w * a.y(i, j) * b.y(i, j));
    }
  }
  return sum.value() * g.cell_volume();
}

CellField face_to_cell_split(const Grid& g, const FaceField& w) {
  CellField c(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      c(i, j) = 0.5 * (w.x(i, j) + w.x(i + 1, j)) + 0.5 * (w.y(i, j) + w.y(i, j + 1));
    }
  }
  return c;
}

CellField grad_sq_cell(const Grid& g, const CellField& s) {
  const FaceField grad = grad_cell_to_face(g, s);
  return face_to_cell_split(g, grad * grad);
}

std::pair<CellField, CellField> velocity_at_cells(const Grid& g, const FaceField& u) {
  CellField ux(g), uy(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      ux(i, j) = 0.5 * (u.x(i, j) + u.x(i + 1, j));
      uy(i, j) = 0.5 * (u.y(i, j) + u.y(i, j + 1));
    }
  }
  return {ux, uy};
}

double boundary_heat_flux(const Grid& g, const CellField& T, const CellField& theta_coeff,
                          const BoundarySpec& bc) {
  return boundary_heat_flux(g, T, theta_coeff, bc, CellField(g, 1.0));
}

double boundary_heat_flux(const Grid& g, const CellField& T, const CellField& theta_coeff,
                          const BoundarySpec& bc, const CellField& weight) {
  CompensatedSum sum;
  auto wall = [&](int i, int j, const EdgeCondition& ec, double h, double length) {
    double q = ec.value;
    if (ec.kind == EdgeCondition::Kind::dirichlet) {
      q = -theta_coeff(i, j) * (ec.value - T(i, j)) / (0.5 * h);
    }
    sum.add(q * length * weight(i, j));
  };
  for (int j = 0; j < g.ny; ++j) {
    wall(0, j, bc.at(Edge::left), g.dx, g.dy);
    wall(g.nx - 1, j, bc.at(Edge::right), g.dx, g.dy);
  }
  for (int i = 0; i < g.nx; ++i) {
    wall(i, 0, bc.at(Edge::bottom), g.dy, g.dx);
    wall(i, g.ny - 1, bc.at(Edge::top), g.dy, g.dx);
  }
  return sum.value();
}

}  // namespace thermoflow
