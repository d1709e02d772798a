#include "thermoflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thermoflow {

namespace {

double rel_change(const Vector& now, const Vector& before, double floor) {
  const double scale = std::max(now.norm(), floor);
  if (scale == 0.0) return 0.0;
  return (now - before).norm() / scale;
}

Vector face_vector(const FaceField& f) {
  Vector v(static_cast<Eigen::Index>(f.x.size() + f.y.size()));
  std::copy(f.x.values().begin(), f.x.values().end(), v.data());
  std::copy(f.y.values().begin(), f.y.values().end(), v.data() + f.x.size());
  return v;
}

SparseMatrix diagonal(const Vector& d) {
  SparseMatrix m(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index k = 0; k < d.size(); ++k) t.emplace_back(k, k, d[k]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

void validate(const SchemeConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("scheme.dt must be positive");
  if (!(cfg.outer_tol > 0.0)) throw std::invalid_argument("scheme.outer_tol must be positive");
  if (cfg.max_outer_iters < 1) throw std::invalid_argument("scheme.max_outer_iters must be >= 1");
  if (!(cfg.linear_tol > 0.0)) throw std::invalid_argument("scheme.linear_tol must be positive");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("scheme.eta must be positive");
  if (!(cfg.xi > 2.0 / 3.0 * cfg.eta)) {
    throw std::invalid_argument("scheme.xi must exceed 2/3 scheme.eta");
  }
  if (!(cfg.heat_coeff > 0.0)) throw std::invalid_argument("scheme.heat_coeff must be positive");
  if (cfg.max_rejections < 0) throw std::invalid_argument("scheme.max_rejections must be >= 0");
}

void refresh_caches(const PengRobinson& eos, const Grid& g, SimState& st) {
  const double mw = eos.substance().molar_weight;
  st.rho = CellField(g);
  st.s = CellField(g);
  st.gamma = CellField(g);
  st.theta = CellField(g);
  CellField c(g);
  const CellField gsq = grad_sq_cell(g, st.n);
  CellField mu_b(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const ThermoPoint p{st.n(i, j), st.T(i, j)};
      const InfluenceParam ip = eos.influence_param(p.T);
      const GradientContributions gc = grad_contributions(ip, gsq(i, j), p.T);
      st.rho(i, j) = mw * p.n;
      st.s(i, j) = eos.gamma_s_bulk(p).s_b - gc.gamma_grad;
      st.gamma(i, j) = -st.s(i, j);
      st.theta(i, j) = eos.internal_energy_bulk(p) + gc.theta_grad;
      mu_b(i, j) = eos.mu_bulk(p).mu_b;
      c(i, j) = ip.c;
    }
  }
  st.mu = CellField(g);
  st.mu.vec() = mu_b.vec() - diffusion_matrix(g, c) * st.n.vec();
}

SimState make_state(const PengRobinson& eos, const Grid& g, CellField n, CellField T) {
  SimState st;
  st.n = std::move(n);
  st.T = std::move(T);
  st.u = FaceField(g);
  refresh_caches(eos, g, st);
  st.theta_scheme = st.theta;
  return st;
}

Integrator::Integrator(const PengRobinson& eos, Grid grid, BoundarySpec bc, SchemeConfig cfg,
                       ConductivityFn conductivity)
    : eos_(eos),
      grid_(grid),
      bc_(bc),
      cfg_(cfg),
      conductivity_(std::move(conductivity)),
      density_solver_(cfg.linear_method, cfg.linear_tol),
      momentum_solver_(cfg.linear_method, cfg.linear_tol),
      energy_solver_(cfg.linear_method, cfg.linear_tol),
      eta_(grid, cfg.eta),
      lambda_(grid, cfg.lambda()),
      viscous_(viscous_matrix(grid, eta_, lambda_)) {
  validate(cfg_);
  if (!conductivity_) {
    const double theta = cfg_.heat_coeff;
    conductivity_ = [theta](double, double) { return theta; };
  }
}

CellField Integrator::conductivity(const SimState& st) const {
  CellField k(grid_);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) k(i, j) = conductivity_(st.n(i, j), st.T(i, j));
  return k;
}

CellField Integrator::mu_linearized(const SimState& st, const CellField& n_new,
                                    const CellField& n_prev, const CellField& T_prev) const {
  const Grid& g = grid_;
  CellField mu(g);
  CellField c(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double T = T_prev(i, j);
      const BulkChemicalPotential lin = eos_.mu_bulk({n_prev(i, j), T});
      const double concave = eos_.mu_bulk({st.n(i, j), T}).mu_concave;
      mu(i, j) = lin.mu_convex + lin.dmu_convex_dn * (n_new(i, j) - n_prev(i, j)) + concave;
      c(i, j) = eos_.influence_param(T).c;
    }
  }
  mu.vec() -= diffusion_matrix(g, c) * n_new.vec();
  return mu;
}

FaceCoefficients Integrator::face_coefficients(const SimState& st, const FaceField& u_dir) const {
  FaceCoefficients fc;
  fc.rho_face = face_average(grid_, st.rho);
  fc.s_face = face_average(grid_, st.s);
  fc.n_face = cfg_.convection == ConvectionMode::upwind ? upwind_face_values(grid_, st.n, u_dir)
                                                          : face_average(grid_, st.n);
  return fc;
}

std::pair<CellField, CellField> Integrator::density_chemical_solve(const SimState& st,
                                                                   const FaceCoefficients& fc,
                                                                   const CellField& n_prev,
                                                                   const CellField& T_prev) {
  const Grid& g = grid_;
  const int N = g.cells();
  const double dt = dt_;

  // Mass row (scaled by dt): n - dt^2 div(K grad mu) = n^k - dt div(n_f u^k - dt n_f s_f/rho_f grad T)
  const FaceField k_face = fc.n_face * fc.n_face;
  FaceField mobility = k_face;
  FaceField thermal = fc.n_face * fc.s_face;
  for (std::size_t q = 0; q < mobility.x.size(); ++q) {
    mobility.x.values()[q] /= fc.rho_face.x.values()[q];
    thermal.x.values()[q] /= fc.rho_face.x.values()[q];
  }
  for (std::size_t q = 0; q < mobility.y.size(); ++q) {
    mobility.y.values()[q] /= fc.rho_face.y.values()[q];
    thermal.y.values()[q] /= fc.rho_face.y.values()[q];
  }
  const SparseMatrix dk = diffusion_matrix(g, mobility);
  FaceField pre_flux = fc.n_face * st.u - dt * (thermal * grad_cell_to_face(g, T_prev));
  zero_boundary_faces(g, pre_flux);
  const CellField pre_div = div_face_to_cell(g, pre_flux);

  // Chemical-potential row: mu - dmu_convex n + div(c grad n) = mu_convex - dmu_convex n^l + mu_concave(n^k)
  CellField c(g);
  Vector dmu(N);
  Vector rhs(2 * N);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int q = g.cell(i, j);
      const double T = T_prev(i, j);
      const BulkChemicalPotential lin = eos_.mu_bulk({n_prev(i, j), T});
      const double concave = eos_.mu_bulk({st.n(i, j), T}).mu_concave;
      c(i, j) = eos_.influence_param(T).c;
      dmu[q] = lin.dmu_convex_dn;
      rhs[q] = st.n(i, j) - dt * pre_div(i, j);
      rhs[N + q] = lin.mu_convex - lin.dmu_convex_dn * n_prev(i, j) + concave;
    }
  }
  const SparseMatrix dc = diffusion_matrix(g, c);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * dk.nonZeros() + 2 * dc.nonZeros() + 4 * N));
  for (int q = 0; q < N; ++q) {
    t.emplace_back(q, q, 1.0);
    t.emplace_back(N + q, N + q, 1.0);
    t.emplace_back(N + q, q, -dmu[q]);
  }
  for (int k = 0; k < dk.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(dk, k); it; ++it) {
      t.emplace_back(it.row(), N + it.col(), -dt * dt * it.value());
    }
  }
  for (int k = 0; k < dc.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(dc, k); it; ++it) {
      t.emplace_back(N + it.row(), it.col(), it.value());
    }
  }
  SparseMatrix a(2 * N, 2 * N);
  a.setFromTriplets(t.begin(), t.end());

  Vector x(2 * N);
  x.head(N) = n_prev.vec();
  x.tail(N) = st.mu.vec();
  density_solver_.solve(a, rhs, x);

  CellField n_new(g);
  CellField mu(g);
  n_new.vec() = x.head(N);
  mu.vec() = x.tail(N);
  return {n_new, mu};
}

FaceField Integrator::compute_u_star(const SimState& st, const FaceCoefficients& fc,
                                     const CellField& mu_new, const CellField& T_used) const {
  const Grid& g = grid_;
  const FaceField force =
      fc.n_face * grad_cell_to_face(g, mu_new) + fc.s_face * grad_cell_to_face(g, T_used);
  FaceField u_star = st.u;
  for (std::size_t q = 0; q < u_star.x.size(); ++q) {
    u_star.x.values()[q] -= dt_ / fc.rho_face.x.values()[q] * force.x.values()[q];
  }
  for (std::size_t q = 0; q < u_star.y.size(); ++q) {
    u_star.y.values()[q] -= dt_ / fc.rho_face.y.values()[q] * force.y.values()[q];
  }
  zero_boundary_faces(g, u_star);
  return u_star;
}

FaceField Integrator::momentum_solve(const SimState& st, const FaceCoefficients& fc,
                                     const FaceField& u_star, const CellField& mu_new,
                                     const CellField& T_used) {
  const Grid& g = grid_;
  const double mw = eos_.substance().molar_weight;
  FaceField mass_flux = mw * (fc.n_face * u_star);
  zero_boundary_faces(g, mass_flux);
  const SparseMatrix conv = convective_matrix(g, mass_flux, cfg_.convection);

  const Vector rho = pack_velocity(g, fc.rho_face);
  const FaceField force =
      fc.n_face * grad_cell_to_face(g, mu_new) + fc.s_face * grad_cell_to_face(g, T_used);
  const Vector rhs = rho.cwiseProduct(pack_velocity(g, st.u)) / dt_ - pack_velocity(g, force);
  const SparseMatrix a = SparseMatrix(diagonal(rho / dt_) + conv) - viscous_;

  Vector x = pack_velocity(g, u_star);
  momentum_solver_.solve(a, rhs, x);
  return unpack_velocity(g, x);
}

CellField Integrator::energy_solve(const SimState& st, const FaceCoefficients& fc,
                                   const CellField& n_new, const FaceField& u_star,
                                   const FaceField& u_new, const CellField& mu_new,
                                   const CellField& T_prev, const CellField& T_source,
                                   CellField& theta_scheme, StepLedger* ledger) {
  const Grid& g = grid_;
  const int N = g.cells();
  const double dt = dt_;

  const CellField gsq = grad_sq_cell(g, n_new);
  CellField theta_prev(g);  // theta(n^{l+1}, T^l)
  CellField cv(g);
  CellField c(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const ThermoPoint p{n_new(i, j), T_prev(i, j)};
      const InfluenceParam ip = eos_.influence_param(p.T);
      theta_prev(i, j) =
          eos_.internal_energy_bulk(p) + grad_contributions(ip, gsq(i, j), p.T).theta_grad;
      cv(i, j) = eos_.volumetric_heat_capacity(p, gsq(i, j));
      c(i, j) = ip.c;
    }
  }

  const CellField theta_coeff = conductivity(st);
  const AffineOperator diff = diffusion_operator(g, theta_coeff, bc_);

  // D = div(n^k u*) and the composite flux D_f c_f grad n^{l+1}
  FaceField mass_flux = fc.n_face * u_star;
  zero_boundary_faces(g, mass_flux);
  const CellField d = div_face_to_cell(g, mass_flux);
  FaceField composite = face_average(g, d) * face_average(g, c) * grad_cell_to_face(g, n_new);
  zero_boundary_faces(g, composite);
  const CellField composite_div = div_face_to_cell(g, composite);

  CellField sT(g);
  sT.vec() = st.s.vec().cwiseProduct(T_prev.vec());
  const CellField advection = upwind_div(g, sT, u_star);

  const CellField work =
      face_to_cell_split(g, u_star * fc.s_face * grad_cell_to_face(g, T_source));
  const CellField dissipation = viscous_dissipation(g, eta_, lambda_, u_new);
  const FaceField du1 = u_new - u_star;
  const FaceField du2 = u_star - st.u;
  FaceField kinetic = (0.5 / dt) * (fc.rho_face * (du1 * du1 + du2 * du2));
  zero_boundary_faces(g, kinetic);
  const CellField kinetic_cells = face_to_cell_split(g, kinetic);

  Vector rhs(N);
  for (int q = 0; q < N; ++q) {
    const double linear_part = theta_prev.values()[q] - cv.values()[q] * T_prev.values()[q];
    rhs[q] = (st.theta_scheme.values()[q] - linear_part) / dt - advection.values()[q] -
             composite_div.values()[q] - mu_new.values()[q] * d.values()[q] +
             work.values()[q] + dissipation.values()[q] + kinetic_cells.values()[q] +
             diff.offset[q];
  }
  const SparseMatrix a = diagonal(cv.vec() / dt) - diff.matrix;
  Vector x = T_prev.vec();
  energy_solver_.solve(a, rhs, x);

  CellField T_new(g);
  T_new.vec() = x;
  theta_scheme = CellField(g);
  theta_scheme.vec() = theta_prev.vec() + cv.vec().cwiseProduct(T_new.vec() - T_prev.vec());

  if (ledger != nullptr) {
    ledger->boundary_heat_rate = boundary_heat_flux(g, T_new, theta_coeff, bc_);
    CellField inv_T(g);
    inv_T.vec() = T_new.vec().cwiseInverse();
    ledger->boundary_entropy_rate = boundary_heat_flux(g, T_new, theta_coeff, bc_, inv_T);
    ledger->kinetic_loss = dt * domain_integral(g, kinetic_cells);
    ledger->viscous_dissipation = domain_integral(g, dissipation);
  }
  return T_new;
}

SimState Integrator::outer_iterate(const SimState& st, double dt, IterationReport& report,
                                   StepLedger& ledger) {
  const Grid& g = grid_;
  dt_ = dt;
  report = IterationReport{};
  report.dt_used = dt;

  CellField n_l = st.n;
  CellField T_l = st.T;
  FaceField u_l = st.u;
  FaceField u_dir = st.u;
  CellField theta_scheme;
  const double u_floor = cfg_.velocity_floor * std::sqrt(static_cast<double>(g.velocity_unknowns()));

  try {
    for (int l = 0; l < cfg_.max_outer_iters; ++l) {
      const FaceCoefficients fc = face_coefficients(st, u_dir);
      auto [n_solved, mu] = density_chemical_solve(st, fc, n_l, T_l);
      (void)n_solved;
      const CellField& T_used = cfg_.lagged_momentum_temperature ? st.T : T_l;
      const FaceField u_star = compute_u_star(st, fc, mu, T_used);

      // n^{l+1} from the flux itself, so mass balance holds to roundoff.
      FaceField flux = fc.n_face * u_star;
      zero_boundary_faces(g, flux);
      CellField n_new(g);
      n_new.vec() = st.n.vec() - dt * div_face_to_cell(g, flux).vec();
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) eos_.check_point({n_new(i, j), T_l(i, j)});

      const FaceField u_new = momentum_solve(st, fc, u_star, mu, T_used);
      CellField T_new = energy_solve(st, fc, n_new, u_star, u_new, mu, T_l, T_used,
                                     theta_scheme, &ledger);
      if (!T_new.all_finite() ||
          *std::min_element(T_new.values().begin(), T_new.values().end()) <= 0.0) {
        throw StepRejected("nonpositive temperature after energy solve");
      }

      const double dn = rel_change(n_new.vec(), n_l.vec(), 0.0);
      const double du = rel_change(face_vector(u_new), face_vector(u_l), u_floor);
      const double dT = rel_change(T_new.vec(), T_l.vec(), 0.0);
      if (!report.change_n.empty()) {
        const double prev = std::max({report.change_n.back(), report.change_u.back(),
                                      report.change_T.back()});
        if (std::max({dn, du, dT}) > prev) report.nonmonotone = true;
      }
      report.change_n.push_back(dn);
      report.change_u.push_back(du);
      report.change_T.push_back(dT);
      report.outer_iters = l + 1;

      n_l = std::move(n_new);
      T_l = std::move(T_new);
      u_l = u_new;
      u_dir = u_star;
      if (std::max({dn, du, dT}) <= cfg_.outer_tol) {
        report.converged = true;
        break;
      }
    }
  } catch (const DomainError& e) {
    throw StepRejected(std::string("thermodynamic domain violation: ") + e.what());
  } catch (const LinearSolveError& e) {
    throw StepRejected(e.what());
  }

  SimState next;
  next.n = std::move(n_l);
  next.T = std::move(T_l);
  next.u = std::move(u_l);
  next.time = st.time + dt;
  next.step_index = st.step_index + 1;
  try {
    refresh_caches(eos_, g, next);
  } catch (const DomainError& e) {
    throw StepRejected(std::string("thermodynamic domain violation: ") + e.what());
  }
  next.theta_scheme = std::move(theta_scheme);
  return next;
}

SimState Integrator::step(const SimState& st, IterationReport& report, StepLedger& ledger) {
  double dt = cfg_.dt;
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_rejections; ++attempt) {
    try {
      SimState next = outer_iterate(st, dt, report, ledger);
      report.rejections = attempt;
      return next;
    } catch (const StepRejected& e) {
      last_error = e.what();
      dt *= 0.5;
    }
  }
  std::ostringstream os;
  os << "step " << st.step_index + 1 << " rejected " << cfg_.max_rejections + 1
     << " times; last error: " << last_error;
  throw SolverAbort(os.str());
}

}  // namespace thermoflow
