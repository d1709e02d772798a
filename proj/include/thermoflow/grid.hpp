#ifndef THERMOFLOW_GRID_HPP_
#define THERMOFLOW_GRID_HPP_

// Uniform staggered (MAC) mesh and the discrete operators built on it.
//
// Scalars live at cell centres (i, j), 0 <= i < nx, 0 <= j < ny.
// x-velocities live on vertical faces (i, j), 0 <= i <= nx; y-velocities on
// horizontal faces (i, j), 0 <= j <= ny. Face i of a row sits between cells
// i-1 and i. Boundary faces carry no unknowns (no-slip walls).
//
// Operators that enter a linear solve are assembled as sparse matrices, and
// the field-level functions apply those same matrices, so the tested operator
// is the solved one.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Sparse>

namespace thermoflow {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;  // full extents, m
  double ly = 0.0;
  double x0 = 0.0;  // lower-left corner, m
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  static Grid make(int nx, int ny, double lx, double ly, double x0, double y0);
  // Domain (-lx/2, lx/2) x (-ly/2, ly/2).
  static Grid centered(int nx, int ny, double lx, double ly);

  double xc(int i) const { return x0 + (i + 0.5) * dx; }
  double yc(int j) const { return y0 + (j + 0.5) * dy; }
  double cell_volume() const { return dx * dy; }
  int cells() const { return nx * ny; }
  int cell(int i, int j) const { return j * nx + i; }

  // Interior face unknowns: x-faces first (i = 1..nx-1), then y-faces (j = 1..ny-1).
  int x_unknowns() const { return (nx - 1) * ny; }
  int y_unknowns() const { return nx * (ny - 1); }
  int velocity_unknowns() const { return x_unknowns() + y_unknowns(); }
  int ux_index(int i, int j) const { return j * (nx - 1) + (i - 1); }
  int uy_index(int i, int j) const { return x_unknowns() + (j - 1) * nx + i; }
};

/// Dense 2D lattice stored with i fastest.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int ni, int nj, double value = 0.0)
      : ni_(ni), nj_(nj), data_(static_cast<std::size_t>(ni) * nj, value) {}

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * ni_ + i]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * ni_ + i]; }

  int ni() const { return ni_; }
  int nj() const { return nj_; }
  std::size_t size() const { return data_.size(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const;

 private:
  int ni_ = 0;
  int nj_ = 0;
  std::vector<double> data_;
};

class CellField : public Lattice {
 public:
  CellField() = default;
  explicit CellField(const Grid& g, double value = 0.0) : Lattice(g.nx, g.ny, value) {}

  Eigen::Map<Vector> vec() { return {data(), static_cast<Eigen::Index>(size())}; }
  Eigen::Map<const Vector> vec() const { return {data(), static_cast<Eigen::Index>(size())}; }
};

struct FaceField {
  Lattice x;  // (nx+1) x ny
  Lattice y;  // nx x (ny+1)

  FaceField() = default;
  explicit FaceField(const Grid& g, double value = 0.0)
      : x(g.nx + 1, g.ny, value), y(g.nx, g.ny + 1, value) {}

  bool all_finite() const { return x.all_finite() && y.all_finite(); }
};

FaceField operator*(const FaceField& a, const FaceField& b);
FaceField operator+(const FaceField& a, const FaceField& b);
FaceField operator-(const FaceField& a, const FaceField& b);
FaceField operator*(double s, const FaceField& a);

// Interior-face unknown vector <-> FaceField (boundary faces set to zero).
Vector pack_velocity(const Grid& g, const FaceField& u);
FaceField unpack_velocity(const Grid& g, const Vector& v);
void zero_boundary_faces(const Grid& g, FaceField& f);

enum class Edge { left = 0, right = 1, bottom = 2, top = 3 };
inline constexpr std::array<Edge, 4> kEdges = {Edge::left, Edge::right, Edge::bottom, Edge::top};

struct EdgeCondition {
  enum class Kind { neumann, dirichlet };
  Kind kind = Kind::neumann;
  // neumann: outward normal flux q.nu (W/m^2 for temperature); dirichlet: wall value (K).
  double value = 0.0;

  static EdgeCondition neumann(double q) { return {Kind::neumann, q}; }
  static EdgeCondition dirichlet(double v) { return {Kind::dirichlet, v}; }
};

/// Velocity is no-slip and density has zero normal gradient on every edge;
/// only temperature varies per edge.
struct BoundarySpec {
  std::array<EdgeCondition, 4> temperature{};

  static BoundarySpec adiabatic() { return {}; }
  const EdgeCondition& at(Edge e) const { return temperature[static_cast<int>(e)]; }
  EdgeCondition& at(Edge e) { return temperature[static_cast<int>(e)]; }
  bool all_adiabatic() const;
};

enum class ConvectionMode { upwind, skew };

// Two-point gradient on faces; boundary faces get zero (zero normal gradient).
FaceField grad_cell_to_face(const Grid& g, const CellField& s);
// Boundary faces follow bc: Dirichlet walls use the half-cell ghost reflection,
// Neumann walls are left at zero.
FaceField grad_cell_to_face(const Grid& g, const CellField& s, const BoundarySpec& bc);

CellField div_face_to_cell(const Grid& g, const FaceField& f);

// Arithmetic mean of the two adjacent cells; boundary faces copy the interior cell.
FaceField face_average(const Grid& g, const CellField& s);
// Upwind face values for the given face velocity; ties take the arithmetic mean.
FaceField upwind_face_values(const Grid& g, const CellField& s, const FaceField& vel);

// div(s_upwind * vel)
CellField upwind_div(const Grid& g, const CellField& scalar, const FaceField& vel);

// Affine operator s -> matrix * s + offset over cell unknowns.
struct AffineOperator {
  SparseMatrix matrix;
  Vector offset;
};

// div(coeff_f grad s) with coeff averaged to faces, zero normal flux on every wall.
SparseMatrix diffusion_matrix(const Grid& g, const CellField& coeff);
// Same with explicit face coefficients; wall-face entries are ignored.
SparseMatrix diffusion_matrix(const Grid& g, const FaceField& coeff);
// Temperature-style walls: Dirichlet uses the half-cell flux with the wall
// cell's coefficient; Neumann imposes coeff * ds/dnu = -value.
AffineOperator diffusion_operator(const Grid& g, const CellField& coeff, const BoundarySpec& bc);

CellField varcoef_diffusion(const Grid& g, const CellField& coeff, const CellField& s);
CellField varcoef_diffusion(const Grid& g, const CellField& coeff, const CellField& s,
                            const BoundarySpec& bc);

// div(eta D(u)) + grad(lambda div u) on interior faces, D(u) = grad u + grad u^T.
SparseMatrix viscous_matrix(const Grid& g, const CellField& eta, const CellField& lambda);
FaceField viscous_operator(const Grid& g, const CellField& eta, const CellField& lambda,
                           const FaceField& u);
// eta D(u):grad u + lambda (div u)^2 per cell. Its domain integral equals
// -<viscous_operator(u), u>.
CellField viscous_dissipation(const Grid& g, const CellField& eta, const CellField& lambda,
                              const FaceField& u);

// rho u* . grad u on interior faces, from face mass fluxes F = rho_f u*_f (kg/m^2/s).
// Skew mode satisfies <C u, u> = -1/2 <div F, |u|^2> exactly.
SparseMatrix convective_matrix(const Grid& g, const FaceField& mass_flux, ConvectionMode mode);
FaceField convective_operator(const Grid& g, const FaceField& mass_flux, const FaceField& u,
                              ConvectionMode mode);
FaceField convective_operator(const Grid& g, const CellField& rho, const FaceField& u_star,
                              const FaceField& u, ConvectionMode mode);

// Compensated sum of s * dx * dy.
double domain_integral(const Grid& g, const CellField& s);
// sum_f a_f b_f |V_f| with |V_f| = dx dy on interior faces and half that on walls.
double face_inner(const Grid& g, const FaceField& a, const FaceField& b);
// Splits each face value half-and-half onto its cells (walls: the single cell
// gets half). domain_integral of the result equals face_inner(w, 1).
CellField face_to_cell_split(const Grid& g, const FaceField& w);
// Cell |grad s|^2 as the face split of squared face gradients (zero-gradient walls).
CellField grad_sq_cell(const Grid& g, const CellField& s);
// Face values averaged to cell centres (ux, uy at cells).
std::pair<CellField, CellField> velocity_at_cells(const Grid& g, const FaceField& u);

// Outward heat flow through the walls, W per unit depth:
// sum over wall faces of q.nu * length * weight(adjacent cell).
double boundary_heat_flux(const Grid& g, const CellField& T, const CellField& theta_coeff,
                          const BoundarySpec& bc);
double boundary_heat_flux(const Grid& g, const CellField& T, const CellField& theta_coeff,
                          const BoundarySpec& bc, const CellField& weight);

}  // namespace thermoflow

#endif  // THERMOFLOW_GRID_HPP_
