#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace lri {

enum class Bc { Neumann, Periodic };

const char* bc_name(Bc bc);

/// Uniform tensor-product grid on a rectangular domain.
///
/// Node conventions: Neumann grids include both endpoints of each side
/// (h = length/(n-1)); periodic grids include one endpoint only
/// (h = length/n).
struct GridSpec {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};
  std::array<double, 3> h{0.0, 0.0, 0.0};
  Bc bc = Bc::Neumann;

  static GridSpec make(int dim, const std::array<int, 3>& n,
                       const std::array<double, 3>& length, Bc bc);

  /// Grid with all sides of the given length and target spacing 1/h_denom.
  /// Node count follows the boundary convention above.
  static GridSpec from_spacing(int dim, double length, double h_target, Bc bc);

  long total() const {
    long t = 1;
    for (int a = 0; a < dim; ++a) t *= n[a];
    return t;
  }

  /// Coordinate of node i along `axis`, with the domain centered at 0.
  double coord(int axis, int i) const {
    return -0.5 * length[axis] + i * h[axis];
  }
};

struct Field {
  GridSpec grid;
  std::vector<double> values;  // row-major axis order

  static Field zeros(const GridSpec& g) {
    return Field{g, std::vector<double>(static_cast<size_t>(g.total()), 0.0)};
  }
  static Field constant(const GridSpec& g, double v) {
    return Field{g, std::vector<double>(static_cast<size_t>(g.total()), v)};
  }
};

double sup_norm(const Field& u);
bool all_finite(const Field& u);

/// 1D central-difference Laplacian with ghost-reflection Neumann rows
/// (-2,2 first row; 1,-2,1 interior; 2,-2 last) or the periodic circulant,
/// both scaled by 1/h^2. Row sums are exactly zero.
Eigen::MatrixXd dense_laplacian_1d(int n, double h, Bc bc);

/// Kronecker-sum assembly of the tensor Laplacian (oracle / small grids).
Eigen::MatrixXd dense_tensor_laplacian(const GridSpec& grid);

/// Closed-form eigen-decomposition of the 1D stencil along one axis:
/// mu_k with cosine (Neumann) or real Fourier (periodic) eigenvector
/// columns in `basis`; `basis_inv` is the dense inverse, computed once.
struct LaplacianAxis {
  int n = 0;
  double h = 0.0;
  Bc bc = Bc::Neumann;
  Eigen::VectorXd mu;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd basis_inv;
};

LaplacianAxis build_axis(int n, double h, Bc bc);

/// One shared axis object per distinct (n, h); axes of equal shape alias.
std::vector<std::shared_ptr<const LaplacianAxis>> make_axes(const GridSpec& grid);

/// D_h u by direct stencil application per axis (no transforms).
Field apply_laplacian(const Field& u);

/// ||A||_inf = eps^2 * max absolute row sum of the tensor-sum D_h.
/// Every row attains 4/h^2 per axis, so no assembly is needed.
double operator_inf_norm(const GridSpec& grid, double eps);

}  // namespace lri
