#include "lri/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lri {

const char* bc_name(Bc bc) {
  return bc == Bc::Neumann ? "neumann" : "periodic";
}

GridSpec GridSpec::make(int dim, const std::array<int, 3>& n,
                        const std::array<double, 3>& length, Bc bc) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2 or 3");
  GridSpec g;
  g.dim = dim;
  g.bc = bc;
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 3)
      throw std::invalid_argument("grid needs at least 3 nodes per axis, got " +
                                  std::to_string(n[a]));
    if (!(length[a] > 0.0))
      throw std::invalid_argument("grid side length must be positive");
    g.n[a] = n[a];
    g.length[a] = length[a];
    g.h[a] = bc == Bc::Neumann ? length[a] / (n[a] - 1) : length[a] / n[a];
  }
  return g;
}

GridSpec GridSpec::from_spacing(int dim, double length, double h_target, Bc bc) {
  if (!(h_target > 0.0)) throw std::invalid_argument("spacing must be positive");
  long cells = std::lround(length / h_target);
  int n = bc == Bc::Neumann ? static_cast<int>(cells) + 1 : static_cast<int>(cells);
  return make(dim, {n, n, n}, {length, length, length}, bc);
}

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Field& u) {
  for (double v : u.values)
    if (!std::isfinite(v)) return false;
  return true;
}

Eigen::MatrixXd dense_laplacian_1d(int n, double h, Bc bc) {
  if (n < 3) throw std::invalid_argument("dense_laplacian_1d requires n >= 3");
  if (!(h > 0.0)) throw std::invalid_argument("dense_laplacian_1d requires h > 0");
  const double w = 1.0 / (h * h);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = -2.0 * w;
  for (int i = 1; i < n - 1; ++i) {
    m(i, i - 1) = w;
    m(i, i + 1) = w;
  }
  if (bc == Bc::Neumann) {
    m(0, 1) = 2.0 * w;
    m(n - 1, n - 2) = 2.0 * w;
  } else {
    m(0, 1) = w;
    m(0, n - 1) = w;
    m(n - 1, n - 2) = w;
    m(n - 1, 0) = w;
  }
  return m;
}

Eigen::MatrixXd dense_tensor_laplacian(const GridSpec& grid) {
  const long total = grid.total();
  if (total > 4096)
    throw std::invalid_argument("dense_tensor_laplacian: grid too large for dense assembly");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(total, total);
  // D_h = sum over axes of I x ... x lambda_axis x ... x I
  for (int a = 0; a < grid.dim; ++a) {
    Eigen::MatrixXd lam = dense_laplacian_1d(grid.n[a], grid.h[a], grid.bc);
    long stride = 1;
    for (int b = a + 1; b < grid.dim; ++b) stride *= grid.n[b];
    const long na = grid.n[a];
    const long blocks = total / (na * stride);
    for (long blk = 0; blk < blocks; ++blk)
      for (long i = 0; i < na; ++i)
        for (long j = 0; j < na; ++j) {
          if (lam(i, j) == 0.0) continue;
          for (long s = 0; s < stride; ++s)
            out(blk * na * stride + i * stride + s,
                blk * na * stride + j * stride + s) += lam(i, j);
        }
  }
  return out;
}

namespace {

// Real eigenbasis ordering for the periodic circulant: column 0 constant,
// columns k / n-k the cos/sin pair for wavenumber k, column n/2 the Nyquist
// alternating vector for even n. Eigenvalue index then matches the formula
// mu_k = (2 cos(2 pi k / n) - 2)/h^2 for every k.
Eigen::MatrixXd periodic_basis(int n) {
  Eigen::MatrixXd v(n, n);
  const double w = 2.0 * M_PI / n;
  v.col(0).setOnes();
  for (int k = 1; k < (n + 1) / 2; ++k)
    for (int j = 0; j < n; ++j) {
      v(j, k) = std::cos(w * k * j);
      v(j, n - k) = std::sin(w * k * j);
    }
  if (n % 2 == 0)
    for (int j = 0; j < n; ++j) v(j, n / 2) = (j % 2 == 0) ? 1.0 : -1.0;
  return v;
}

}  // namespace

LaplacianAxis build_axis(int n, double h, Bc bc) {
  if (n < 3) throw std::invalid_argument("build_axis requires n >= 3");
  if (!(h > 0.0)) throw std::invalid_argument("build_axis requires h > 0");
  LaplacianAxis axis;
  axis.n = n;
  axis.h = h;
  axis.bc = bc;
  axis.mu.resize(n);
  const double w = 1.0 / (h * h);
  if (bc == Bc::Neumann) {
    axis.basis.resize(n, n);
    for (int k = 0; k < n; ++k) {
      const double theta = M_PI * k / (n - 1);
      axis.mu[k] = (2.0 * std::cos(theta) - 2.0) * w;
      for (int j = 0; j < n; ++j) axis.basis(j, k) = std::cos(theta * j);
    }
  } else {
    for (int k = 0; k < n; ++k)
      axis.mu[k] = (2.0 * std::cos(2.0 * M_PI * k / n) - 2.0) * w;
    axis.basis = periodic_basis(n);
  }
  axis.basis_inv = axis.basis.partialPivLu().inverse();

  const double id_err =
      (axis.basis * axis.basis_inv - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (id_err > 1e-12 * n)
    throw std::runtime_error("build_axis: basis inversion failed");
  const double rec_err = (axis.basis * axis.mu.asDiagonal() * axis.basis_inv -
                          dense_laplacian_1d(n, h, bc))
                             .cwiseAbs()
                             .maxCoeff();
  if (rec_err > 1e-12 * w)
    throw std::runtime_error("build_axis: eigen-reconstruction failed");
  return axis;
}

std::vector<std::shared_ptr<const LaplacianAxis>> make_axes(const GridSpec& grid) {
  std::vector<std::shared_ptr<const LaplacianAxis>> axes(grid.dim);
  for (int a = 0; a < grid.dim; ++a) {
    for (int b = 0; b < a; ++b)
      if (grid.n[b] == grid.n[a] && grid.h[b] == grid.h[a]) {
        axes[a] = axes[b];
        break;
      }
    if (!axes[a])
      axes[a] = std::make_shared<const LaplacianAxis>(
          build_axis(grid.n[a], grid.h[a], grid.bc));
  }
  return axes;
}

Field apply_laplacian(const Field& u) {
  const GridSpec& g = u.grid;
  if (u.values.size() != static_cast<size_t>(g.total()))
    throw std::invalid_argument("apply_laplacian: field does not match its grid");
  Field out = Field::zeros(g);
  const double* in = u.values.data();
  double* ov = out.values.data();

  for (int a = 0; a < g.dim; ++a) {
    const long na = g.n[a];
    long stride = 1;
    for (int b = a + 1; b < g.dim; ++b) stride *= g.n[b];
    const long lines = g.total() / na;
    const double w = 1.0 / (g.h[a] * g.h[a]);
    for (long line = 0; line < lines; ++line) {
      const long block = line / stride;
      const long off = line % stride;
      const double* lu = in + block * na * stride + off;
      double* lo = ov + block * na * stride + off;
      if (g.bc == Bc::Neumann) {
        lo[0] += (-2.0 * lu[0] + 2.0 * lu[stride]) * w;
        for (long i = 1; i < na - 1; ++i)
          lo[i * stride] += (lu[(i - 1) * stride] - 2.0 * lu[i * stride] +
                             lu[(i + 1) * stride]) *
                            w;
        lo[(na - 1) * stride] +=
            (2.0 * lu[(na - 2) * stride] - 2.0 * lu[(na - 1) * stride]) * w;
      } else {
        for (long i = 0; i < na; ++i) {
          const long im = (i == 0) ? na - 1 : i - 1;
          const long ip = (i == na - 1) ? 0 : i + 1;
          lo[i * stride] +=
              (lu[im * stride] - 2.0 * lu[i * stride] + lu[ip * stride]) * w;
        }
      }
    }
  }
  return out;
}

double operator_inf_norm(const GridSpec& grid, double eps) {
  double row = 0.0;
  for (int a = 0; a < grid.dim; ++a) row += 4.0 * (1.0 / (grid.h[a] * grid.h[a]));
  return eps * eps * row;
}

}  // namespace lri
