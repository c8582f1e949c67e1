#include "lri/expops.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace lri {

double phi_scalar(int k, double z) {
  if (k == 1) {
    if (z == 0.0) return 1.0;
    return std::expm1(z) / z;
  }
  if (k == 2) {
    if (std::abs(z) < 1e-2) {
      // phi2(z) = sum_{j>=0} z^j / (j+2)!, truncated at degree 8
      double acc = 1.0 / 3628800.0;
      static constexpr double inv_fact[] = {1.0 / 362880.0, 1.0 / 40320.0,
                                            1.0 / 5040.0,   1.0 / 720.0,
                                            1.0 / 120.0,    1.0 / 24.0,
                                            1.0 / 6.0,      1.0 / 2.0};
      for (double c : inv_fact) acc = acc * z + c;
      return acc;
    }
    return (std::expm1(z) - z) / (z * z);
  }
  throw std::invalid_argument("phi_scalar: k must be 1 or 2");
}

namespace {

Eigen::MatrixXd pade13_expm(Eigen::MatrixXd a) {
  static constexpr double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;
  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    a /= std::pow(2.0, squarings);
  }
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a2 * a4;
  Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
           b[3] * a2 + b[1] * ident);
  Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                      b[4] * a4 + b[2] * a2 + b[0] * ident;
  Eigen::MatrixXd f = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) f = f * f;
  return f;
}

}  // namespace

Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& m, double t) {
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_expm: matrix not square");
  if (m.rows() > 1024) throw std::invalid_argument("dense_expm: size cap (1024) exceeded");
  return pade13_expm(t * m);
}

Eigen::MatrixXd dense_phi(const Eigen::MatrixXd& m, double t, int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("dense_phi: k must be 1 or 2");
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_phi: matrix not square");
  const Eigen::Index n = m.rows();
  if (n * (k + 1) > 3072) throw std::invalid_argument("dense_phi: size cap exceeded");
  // exp of the augmented block matrix [[tA, I, 0], [0, 0, I], [0, 0, 0]]
  // carries phi_j(tA) in the top block row.
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n * (k + 1), n * (k + 1));
  aug.topLeftCorner(n, n) = t * m;
  for (int j = 0; j < k; ++j)
    aug.block(j * n, (j + 1) * n, n, n) = Eigen::MatrixXd::Identity(n, n);
  return pade13_expm(aug).block(0, k * n, n, n);
}

namespace {

std::mutex fftw_planner_mutex;

bool same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.dim != b.dim || a.bc != b.bc) return false;
  for (int i = 0; i < a.dim; ++i)
    if (a.n[i] != b.n[i] || a.h[i] != b.h[i]) return false;
  return true;
}

// Dense per-axis transform: out = W applied along `axis` of the row-major
// tensor `in`. Innermost and outermost axes collapse to one GEMM.
void apply_axis_dense(const GridSpec& g, int axis, const Eigen::MatrixXd& w,
                      const double* in, double* out) {
  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const long na = g.n[axis];
  long stride = 1;
  for (int b = axis + 1; b < g.dim; ++b) stride *= g.n[b];
  const long total = g.total();
  if (stride == 1) {
    Eigen::Map<const RowMat> im(in, total / na, na);
    Eigen::Map<RowMat> om(out, total / na, na);
    om.noalias() = im * w.transpose();
    return;
  }
  const long blocks = total / (na * stride);
  for (long blk = 0; blk < blocks; ++blk) {
    Eigen::Map<const RowMat> im(in + blk * na * stride, na, stride);
    Eigen::Map<RowMat> om(out + blk * na * stride, na, stride);
    om.noalias() = w * im;
  }
}

struct AxisFft {
  fftw_plan r2r = nullptr;  // Neumann: DCT-I serves analysis and synthesis
  fftw_plan fwd = nullptr;  // periodic: complex DFT
  fftw_plan bwd = nullptr;
};

}  // namespace

struct Propagator::Impl {
  GridSpec grid;
  std::vector<std::shared_ptr<const LaplacianAxis>> axes;
  double eps = 0.0;
  double t = 0.0;
  TransformPath path = TransformPath::Matrix;
  bool with_phi = false;

  std::array<Eigen::VectorXd, 3> exp_factors;  // exp(t eps^2 mu_k) per axis
  std::vector<double> joint_s;                 // eps^2 sum_a mu_{k_a}
  std::vector<double> phi1_grid, phi2_grid;    // phi_k(t * s)
  double fft_weight = 1.0;  // roundtrip normalization, all axes folded
  std::array<AxisFft, 3> fft;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    for (auto& p : fft) {
      if (p.r2r) fftw_destroy_plan(p.r2r);
      if (p.fwd) fftw_destroy_plan(p.fwd);
      if (p.bwd) fftw_destroy_plan(p.bwd);
    }
  }

  void build_fft_plans() {
    const long total = grid.total();
    std::vector<double> ta(total), tb(total);
    std::vector<std::complex<double>> ca(total), cb(total);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    for (int a = 0; a < grid.dim; ++a) {
      const long na = grid.n[a];
      long stride = 1;
      for (int b = a + 1; b < grid.dim; ++b) stride *= grid.n[b];
      const long blocks = total / (na * stride);
      fftw_iodim64 dim{na, stride, stride};
      fftw_iodim64 many[2] = {{stride, 1, 1},
                              {blocks, na * stride, na * stride}};
      if (grid.bc == Bc::Neumann) {
        fftw_r2r_kind kind = FFTW_REDFT00;
        fft[a].r2r = fftw_plan_guru64_r2r(1, &dim, 2, many, ta.data(),
                                          tb.data(), &kind, flags);
        if (!fft[a].r2r) throw std::runtime_error("fftw DCT-I plan failed");
      } else {
        auto* in = reinterpret_cast<fftw_complex*>(ca.data());
        auto* out = reinterpret_cast<fftw_complex*>(cb.data());
        fft[a].fwd = fftw_plan_guru64_dft(1, &dim, 2, many, in, out,
                                          FFTW_FORWARD, flags);
        fft[a].bwd = fftw_plan_guru64_dft(1, &dim, 2, many, in, out,
                                          FFTW_BACKWARD, flags);
        if (!fft[a].fwd || !fft[a].bwd)
          throw std::runtime_error("fftw DFT plan failed");
      }
    }
  }

  // Multiplies the spectral buffer elementwise by factor(idx, k0, k1, k2),
  // on real or complex data.
  template <typename Scalar, typename Fn>
  void spectral_scale(Scalar* buf, Fn&& factor) const {
    const long n0 = grid.n[0];
    const long n1 = grid.dim > 1 ? grid.n[1] : 1;
    const long n2 = grid.dim > 2 ? grid.n[2] : 1;
    long idx = 0;
    for (long k0 = 0; k0 < n0; ++k0)
      for (long k1 = 0; k1 < n1; ++k1)
        for (long k2 = 0; k2 < n2; ++k2, ++idx)
          buf[idx] *= factor(idx, k0, k1, k2);
  }

  // which: 0 = exp, 1 = phi1, 2 = phi2
  Field apply(const Field& u, int which) const {
    if (!same_grid(u.grid, grid) ||
        u.values.size() != static_cast<size_t>(grid.total()))
      throw std::invalid_argument("propagator: field does not match grid");
    const long total = grid.total();

    if (t == 0.0 || eps == 0.0) {
      // tA = 0 exactly: identity for exp and phi1, half-scaling for phi2
      Field out = u;
      if (which == 2)
        for (double& v : out.values) v *= 0.5;
      return out;
    }
    Field out = Field::zeros(grid);

    const std::vector<double>* joint_phi =
        which == 0 ? nullptr : (which == 1 ? &phi1_grid : &phi2_grid);
    auto joint_factor = [&](long idx, long k0, long k1, long k2) -> double {
      if (joint_phi) return (*joint_phi)[idx];
      double f = exp_factors[0][k0];
      if (grid.dim > 1) f *= exp_factors[1][k1];
      if (grid.dim > 2) f *= exp_factors[2][k2];
      return f;
    };

    if (path == TransformPath::Matrix) {
      std::vector<double> b1 = u.values, b2(total);
      double* cur = b1.data();
      double* nxt = b2.data();
      for (int a = 0; a < grid.dim; ++a) {
        apply_axis_dense(grid, a, axes[a]->basis_inv, cur, nxt);
        std::swap(cur, nxt);
      }
      spectral_scale(cur, joint_factor);
      for (int a = 0; a < grid.dim; ++a) {
        apply_axis_dense(grid, a, axes[a]->basis, cur, nxt);
        std::swap(cur, nxt);
      }
      std::copy(cur, cur + total, out.values.begin());
      return out;
    }

    if (grid.bc == Bc::Neumann) {
      std::vector<double> b1 = u.values, b2(total);
      double* cur = b1.data();
      double* nxt = b2.data();
      for (int a = 0; a < grid.dim; ++a) {
        fftw_execute_r2r(fft[a].r2r, cur, nxt);
        std::swap(cur, nxt);
      }
      // DCT-I coefficient conventions fold into one constant weight:
      // analysis and synthesis scalings multiply to 1/(2(n-1)) per axis.
      spectral_scale(cur, [&](long idx, long k0, long k1, long k2) {
        return fft_weight * joint_factor(idx, k0, k1, k2);
      });
      for (int a = 0; a < grid.dim; ++a) {
        fftw_execute_r2r(fft[a].r2r, cur, nxt);
        std::swap(cur, nxt);
      }
      std::copy(cur, cur + total, out.values.begin());
      return out;
    }

    std::vector<std::complex<double>> c1(total), c2(total);
    for (long i = 0; i < total; ++i) c1[i] = u.values[i];
    auto* cur = c1.data();
    auto* nxt = c2.data();
    for (int a = 0; a < grid.dim; ++a) {
      fftw_execute_dft(fft[a].fwd, reinterpret_cast<fftw_complex*>(cur),
                       reinterpret_cast<fftw_complex*>(nxt));
      std::swap(cur, nxt);
    }
    spectral_scale(cur, [&](long idx, long k0, long k1, long k2) {
      return fft_weight * joint_factor(idx, k0, k1, k2);
    });
    for (int a = 0; a < grid.dim; ++a) {
      fftw_execute_dft(fft[a].bwd, reinterpret_cast<fftw_complex*>(cur),
                       reinterpret_cast<fftw_complex*>(nxt));
      std::swap(cur, nxt);
    }
    const double in_scale = std::max(1.0, sup_norm(u));
    double max_imag = 0.0;
    for (long i = 0; i < total; ++i) {
      out.values[i] = cur[i].real();
      max_imag = std::max(max_imag, std::abs(cur[i].imag()));
    }
    if (max_imag > 1e-10 * in_scale)
      throw std::runtime_error("propagator: imaginary residue above 1e-10");
    return out;
  }
};

Propagator::Propagator(const GridSpec& grid,
                       std::vector<std::shared_ptr<const LaplacianAxis>> axes,
                       double eps, double t, TransformPath path, bool with_phi) {
  if (t < 0.0) throw std::invalid_argument("propagator: negative time increment");
  if (eps < 0.0) throw std::invalid_argument("propagator: negative eps");
  if (static_cast<int>(axes.size()) != grid.dim)
    throw std::invalid_argument("propagator: need one axis per grid dimension");
  for (int a = 0; a < grid.dim; ++a)
    if (!axes[a] || axes[a]->n != grid.n[a] || axes[a]->bc != grid.bc)
      throw std::invalid_argument("propagator: axis does not match grid");

  auto impl = std::make_shared<Impl>();
  impl->grid = grid;
  impl->axes = std::move(axes);
  impl->eps = eps;
  impl->t = t;
  impl->with_phi = with_phi;
  int n_max = 0;
  for (int a = 0; a < grid.dim; ++a) n_max = std::max(n_max, grid.n[a]);
  impl->path = path == TransformPath::Auto
                   ? (n_max >= 64 ? TransformPath::Fft : TransformPath::Matrix)
                   : path;

  const double e2 = eps * eps;
  for (int a = 0; a < grid.dim; ++a) {
    const Eigen::VectorXd& mu = impl->axes[a]->mu;
    Eigen::VectorXd f(mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      f[k] = std::exp(t * e2 * mu[k]);
      if (!(f[k] >= 0.0 && f[k] <= 1.0))
        throw std::runtime_error("propagator: exponential factor outside [0,1]");
    }
    impl->exp_factors[a] = std::move(f);
  }

  const long total = grid.total();
  impl->joint_s.resize(total);
  {
    const long n0 = grid.n[0];
    const long n1 = grid.dim > 1 ? grid.n[1] : 1;
    const long n2 = grid.dim > 2 ? grid.n[2] : 1;
    long idx = 0;
    for (long k0 = 0; k0 < n0; ++k0)
      for (long k1 = 0; k1 < n1; ++k1)
        for (long k2 = 0; k2 < n2; ++k2, ++idx) {
          double s = impl->axes[0]->mu[k0];
          if (grid.dim > 1) s += impl->axes[1]->mu[k1];
          if (grid.dim > 2) s += impl->axes[2]->mu[k2];
          impl->joint_s[idx] = e2 * s;
        }
  }
  if (with_phi) {
    impl->phi1_grid.resize(total);
    impl->phi2_grid.resize(total);
    for (long i = 0; i < total; ++i) {
      impl->phi1_grid[i] = phi_scalar(1, t * impl->joint_s[i]);
      impl->phi2_grid[i] = phi_scalar(2, t * impl->joint_s[i]);
    }
  }

  if (impl->path == TransformPath::Fft) {
    double w = 1.0;
    for (int a = 0; a < grid.dim; ++a)
      w /= grid.bc == Bc::Neumann ? 2.0 * (grid.n[a] - 1) : grid.n[a];
    impl->fft_weight = w;
    impl->build_fft_plans();
  }
  impl_ = std::move(impl);
}

const GridSpec& Propagator::grid() const { return impl_->grid; }
double Propagator::eps() const { return impl_->eps; }
double Propagator::time() const { return impl_->t; }
TransformPath Propagator::resolved_path() const { return impl_->path; }

Field Propagator::apply_exp(const Field& u) const { return impl_->apply(u, 0); }

Field Propagator::apply_phi(int k, const Field& u) const {
  if (k != 1 && k != 2) throw std::invalid_argument("apply_phi: k must be 1 or 2");
  if (!impl_->with_phi)
    throw std::logic_error("apply_phi: propagator built without phi grids");
  return impl_->apply(u, k);
}

}  // namespace lri
