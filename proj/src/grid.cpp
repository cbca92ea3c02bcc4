#include "qf/grid.hpp"

namespace qf {

namespace {

// FFT-standard signed integer frequency for index m on a ring of size n
int k_int(int m, int n) { return (m < (n + 1) / 2) ? m : m - n; }

}  // namespace

Grid::Grid(int n_per_dim, int dim, double box_length)
    : n_per_dim_(n_per_dim), dim_(dim), box_length_(box_length) {
  if (n_per_dim < 2) throw ConfigError("grid: n_per_dim must be >= 2");
  if (dim < 1 || dim > 3) throw ConfigError("grid: dim must be 1, 2 or 3");
  if (!(box_length > 0.0)) throw ConfigError("grid: box_length must be > 0");

  n_ = 1;
  for (int d = 0; d < dim_; ++d) n_ *= n_per_dim_;

  const double kunit = 2.0 * M_PI / box_length_;
  const double xunit = box_length_ / n_per_dim_;

  kvecs_ = RMat::Zero(n_, dim_);
  ksq_ = RVec::Zero(n_);
  for (int p = 0; p < n_; ++p) {
    const auto c = coords(p);
    for (int d = 0; d < dim_; ++d) {
      kvecs_(p, d) = kunit * k_int(c[d], n_per_dim_);
      ksq_(p) += kvecs_(p, d) * kvecs_(p, d);
    }
  }

  fourier_ = Mat::Zero(n_, n_);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
  for (int p = 0; p < n_; ++p) {
    for (int x = 0; x < n_; ++x) {
      const auto cx = coords(x);
      double phase = 0.0;
      for (int d = 0; d < dim_; ++d)
        phase += kvecs_(p, d) * (xunit * cx[d]);
      fourier_(p, x) = norm * std::exp(cplx(0.0, -phase));
    }
  }

  disp_.resize(n_, n_);
  for (int x = 0; x < n_; ++x) {
    const auto cx = coords(x);
    for (int y = 0; y < n_; ++y) {
      const auto cy = coords(y);
      int idx = 0;
      for (int d = 0; d < dim_; ++d)
        idx = idx * n_per_dim_ + ((cx[d] - cy[d]) % n_per_dim_ + n_per_dim_) % n_per_dim_;
      disp_(x, y) = idx;
    }
  }

  neg_.resize(n_);
  dist_.resize(n_);
  for (int r = 0; r < n_; ++r) {
    const auto cr = coords(r);
    int idx = 0;
    double d2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      idx = idx * n_per_dim_ + (n_per_dim_ - cr[d]) % n_per_dim_;
      int delta = cr[d] > n_per_dim_ / 2 ? cr[d] - n_per_dim_ : cr[d];
      d2 += (delta * xunit) * (delta * xunit);
    }
    neg_[r] = idx;
    dist_[r] = std::sqrt(d2);
  }
}

std::array<int, 3> Grid::coords(int s) const {
  std::array<int, 3> c{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    c[d] = s % n_per_dim_;
    s /= n_per_dim_;
  }
  return c;
}

Mat Grid::momentum_multiplier(const RVec& symbol) const {
  return fourier_.adjoint() * symbol.asDiagonal() * fourier_;
}

Mat Grid::multiplier_matrix() const {
  return momentum_multiplier((ksq_.array() + 1.0).sqrt().matrix());
}

Mat Grid::inv_multiplier_matrix() const {
  return momentum_multiplier((ksq_.array() + 1.0).rsqrt().matrix());
}

Mat Grid::derivative_matrix(int j) const {
  if (j < 0 || j >= dim_) throw ConfigError("grid: derivative direction out of range");
  Mat d = fourier_.adjoint() * (I_UNIT * kvecs_.col(j)).asDiagonal() * fourier_;
  return d;
}

Mat Grid::momentum_projector(double lambda) const {
  RVec symbol(n_);
  for (int p = 0; p < n_; ++p) symbol(p) = ksq_(p) < lambda ? 1.0 : 0.0;
  return momentum_multiplier(symbol);
}

}  // namespace qf
