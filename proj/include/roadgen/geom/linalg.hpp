#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace roadgen::geom::linalg {

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> d_;
};

// Householder QR for small dense systems (piece fitting uses n <= ~24).
class DenseQR {
public:
  explicit DenseQR(Matrix a) : a_(std::move(a)), m_(a_.rows()), n_(a_.cols()) {
    betas_.resize(n_, 0.0);
    vs_.assign(n_, {});
    for (std::size_t k = 0; k < n_ && k < m_; ++k) {
      double nrm = 0.0;
      for (std::size_t i = k; i < m_; ++i) nrm += a_(i, k) * a_(i, k);
      nrm = std::sqrt(nrm);
      if (nrm < 1e-300) continue;
      double alpha = a_(k, k) >= 0.0 ? -nrm : nrm;
      std::vector<double> v(m_ - k, 0.0);
      v[0] = a_(k, k) - alpha;
      for (std::size_t i = k + 1; i < m_; ++i) v[i - k] = a_(i, k);
      double vtv = 0.0;
      for (double x : v) vtv += x * x;
      if (vtv < 1e-300) continue;
      double beta = 2.0 / vtv;
      // apply reflector to remaining columns
      for (std::size_t j = k; j < n_; ++j) {
        double dotv = 0.0;
        for (std::size_t i = k; i < m_; ++i) dotv += v[i - k] * a_(i, j);
        dotv *= beta;
        for (std::size_t i = k; i < m_; ++i) a_(i, j) -= dotv * v[i - k];
      }
      betas_[k] = beta;
      vs_[k] = std::move(v);
    }
  }

  // x minimizing ||Ax - b||; b has m entries.
  std::vector<double> solve(std::vector<double> b) const {
    apply_qt(b);
    std::vector<double> x(n_, 0.0);
    for (std::size_t jj = n_; jj-- > 0;) {
      double sum = b[jj];
      for (std::size_t j = jj + 1; j < n_; ++j) sum -= a_(jj, j) * x[j];
      double diag = a_(jj, jj);
      x[jj] = std::abs(diag) > 1e-300 ? sum / diag : 0.0;
    }
    return x;
  }

  double min_abs_diag() const {
    double m = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k < n_ && k < m_; ++k) m = std::min(m, std::abs(a_(k, k)));
    return m;
  }

  // Explicit m x m Q (columns are Q e_i).
  Matrix q() const {
    Matrix q(m_, m_);
    for (std::size_t c = 0; c < m_; ++c) {
      std::vector<double> e(m_, 0.0);
      e[c] = 1.0;
      apply_q(e);
      for (std::size_t r = 0; r < m_; ++r) q(r, c) = e[r];
    }
    return q;
  }

  void apply_qt(std::vector<double>& v) const {
    for (std::size_t k = 0; k < n_ && k < m_; ++k) {
      if (vs_[k].empty()) continue;
      double dotv = 0.0;
      for (std::size_t i = k; i < m_; ++i) dotv += vs_[k][i - k] * v[i];
      dotv *= betas_[k];
      for (std::size_t i = k; i < m_; ++i) v[i] -= dotv * vs_[k][i - k];
    }
  }

  void apply_q(std::vector<double>& v) const {
    for (std::size_t k = std::min(n_, m_); k-- > 0;) {
      if (vs_[k].empty()) continue;
      double dotv = 0.0;
      for (std::size_t i = k; i < m_; ++i) dotv += vs_[k][i - k] * v[i];
      dotv *= betas_[k];
      for (std::size_t i = k; i < m_; ++i) v[i] -= dotv * vs_[k][i - k];
    }
  }

private:
  Matrix a_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<double> betas_;
  std::vector<std::vector<double>> vs_;
};

// min ||Ax - y|| subject to Cx = d, by the null-space method. C may have zero
// rows. Underdetermined reduced systems get a tiny ridge so the solve always
// returns a finite answer.
inline std::vector<double> constrained_least_squares(const Matrix& a, const std::vector<double>& y,
                                                     const Matrix& c, const std::vector<double>& d) {
  std::size_t n = a.cols();
  std::size_t m = a.rows();
  std::size_t nc = c.rows();

  auto ridge_solve = [&](const Matrix& design, const std::vector<double>& rhs) {
    std::size_t rows = design.rows();
    std::size_t cols = design.cols();
    bool need_ridge = rows < cols;
    double scale = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) scale = std::max(scale, std::abs(design(i, j)));
    }
    Matrix aug(rows + (need_ridge ? cols : 0), cols);
    std::vector<double> rhs_aug(aug.rows(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      rhs_aug[i] = rhs[i];
      for (std::size_t j = 0; j < cols; ++j) aug(i, j) = design(i, j);
    }
    if (need_ridge) {
      double mu = 1e-8 * (1.0 + scale);
      for (std::size_t j = 0; j < cols; ++j) aug(rows + j, j) = mu;
    }
    DenseQR qr(std::move(aug));
    return qr.solve(std::move(rhs_aug));
  };

  if (nc == 0) return ridge_solve(a, y);

  // QR of C^T: C^T = Q R; Q1 = first nc columns, Q2 spans the null space.
  Matrix ct(n, nc);
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < n; ++j) ct(j, i) = c(i, j);
  }
  DenseQR qr_ct(ct);
  Matrix q = qr_ct.q();

  // Forward-substitute R^T w = d (R is the upper-triangular factor of C^T).
  Matrix r(nc, nc);
  {
    // Recover R by applying Q^T to the columns of C^T.
    for (std::size_t col = 0; col < nc; ++col) {
      std::vector<double> v(n, 0.0);
      for (std::size_t row = 0; row < n; ++row) v[row] = c(col, row);
      qr_ct.apply_qt(v);
      for (std::size_t row = 0; row < nc; ++row) r(row, col) = v[row];
    }
  }
  std::vector<double> w(nc, 0.0);
  for (std::size_t i = 0; i < nc; ++i) {
    double sum = d[i];
    for (std::size_t j = 0; j < i; ++j) sum -= r(j, i) * w[j];
    double diag = r(i, i);
    w[i] = std::abs(diag) > 1e-300 ? sum / diag : 0.0;
  }
  std::vector<double> xp(n, 0.0);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < nc; ++j) xp[row] += q(row, j) * w[j];
  }

  std::size_t nz = n - nc;
  if (nz == 0) return xp;

  Matrix az(m, nz);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += a(i, k) * q(k, nc + j);
      az(i, j) = sum;
    }
  }
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double sum = y[i];
    for (std::size_t k = 0; k < n; ++k) sum -= a(i, k) * xp[k];
    rhs[i] = sum;
  }
  std::vector<double> t = ridge_solve(az, rhs);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < nz; ++j) xp[row] += q(row, nc + j) * t[j];
  }
  return xp;
}

}  // namespace roadgen::geom::linalg
