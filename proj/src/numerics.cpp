#include "jc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jc {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  DenseMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool DenseMatrix::is_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> operator*(const DenseMatrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = p + 1; q < a.cols(); ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

}  // namespace

SymEig sym_eig(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionMismatchError("sym_eig: matrix is not square");
  if (!m.is_finite()) throw NonFiniteError("sym_eig: non-finite input");
  const int n = m.rows();
  const double scale = m.frobenius_norm();
  {
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = m(i, j) - m(j, i);
        asym += 2.0 * d * d;
      }
    if (std::sqrt(asym) > 1e-12 * (1.0 + scale))
      throw NonSymmetricError("sym_eig: input asymmetric beyond tolerance");
  }

  // Work on the symmetrized copy so tiny input asymmetry cannot leak through.
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double stop = 1e-13 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    if (off_diagonal_norm(a) <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-280) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  SymEig out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

namespace {

// Extends the orthonormal columns in q (count `have`) to a full basis using
// re-orthogonalized coordinate vectors.
void complete_orthonormal(DenseMatrix& q, int have) {
  const int n = q.rows();
  int next = have;
  for (int e = 0; e < n && next < n; ++e) {
    std::vector<double> r(n, 0.0);
    r[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < next; ++c) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += q(i, c) * r[i];
        for (int i = 0; i < n; ++i) r[i] -= dot * q(i, c);
      }
    }
    double nrm = 0.0;
    for (double x : r) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;  // coordinate vector nearly inside the span
    for (int i = 0; i < n; ++i) q(i, next) = r[i] / nrm;
    ++next;
  }
}

}  // namespace

Svd svd(const DenseMatrix& m) {
  if (!m.is_finite()) throw NonFiniteError("svd: non-finite input");
  if (m.rows() < m.cols()) {
    Svd t = svd(m.transposed());
    return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }

  const int rows = m.rows(), cols = m.cols();
  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(cols);

  // One-sided Jacobi: rotate column pairs until all pairs are orthogonal
  // relative to their norms. The relative criterion keeps U orthonormal
  // even for strongly graded singular values.
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, g = 0.0;
        for (int i = 0; i < rows; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          g += a(i, p) * a(i, q);
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(g) <= 1e-14 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < rows; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < cols; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols, 0.0);
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return sigma[i] > sigma[j]; });

  const double sig_max = sigma.empty() ? 0.0 : sigma[order[0]];
  const double cutoff = sig_max * 1e-13;

  Svd out;
  out.sigma.resize(cols);
  out.u = DenseMatrix(rows, rows);
  out.v = DenseMatrix(cols, cols);
  int have = 0;
  for (int k = 0; k < cols; ++k) {
    const int j = order[k];
    out.sigma[k] = sigma[j];
    for (int i = 0; i < cols; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > cutoff && sigma[j] > 0.0) {
      for (int i = 0; i < rows; ++i) out.u(i, have) = a(i, j) / sigma[j];
      ++have;
    } else {
      out.sigma[k] = sigma[j];  // kept as the tiny value; direction completed below
    }
  }
  complete_orthonormal(out.u, have);
  return out;
}

DenseMatrix mat_exp(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionMismatchError("mat_exp: matrix is not square");
  if (!m.is_finite()) throw NonFiniteError("mat_exp: non-finite input");
  const int n = m.rows();

  int squarings = 0;
  double nrm = m.frobenius_norm();
  while (nrm > 0.5 && squarings < 60) {
    nrm *= 0.5;
    ++squarings;
  }
  DenseMatrix a = std::ldexp(1.0, -squarings) * m;

  DenseMatrix e = DenseMatrix::identity(n);
  DenseMatrix term = DenseMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = (1.0 / k) * (term * a);
    e += term;
    if (term.frobenius_norm() <= 1e-18 * e.frobenius_norm()) break;
  }
  for (int i = 0; i < squarings; ++i) e = e * e;
  return e;
}

bool solve_linear(DenseMatrix a, std::vector<double> b, std::vector<double>& x) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw DimensionMismatchError("solve_linear: bad shapes");
  const double scale = a.max_abs();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-12 * (1.0 + scale)) return false;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a(r, j) * x[j];
    x[r] = s / a(r, r);
  }
  return true;
}

}  // namespace jc
