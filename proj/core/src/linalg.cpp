#include "banditvn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "banditvn/error.hpp"

namespace banditvn::linalg {

SymMat::SymMat(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
  if (dim < 2) {
    throw PreconditionError("SymMat: dimension must be >= 2, got " +
                            std::to_string(dim));
  }
}

SymMat SymMat::identity(std::size_t dim, double scale) {
  SymMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = scale;
  return m;
}

SymMat SymMat::diagonal(std::span<const double> diag) {
  SymMat m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * m.dim_ + i] = diag[i];
  return m;
}

SymMat SymMat::from_rows(std::size_t dim, std::span<const double> rows) {
  if (rows.size() != dim * dim) {
    throw PreconditionError("SymMat::from_rows: expected " +
                            std::to_string(dim * dim) + " entries");
  }
  SymMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      if (rows[i * dim + j] != rows[j * dim + i]) {
        throw PreconditionError("SymMat::from_rows: grid is not symmetric");
      }
      m.set(i, j, rows[i * dim + j]);
    }
  }
  return m;
}

void SymMat::set(std::size_t i, std::size_t j, double value) noexcept {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

double SymMat::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMat::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Vec SymMat::multiply(std::span<const double> x) const {
  Vec y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += data_[i * dim_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

double SymMat::quadratic_form(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) row += data_[i * dim_ + j] * x[j];
    acc += x[i] * row;
  }
  return acc;
}

SymMat EigenDecomp::reconstruct() const {
  const std::size_t d = dim();
  SymMat m(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += eigenvalues[k] * eigenvectors[k][i] * eigenvectors[k][j];
      m.set(i, j, s);
    }
  }
  return m;
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * a[i * d + j] * a[i * d + j];
  return std::sqrt(s);
}

}  // namespace

EigenDecomp eigh(const SymMat& m) {
  const std::size_t d = m.dim();
  std::vector<double> a(m.raw().begin(), m.raw().end());
  for (double x : a) {
    if (!std::isfinite(x)) throw PreconditionError("eigh: non-finite matrix entry");
  }
  // Columns of `v` (row-major) accumulate the rotations.
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  // A rotation is applied only while |a_pq| exceeds a relative threshold
  // against the diagonal; a sweep with no rotation means convergence.
  constexpr double kRelTol = 1e-16;
  const std::size_t max_sweeps = 10 * d * d;
  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        if (std::abs(apq) <= kRelTol * std::sqrt(std::abs(a[p * d + p] * a[q * d + q]))) {
          a[p * d + q] = 0.0;
          a[q * d + p] = 0.0;
          continue;
        }
        converged = false;
        const double app = a[p * d + p];
        const double aqq = a[q * d + q];
        // Classical stable rotation: t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)).
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * d + p] = app - t * apq;
        a[q * d + q] = aqq + t * apq;
        a[p * d + q] = 0.0;
        a[q * d + p] = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * d + p];
          const double arq = a[r * d + q];
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a[r * d + p] = new_rp;
          a[p * d + r] = new_rp;
          a[r * d + q] = new_rq;
          a[q * d + r] = new_rq;
        }
        for (std::size_t r = 0; r < d; ++r) {
          const double vrp = v[r * d + p];
          const double vrq = v[r * d + q];
          v[r * d + p] = vrp - s * (vrq + tau * vrp);
          v[r * d + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (!converged) {
    const double residual = off_diagonal_norm(a, d);
    throw NonConvergence("eigh: Jacobi iteration did not converge (off-diagonal norm " +
                             std::to_string(residual) + ")",
                         residual);
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * d + i] < a[j * d + j];
  });

  EigenDecomp out;
  out.eigenvalues.reserve(d);
  out.eigenvectors.reserve(d);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(a[k * d + k]);
    Vec col(d);
    for (std::size_t r = 0; r < d; ++r) col[r] = v[r * d + k];
    // Re-normalise against accumulated rounding, then fix the sign.
    const double n = norm(col);
    for (double& x : col) x /= n;
    for (double x : col) {
      if (std::abs(x) > 1e-12) {
        if (x < 0.0) {
          for (double& y : col) y = -y;
        }
        break;
      }
    }
    out.eigenvectors.push_back(std::move(col));
  }
  return out;
}

void rank_one_add_inplace(SymMat& m, double weight, std::span<const double> u) {
  if (!(weight > 0.0)) throw PreconditionError("rank_one_add: weight must be positive");
  if (u.size() != m.dim()) throw PreconditionError("rank_one_add: dimension mismatch");
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double wi = weight * u[i];
    for (std::size_t j = i; j < m.dim(); ++j) m.set(i, j, m(i, j) + wi * u[j]);
  }
}

SymMat rank_one_add(const SymMat& m, double weight, std::span<const double> u) {
  SymMat out = m;
  rank_one_add_inplace(out, weight, u);
  return out;
}

Cholesky::Cholesky(const SymMat& m) : dim_(m.dim()), lower_(m.dim() * m.dim(), 0.0) {
  const std::size_t d = dim_;
  for (std::size_t j = 0; j < d; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower_[j * d + k] * lower_[j * d + k];
    if (!(diag > 0.0)) {
      throw NotPositiveDefinite(
          "matrix is not positive definite (pivot " + std::to_string(j) + " = " +
              std::to_string(diag) + "); check lambda0",
          diag);
    }
    const double ljj = std::sqrt(diag);
    lower_[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_[i * d + k] * lower_[j * d + k];
      lower_[i * d + j] = s / ljj;
    }
  }
}

Vec Cholesky::solve(std::span<const double> b) const {
  const std::size_t d = dim_;
  if (b.size() != d) throw PreconditionError("Cholesky::solve: dimension mismatch");
  Vec y(b.begin(), b.end());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower_[i * d + k] * y[k];
    y[i] /= lower_[i * d + i];
  }
  for (std::size_t i = d; i-- > 0;) {
    for (std::size_t k = i + 1; k < d; ++k) y[i] -= lower_[k * d + i] * y[k];
    y[i] /= lower_[i * d + i];
  }
  return y;
}

double Cholesky::logdet() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += 2.0 * std::log(lower_[i * dim_ + i]);
  return s;
}

Vec solve_spd(const SymMat& m, std::span<const double> b) {
  const Cholesky chol(m);
  Vec x = chol.solve(b);
  // One step of refinement keeps the residual small for ill-conditioned inputs.
  Vec r = m.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const Vec dx = chol.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return x;
}

double logdet_spd(const SymMat& m) { return Cholesky(m).logdet(); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec normalized(std::span<const double> a) {
  const double n = norm(a);
  Vec out(a.begin(), a.end());
  for (double& x : out) x /= n;
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

}  // namespace banditvn::linalg
