#pragma once

// Dense symmetric linear algebra for small dimensions (d <= 64).
//
// Everything here is a pure function of its inputs. SymMat keeps the full
// d x d grid so that element access is branch-free, but every mutating
// path writes the upper triangle and mirrors it, so entries(i,j) and
// entries(j,i) are always bit-identical.

#include <cstddef>
#include <span>
#include <vector>

namespace banditvn::linalg {

using Vec = std::vector<double>;

class SymMat {
 public:
  // Zero matrix of dimension `dim` (dim >= 2).
  explicit SymMat(std::size_t dim);

  static SymMat identity(std::size_t dim, double scale = 1.0);
  static SymMat diagonal(std::span<const double> diag);
  // Builds from a row-major d*d grid; throws PreconditionError unless the
  // grid is exactly symmetric.
  static SymMat from_rows(std::size_t dim, std::span<const double> rows);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }
  // Sets (i,j) and (j,i) together.
  void set(std::size_t i, std::size_t j, double value) noexcept;

  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  Vec multiply(std::span<const double> x) const;
  // x^T M x
  double quadratic_form(std::span<const double> x) const;
  std::span<const double> raw() const noexcept { return data_; }

  friend bool operator==(const SymMat&, const SymMat&) = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

struct EigenDecomp {
  // Ascending.
  Vec eigenvalues;
  // eigenvectors[i] is the unit eigenvector paired with eigenvalues[i].
  std::vector<Vec> eigenvectors;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  // sum_i lambda_i v_i v_i^T
  SymMat reconstruct() const;
};

// Cyclic Jacobi eigensolver. Sweeps are applied in a fixed (p,q) order and
// eigenvectors are sign-normalised (first coordinate with |x| > 1e-12 is
// positive), so identical inputs give identical outputs. Throws
// NonConvergence after 10*d^2 sweeps, carrying the off-diagonal norm.
EigenDecomp eigh(const SymMat& m);

// m + weight * u u^T, computed on the upper triangle and mirrored.
SymMat rank_one_add(const SymMat& m, double weight, std::span<const double> u);
// In-place variant used on hot paths.
void rank_one_add_inplace(SymMat& m, double weight, std::span<const double> u);

// Cholesky factor L (lower, row-major d*d) of an SPD matrix. Throws
// NotPositiveDefinite on a non-positive pivot.
class Cholesky {
 public:
  explicit Cholesky(const SymMat& m);
  Vec solve(std::span<const double> b) const;
  // sum_i log(L_ii^2)
  double logdet() const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> lower_;
};

Vec solve_spd(const SymMat& m, std::span<const double> b);
double logdet_spd(const SymMat& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
// Returns a / ||a||; the caller guarantees ||a|| > 0.
Vec normalized(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace banditvn::linalg
