#pragma once

// Analytical checks used by the verification suite.
//
// For d = 2 the batch update V' = V + w (a+ a+^T + a- a-^T) has a closed-form
// smallest eigenvalue in terms of the current eigenvalues, the weight, and
// the overlap alpha = <v_min, c> between the smallest eigenvector and the
// batch center. The distance check confirms that the normalised action pair
// stays within sqrt(2/lambda) of its center.

#include <span>

#include "banditvn/linalg.hpp"

namespace banditvn::oracle2d {

struct Oracle2dInput {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double omega = 0.0;
  double alpha = 0.0;

  // Throws PreconditionError unless 1 <= lambda_min <= lambda_max, omega >= 0
  // and alpha in [-1, 1].
  void validate() const;
};

// Overlap terms x(alpha) = <a+,v_min>^2 + <a-,v_min>^2 and
// z(alpha) = <a+,v_min><a+,v_max> + <a-,v_min><a-,v_max>.
struct OverlapTerms {
  double x = 0.0;
  double z = 0.0;
};
OverlapTerms overlap_terms(double lambda_min, double alpha);

double exact_min_eigenvalue_2d(const Oracle2dInput& input);

// The updated matrix written in the (v_min, v_max) basis.
linalg::SymMat assembled_update_2d(const Oracle2dInput& input);

// max over +/- of ||a± - c||^2 - 2/lambda. Non-positive when the bound holds.
// Throws PreconditionError unless lambda > 1 and c, v are unit vectors.
double distance_lemma_excess(std::span<const double> c, std::span<const double> v, double lambda);

// distance_lemma_excess(c, v, lambda) <= 1e-12
bool check_distance_lemma(std::span<const double> c, std::span<const double> v, double lambda);

}  // namespace banditvn::oracle2d
