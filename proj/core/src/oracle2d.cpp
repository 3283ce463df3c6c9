#include "banditvn/oracle2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "banditvn/env.hpp"
#include "banditvn/error.hpp"

namespace banditvn::oracle2d {

void Oracle2dInput::validate() const {
  if (!(lambda_min >= 1.0)) throw PreconditionError("oracle2d: lambda_min must be >= 1");
  if (!(lambda_max >= lambda_min)) throw PreconditionError("oracle2d: lambda_max < lambda_min");
  if (!(omega >= 0.0)) throw PreconditionError("oracle2d: omega must be >= 0");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw PreconditionError("oracle2d: alpha outside [-1, 1]");
}

OverlapTerms overlap_terms(double lambda_min, double alpha) {
  const double s = 1.0 / std::sqrt(lambda_min);
  const double n_plus = 1.0 + 2.0 * s * alpha + s * s;
  const double n_minus = 1.0 - 2.0 * s * alpha + s * s;
  OverlapTerms t;
  t.x = (alpha + s) * (alpha + s) / n_plus + (alpha - s) * (alpha - s) / n_minus;
  t.z = ((alpha + s) / n_plus + (alpha - s) / n_minus) * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return t;
}

double exact_min_eigenvalue_2d(const Oracle2dInput& input) {
  input.validate();
  const auto [x, z] = overlap_terms(input.lambda_min, input.alpha);
  const double w = input.omega;
  const double spread = input.lambda_max - input.lambda_min + 2.0 * w * (1.0 - x);
  return 0.5 * (input.lambda_max + input.lambda_min) + w -
         0.5 * std::sqrt(spread * spread + 4.0 * w * w * z * z);
}

linalg::SymMat assembled_update_2d(const Oracle2dInput& input) {
  input.validate();
  const auto [x, z] = overlap_terms(input.lambda_min, input.alpha);
  linalg::SymMat m(2);
  m.set(0, 0, input.lambda_min + input.omega * x);
  m.set(1, 1, input.lambda_max + input.omega * (2.0 - x));
  m.set(0, 1, input.omega * z);
  return m;
}

double distance_lemma_excess(std::span<const double> c, std::span<const double> v, double lambda) {
  if (!(lambda > 1.0)) {
    throw PreconditionError("distance lemma: lambda must exceed 1, got " + std::to_string(lambda));
  }
  if (c.size() != v.size()) throw PreconditionError("distance lemma: dimension mismatch");
  env::require_unit(c, "distance lemma: c");
  env::require_unit(v, "distance lemma: v");
  const double scale = 1.0 / std::sqrt(lambda);
  linalg::Vec plus(c.size()), minus(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    plus[i] = c[i] + scale * v[i];
    minus[i] = c[i] - scale * v[i];
  }
  const double bound = 2.0 / lambda;
  const double dp = linalg::squared_distance(linalg::normalized(plus), c);
  const double dm = linalg::squared_distance(linalg::normalized(minus), c);
  return std::max(dp, dm) - bound;
}

bool check_distance_lemma(std::span<const double> c, std::span<const double> v, double lambda) {
  return distance_lemma_excess(c, v, lambda) <= 1e-12;
}

}  // namespace banditvn::oracle2d
