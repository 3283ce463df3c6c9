#pragma once

// Scaling-law fits for traces.
//
//   PowerLaw   y = a t^p    least squares on (ln t, ln y)
//   PolyLog    y = c ln(t)^2
//   Linear     y = s t
//   Quadratic  y = q t^2
//
// The last three are zero-intercept least squares on the single transformed
// feature. Logarithms are natural.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banditvn/csv.hpp"
#include "banditvn/harness.hpp"

namespace banditvn::fit {

enum class Model { PowerLaw, PolyLog, Linear, Quadratic };

std::string_view to_string(Model model);
Model parse_model(std::string_view name);

struct FitResult {
  Model model = Model::Linear;
  // PowerLaw: {a, p}. Others: {coefficient}.
  std::vector<double> params;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;

  double predict(double t) const;
};

// Fits rows with t_lo <= t <= t_hi. Throws FitError when fewer than two rows
// fall in range, when t_lo < 2 for PolyLog, or when a PowerLaw range holds
// non-positive values (the message names the offending rows).
FitResult fit_curve(std::span<const double> t, std::span<const double> y, Model model,
                    double t_lo, double t_hi);

// Uses the batch index as t. `column` is an aggregate column name.
FitResult fit_curve(const harness::AggregateTrace& trace, std::string_view column, Model model,
                    double t_lo, double t_hi);
FitResult fit_curve(const csv::Table& table, std::string_view column, Model model, double t_lo,
                    double t_hi, std::string_view t_column = "batch");

std::vector<double> aggregate_column(const harness::AggregateTrace& trace, std::string_view column);

}  // namespace banditvn::fit
