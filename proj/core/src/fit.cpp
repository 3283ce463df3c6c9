#include "banditvn/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "banditvn/error.hpp"

namespace banditvn::fit {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::PowerLaw:
      return "powerlaw";
    case Model::PolyLog:
      return "polylog";
    case Model::Linear:
      return "linear";
    case Model::Quadratic:
      return "quadratic";
  }
  return "unknown";
}

Model parse_model(std::string_view name) {
  if (name == "powerlaw") return Model::PowerLaw;
  if (name == "polylog") return Model::PolyLog;
  if (name == "linear") return Model::Linear;
  if (name == "quadratic") return Model::Quadratic;
  throw FitError("unknown model '" + std::string(name) +
                 "' (expected powerlaw, polylog, linear or quadratic)");
}

double FitResult::predict(double t) const {
  switch (model) {
    case Model::PowerLaw:
      return params[0] * std::pow(t, params[1]);
    case Model::PolyLog: {
      const double l = std::log(t);
      return params[0] * l * l;
    }
    case Model::Linear:
      return params[0] * t;
    case Model::Quadratic:
      return params[0] * t * t;
  }
  return 0.0;
}

namespace {

double feature(Model model, double t) {
  switch (model) {
    case Model::PolyLog: {
      const double l = std::log(t);
      return l * l;
    }
    case Model::Linear:
      return t;
    case Model::Quadratic:
      return t * t;
    case Model::PowerLaw:
      break;
  }
  return 0.0;
}

double r_squared(std::span<const double> obs, std::span<const double> pred) {
  double mean = 0.0;
  for (double v : obs) mean += v;
  mean /= static_cast<double>(obs.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    ss_tot += (obs[i] - mean) * (obs[i] - mean);
    ss_res += (obs[i] - pred[i]) * (obs[i] - pred[i]);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

}  // namespace

FitResult fit_curve(std::span<const double> t, std::span<const double> y, Model model,
                    double t_lo, double t_hi) {
  if (t.size() != y.size()) throw FitError("fit: t and y differ in length");
  if (model == Model::PolyLog && t_lo < 2.0) throw FitError("fit: polylog needs t_lo >= 2");
  if (model == Model::PowerLaw && !(t_lo > 0.0)) throw FitError("fit: powerlaw needs t_lo > 0");

  std::vector<double> ts, ys;
  std::string bad_rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (model == Model::PowerLaw && !(y[i] > 0.0)) {
      if (!bad_rows.empty()) bad_rows += ", ";
      bad_rows += std::to_string(i) + " (t=" + csv::format_real(t[i]) +
                  ", y=" + csv::format_real(y[i]) + ")";
      continue;
    }
    ts.push_back(t[i]);
    ys.push_back(y[i]);
  }
  if (!bad_rows.empty()) {
    throw FitError("fit: non-positive values in log-model range at rows " + bad_rows);
  }
  if (ts.size() < 2) throw FitError("fit: fewer than two rows in the fit range");

  FitResult out;
  out.model = model;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.points = ts.size();
  const double n = static_cast<double>(ts.size());

  if (model == Model::PowerLaw) {
    std::vector<double> lx(ts.size()), ly(ts.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      lx[i] = std::log(ts[i]);
      ly[i] = std::log(ys[i]);
      mx += lx[i];
      my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw FitError("fit: powerlaw needs at least two distinct t values");
    const double p = sxy / sxx;
    const double log_a = my - p * mx;
    out.params = {std::exp(log_a), p};
    std::vector<double> pred(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) pred[i] = log_a + p * lx[i];
    out.r_squared = r_squared(ly, pred);
    return out;
  }

  double sff = 0.0, sfy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double f = feature(model, ts[i]);
    sff += f * f;
    sfy += f * ys[i];
  }
  if (sff == 0.0) throw FitError("fit: degenerate feature over the fit range");
  out.params = {sfy / sff};
  std::vector<double> pred(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) pred[i] = out.params[0] * feature(model, ts[i]);
  out.r_squared = r_squared(ys, pred);
  return out;
}

std::vector<double> aggregate_column(const harness::AggregateTrace& trace,
                                     std::string_view column) {
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const auto& r : trace.rows) {
    if (column == "batch") out.push_back(static_cast<double>(r.batch));
    else if (column == "step") out.push_back(static_cast<double>(r.step));
    else if (column == "mean_cum_regret") out.push_back(r.mean_cum_regret);
    else if (column == "std_cum_regret") out.push_back(r.std_cum_regret);
    else if (column == "mean_lambda_min") out.push_back(r.mean_lambda_min);
    else if (column == "mean_lambda_max") out.push_back(r.mean_lambda_max);
    else if (column == "confidence_fraction") out.push_back(r.confidence_fraction);
    else throw FitError("unknown aggregate column '" + std::string(column) + "'");
  }
  return out;
}

FitResult fit_curve(const harness::AggregateTrace& trace, std::string_view column, Model model,
                    double t_lo, double t_hi) {
  const auto t = aggregate_column(trace, "batch");
  const auto y = aggregate_column(trace, column);
  return fit_curve(t, y, model, t_lo, t_hi);
}

FitResult fit_curve(const csv::Table& table, std::string_view column, Model model, double t_lo,
                    double t_hi, std::string_view t_column) {
  std::vector<double> t, y;
  try {
    t = table.column(t_column);
    y = table.column(column);
  } catch (const IoError& e) {
    throw FitError(e.what());
  }
  return fit_curve(t, y, model, t_lo, t_hi);
}

}  // namespace banditvn::fit
