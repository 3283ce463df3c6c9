#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "banditvn/csv.hpp"

namespace banditvn::svg {

struct PlotOptions {
  std::string x_column = "batch";
  std::vector<std::string> columns;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  int width = 800;
  int height = 500;
};

// Self-contained line chart: one <polyline> per column, axis ticks and a
// legend. On a log axis, rows with a non-positive coordinate are dropped.
std::string render_line_chart(const csv::Table& table, const PlotOptions& options);

void emit_svg(const csv::Table& table, const PlotOptions& options,
              const std::filesystem::path& path);

}  // namespace banditvn::svg
