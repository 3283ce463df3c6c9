#include "banditvn/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "banditvn/error.hpp"

namespace banditvn::csv {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void append_record(std::string& out, const harness::BatchRecord& r) {
  out += std::to_string(r.run_id);
  out += ',';
  out += std::to_string(r.batch);
  out += ',';
  out += std::to_string(r.step);
  out += ',';
  out += format_real(r.cum_regret);
  out += ',';
  out += format_real(r.lambda_min);
  out += ',';
  out += format_real(r.lambda_max);
  out += ',';
  out += format_real(r.beta);
  out += ',';
  out += r.in_confidence ? '1' : '0';
  out += ',';
  out += format_real(r.weight);
  out += '\n';
}

// Messages go in the last column; keep them on one line and comma-free.
std::string sanitize(std::string_view msg) {
  std::string s(msg);
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string trace_csv(const std::vector<harness::RunTrace>& runs) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& run : runs) {
    for (const auto& rec : run.records) append_record(out, rec);
  }
  return out;
}

std::string aggregate_csv(const harness::AggregateTrace& aggregate) {
  std::string out(kAggregateHeader);
  out += '\n';
  for (const auto& row : aggregate.rows) {
    out += std::to_string(row.batch);
    out += ',';
    out += std::to_string(row.step);
    for (double v : {row.mean_cum_regret, row.std_cum_regret, row.mean_lambda_min,
                     row.mean_lambda_max, row.confidence_fraction}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

std::string run_status_csv(const std::vector<harness::RunTrace>& runs) {
  std::string out(kRunStatusHeader);
  out += '\n';
  for (const auto& run : runs) {
    out += std::to_string(run.run_id) + ',' + std::to_string(run.seed) + ',' +
           (run.status == harness::RunStatus::Ok ? "ok" : "failed") + ',' +
           std::to_string(run.batches_completed) + ',' + format_real(run.final_cum_regret) + ',' +
           (run.always_in_confidence ? "1" : "0") + ',' + sanitize(run.message) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string());
  }
}

void emit_trace_csv(const std::vector<harness::RunTrace>& runs, const std::filesystem::path& path) {
  write_file_atomic(path, trace_csv(runs));
}

void emit_aggregate_csv(const harness::AggregateTrace& aggregate,
                        const std::filesystem::path& path) {
  write_file_atomic(path, aggregate_csv(aggregate));
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw IoError("column '" + std::string(name) + "' not found");
}

std::vector<double> Table::column(std::string_view name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

Table parse_table(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(table.header.size()) + " fields, got " +
                    std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      const std::string cell(c);
      char* parse_end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &parse_end);
      if (cell.empty() || parse_end != cell.c_str() + cell.size()) {
        throw IoError("line " + std::to_string(line_no) + ": non-numeric field '" + cell + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw IoError("CSV has no header row");
  return table;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_table(ss.str());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

harness::AggregateTrace aggregate_from_table(const Table& table) {
  const std::size_t ib = table.column_index("batch");
  const std::size_t is = table.column_index("step");
  const std::size_t ir = table.column_index("mean_cum_regret");
  const std::size_t isd = table.column_index("std_cum_regret");
  const std::size_t imin = table.column_index("mean_lambda_min");
  const std::size_t imax = table.column_index("mean_lambda_max");
  const std::size_t ic = table.column_index("confidence_fraction");
  harness::AggregateTrace out;
  out.rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    harness::AggregateRow r;
    r.batch = static_cast<std::size_t>(row[ib]);
    r.step = static_cast<std::size_t>(row[is]);
    r.mean_cum_regret = row[ir];
    r.std_cum_regret = row[isd];
    r.mean_lambda_min = row[imin];
    r.mean_lambda_max = row[imax];
    r.confidence_fraction = row[ic];
    out.rows.push_back(r);
  }
  return out;
}

harness::AggregateTrace read_aggregate_csv(const std::filesystem::path& path) {
  return aggregate_from_table(read_table(path));
}

}  // namespace banditvn::csv
