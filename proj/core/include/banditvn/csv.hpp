#pragma once

// Flat-file output. Reals use 17 significant digits so values survive a
// write/read cycle exactly; booleans are 0/1; LF line endings. Every file
// is written to "<path>.tmp" and renamed into place.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "banditvn/harness.hpp"

namespace banditvn::csv {

inline constexpr std::string_view kTraceHeader =
    "run_id,batch,step,cum_regret,lambda_min,lambda_max,beta,in_confidence,weight";
inline constexpr std::string_view kAggregateHeader =
    "batch,step,mean_cum_regret,std_cum_regret,mean_lambda_min,mean_lambda_max,"
    "confidence_fraction";
inline constexpr std::string_view kRunStatusHeader =
    "run_id,seed,status,batches_completed,final_cum_regret,always_in_confidence,message";

std::string format_real(double x);

std::string trace_csv(const std::vector<harness::RunTrace>& runs);
std::string aggregate_csv(const harness::AggregateTrace& aggregate);
std::string run_status_csv(const std::vector<harness::RunTrace>& runs);

// Atomic write: temp file then rename. Throws IoError with the path.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

void emit_trace_csv(const std::vector<harness::RunTrace>& runs, const std::filesystem::path& path);
void emit_aggregate_csv(const harness::AggregateTrace& aggregate,
                        const std::filesystem::path& path);

// A parsed numeric CSV: named columns of doubles.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of `name` in the header; throws IoError when missing.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

Table parse_table(std::string_view text);
Table read_table(const std::filesystem::path& path);

harness::AggregateTrace aggregate_from_table(const Table& table);
harness::AggregateTrace read_aggregate_csv(const std::filesystem::path& path);

}  // namespace banditvn::csv
