#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "cfeq/decision.hpp"
#include "cfeq/experiment.hpp"
#include "cfeq/sample.hpp"
#include "cfeq/thresholds.hpp"

namespace cfeq {

/// Comma-separated reals, one observation per line. A first row that does not
/// parse as numbers is taken as a header. Blank lines are skipped. Ragged
/// rows, non-numeric or non-finite cells, a column count different from
/// `expected_cols`, or fewer than two rows raise DataError naming the
/// (1-based) line and column.
[[nodiscard]] SampleMatrix parse_sample_csv(std::string_view text,
                                            std::optional<std::size_t> expected_cols = {});
[[nodiscard]] SampleMatrix read_sample_csv(const std::string& path,
                                           std::optional<std::size_t> expected_cols = {});

/// Columns example,family,gamma,n,p,q,param,delta,rejection_rate,trials,seed.
/// Reals use 6 decimals; rejection rates of exactly 0 or 1 print as "0" and
/// "1"; aborted cells print "NA" as the rate; q is empty outside independence.
[[nodiscard]] std::string format_results_csv(const ExperimentResult& result);
/// Throws DataError when the file cannot be written.
void write_results_csv(const ExperimentResult& result, const std::string& path);

[[nodiscard]] std::string report_to_json(const TestReport& report);
[[nodiscard]] std::string threshold_to_json(const ThresholdResult& result);

/// Writes `text` to `path`, or throws DataError.
void write_text_file(const std::string& path, const std::string& text);
/// Reads a whole file, or throws DataError.
[[nodiscard]] std::string read_text_file(const std::string& path);

}  // namespace cfeq
