#include "cfeq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cfeq/errors.hpp"

namespace cfeq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void data_error(std::size_t line, std::size_t col, const std::string& what) {
  std::ostringstream os;
  os << "line " << line;
  if (col > 0) os << ", column " << col;
  os << ": " << what;
  throw DataError(os.str());
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json kernel_json(const KernelSpec& k) {
  return {{"family", std::string(to_string(k.family))}, {"gamma", k.gamma}, {"scale", k.scale}};
}

}  // namespace

SampleMatrix parse_sample_csv(std::string_view text, std::optional<std::size_t> expected_cols) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first_content = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::vector<std::string_view> cells = split_cells(line);
    if (first_content) {
      first_content = false;
      bool numeric = true;
      for (std::string_view c : cells) numeric = numeric && parse_real(c).has_value();
      cols = cells.size();
      if (!numeric) {
        if (end == text.size()) break;
        continue;  // header
      }
    }
    if (cells.size() != cols) {
      data_error(line_no, 0, "expected " + std::to_string(cols) + " columns, found " +
                                 std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::optional<double> v = parse_real(cells[c]);
      if (!v) data_error(line_no, c + 1, "'" + std::string(cells[c]) + "' is not a number");
      if (!std::isfinite(*v)) data_error(line_no, c + 1, "value is not finite");
      values.push_back(*v);
    }
    ++rows;
    if (end == text.size()) break;
  }
  if (expected_cols && cols != *expected_cols && rows > 0) {
    data_error(1, 0, "expected " + std::to_string(*expected_cols) + " columns, found " +
                         std::to_string(cols));
  }
  if (rows < 2) {
    throw DataError("need at least two observations, found " + std::to_string(rows));
  }
  return {rows, cols, std::move(values)};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw DataError("error reading '" + path + "'");
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("error writing '" + path + "'");
}

SampleMatrix read_sample_csv(const std::string& path, std::optional<std::size_t> expected_cols) {
  try {
    return parse_sample_csv(read_text_file(path), expected_cols);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string format_results_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "example,family,gamma,n,p,q,param,delta,rejection_rate,trials,seed\n";
  for (const ExperimentRecord& r : result.records) {
    os << to_string(r.example) << ',' << to_string(r.kernel.family) << ',' << fixed6(r.kernel.gamma)
       << ',' << r.n << ',' << r.p << ',';
    if (r.q) os << *r.q;
    os << ',' << fixed6(r.param) << ',' << fixed6(r.delta) << ',';
    if (r.error) {
      os << "NA";
    } else if (r.rejections == 0) {
      os << '0';
    } else if (r.rejections == r.trials) {
      os << '1';
    } else {
      os << fixed6(r.rejection_rate);
    }
    os << ',' << r.trials << ',' << r.seed << '\n';
  }
  return os.str();
}

void write_results_csv(const ExperimentResult& result, const std::string& path) {
  write_text_file(path, format_results_csv(result));
}

std::string report_to_json(const TestReport& r) {
  nlohmann::json kernels = nlohmann::json::array();
  for (const KernelSpec& k : r.kernels) kernels.push_back(kernel_json(k));
  const nlohmann::json j = {
      {"hypothesis", std::string(to_string(r.hypothesis))},
      {"kernels", kernels},
      {"statistic", r.statistic},
      {"sigma_n", r.sigma_n},
      {"n", r.n},
      {"delta", r.delta},
      {"alpha", r.alpha},
      {"z_alpha", r.z_alpha},
      {"critical_value", r.critical_value},
      {"reject_null", r.reject_null},
      {"equivalence_declared", r.reject_null},
      {"degenerate_variance", r.degenerate_variance},
      {"moment_condition_caveat", r.moment_condition_caveat},
      {"energy_gamma_excluded", r.energy_gamma_excluded},
      {"threshold_provenance", std::string(to_string(r.threshold_provenance))},
  };
  return j.dump(2) + "\n";
}

std::string threshold_to_json(const ThresholdResult& r) {
  nlohmann::json j = {{"delta", r.delta}, {"method", std::string(to_string(r.method))}};
  j["b_used"] = r.b_used ? nlohmann::json(*r.b_used) : nlohmann::json(nullptr);
  j["estimated_error"] =
      r.estimated_error ? nlohmann::json(*r.estimated_error) : nlohmann::json(nullptr);
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  j["negative_warning"] = r.negative_warning;
  return j.dump(2) + "\n";
}

}  // namespace cfeq
