#include "banditstat/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "banditstat/detail/format.hpp"
#include "banditstat/errors.hpp"

namespace banditstat {
namespace {

using detail::format_double;
using detail::format_double_full;

constexpr const char* kTrialLogHeader = "sim_id,t,arm,reward,pi1";
constexpr const char* kSummaryHeader =
    "policy,p1,p2,n,n_sims,test,params,reject_rate,se,undefined_count";
constexpr const char* kDiagnosticsHeader =
    "policy,p1,p2,method,arm,mean_estimate,bias,se_estimate,mean_wald,median_wald,se_wald";
constexpr const char* kHistogramHeader = "policy,p1,p2,n,n_sims,bin_lo,bin_hi,proportion";
constexpr const char* kRewardHeader = "policy,p1,p2,n,n_sims,mean_reward,se";

using detail::csv_escape;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

[[noreturn]] void parse_fail(const char* file_kind, std::size_t row, const char* column,
                             const std::string& detail) {
  throw DataIntegrityError(std::string(file_kind) + ": row " + std::to_string(row) +
                           ", column '" + column + "': " + detail);
}

long long parse_int_field(const char* file_kind, std::size_t row, const char* column,
                          const std::string& text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(file_kind, row, column, "expected integer, got '" + text + "'");
  }
  return v;
}

double parse_double_field(const char* file_kind, std::size_t row, const char* column,
                          const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(file_kind, row, column, "expected number, got '" + text + "'");
  }
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_trial_log_header(std::ostream& out) { out << kTrialLogHeader << '\n'; }

void append_trial_log(std::ostream& out, int sim_id, std::span<const StepRecord> steps) {
  for (const StepRecord& s : steps) {
    out << sim_id << ',' << s.t << ',' << static_cast<int>(s.arm) << ','
        << static_cast<int>(s.reward) << ',' << format_double_full(s.pi1) << '\n';
  }
}

std::vector<ParsedTrialLog> parse_trial_log_csv(std::istream& in) {
  constexpr const char* kKind = "trial log";
  std::string line;
  if (!std::getline(in, line)) throw DataIntegrityError("trial log: empty file");
  if (strip_cr(line) != kTrialLogHeader) {
    throw DataIntegrityError("trial log: row 1: expected header '" +
                             std::string(kTrialLogHeader) + "', got '" + strip_cr(line) + "'");
  }
  std::vector<ParsedTrialLog> logs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != 5) {
      throw DataIntegrityError("trial log: row " + std::to_string(row) + ": expected 5 fields, got " +
                               std::to_string(fields.size()));
    }
    long long sim_id = parse_int_field(kKind, row, "sim_id", fields[0]);
    long long t = parse_int_field(kKind, row, "t", fields[1]);
    long long arm = parse_int_field(kKind, row, "arm", fields[2]);
    long long reward = parse_int_field(kKind, row, "reward", fields[3]);
    double pi1 = parse_double_field(kKind, row, "pi1", fields[4]);
    if (arm != 1 && arm != 2) parse_fail(kKind, row, "arm", "must be 1 or 2");
    if (reward != 0 && reward != 1) parse_fail(kKind, row, "reward", "must be 0 or 1");
    if (!(pi1 >= 0.0 && pi1 <= 1.0)) parse_fail(kKind, row, "pi1", "must lie in [0, 1]");
    if (t < 1) parse_fail(kKind, row, "t", "must be >= 1");
    if (logs.empty() || logs.back().sim_id != static_cast<int>(sim_id)) {
      logs.push_back(ParsedTrialLog{static_cast<int>(sim_id), {}});
    }
    StepRecord step;
    step.t = static_cast<std::int32_t>(t);
    step.arm = static_cast<std::int8_t>(arm);
    step.reward = static_cast<std::int8_t>(reward);
    step.pi1 = pi1;
    logs.back().steps.push_back(step);
  }
  return logs;
}

void write_calibration_json(std::ostream& out, const CalibrationRecord& record) {
  nlohmann::ordered_json j;
  j["null_p"] = record.critical.calibration_null_p;
  j["n"] = record.critical.calibration_n;
  j["policy"] = record.policy_label;
  j["n_sims"] = record.critical.calibration_sims;
  j["alpha"] = record.alpha;
  j["lower"] = record.critical.lower;
  j["upper"] = record.critical.upper;
  j["undefined_excluded"] = record.critical.undefined_excluded;
  j["base_seed"] = record.base_seed;
  out << j.dump(2) << '\n';
}

CalibrationRecord parse_calibration_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataIntegrityError(std::string("calibration file: invalid JSON: ") + e.what());
  }
  CalibrationRecord record;
  try {
    record.critical.calibration_null_p = j.at("null_p").get<double>();
    record.critical.calibration_n = j.at("n").get<int>();
    record.policy_label = j.at("policy").get<std::string>();
    record.critical.calibration_sims = j.at("n_sims").get<int>();
    record.alpha = j.at("alpha").get<double>();
    record.critical.lower = j.at("lower").get<double>();
    record.critical.upper = j.at("upper").get<double>();
    record.critical.undefined_excluded = j.at("undefined_excluded").get<int>();
    record.base_seed = j.at("base_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataIntegrityError(std::string("calibration file: missing or mistyped field: ") +
                             e.what());
  }
  if (!(record.critical.lower < record.critical.upper)) {
    throw DataIntegrityError("calibration file: lower must be < upper");
  }
  return record;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << csv_escape(r.policy) << ',' << format_double(r.p1) << ',' << format_double(r.p2) << ','
        << r.n << ',' << r.n_sims << ',' << csv_escape(r.test) << ',' << csv_escape(r.params)
        << ',' << format_double(r.reject_rate) << ',' << format_double(r.se) << ','
        << r.undefined_count << '\n';
  }
}

std::vector<SummaryRow> parse_summary_csv(std::istream& in) {
  constexpr const char* kKind = "summary csv";
  std::string line;
  if (!std::getline(in, line)) throw DataIntegrityError("summary csv: empty file");
  if (strip_cr(line) != kSummaryHeader) {
    throw DataIntegrityError("summary csv: row 1: unexpected header '" + strip_cr(line) + "'");
  }
  std::vector<SummaryRow> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != 10) {
      throw DataIntegrityError("summary csv: row " + std::to_string(row) +
                               ": expected 10 fields, got " + std::to_string(fields.size()));
    }
    SummaryRow r;
    r.policy = fields[0];
    r.p1 = parse_double_field(kKind, row, "p1", fields[1]);
    r.p2 = parse_double_field(kKind, row, "p2", fields[2]);
    r.n = static_cast<int>(parse_int_field(kKind, row, "n", fields[3]));
    r.n_sims = static_cast<int>(parse_int_field(kKind, row, "n_sims", fields[4]));
    r.test = fields[5];
    r.params = fields[6];
    r.reject_rate = parse_double_field(kKind, row, "reject_rate", fields[7]);
    r.se = parse_double_field(kKind, row, "se", fields[8]);
    r.undefined_count = static_cast<int>(parse_int_field(kKind, row, "undefined_count", fields[9]));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string method_name(EstimatorMethod method) {
  return method == EstimatorMethod::MLE ? "mle" : "ipw";
}

std::string detail::csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsCsvRow> rows) {
  out << kDiagnosticsHeader << '\n';
  for (const DiagnosticsCsvRow& r : rows) {
    out << csv_escape(r.policy) << ',' << format_double(r.p1) << ',' << format_double(r.p2) << ','
        << r.method << ',' << r.row.arm << ',' << format_double(r.row.mean_estimate) << ','
        << format_double(r.row.bias) << ',' << format_double(r.row.se_estimate) << ','
        << format_double(r.row.mean_wald) << ',' << format_double(r.row.median_wald) << ','
        << format_double(r.row.se_wald) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramCsvRow> rows) {
  out << kHistogramHeader << '\n';
  for (const HistogramCsvRow& r : rows) {
    for (std::size_t b = 0; b < r.proportions.size(); ++b) {
      out << csv_escape(r.policy) << ',' << format_double(r.p1) << ',' << format_double(r.p2) << ',' << r.n
          << ',' << r.n_sims << ',' << format_double(kAssignmentHistEdges[b]) << ','
          << format_double(kAssignmentHistEdges[b + 1]) << ',' << format_double(r.proportions[b])
          << '\n';
    }
  }
}

void write_reward_csv(std::ostream& out, std::span<const RewardCsvRow> rows) {
  out << kRewardHeader << '\n';
  for (const RewardCsvRow& r : rows) {
    out << csv_escape(r.policy) << ',' << format_double(r.p1) << ',' << format_double(r.p2) << ',' << r.n
        << ',' << r.n_sims << ',' << format_double(r.mean_reward) << ',' << format_double(r.se)
        << '\n';
  }
}

}  // namespace banditstat
