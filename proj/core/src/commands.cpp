#include "banditstat/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "banditstat/detail/format.hpp"
#include "banditstat/errors.hpp"

namespace banditstat {
namespace {

using detail::format_double;

std::string percent_display(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", rate * 100.0);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

TestRequest parse_test_request(const nlohmann::json& j, const std::filesystem::path& config_dir) {
  TestRequest req;
  std::string type = j.at("type").get<std::string>();
  if (type == "wald") {
    req.kind = TestRequest::Kind::WaldMle;
    req.critical = j.value("critical", 1.96);
  } else if (type == "wald_ipw") {
    req.kind = TestRequest::Kind::WaldIpw;
    req.critical = j.value("critical", 1.96);
  } else if (type == "welch") {
    req.kind = TestRequest::Kind::Welch;
    req.alpha = j.value("alpha", 0.05);
  } else if (type == "bf") {
    req.kind = TestRequest::Kind::BayesFactor;
    req.cutoff = j.value("cutoff", 3.0);
    req.prior_alpha = j.value("prior_alpha", 1.0);
    req.prior_beta = j.value("prior_beta", 1.0);
    req.normalized = j.value("normalized", false);
  } else if (type == "wald_cal") {
    req.kind = TestRequest::Kind::CalibratedWald;
    std::filesystem::path p = j.at("calibration").get<std::string>();
    if (p.is_relative()) p = config_dir / p;
    req.calibration_file = p.string();
  } else {
    throw DataIntegrityError("run config: unknown test type '" + type + "'");
  }
  return req;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& config_dir) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataIntegrityError(std::string("run config: invalid JSON: ") + e.what());
  }
  RunConfig config;
  try {
    config.base_seed = j.value("base_seed", std::uint64_t{1});
    config.n_sims = j.value("n_sims", 1);
    config.workers = j.value("workers", 0);
    if (j.contains("write_logs")) config.write_logs = j.at("write_logs").get<bool>();
    for (const auto& cj : j.at("cells")) {
      CellConfig cell;
      cell.env.p1 = cj.at("p1").get<double>();
      cell.env.p2 = cj.at("p2").get<double>();
      cell.env.horizon = cj.at("n").get<int>();
      cell.policy = parse_policy_spec(cj.at("policy").get<std::string>());
      cell.env.validate();
      config.cells.push_back(cell);
    }
    if (j.contains("tests")) {
      for (const auto& tj : j.at("tests")) {
        config.tests.push_back(parse_test_request(tj, config_dir));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataIntegrityError(std::string("run config: missing or mistyped field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataIntegrityError(std::string("run config: ") + e.what());
  }
  if (config.cells.empty()) throw DataIntegrityError("run config: no cells");
  if (config.n_sims < 1) throw DataIntegrityError("run config: n_sims must be >= 1");
  return config;
}

TestOutcome apply_test(const TestRequest& req, const SimStats& sim, const CalibrationRecord* cal) {
  switch (req.kind) {
    case TestRequest::Kind::WaldMle:
      return wald_test(wald_statistic(mle_estimate(sim.counts), sim.counts), req.critical, "wald");
    case TestRequest::Kind::WaldIpw:
      return wald_test(wald_statistic(ipw_estimate_of(sim), sim.counts), req.critical,
                       "wald_ipw");
    case TestRequest::Kind::Welch:
      return welch_test(sim.counts, req.alpha);
    case TestRequest::Kind::BayesFactor: {
      double bf = bayes_factor(sim.counts, req.prior_alpha, req.prior_beta, req.normalized);
      TestOutcome out = bf_test(bf, req.cutoff);
      if (req.prior_alpha != 1.0 || req.prior_beta != 1.0) {
        out.params += ";prior=" + format_double(req.prior_alpha) + "," +
                      format_double(req.prior_beta);
      }
      if (req.normalized) out.params += ";normalized";
      return out;
    }
    case TestRequest::Kind::CalibratedWald: {
      if (cal == nullptr) {
        throw std::invalid_argument("apply_test: calibrated test without a calibration record");
      }
      return wald_test(wald_statistic(mle_estimate(sim.counts), sim.counts), cal->critical,
                       "wald_cal");
    }
  }
  throw std::invalid_argument("apply_test: unknown test kind");
}

void run_command(const RunConfig& config, const std::filesystem::path& out_dir) {
  if (config.cells.empty()) throw std::invalid_argument("run_command: no cells configured");
  if (config.n_sims < 1) throw std::invalid_argument("run_command: n_sims must be >= 1");
  for (const CellConfig& cell : config.cells) {
    cell.env.validate();
    cell.policy.validate();
  }

  // Calibration files must all resolve before any simulation starts.
  std::map<std::string, CalibrationRecord> calibrations;
  for (const TestRequest& req : config.tests) {
    if (req.kind != TestRequest::Kind::CalibratedWald) continue;
    if (calibrations.count(req.calibration_file)) continue;
    auto in = open_input(req.calibration_file);
    calibrations.emplace(req.calibration_file, parse_calibration_json(in));
  }

  std::filesystem::create_directories(out_dir);
  bool logs = config.should_write_logs();
  if (logs) std::filesystem::create_directories(out_dir / "logs");

  std::vector<SummaryRow> summary_rows;
  std::vector<DiagnosticsCsvRow> diagnostics_rows;
  std::vector<HistogramCsvRow> histogram_rows;
  std::vector<RewardCsvRow> reward_rows;

  for (std::size_t ci = 0; ci < config.cells.size(); ++ci) {
    const CellConfig& cell = config.cells[ci];
    std::string cell_name = "cell " + std::to_string(ci) + " (" + cell.policy.label() +
                            " @ p1=" + format_double(cell.env.p1) +
                            ",p2=" + format_double(cell.env.p2) +
                            ",n=" + std::to_string(cell.env.horizon) + ")";
    try {
      CellData data = simulate_cell(cell.env, cell.policy, config.n_sims, config.base_seed,
                                    static_cast<std::uint64_t>(ci), config.workers);

      for (const TestRequest& req : config.tests) {
        const CalibrationRecord* cal = nullptr;
        if (req.kind == TestRequest::Kind::CalibratedWald) {
          cal = &calibrations.at(req.calibration_file);
        }
        std::vector<TestOutcome> outcomes;
        outcomes.reserve(data.sims.size());
        for (const SimStats& sim : data.sims) outcomes.push_back(apply_test(req, sim, cal));
        RateSummary rate = reject_rate_summary(outcomes);
        SummaryRow row;
        row.policy = cell.policy.label();
        row.p1 = cell.env.p1;
        row.p2 = cell.env.p2;
        row.n = cell.env.horizon;
        row.n_sims = config.n_sims;
        row.test = outcomes.front().test;
        row.params = outcomes.front().params;
        row.reject_rate = rate.rate;
        row.se = rate.se;
        row.undefined_count = rate.undefined_count;
        summary_rows.push_back(std::move(row));
      }

      std::vector<Estimate> mle, ipw;
      std::vector<std::optional<double>> wald_mle, wald_ipw;
      std::vector<double> final_pi, rewards;
      mle.reserve(data.sims.size());
      ipw.reserve(data.sims.size());
      for (const SimStats& sim : data.sims) {
        mle.push_back(mle_estimate(sim.counts));
        ipw.push_back(ipw_estimate_of(sim));
        wald_mle.push_back(wald_statistic(mle.back(), sim.counts));
        wald_ipw.push_back(wald_statistic(ipw.back(), sim.counts));
        final_pi.push_back(sim.final_pi1);
        rewards.push_back(sim.mean_reward);
      }
      for (auto& row : bias_table(mle, wald_mle, cell.env)) {
        diagnostics_rows.push_back({cell.policy.label(), cell.env.p1, cell.env.p2,
                                    method_name(EstimatorMethod::MLE), std::move(row)});
      }
      for (auto& row : bias_table(ipw, wald_ipw, cell.env)) {
        diagnostics_rows.push_back({cell.policy.label(), cell.env.p1, cell.env.p2,
                                    method_name(EstimatorMethod::IPW), std::move(row)});
      }
      HistogramCsvRow hist;
      hist.policy = cell.policy.label();
      hist.p1 = cell.env.p1;
      hist.p2 = cell.env.p2;
      hist.n = cell.env.horizon;
      hist.n_sims = config.n_sims;
      hist.proportions = assignment_prob_histogram(final_pi);
      histogram_rows.push_back(std::move(hist));
      RewardSummary reward = mean_reward_summary(rewards);
      reward_rows.push_back({cell.policy.label(), cell.env.p1, cell.env.p2, cell.env.horizon,
                             config.n_sims, reward.mean, reward.se});

      if (logs) {
        char name[32];
        std::snprintf(name, sizeof(name), "cell_%03zu.csv", ci);
        auto out = open_output(out_dir / "logs" / name);
        write_trial_log_header(out);
        for (int i = 0; i < config.n_sims; ++i) {
          RngStream stream = derive_stream(config.base_seed, static_cast<std::uint64_t>(ci),
                                           static_cast<std::uint64_t>(i));
          TrialLog log = run_trial(cell.env, cell.policy, stream);
          append_trial_log(out, i, log.steps);
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(cell_name + ": " + e.what());
    }
  }

  {
    auto out = open_output(out_dir / "summary.csv");
    write_summary_csv(out, summary_rows);
  }
  {
    auto out = open_output(out_dir / "diagnostics.csv");
    write_diagnostics_csv(out, diagnostics_rows);
  }
  {
    auto out = open_output(out_dir / "assignment_hist.csv");
    write_histogram_csv(out, histogram_rows);
  }
  {
    auto out = open_output(out_dir / "reward.csv");
    write_reward_csv(out, reward_rows);
  }
}

CriticalValues calibrate_command(double null_p, int n, const PolicySpec& policy, int n_sims,
                                 double alpha, std::uint64_t base_seed,
                                 const std::filesystem::path& out_file, int workers) {
  EnvSpec env{null_p, null_p, n};
  CriticalValues cv = calibrate_critical_values(env, policy, n_sims, alpha, base_seed, workers);
  CalibrationRecord record;
  record.critical = cv;
  record.policy_label = policy.label();
  record.alpha = alpha;
  record.base_seed = base_seed;
  auto out = open_output(out_file);
  write_calibration_json(out, record);
  return cv;
}

namespace {

nlohmann::ordered_json outcome_json(const TestOutcome& o) {
  nlohmann::ordered_json j;
  j["test"] = o.test;
  j["params"] = o.params;
  j["statistic"] = o.statistic ? nlohmann::ordered_json(*o.statistic) : nullptr;
  j["reject"] = o.reject;
  j["undefined"] = o.undefined;
  j["p_value"] = o.p_value ? nlohmann::ordered_json(*o.p_value) : nullptr;
  j["critical_lower"] = o.critical_lower ? nlohmann::ordered_json(*o.critical_lower) : nullptr;
  j["critical_upper"] = o.critical_upper ? nlohmann::ordered_json(*o.critical_upper) : nullptr;
  return j;
}

nlohmann::ordered_json estimate_json(const Estimate& e) {
  nlohmann::ordered_json j;
  j["p1"] = e.p1 ? nlohmann::ordered_json(*e.p1) : nullptr;
  j["p2"] = e.p2 ? nlohmann::ordered_json(*e.p2) : nullptr;
  return j;
}

}  // namespace

void analyze_command(const std::filesystem::path& log_file,
                     const std::optional<std::filesystem::path>& calibration_file,
                     const std::filesystem::path& out_file) {
  auto in = open_input(log_file);
  std::vector<ParsedTrialLog> logs = parse_trial_log_csv(in);
  if (logs.empty()) throw DataIntegrityError("analyze: log file contains no steps");
  if (logs.size() != 1) {
    throw DataIntegrityError("analyze: expected a single sim_id, found " +
                             std::to_string(logs.size()));
  }
  const ParsedTrialLog& log = logs.front();
  ArmCounts counts = summarize(std::span(log.steps));
  Estimate mle = mle_estimate(counts);
  Estimate ipw = ipw_estimate(std::span(log.steps));

  std::vector<TestOutcome> tests;
  tests.push_back(wald_test(wald_statistic(mle, counts), 1.96, "wald"));
  tests.push_back(wald_test(wald_statistic(ipw, counts), 1.96, "wald_ipw"));
  tests.push_back(welch_test(counts, 0.05));
  for (double cutoff : {3.0, 1.0, 0.4}) {
    tests.push_back(bf_test(bayes_factor(counts), cutoff));
  }
  if (calibration_file) {
    auto cal_in = open_input(*calibration_file);
    CalibrationRecord cal = parse_calibration_json(cal_in);
    tests.push_back(wald_test(wald_statistic(mle, counts), cal.critical, "wald_cal"));
  }

  nlohmann::ordered_json j;
  j["sim_id"] = log.sim_id;
  j["n"] = log.steps.size();
  j["counts"] = {{"n1", counts.n1}, {"s1", counts.s1}, {"n2", counts.n2}, {"s2", counts.s2}};
  j["estimates"]["mle"] = estimate_json(mle);
  j["estimates"]["ipw"] = estimate_json(ipw);
  j["tests"] = nlohmann::ordered_json::array();
  for (const TestOutcome& t : tests) j["tests"].push_back(outcome_json(t));

  auto out = open_output(out_file);
  out << j.dump(2) << '\n';
}

void report_command(const std::filesystem::path& in_dir, const std::string& format,
                    std::ostream& out) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("report: format must be 'csv' or 'json'");
  }
  auto in = open_input(in_dir / "summary.csv");
  std::vector<SummaryRow> rows = parse_summary_csv(in);
  if (format == "csv") {
    out << "policy,p1,p2,n,n_sims,test,params,reject_rate,se,undefined_count,reject_rate_pct\n";
    for (const SummaryRow& r : rows) {
      out << detail::csv_escape(r.policy) << ',' << format_double(r.p1) << ','
          << format_double(r.p2) << ',' << r.n << ',' << r.n_sims << ','
          << detail::csv_escape(r.test) << ',' << detail::csv_escape(r.params) << ','
          << format_double(r.reject_rate) << ',' << format_double(r.se) << ','
          << r.undefined_count << ',' << percent_display(r.reject_rate) << '\n';
    }
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SummaryRow& r : rows) {
    nlohmann::ordered_json j;
    j["policy"] = r.policy;
    j["p1"] = r.p1;
    j["p2"] = r.p2;
    j["n"] = r.n;
    j["n_sims"] = r.n_sims;
    j["test"] = r.test;
    j["params"] = r.params;
    j["reject_rate"] = r.reject_rate;
    j["se"] = r.se;
    j["undefined_count"] = r.undefined_count;
    j["reject_rate_pct"] = percent_display(r.reject_rate);
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace banditstat
