#include <sstream>

#include "json.hpp"
#include "pooltrace/cli.hpp"

namespace pooltrace::cli {

namespace {

constexpr const char* kOurs = "ours";
constexpr const char* kDorfman = "dorfman";

std::string percentile_label(int pct) { return "savings_p" + std::to_string(pct); }

void append_row(std::ostringstream& csv, const SweepRow& row, const MethodSummary& m,
                const char* method, bool with_savings, const ExperimentOptions& options) {
  const auto& p = row.point.params;
  const auto& w = row.point.weights;
  const double contacts = p.contacts;
  csv << p.contacts << ',' << format_real(p.negbin.r) << ',' << format_real(p.negbin.k) << ','
      << format_real(p.tests.sensitivity) << ',' << format_real(p.tests.specificity) << ','
      << format_real(w.false_negative) << ',' << format_real(w.false_positive) << ',' << method << ','
      << format_real(m.mean_tests_per_contact) << ',' << format_real(m.mean_pool_size) << ','
      << format_real(m.fn_rate) << ',' << format_real(m.fp_rate);
  for (std::size_t i = 0; i < std::size(kSavingsPercentiles); ++i) {
    csv << ',';
    if (with_savings) {
      csv << format_real(row.summary.savings_quantiles[i]);
    }
  }
  csv << ',' << options.replicates << ',' << options.seed << ','
      << format_real(m.expected_tests / contacts) << ','
      << format_real(m.expected_false_negatives / contacts) << ','
      << format_real(m.expected_false_positives / contacts) << ",\"" << m.design.to_string() << "\"\n";
}

nlohmann::json method_json(const MethodSummary& m) {
  return {
      {"pools", m.design.sizes},
      {"mean_pool_size", m.mean_pool_size},
      {"mean_tests_per_contact", m.mean_tests_per_contact},
      {"tests_p5", m.tests_p5},
      {"tests_p95", m.tests_p95},
      {"fn_rate", m.fn_rate},
      {"fp_rate", m.fp_rate},
      {"expected_tests", m.expected_tests},
      {"expected_false_negatives", m.expected_false_negatives},
      {"expected_false_positives", m.expected_false_positives},
  };
}

}  // namespace

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const ExperimentOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& point : points) {
    auto experiment = run_paired_experiment(point.params, point.weights, options);
    rows.push_back(SweepRow{point, std::move(experiment.summary)});
  }
  return rows;
}

std::vector<std::string> sweep_csv_header() {
  std::vector<std::string> header = {"N",      "r",        "k",
                                     "s_e",    "s_p",      "lambda1",
                                     "lambda2", "method",  "mean_tests_per_contact",
                                     "mean_pool_size", "fn_rate", "fp_rate"};
  for (int pct : kSavingsPercentiles) {
    header.push_back(percentile_label(pct));
  }
  for (const char* extra : {"replicates", "seed", "expected_tests_per_contact", "expected_fn_rate",
                            "expected_fp_rate", "pools"}) {
    header.emplace_back(extra);
  }
  return header;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const ExperimentOptions& options) {
  std::ostringstream csv;
  const auto header = sweep_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    csv << (i ? "," : "") << header[i];
  }
  csv << '\n';
  for (const auto& row : rows) {
    append_row(csv, row, row.summary.ours, kOurs, true, options);
    append_row(csv, row, row.summary.baseline, kDorfman, false, options);
  }
  return csv.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentOptions& options) {
  auto out = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto& p = row.point.params;
    nlohmann::json savings = nlohmann::json::object();
    for (std::size_t i = 0; i < std::size(kSavingsPercentiles); ++i) {
      savings[percentile_label(kSavingsPercentiles[i])] = row.summary.savings_quantiles[i];
    }
    out.push_back({
        {"N", p.contacts},
        {"r", p.negbin.r},
        {"k", p.negbin.k},
        {"s_e", p.tests.sensitivity},
        {"s_p", p.tests.specificity},
        {"lambda1", row.point.weights.false_negative},
        {"lambda2", row.point.weights.false_positive},
        {"replicates", options.replicates},
        {"seed", options.seed},
        {kOurs, method_json(row.summary.ours)},
        {kDorfman, method_json(row.summary.baseline)},
        {"mean_savings", row.summary.mean_savings},
        {"fraction_negative_savings", row.summary.fraction_negative_savings},
        {"savings", savings},
    });
  }
  return out.dump(2) + "\n";
}

}  // namespace pooltrace::cli
