#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pooltrace/cost.hpp"
#include "pooltrace/sim.hpp"

namespace pooltrace::cli {

/// 17 significant digits, so the text reads back to the same double.
std::string format_real(double value);

/// Comma-separated list of reals or integers; throws ParameterError.
std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

/// One (model, weights) combination of a sweep.
struct SweepPoint {
  ModelParams params;
  PenaltyWeights weights;
};

/// Parsed sweep configuration: fixed values plus optional list-valued axes.
///
/// Points are the cartesian product of the axes in the order
/// N, r, k, lambda1, lambda2 (N outermost).
struct ExperimentConfig {
  ModelParams params;
  PenaltyWeights weights;
  int replicates = 100000;
  std::uint64_t seed = 0;
  bool shared_state = true;
  bool common_noise = true;
  std::optional<std::string> output;

  std::optional<std::vector<int>> contacts_axis;
  std::optional<std::vector<double>> r_axis;
  std::optional<std::vector<double>> k_axis;
  std::optional<std::vector<double>> lambda1_axis;
  std::optional<std::vector<double>> lambda2_axis;

  std::vector<SweepPoint> points() const;
};

/// Defaults shared by the presets: r = 2.5, k = 0.1, se = sp = 0.95.
ExperimentConfig default_config();

/// Flat `key = value` text; '#' starts a comment. Unknown or repeated keys
/// are rejected with ParameterError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Named experiment families: fig1 (N axis), fig2 (r x k grid at three N),
/// fig3 (lambda axes at N = 100 for three test accuracies).
std::vector<SweepPoint> preset_points(std::string_view name);

struct SweepRow {
  SweepPoint point;
  ExperimentSummary summary;
};

std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, const ExperimentOptions& options);

/// CSV header, then two rows (ours, dorfman) per sweep point in input order.
std::string sweep_csv(const std::vector<SweepRow>& rows, const ExperimentOptions& options);
std::string sweep_json(const std::vector<SweepRow>& rows, const ExperimentOptions& options);

std::vector<std::string> sweep_csv_header();

/// Entry point for the `pooltrace` tool; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pooltrace::cli
