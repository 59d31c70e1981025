#include <algorithm>
#include <fstream>
#include <sstream>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pooltrace/cli.hpp"
#include "pooltrace/errors.hpp"

namespace pooltrace::cli {

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct ModelFlags {
  int contacts = 0;
  double r = 2.5;
  double k = 0.1;
  double se = 0.95;
  double sp = 0.95;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::string format = "text";

  ModelParams params() const {
    ModelParams p;
    p.contacts = contacts;
    p.negbin = NegBinParams{r, k};
    p.tests = TestCharacteristics{se, sp};
    p.validate();
    return p;
  }
  PenaltyWeights weights() const {
    PenaltyWeights w{lambda1, lambda2};
    w.validate();
    return w;
  }
};

void add_model_flags(CLI::App& cmd, ModelFlags& flags, bool with_text_format) {
  cmd.add_option("--n", flags.contacts, "Number of contacts N")->required();
  cmd.add_option("--r", flags.r, "Mean secondary infections r")->capture_default_str();
  cmd.add_option("--k", flags.k, "Dispersion parameter k")->capture_default_str();
  cmd.add_option("--se", flags.se, "Test sensitivity")->capture_default_str();
  cmd.add_option("--sp", flags.sp, "Test specificity")->capture_default_str();
  cmd.add_option("--lambda1", flags.lambda1, "False-negative penalty")->capture_default_str();
  cmd.add_option("--lambda2", flags.lambda2, "False-positive penalty")->capture_default_str();
  std::vector<std::string> formats = {"csv", "json"};
  if (with_text_format) {
    formats.insert(formats.begin(), "text");
  }
  cmd.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

void write_design_text(std::ostream& out, const std::string& method, const PoolDesign& design,
                       const CostTable& cost) {
  const auto e = design_expectations(design, cost);
  out << "method: " << method << '\n'
      << "pools: " << design.to_string() << '\n'
      << "pool_count: " << design.pool_count() << '\n'
      << "mean_pool_size: " << format_real(design.mean_pool_size()) << '\n'
      << "expected_tests: " << format_real(e.tests) << '\n'
      << "expected_false_negatives: " << format_real(e.false_negatives) << '\n'
      << "expected_false_positives: " << format_real(e.false_positives) << '\n'
      << "objective: " << format_real(design_objective(design.sizes, cost)) << '\n';
}

nlohmann::json design_json(const std::string& method, const PoolDesign& design, const CostTable& cost) {
  const auto e = design_expectations(design, cost);
  return {{"method", method},
          {"pools", design.sizes},
          {"pool_count", design.pool_count()},
          {"mean_pool_size", design.mean_pool_size()},
          {"expected_tests", e.tests},
          {"expected_false_negatives", e.false_negatives},
          {"expected_false_positives", e.false_positives},
          {"objective", design_objective(design.sizes, cost)}};
}

const char* kDesignCsvHeader =
    "method,pools,pool_count,mean_pool_size,expected_tests,expected_false_negatives,"
    "expected_false_positives,objective\n";

void write_design_csv_row(std::ostream& out, const std::string& method, const PoolDesign& design,
                          const CostTable& cost) {
  const auto e = design_expectations(design, cost);
  out << method << ",\"" << design.to_string() << "\"," << design.pool_count() << ','
      << format_real(design.mean_pool_size()) << ',' << format_real(e.tests) << ','
      << format_real(e.false_negatives) << ',' << format_real(e.false_positives) << ','
      << format_real(design_objective(design.sizes, cost)) << '\n';
}

void emit_designs(std::ostream& out, const std::string& format,
                  const std::vector<std::pair<std::string, PoolDesign>>& designs, const CostTable& cost) {
  if (format == "json") {
    auto arr = nlohmann::json::array();
    for (const auto& [method, design] : designs) {
      arr.push_back(design_json(method, design, cost));
    }
    out << arr.dump(2) << '\n';
  } else if (format == "csv") {
    out << kDesignCsvHeader;
    for (const auto& [method, design] : designs) {
      write_design_csv_row(out, method, design, cost);
    }
  } else {
    for (std::size_t i = 0; i < designs.size(); ++i) {
      if (i > 0) {
        out << '\n';
      }
      write_design_text(out, designs[i].first, designs[i].second, cost);
    }
  }
}

void write_method_summary_text(std::ostream& out, const std::string& method, const MethodSummary& m) {
  out << method << ".pools: " << m.design.to_string() << '\n'
      << method << ".mean_pool_size: " << format_real(m.mean_pool_size) << '\n'
      << method << ".mean_tests: " << format_real(m.mean_tests) << '\n'
      << method << ".stderr_tests: " << format_real(m.stderr_tests) << '\n'
      << method << ".expected_tests: " << format_real(m.expected_tests) << '\n'
      << method << ".mean_false_negatives: " << format_real(m.mean_false_negatives) << '\n'
      << method << ".expected_false_negatives: " << format_real(m.expected_false_negatives) << '\n'
      << method << ".mean_false_positives: " << format_real(m.mean_false_positives) << '\n'
      << method << ".expected_false_positives: " << format_real(m.expected_false_positives) << '\n'
      << method << ".mean_tests_per_contact: " << format_real(m.mean_tests_per_contact) << '\n'
      << method << ".tests_p5: " << format_real(m.tests_p5) << '\n'
      << method << ".tests_p95: " << format_real(m.tests_p95) << '\n'
      << method << ".fn_rate: " << format_real(m.fn_rate) << '\n'
      << method << ".fp_rate: " << format_real(m.fp_rate) << '\n';
}

void write_replicates_csv(std::ostream& out, const std::vector<PairedRun>& runs) {
  out << "replicate,ours_tests,ours_fn,ours_fp,dorfman_tests,dorfman_fn,dorfman_fp,savings\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    out << i << ',' << r.ours.tests_used << ',' << r.ours.false_negatives << ',' << r.ours.false_positives
        << ',' << r.baseline.tests_used << ',' << r.baseline.false_negatives << ','
        << r.baseline.false_positives << ',' << format_real(r.savings) << '\n';
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  file << contents;
  file.flush();
  if (!file) {
    throw std::runtime_error("failed writing '" + path + "'");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pool designs for testing the contacts of a diagnosed case", "pooltrace"};
  app.require_subcommand(1);

  ModelFlags design_flags;
  bool compare = false;
  auto* design_cmd = app.add_subcommand("design", "Optimal pool sizes and their expectations");
  add_model_flags(*design_cmd, design_flags, true);
  design_cmd->add_flag("--compare", compare, "Also print the independence-based Dorfman design");

  ModelFlags eval_flags;
  std::string pools_text;
  auto* eval_cmd = app.add_subcommand("evaluate", "Expectations for an explicit design");
  add_model_flags(*eval_cmd, eval_flags, true);
  eval_cmd->add_option("--pools", pools_text, "Comma-separated pool sizes, e.g. 5,5,5,5")->required();

  ModelFlags sim_flags;
  int sim_replicates = 100000;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  bool sim_independent = false;
  bool sim_independent_noise = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Paired Monte-Carlo comparison against Dorfman");
  add_model_flags(*sim_cmd, sim_flags, true);
  sim_cmd->add_option("--replicates", sim_replicates, "Number of replicates")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "Write per-replicate records as CSV");
  sim_cmd->add_flag("--independent-states", sim_independent,
                    "Draw a separate infection state for the baseline");
  sim_cmd->add_flag("--independent-noise", sim_independent_noise,
                    "Give each method its own test-noise stream");

  std::string preset;
  std::string config_path;
  std::string sweep_out;
  std::string sweep_format = "csv";
  std::optional<int> sweep_replicates;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment family and emit CSV/JSON");
  auto* preset_opt = sweep_cmd->add_option("--preset", preset, "Built-in sweep")
                         ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  auto* config_opt = sweep_cmd->add_option("--config", config_path, "key = value config file");
  preset_opt->excludes(config_opt);
  sweep_cmd->add_option("--replicates", sweep_replicates, "Replicates per sweep point")
      ->check(CLI::Range(1, 100000000));
  sweep_cmd->add_option("--seed", sweep_seed, "Master seed");
  sweep_cmd->add_option("--out", sweep_out, "Output path (default: stdout)");
  sweep_cmd->add_option("--format", sweep_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*design_cmd) {
      const auto designs = compute_designs(design_flags.params(), design_flags.weights());
      std::vector<std::pair<std::string, PoolDesign>> rows = {{"ours", designs.ours}};
      if (compare) {
        rows.emplace_back("dorfman", designs.baseline);
      }
      emit_designs(out, design_flags.format, rows, designs.cost);
      return 0;
    }

    if (*eval_cmd) {
      const auto params = eval_flags.params();
      const auto cost = build_cost_table(params, eval_flags.weights());
      const auto design = make_design(parse_int_list(pools_text), cost);
      emit_designs(out, eval_flags.format, {{"given", design}}, cost);
      return 0;
    }

    if (*sim_cmd) {
      ExperimentOptions options;
      options.replicates = sim_replicates;
      options.seed = sim_seed;
      options.threads = threads_from_env();
      options.shared_state = !sim_independent;
      options.common_noise = !sim_independent_noise;
      const auto experiment = run_paired_experiment(sim_flags.params(), sim_flags.weights(), options);
      const auto& s = experiment.summary;
      if (!sim_out.empty()) {
        std::ostringstream csv;
        write_replicates_csv(csv, experiment.runs);
        write_file(sim_out, csv.str());
      }
      if (sim_flags.format == "text") {
        out << "replicates: " << options.replicates << '\n' << "seed: " << options.seed << '\n';
        write_method_summary_text(out, "ours", s.ours);
        write_method_summary_text(out, "dorfman", s.baseline);
        out << "mean_savings: " << format_real(s.mean_savings) << '\n'
            << "fraction_negative_savings: " << format_real(s.fraction_negative_savings) << '\n';
        for (std::size_t i = 0; i < std::size(kSavingsPercentiles); ++i) {
          out << "savings_p" << kSavingsPercentiles[i] << ": " << format_real(s.savings_quantiles[i]) << '\n';
        }
      } else {
        SweepRow row{SweepPoint{sim_flags.params(), sim_flags.weights()}, s};
        out << (sim_flags.format == "json" ? sweep_json({row}, options) : sweep_csv({row}, options));
      }
      return 0;
    }

    if (*sweep_cmd) {
      if (preset.empty() == config_path.empty()) {
        err << "sweep: exactly one of --preset or --config is required\n";
        return kUsageError;
      }
      ExperimentOptions options;
      options.threads = threads_from_env();
      std::vector<SweepPoint> points;
      std::string output = sweep_out;
      if (!preset.empty()) {
        points = preset_points(preset);
      } else {
        const auto config = load_config(config_path);
        points = config.points();
        options.replicates = config.replicates;
        options.seed = config.seed;
        options.shared_state = config.shared_state;
        options.common_noise = config.common_noise;
        if (output.empty() && config.output) {
          output = *config.output;
        }
      }
      if (sweep_replicates) {
        options.replicates = *sweep_replicates;
      }
      if (sweep_seed) {
        options.seed = *sweep_seed;
      }
      const auto rows = run_sweep(points, options);
      const auto text = sweep_format == "json" ? sweep_json(rows, options) : sweep_csv(rows, options);
      if (output.empty()) {
        out << text;
      } else {
        write_file(output, text);
      }
      return 0;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace pooltrace::cli
