#include <fstream>
#include <set>
#include <sstream>

#include "pooltrace/cli.hpp"
#include "pooltrace/errors.hpp"

namespace pooltrace::cli {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

double single_real(const std::string& key, const std::string& value) {
  const auto values = parse_real_list(value);
  if (values.size() != 1) {
    throw ParameterError("key '" + key + "' takes a single value");
  }
  return values.front();
}

long long single_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || v < 0) {
    throw ParameterError("key '" + key + "' needs a non-negative integer, got '" + value + "'");
  }
  return v;
}

template <typename T>
void set_axis(std::optional<std::vector<T>>& axis, T& scalar, std::vector<T> values) {
  if (values.size() == 1) {
    scalar = values.front();
  } else {
    axis = std::move(values);
  }
}

void validate_point(const SweepPoint& point) {
  point.params.validate();
  point.weights.validate();
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.params.contacts = 20;
  config.params.negbin = NegBinParams{2.5, 0.1};
  config.params.tests = TestCharacteristics{0.95, 0.95};
  return config;
}

std::vector<SweepPoint> ExperimentConfig::points() const {
  const std::vector<int> ns = contacts_axis.value_or(std::vector<int>{params.contacts});
  const std::vector<double> rs = r_axis.value_or(std::vector<double>{params.negbin.r});
  const std::vector<double> ks = k_axis.value_or(std::vector<double>{params.negbin.k});
  const std::vector<double> l1s = lambda1_axis.value_or(std::vector<double>{weights.false_negative});
  const std::vector<double> l2s = lambda2_axis.value_or(std::vector<double>{weights.false_positive});

  std::vector<SweepPoint> out;
  for (int n : ns) {
    for (double r : rs) {
      for (double k : ks) {
        for (double l1 : l1s) {
          for (double l2 : l2s) {
            SweepPoint point{params, PenaltyWeights{l1, l2}};
            point.params.contacts = n;
            point.params.negbin = NegBinParams{r, k};
            validate_point(point);
            out.push_back(point);
          }
        }
      }
    }
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config = default_config();
  bool has_n = false;
  std::set<std::string> seen;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (value.empty()) {
      throw ParameterError("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ParameterError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    try {
      if (key == "n") {
        set_axis(config.contacts_axis, config.params.contacts, parse_int_list(value));
        has_n = true;
      } else if (key == "r") {
        set_axis(config.r_axis, config.params.negbin.r, parse_real_list(value));
      } else if (key == "k") {
        set_axis(config.k_axis, config.params.negbin.k, parse_real_list(value));
      } else if (key == "lambda1") {
        set_axis(config.lambda1_axis, config.weights.false_negative, parse_real_list(value));
      } else if (key == "lambda2") {
        set_axis(config.lambda2_axis, config.weights.false_positive, parse_real_list(value));
      } else if (key == "se") {
        config.params.tests.sensitivity = single_real(key, value);
      } else if (key == "sp") {
        config.params.tests.specificity = single_real(key, value);
      } else if (key == "replicates") {
        const auto v = single_int(key, value);
        if (v < 1 || v > 100000000) {
          throw ParameterError("replicates must lie in [1, 1e8]");
        }
        config.replicates = static_cast<int>(v);
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(single_int(key, value));
      } else if (key == "shared_state" || key == "common_noise") {
        if (value != "true" && value != "false") {
          throw ParameterError(key + " must be true or false");
        }
        (key == "shared_state" ? config.shared_state : config.common_noise) = value == "true";
      } else if (key == "output") {
        config.output = value;
      } else {
        throw ParameterError("unknown key '" + key + "'");
      }
    } catch (const ParameterError& e) {
      throw ParameterError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!has_n) {
    throw ParameterError("config must set n");
  }
  config.points();  // validates every point
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot read config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<SweepPoint> preset_points(std::string_view name) {
  const ExperimentConfig base = default_config();
  if (name == "fig1") {
    ExperimentConfig config = base;
    config.contacts_axis = std::vector<int>{5, 10, 20, 50, 100, 200};
    return config.points();
  }
  if (name == "fig2") {
    // Representative grid; the exact published grid is not enumerated.
    ExperimentConfig config = base;
    config.contacts_axis = std::vector<int>{20, 100, 200};
    config.r_axis = std::vector<double>{0.5, 1.0, 2.5, 5.0};
    config.k_axis = std::vector<double>{0.05, 0.1, 0.5, 1.0, 10.0};
    return config.points();
  }
  if (name == "fig3") {
    std::vector<SweepPoint> out;
    for (double accuracy : {0.75, 0.85, 0.95}) {
      ExperimentConfig config = base;
      config.params.contacts = 100;
      config.params.tests = TestCharacteristics{accuracy, accuracy};
      config.lambda1_axis = std::vector<double>{0.0, 1.0, 5.0, 25.0, 125.0};
      for (auto& p : config.points()) {
        out.push_back(p);
      }
      config.lambda1_axis.reset();
      config.lambda2_axis = std::vector<double>{1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 125.0, 1000.0};
      for (auto& p : config.points()) {
        out.push_back(p);
      }
    }
    return out;
  }
  throw ParameterError("unknown preset '" + std::string(name) + "' (expected fig1, fig2 or fig3)");
}

}  // namespace pooltrace::cli
