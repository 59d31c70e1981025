#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "pooltrace/cli.hpp"
#include "pooltrace/errors.hpp"

namespace pooltrace::cli {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

template <typename Parse>
auto parse_list(std::string_view text, Parse&& parse) {
  std::vector<decltype(parse(std::string{}))> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto token = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (token.empty()) {
      throw ParameterError("empty entry in list '" + std::string(text) + "'");
    }
    values.push_back(parse(token));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return values;
}

}  // namespace

std::string format_real(double value) {
  if (value == 0.0) {
    return "0";  // also folds -0
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::vector<double> parse_real_list(std::string_view text) {
  return parse_list(text, [](const std::string& token) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v)) {
      throw ParameterError("not a real number: '" + token + "'");
    }
    return v;
  });
}

std::vector<int> parse_int_list(std::string_view text) {
  return parse_list(text, [](const std::string& token) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || errno == ERANGE || v < -1000000000L || v > 1000000000L) {
      throw ParameterError("not an integer: '" + token + "'");
    }
    return static_cast<int>(v);
  });
}

}  // namespace pooltrace::cli
