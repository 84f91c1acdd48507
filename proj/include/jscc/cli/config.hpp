#ifndef JSCC_CLI_CONFIG_HPP
#define JSCC_CLI_CONFIG_HPP

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jscc/error.hpp"
#include "jscc/finite_bounds.hpp"
#include "jscc/markov.hpp"

namespace jscc::cli {

using json = nlohmann::json;

/// A chain given either as a preset name "W(p,q)" or an explicit
/// column-stochastic matrix (rows = to, columns = from).
struct ChainSpec {
  std::string preset;  // empty when matrix is given
  std::vector<std::vector<double>> matrix;
  std::size_t x_size = 0;  // channel only; 0 means "whole state space"
  std::size_t z_size = 1;
  std::optional<std::vector<double>> initial;
};

struct RunConfig {
  ChainSpec source;
  ChainSpec channel;
  std::optional<long> n;
  std::optional<long> k;
  std::optional<long> k_min;
  std::optional<long> k_max;
  long k_step = 1;
  std::vector<long> n_list;
  std::optional<double> r;
  std::vector<BoundKind> kinds;
  std::vector<double> rates;
  std::vector<double> thetas;
  std::vector<double> theta_primes;
  std::size_t n_max = 6;
  std::string log_base = "natural";
  long seed = 0;  // unused; every computation is deterministic
};

/// W(p,q) = [[1-p, q], [p, 1-q]].
inline std::optional<std::pair<double, double>> parse_preset(const std::string& name) {
  static const std::regex re(R"(^\s*W\(\s*([0-9]*\.?[0-9]+)\s*,\s*([0-9]*\.?[0-9]+)\s*\)\s*$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return std::make_pair(std::stod(m[1].str()), std::stod(m[2].str()));
}

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

inline long get_positive(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError("field '" + field + "': expected an integer");
  const long v = j.get<long>();
  if (v <= 0) throw ConfigError("field '" + field + "': must be positive");
  return v;
}

inline ChainSpec parse_chain(const json& j, const std::string& field, bool channel) {
  ChainSpec c;
  if (j.is_string()) {
    c.preset = j.get<std::string>();
    if (!parse_preset(c.preset)) throw ConfigError("field '" + field + "': unknown preset '" + c.preset + "'");
    return c;
  }
  if (!j.is_object()) throw ConfigError("field '" + field + "': expected a preset name or an object");
  std::set<std::string> allowed{"preset", "matrix", "initial"};
  if (channel) allowed.insert({"x_size", "z_size"});
  reject_unknown(j, allowed, "field '" + field + "'");
  const bool has_p = j.contains("preset"), has_m = j.contains("matrix");
  if (has_p == has_m) throw ConfigError("field '" + field + "': give exactly one of 'preset' or 'matrix'");
  if (has_p) {
    c.preset = get_as<std::string>(j["preset"], field + ".preset");
    if (!parse_preset(c.preset)) throw ConfigError("field '" + field + "': unknown preset '" + c.preset + "'");
  } else {
    c.matrix = get_as<std::vector<std::vector<double>>>(j["matrix"], field + ".matrix");
  }
  if (j.contains("initial")) c.initial = get_as<std::vector<double>>(j["initial"], field + ".initial");
  if (j.contains("x_size")) c.x_size = static_cast<std::size_t>(get_positive(j["x_size"], field + ".x_size"));
  if (j.contains("z_size")) c.z_size = static_cast<std::size_t>(get_positive(j["z_size"], field + ".z_size"));
  return c;
}

inline StochasticMatrix build_matrix(const ChainSpec& c, const std::string& field) {
  try {
    if (!c.preset.empty()) {
      const auto pq = *parse_preset(c.preset);
      return binary_chain(pq.first, pq.second);
    }
    const std::size_t d = c.matrix.size();
    for (const auto& row : c.matrix)
      if (row.size() != d) throw ConfigError("field '" + field + ".matrix': matrix must be square");
    return StochasticMatrix(SquareMatrix::from_rows(c.matrix));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

}  // namespace detail

inline SourceChain build_source(const ChainSpec& c) {
  StochasticMatrix w = detail::build_matrix(c, "source");
  try {
    return c.initial ? SourceChain(std::move(w), *c.initial) : SourceChain(std::move(w));
  } catch (const Error& e) {
    throw ConfigError(std::string("field 'source': ") + e.what());
  }
}

inline JointChannelChain build_channel(const ChainSpec& c) {
  StochasticMatrix w = detail::build_matrix(c, "channel");
  const std::size_t z = c.z_size;
  const std::size_t x = c.x_size ? c.x_size : w.dim() / z;
  try {
    return c.initial ? JointChannelChain(x, z, std::move(w), *c.initial)
                     : JointChannelChain(x, z, std::move(w));
  } catch (const Error& e) {
    throw ConfigError(std::string("field 'channel': ") + e.what());
  }
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  detail::reject_unknown(j,
                         {"source", "channel", "n", "k", "k_min", "k_max", "k_step", "n_list", "r",
                          "kinds", "rates", "thetas", "theta_primes", "n_max", "log_base", "seed"},
                         "configuration");
  RunConfig c;
  if (!j.contains("source")) throw ConfigError("field 'source' is required");
  if (!j.contains("channel")) throw ConfigError("field 'channel' is required");
  c.source = detail::parse_chain(j["source"], "source", false);
  c.channel = detail::parse_chain(j["channel"], "channel", true);
  if (j.contains("n")) c.n = detail::get_positive(j["n"], "n");
  if (j.contains("k")) c.k = detail::get_positive(j["k"], "k");
  if (j.contains("k_min")) c.k_min = detail::get_positive(j["k_min"], "k_min");
  if (j.contains("k_max")) c.k_max = detail::get_positive(j["k_max"], "k_max");
  if (j.contains("k_step")) c.k_step = detail::get_positive(j["k_step"], "k_step");
  if (c.k_min && c.k_max && *c.k_min > *c.k_max) throw ConfigError("field 'k_min': exceeds k_max");
  if (j.contains("n_list")) {
    if (!j["n_list"].is_array()) throw ConfigError("field 'n_list': expected an array");
    for (const auto& v : j["n_list"]) c.n_list.push_back(detail::get_positive(v, "n_list"));
  }
  if (j.contains("r")) {
    c.r = detail::get_as<double>(j["r"], "r");
    if (!(*c.r > 0.0)) throw ConfigError("field 'r': must be positive");
  }
  if (j.contains("kinds")) {
    for (const auto& s : detail::get_as<std::vector<std::string>>(j["kinds"], "kinds")) {
      try {
        c.kinds.push_back(parse_bound_kind(s));
      } catch (const Error& e) {
        throw ConfigError(std::string("field 'kinds': ") + e.what());
      }
    }
  }
  if (j.contains("rates")) c.rates = detail::get_as<std::vector<double>>(j["rates"], "rates");
  if (j.contains("thetas")) c.thetas = detail::get_as<std::vector<double>>(j["thetas"], "thetas");
  if (j.contains("theta_primes"))
    c.theta_primes = detail::get_as<std::vector<double>>(j["theta_primes"], "theta_primes");
  for (double t : c.thetas)
    if (!(t < 1.0)) throw ConfigError("field 'thetas': every value must be < 1");
  for (double t : c.theta_primes)
    if (!(t < 1.0)) throw ConfigError("field 'theta_primes': every value must be < 1");
  if (j.contains("n_max")) c.n_max = static_cast<std::size_t>(detail::get_positive(j["n_max"], "n_max"));
  if (j.contains("log_base")) {
    c.log_base = detail::get_as<std::string>(j["log_base"], "log_base");
    if (c.log_base != "natural") throw ConfigError("field 'log_base': only \"natural\" is supported");
  }
  if (j.contains("seed")) c.seed = detail::get_as<long>(j["seed"], "seed");
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Reads a file, or standard input when path is "-".
inline RunConfig load_config(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    ss << in.rdbuf();
  }
  return parse_config_text(ss.str());
}

}  // namespace jscc::cli

#endif  // JSCC_CLI_CONFIG_HPP
