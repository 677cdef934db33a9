#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "capi.hpp"

namespace cli {

using nlohmann::json;

namespace {

[[noreturn]] void usage(const std::string& msg) { throw CliError(kExitUsage, msg); }

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"energy", {"N", "s", "gamma", "tail_terms"}},
      {"spectrum", {"N", "s", "gamma", "m", "tail_terms"}},
      {"phase-diagram", {"N", "s", "gamma", "gamma_over_gamma0", "tail_terms"}},
      {"minimize",
       {"N", "s", "gamma", "gamma_over_gamma0", "gamma_over_gamma_star", "amplitude", "max_iterations",
        "gradient_tolerance", "tail_terms"}},
      {"flow",
       {"N", "s", "gamma", "m", "eps", "grid_points", "dt", "stabilization", "max_steps",
        "energy_tolerance", "noise"}},
      {"gamma0", {"N", "s"}},
  };
  return keys;
}

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const auto* b = text.data();
  const auto* e = b + text.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) usage("invalid number '" + text + "' for " + key);
  return v;
}

json split_numbers(const std::string& text, const std::string& key) {
  json arr = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) usage("empty element in list for --" + key);
    const double v = parse_double(item, key);
    if (std::floor(v) == v && std::fabs(v) < 1e15 && item.find_first_of(".eE") == std::string::npos) {
      arr.push_back(static_cast<long long>(v));
    } else {
      arr.push_back(v);
    }
  }
  return arr;
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) usage(key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) usage(key + " must be finite");
  return d;
}

int as_int(const json& v, const std::string& key) {
  if (v.is_number_integer()) {
    const auto i = v.get<long long>();
    if (i < -2147483647LL || i > 2147483647LL) usage(key + " is out of range");
    return static_cast<int>(i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::fabs(d) < 2147483647.0) return static_cast<int>(d);
  }
  usage(key + " must be an integer");
}

std::vector<double> doubles(const json& j, const char* key) {
  const json* v = find(j, key);
  if (!v) return {};
  std::vector<double> out;
  if (v->is_array()) {
    for (const auto& e : *v) out.push_back(as_double(e, key));
    if (out.empty()) usage(std::string(key) + " list is empty");
  } else {
    out.push_back(as_double(*v, key));
  }
  return out;
}

std::vector<int> ints(const json& j, const char* key) {
  const json* v = find(j, key);
  if (!v) return {};
  std::vector<int> out;
  if (v->is_array()) {
    for (const auto& e : *v) out.push_back(as_int(e, key));
    if (out.empty()) usage(std::string(key) + " list is empty");
  } else {
    out.push_back(as_int(*v, key));
  }
  return out;
}

std::optional<double> opt_double(const json& j, const char* key) {
  const json* v = find(j, key);
  if (!v) return std::nullopt;
  if (v->is_array()) {
    if (v->size() != 1) usage(std::string(key) + " must be a single number");
    return as_double(v->front(), key);
  }
  return as_double(*v, key);
}

std::optional<int> opt_int(const json& j, const char* key) {
  const json* v = find(j, key);
  if (!v) return std::nullopt;
  if (v->is_array()) {
    if (v->size() != 1) usage(std::string(key) + " must be a single integer");
    return as_int(v->front(), key);
  }
  return as_int(*v, key);
}

void check_N(const std::vector<int>& N, int min_N = 2) {
  if (N.empty()) usage("N list is empty");
  for (int n : N) {
    if (n < min_N || n % 2 != 0 || n > 4096) usage("N must be an even integer in [" + std::to_string(min_N) + ", 4096]");
  }
}

void check_s(double s) {
  if (!(s > 0.0 && s < 0.5)) usage("s must lie in (0, 1/2)");
}

void check_positive(double v, const char* key) {
  if (!(v > 0.0)) usage(std::string(key) + " must be positive");
}

void check_m(double m) {
  if (!(m > -1.0 && m < 1.0)) usage("m must lie in (-1, 1)");
}

int tail_terms(const json& j) {
  const int t = opt_int(j, "tail_terms").value_or(0);
  if (t < 0) usage("tail_terms must be non-negative (0 selects the default)");
  return t;
}

}  // namespace

json merge_config(const Overrides& ov) {
  json j = json::object();
  if (ov.config_path) {
    std::ifstream is(*ov.config_path);
    if (!is) usage("cannot open config " + *ov.config_path);
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      usage("config " + *ov.config_path + ": " + e.what());
    }
    if (!j.is_object()) usage("config must be a JSON object");
  }
  if (ov.command) {
    if (j.contains("command") && j["command"] != *ov.command) {
      usage("command '" + *ov.command + "' conflicts with config command " + j["command"].dump());
    }
    j["command"] = *ov.command;
  }
  if (ov.out) j["out"] = *ov.out;
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.threads) j["threads"] = *ov.threads;
  if (ov.N) j["N"] = split_numbers(*ov.N, "N");
  if (ov.s) j["s"] = split_numbers(*ov.s, "s");
  if (ov.gamma) j["gamma"] = split_numbers(*ov.gamma, "gamma");
  if (ov.eps) j["eps"] = split_numbers(*ov.eps, "eps");
  if (ov.grid_points) j["grid_points"] = *ov.grid_points;

  if (!j.contains("command") || !j["command"].is_string()) usage("no command given");
  const std::string cmd = j["command"].get<std::string>();
  const auto it = allowed_keys().find(cmd);
  if (it == allowed_keys().end()) usage("unknown command '" + cmd + "'");
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "out" || key == "seed" || key == "threads") continue;
    if (!it->second.count(key)) usage("key '" + key + "' is not used by " + cmd);
  }
  return j;
}

Common parse_common(const json& j) {
  Common c;
  c.command = j.at("command").get<std::string>();
  if (const json* v = find(j, "out")) {
    if (!v->is_string() || v->get<std::string>().empty()) usage("out must be a non-empty path");
    c.out = v->get<std::string>();
  }
  if (const json* v = find(j, "seed")) {
    if (v->is_number_unsigned()) {
      c.seed = v->get<std::uint64_t>();
    } else if (v->is_number_integer() && v->get<long long>() >= 0) {
      c.seed = static_cast<std::uint64_t>(v->get<long long>());
    } else if (v->is_string()) {
      const std::string t = v->get<std::string>();
      auto r = std::from_chars(t.data(), t.data() + t.size(), c.seed);
      if (r.ec != std::errc() || r.ptr != t.data() + t.size()) usage("seed must be an unsigned 64-bit integer");
    } else {
      usage("seed must be an unsigned 64-bit integer");
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  c.threads = opt_int(j, "threads").value_or(hw == 0 ? 1 : static_cast<int>(hw));
  if (c.threads < 1 || c.threads > 1024) usage("threads must lie in [1, 1024]");
  return c;
}

EnergyConfig parse_energy(const json& j) {
  EnergyConfig c;
  c.N = ints(j, "N");
  check_N(c.N);
  const auto s = doubles(j, "s");
  if (s.size() > 1) usage("energy takes a single s");
  if (!s.empty()) c.s = s[0];
  check_s(c.s);
  c.gamma = doubles(j, "gamma");
  if (c.gamma.empty()) c.gamma = {1.0};
  for (double g : c.gamma) check_positive(g, "gamma");
  c.tail_terms = tail_terms(j);
  return c;
}

SpectrumConfig parse_spectrum(const json& j) {
  SpectrumConfig c;
  c.N = ints(j, "N");
  check_N(c.N);
  const auto s = doubles(j, "s");
  if (s.size() > 1) usage("spectrum takes a single s");
  if (!s.empty()) c.s = s[0];
  check_s(c.s);
  c.gamma = doubles(j, "gamma");
  if (c.gamma.empty()) usage("spectrum needs at least one gamma");
  for (double g : c.gamma) check_positive(g, "gamma");
  c.m = opt_double(j, "m").value_or(0.0);
  if (c.m != 0.0) usage("spectrum requires m = 0");
  c.tail_terms = tail_terms(j);
  return c;
}

PhaseDiagramConfig parse_phase_diagram(const json& j) {
  PhaseDiagramConfig c;
  c.N = ints(j, "N");
  check_N(c.N);
  c.s = doubles(j, "s");
  if (c.s.empty()) c.s = {0.25};
  for (double s : c.s) check_s(s);
  c.gamma = doubles(j, "gamma");
  c.gamma_over_gamma0 = doubles(j, "gamma_over_gamma0");
  if (c.gamma.empty() == c.gamma_over_gamma0.empty()) {
    usage("phase-diagram needs exactly one of gamma and gamma_over_gamma0");
  }
  for (double g : c.gamma) check_positive(g, "gamma");
  for (double g : c.gamma_over_gamma0) check_positive(g, "gamma_over_gamma0");
  if (!c.gamma_over_gamma0.empty()) {
    for (int n : c.N) {
      if (n == 2) usage("gamma_over_gamma0 is undefined for N = 2 (gamma0 is unbounded)");
    }
  }
  c.tail_terms = tail_terms(j);
  return c;
}

MinimizeConfig parse_minimize(const json& j) {
  MinimizeConfig c;
  if (auto n = opt_int(j, "N")) c.N = *n;
  check_N({c.N});
  if (auto s = opt_double(j, "s")) c.s = *s;
  check_s(c.s);
  c.gamma = opt_double(j, "gamma");
  c.gamma_over_gamma0 = opt_double(j, "gamma_over_gamma0");
  c.gamma_over_gamma_star = opt_double(j, "gamma_over_gamma_star");
  const int given = (c.gamma ? 1 : 0) + (c.gamma_over_gamma0 ? 1 : 0) + (c.gamma_over_gamma_star ? 1 : 0);
  if (given > 1) usage("give at most one of gamma, gamma_over_gamma0, gamma_over_gamma_star");
  if (given == 0) c.gamma_over_gamma0 = 0.5;
  for (const auto& g : {c.gamma, c.gamma_over_gamma0, c.gamma_over_gamma_star}) {
    if (g) check_positive(*g, "gamma");
  }
  if ((c.gamma_over_gamma0 || c.gamma_over_gamma_star) && c.N < 4) {
    usage("relative gamma needs N >= 4");
  }
  c.amplitude = opt_double(j, "amplitude");
  if (c.amplitude && !(*c.amplitude >= 0.0)) usage("amplitude must be non-negative");
  if (auto v = opt_int(j, "max_iterations")) c.max_iterations = *v;
  if (c.max_iterations < 0) usage("max_iterations must be non-negative");
  if (auto v = opt_double(j, "gradient_tolerance")) c.gradient_tolerance = *v;
  check_positive(c.gradient_tolerance, "gradient_tolerance");
  c.tail_terms = tail_terms(j);
  return c;
}

FlowConfig parse_flow(const json& j) {
  FlowConfig c;
  if (auto n = opt_int(j, "N")) c.N = *n;
  check_N({c.N});
  if (auto s = opt_double(j, "s")) c.s = *s;
  check_s(c.s);
  if (auto g = opt_double(j, "gamma")) c.gamma = *g;
  check_positive(c.gamma, "gamma");
  c.m = opt_double(j, "m").value_or(0.0);
  check_m(c.m);
  c.eps = doubles(j, "eps");
  if (c.eps.empty()) c.eps = {0.1};
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    check_positive(c.eps[i], "eps");
    if (i > 0 && !(c.eps[i] < c.eps[i - 1])) usage("eps schedule must be strictly decreasing");
  }
  if (auto v = opt_int(j, "grid_points")) c.grid_points = *v;
  if (c.grid_points < 4 || (c.grid_points & (c.grid_points - 1)) != 0 || c.grid_points > (1 << 24)) {
    usage("grid_points must be a power of two in [4, 2^24]");
  }
  if (c.grid_points < 2 * c.N) usage("grid_points must be at least 2N");
  if (auto v = opt_double(j, "dt")) c.dt = *v;
  check_positive(c.dt, "dt");
  c.stabilization = opt_double(j, "stabilization");
  if (c.stabilization && !(*c.stabilization >= 0.0)) usage("stabilization must be non-negative");
  if (auto v = opt_int(j, "max_steps")) c.max_steps = *v;
  if (c.max_steps < 1) usage("max_steps must be positive");
  if (auto v = opt_double(j, "energy_tolerance")) c.energy_tolerance = *v;
  check_positive(c.energy_tolerance, "energy_tolerance");
  if (auto v = opt_double(j, "noise")) c.noise = *v;
  if (!(c.noise >= 0.0)) usage("noise must be non-negative");
  return c;
}

Gamma0Config parse_gamma0(const json& j) {
  Gamma0Config c;
  c.N = ints(j, "N");
  check_N(c.N);
  c.s = doubles(j, "s");
  if (c.s.empty()) c.s = {0.25};
  for (double s : c.s) check_s(s);
  return c;
}

}  // namespace cli
