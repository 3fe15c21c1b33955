#include "colombeau/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace colombeau {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split_list(text)) v.push_back(parse_double(key, s));
  return v;
}

std::vector<int> parse_ints(const std::string& key, const std::string& text) {
  std::vector<int> v;
  for (const auto& s : split_list(text)) v.push_back(parse_int(key, s));
  return v;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "mollifier.kind") {
    try {
      mollifier_kind = parse_profile_kind(trim(value));
    } catch (const std::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  } else if (key == "mollifier.moment_order") {
    moment_order = parse_int(key, value);
  } else if (key == "schedule.eps0") {
    schedule.eps0 = parse_double(key, value);
  } else if (key == "schedule.ratio") {
    schedule.ratio = parse_double(key, value);
  } else if (key == "schedule.count") {
    schedule.count = parse_int(key, value);
  } else if (key == "corpus.centers") {
    centers = parse_doubles(key, value);
  } else if (key == "corpus.half_widths") {
    half_widths = parse_doubles(key, value);
  } else if (key == "wormhole.mass") {
    wormhole.mass = parse_double(key, value);
  } else if (key == "wormhole.throat_radius") {
    wormhole.throat_radius = parse_double(key, value);
  } else if (key == "wormhole.alpha2") {
    wormhole.alpha2 = parse_double(key, value);
  } else if (key == "wormhole.lambda") {
    wormhole.lambda = parse_double(key, value);
  } else if (key == "sweep.a_min") {
    a_min = parse_double(key, value);
  } else if (key == "sweep.a_max") {
    a_max = parse_double(key, value);
  } else if (key == "sweep.a_steps") {
    a_steps = parse_int(key, value);
  } else if (key == "sweep.alpha2") {
    sweep_alpha2 = parse_doubles(key, value);
  } else if (key == "sweep.forms") {
    sweep_forms = parse_int(key, value);
  } else if (key == "verdict.rel_tol") {
    verdict.rel_tol = parse_double(key, value);
  } else if (key == "verdict.min_decay_slope") {
    verdict.min_decay_slope = parse_double(key, value);
  } else if (key == "verdict.max_fit_residual") {
    verdict.max_fit_residual = parse_double(key, value);
  } else if (key == "verdict.min_divergence_order") {
    verdict.min_divergence_order = parse_double(key, value);
  } else if (key == "verdict.fit_points") {
    verdict.fit_points = parse_int(key, value);
  } else if (key == "verdict.min_samples") {
    verdict.min_samples = parse_int(key, value);
  } else if (key == "rules.moment_orders") {
    rule_moment_orders = parse_ints(key, value);
  } else if (key == "output.csv") {
    output_csv = trim(value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  auto d = [](double v) { return format_double(v); };
  auto i = [](int v) { return std::to_string(v); };
  return {
      {"mollifier.kind", std::string(to_string(mollifier_kind))},
      {"mollifier.moment_order", i(moment_order)},
      {"schedule.eps0", d(schedule.eps0)},
      {"schedule.ratio", d(schedule.ratio)},
      {"schedule.count", i(schedule.count)},
      {"corpus.centers", join(centers, d)},
      {"corpus.half_widths", join(half_widths, d)},
      {"wormhole.mass", d(wormhole.mass)},
      {"wormhole.throat_radius", d(wormhole.throat_radius)},
      {"wormhole.alpha2", d(wormhole.alpha2)},
      {"wormhole.lambda", d(wormhole.lambda)},
      {"sweep.a_min", d(a_min)},
      {"sweep.a_max", d(a_max)},
      {"sweep.a_steps", i(a_steps)},
      {"sweep.alpha2", join(sweep_alpha2, d)},
      {"sweep.forms", i(sweep_forms)},
      {"verdict.rel_tol", d(verdict.rel_tol)},
      {"verdict.min_decay_slope", d(verdict.min_decay_slope)},
      {"verdict.max_fit_residual", d(verdict.max_fit_residual)},
      {"verdict.min_divergence_order", d(verdict.min_divergence_order)},
      {"verdict.fit_points", i(verdict.fit_points)},
      {"verdict.min_samples", i(verdict.min_samples)},
      {"rules.moment_orders", join(rule_moment_orders, i)},
      {"output.csv", output_csv},
  };
}

void RunConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); };
  if (moment_order < 0 || moment_order > 8) fail("mollifier.moment_order", "must lie in [0, 8]");
  try {
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    fail("schedule", e.what());
  }
  if (centers.empty()) fail("corpus.centers", "must not be empty");
  if (half_widths.empty()) fail("corpus.half_widths", "must not be empty");
  for (double h : half_widths)
    if (!(h > 0.0)) fail("corpus.half_widths", "entries must be positive");
  try {
    wormhole.validate();
  } catch (const std::invalid_argument& e) {
    fail("wormhole", e.what());
  }
  if (wormhole.lambda != 0.0) fail("wormhole.lambda", "only 0 is supported");
  if (!(a_min > 2.0 * wormhole.mass)) fail("sweep.a_min", "must exceed 2 * wormhole.mass");
  if (!(a_max >= a_min)) fail("sweep.a_max", "must be >= sweep.a_min");
  if (a_steps < 1) fail("sweep.a_steps", "must be positive");
  if (a_steps == 1 && a_max != a_min) fail("sweep.a_steps", "a single step needs a_min == a_max");
  if (sweep_alpha2.empty()) fail("sweep.alpha2", "must not be empty");
  if (sweep_forms < 1) fail("sweep.forms", "must be positive");
  if (!(verdict.rel_tol > 0.0)) fail("verdict.rel_tol", "must be positive");
  if (verdict.fit_points < 3) fail("verdict.fit_points", "must be at least 3");
  if (verdict.min_samples < 1) fail("verdict.min_samples", "must be positive");
  if (rule_moment_orders.empty()) fail("rules.moment_orders", "must not be empty");
  for (int m : rule_moment_orders)
    if (m < 0 || m > 8) fail("rules.moment_orders", "entries must lie in [0, 8]");
}

std::vector<TestForm> RunConfig::corpus() const { return make_corpus(centers, half_widths); }

std::vector<TestForm> RunConfig::sweep_corpus() const {
  auto c = corpus();
  if (static_cast<int>(c.size()) > sweep_forms) c.erase(c.begin() + sweep_forms, c.end());
  return c;
}

std::vector<double> RunConfig::a_grid() const {
  std::vector<double> g;
  if (a_steps == 1) return {a_min};
  for (int i = 0; i < a_steps; ++i) g.push_back(i + 1 == a_steps ? a_max : a_min + (a_max - a_min) * i / (a_steps - 1));
  return g;
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      cfg.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  cfg.set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace colombeau
