#pragma once

#include <string>
#include <utility>
#include <vector>

#include "colombeau/association.hpp"
#include "colombeau/mollifier.hpp"
#include "colombeau/wormhole.hpp"

namespace colombeau {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Everything a run needs. Text form is flat `key = value` lines; lists are
/// comma separated, `#` starts a comment.
struct RunConfig {
  ProfileKind mollifier_kind = ProfileKind::bump_poly;
  int moment_order = 0;

  EpsSchedule schedule;

  std::vector<double> centers{0.0, -2.0, 2.0};
  std::vector<double> half_widths{0.25, 1.0, 4.0};

  WormholeParams wormhole;

  double a_min = 2.05;
  double a_max = 3.0;
  int a_steps = 20;
  std::vector<double> sweep_alpha2{0.0, 0.5, 1.0};
  /// The sweep pairs against the first `sweep_forms` corpus forms.
  int sweep_forms = 5;

  VerdictOptions verdict;

  std::vector<int> rule_moment_orders{0, 2};

  std::string output_csv;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Throws ConfigError on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);

  /// Resolved configuration, one entry per key, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  std::vector<TestForm> corpus() const;
  std::vector<TestForm> sweep_corpus() const;
  std::vector<double> a_grid() const;
};

/// Applies every `key = value` line of the text on top of cfg.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source = "config");
void apply_config_file(RunConfig& cfg, const std::string& path);
/// `key=value` override as given on the command line.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Shortest round-trip decimal form (used for the config echo).
std::string format_double(double v);
/// Fixed 17 significant digits (used for CSV values).
std::string format_csv_double(double v);

}  // namespace colombeau
