#include "colombeau/app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "colombeau/nec.hpp"
#include "colombeau/rules.hpp"

namespace colombeau {

namespace {

std::string config_header(const RunConfig& cfg, const std::string& command) {
  std::string h = "# colombeau " + command + "\n";
  for (const auto& [k, v] : cfg.entries()) h += "# " + k + " = " + v + "\n";
  return h;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

RuleSuiteOptions rule_options(const RunConfig& cfg) {
  RuleSuiteOptions o;
  o.moment_orders = cfg.rule_moment_orders;
  o.kind = cfg.mollifier_kind;
  o.schedule = cfg.schedule;
  o.verdict = cfg.verdict;
  o.corpus = cfg.corpus();
  return o;
}

// Samples in ascending eps.
std::vector<std::pair<double, double>> ascending(std::vector<std::pair<double, double>> s) {
  std::sort(s.begin(), s.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return s;
}

}  // namespace

int threads_from_env() {
  if (const char* env = std::getenv("COLOMBEAU_THREADS")) {
    int n = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string rules_csv(const RunConfig& cfg, const std::vector<RuleResult>& results) {
  std::string out = config_header(cfg, "rules");
  out += "rule_id,form_id,eps,value,verdict\n";
  for (const auto& r : results)
    for (const auto& f : r.forms)
      for (const auto& [eps, value] : ascending(f.limit.samples))
        out += r.id + "@m" + std::to_string(r.moment_order) + "," + f.form.id() + "," + format_csv_double(eps) + "," +
               format_csv_double(value) + "," + to_string(r.verdict) + "\n";
  return out;
}

int run_rules(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto corpus = cfg.corpus();
  if (std::all_of(corpus.begin(), corpus.end(), [&](const TestForm& w) { return away_from_shell(w, cfg.schedule.eps0); }))
    err << "warning: every corpus form is away from the shell; passes are vacuous\n";
  const auto results = run_rule_suite(rule_options(cfg));
  Verdict overall = Verdict::pass;
  out << std::left << std::setw(26) << "rule" << std::setw(3) << "m" << std::setw(14) << "verdict" << "detail\n";
  for (const auto& r : results) {
    out << std::setw(26) << r.id << std::setw(3) << r.moment_order << std::setw(14) << to_string(r.verdict) << r.detail
        << "\n";
    if (r.verdict != Verdict::pass) err << "rule " << r.id << " (m=" << r.moment_order << "): " << r.detail << "\n";
    overall = combine(overall, r.verdict);
  }
  out << "overall: " << to_string(overall) << "\n";
  if (!cfg.output_csv.empty()) write_file(cfg.output_csv, rules_csv(cfg, results));
  return exit_code(overall);
}

int run_geometry(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const WormholeParams& p = cfg.wormhole;
  const double m = p.mass, a = p.throat_radius;
  const ThroatConstants c = throat_constants(p);
  std::ostringstream csv;
  csv << config_header(cfg, "geometry") << "r,eta_quadrature,eta_closed_form,roundtrip_residual\n";
  out << "M = " << format_double(m) << ", a = " << format_double(a) << "\n";
  out << "throat constants: alpha = " << format_csv_double(c.alpha) << ", beta = " << format_csv_double(c.beta)
      << ", gamma = " << format_csv_double(c.gamma) << "\n";
  const SideMetric g = side_metric(0.0, p);
  const SideChristoffel gp = side_christoffel(0.0, 1, p), gm = side_christoffel(0.0, -1, p);
  out << "at the shell: g_tt = " << format_csv_double(g.g_tt) << ", g_thth = " << format_csv_double(g.g_thth)
      << ", Gamma+-_tt = " << format_csv_double(gp.tt) << " / " << format_csv_double(gm.tt)
      << ", Gamma+-_thth = " << format_csv_double(gp.thth) << " / " << format_csv_double(gm.thth) << "\n";
  out << std::left << std::setw(26) << "r" << std::setw(26) << "eta (quadrature)" << std::setw(26)
      << "eta (closed form)" << "round-trip residual / r\n";
  std::vector<double> radii{a};
  for (double k : {2.6, 3.0, 5.0, 10.0, 100.0})
    if (k * m > a) radii.push_back(k * m);
  bool ok = true;
  for (double r : radii) {
    const double eq = proper_distance(r, 1, p);
    const double ec = proper_distance_closed_form(r, 1, p);
    const double res = std::abs(radius_from_distance(eq, p) - r) / r;
    const bool good = res <= 1e-10 && std::abs(eq - ec) <= 1e-10 * (1.0 + ec);
    if (!good) {
      ok = false;
      err << "geometry check failed at r = " << format_double(r) << "\n";
    }
    out << std::setw(26) << format_csv_double(r) << std::setw(26) << format_csv_double(eq) << std::setw(26)
        << format_csv_double(ec) << format_csv_double(res) << "\n";
    csv << format_csv_double(r) << "," << format_csv_double(eq) << "," << format_csv_double(ec) << ","
        << format_csv_double(res) << "\n";
  }
  if (!cfg.output_csv.empty()) write_file(cfg.output_csv, csv.str());
  return ok ? 0 : 1;
}

int run_mollifier_report(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  const MollifierPtr m = build_mollifier(cfg.moment_order, cfg.mollifier_kind);
  const MollifierReport r = mollifier_report(*m);
  std::vector<std::pair<std::string, std::string>> rows{
      {"kind", std::string(to_string(r.kind))},
      {"moment_order", std::to_string(r.moment_order)},
      {"l1_norm", format_csv_double(r.l1_norm)},
      {"negative_mass", format_csv_double(r.negative_mass)},
      {"support_ok", r.support_ok ? "true" : "false"},
  };
  for (std::size_t k = 0; k < r.sup_norms.size(); ++k) {
    rows.emplace_back("sup_norm_d" + std::to_string(k), format_csv_double(r.sup_norms[k]));
    rows.emplace_back("sup_location_d" + std::to_string(k), format_csv_double(r.sup_locations[k]));
  }
  for (std::size_t k = 0; k < r.moments.size(); ++k)
    rows.emplace_back("moment_" + std::to_string(k), format_csv_double(r.moments[k]));
  for (const auto& [k, v] : rows) out << std::left << std::setw(20) << k << v << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  if (!cfg.output_csv.empty()) {
    std::string csv = config_header(cfg, "mollifier-report") + "quantity,value\n";
    for (const auto& [k, v] : rows) csv += k + "," + v + "\n";
    write_file(cfg.output_csv, csv);
  }
  return r.support_ok ? 0 : 1;
}

std::string nec_sweep_csv(const RunConfig& cfg, int threads) {
  cfg.validate();
  const MollifierPtr m = build_mollifier(cfg.moment_order, cfg.mollifier_kind);
  const auto grid = cfg.a_grid();
  const auto forms = cfg.sweep_corpus();
  const Thresholds th = sign_analysis(cfg.wormhole, {cfg.a_min, cfg.a_max});

  // One task per throat radius: the embedded components are shared by every
  // alpha2 and both inequalities.
  auto task = [&](double a) {
    WormholeParams p = cfg.wormhole;
    p.throat_radius = a;
    const ShellComponents comps = embed_shell_components(p, m);
    std::string rows;
    for (double alpha2 : cfg.sweep_alpha2) {
      p.alpha2 = alpha2;
      for (Inequality ineq : {Inequality::sigma, Inequality::sigma_minus_nu}) {
        try {
          const GenScalar u = assemble(ineq, p, comps);
          const DeltaPolynomial d = simplified(ineq, p);
          const CorpusResult nn = is_nonnegative(u, forms, cfg.schedule, cfg.verdict);
          const std::string verdict = nec_label(nn.verdict);
          for (std::size_t f = 0; f < forms.size(); ++f) {
            const LimitVerdict& l = nn.forms[f].limit;
            for (const auto& [eps, neg] : ascending(l.samples)) {
              rows += format_csv_double(p.mass) + "," + format_csv_double(a) + "," + format_csv_double(alpha2) + "," +
                      to_string(ineq) + "," + forms[f].id() + "," + format_csv_double(eps) + "," +
                      format_csv_double(pair(u, forms[f], eps)) + "," + format_csv_double(neg) + "," +
                      format_csv_double(l.order) + "," + verdict + "," + format_csv_double(d.c_delta) + "," +
                      format_csv_double(d.c_delta2) + "," + format_csv_double(d.c_deltasq) + "," +
                      format_csv_double(th.a1) + "\n";
            }
          }
        } catch (const std::exception& e) {
          std::ostringstream os;
          os << "a=" << format_double(a) << ", alpha2=" << format_double(alpha2) << ", " << to_string(ineq) << ": "
             << e.what();
          throw std::runtime_error(os.str());
        }
      }
    }
    return rows;
  };

  std::vector<std::string> parts(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        parts[i] = task(grid[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(grid.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::string out = config_header(cfg, "nec-sweep");
  out +=
      "M,a,alpha2,inequality,form_id,eps,pair_value,negpart_value,fitted_order,verdict,c_delta,c_delta2,c_deltasq,"
      "a1_threshold\n";
  for (const auto& s : parts) out += s;
  return out;
}

int run_nec_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err, int threads) {
  std::string csv;
  try {
    csv = nec_sweep_csv(cfg, threads);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    err << "nec-sweep: " << e.what() << "\n";
    return 1;
  }
  if (cfg.output_csv.empty()) {
    out << csv;
  } else {
    write_file(cfg.output_csv, csv);
    out << "wrote " << cfg.output_csv << "\n";
  }
  return 0;
}

}  // namespace colombeau
