// SPDX-License-Identifier: Apache-2.0
//
// macrodiv: closed-form SINR analysis for dual-user macrodiversity MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Command implementations behind the `macrodiv` tool. Argument parsing lives
// in tools/; everything here takes a RunConfig and writes to streams, so the
// commands can be driven from tests.

#include "macrodiv/cdf_analytic.hpp"
#include "macrodiv/core_types.hpp"
#include "macrodiv/errors.hpp"
#include "macrodiv/montecarlo.hpp"
#include "macrodiv/scenarios.hpp"
#include "macrodiv/ser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace macrodiv::cli {

enum class Command { cdf, pdf, ser_curve, validate, scenario, drop };

inline Command parse_command(std::string_view s) {
  if (s == "cdf") return Command::cdf;
  if (s == "pdf") return Command::pdf;
  if (s == "ser-curve") return Command::ser_curve;
  if (s == "validate") return Command::validate;
  if (s == "scenario") return Command::scenario;
  if (s == "drop") return Command::drop;
  throw ArgumentError("unknown command '" + std::string(s) + "'");
}

enum ExitCode : int { kOk = 0, kConfigError = 1, kDegenerate = 2, kValidationFailed = 3 };

struct RunConfig {
  Command command = Command::cdf;

  // System: a reference scenario, a random drop, or explicit powers.
  std::optional<std::string> scenario;
  double rho_db = 5.0;
  std::optional<std::uint64_t> drop_seed;
  std::vector<double> p1, p2;
  std::optional<double> sigma2;
  Receiver receiver = Receiver::mmse;
  int modulation_order = 4;
  bool auto_jitter = true;

  // z grid.
  std::optional<double> z_min, z_max;
  int n_points = 200;
  bool log_grid = false;
  std::optional<double> pdf_step;

  // SNR sweep in dB (ser-curve).
  double snr_min_db = 0.0, snr_max_db = 40.0, snr_step_db = 5.0;

  // Monte Carlo.
  std::optional<std::size_t> samples;  // default: 10^6 for validate, 10^5 otherwise
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool no_mc = false;
  double dkw_delta = 0.01;

  // validate: scenarios to cover (default all ten).
  std::vector<std::string> validate_scenarios;

  // Fault injection for the validation canary: flips the sign of psi~ (and
  // the MMSE psi derived from it) before evaluation.
  bool inject_psi_sign_flip = false;

  void validate() const {
    if (sigma2 && !(*sigma2 > 0.0 && std::isfinite(*sigma2))) throw ArgumentError("sigma2 must be finite and > 0");
    if (n_points < 2) throw ArgumentError("grid needs n_points >= 2");
    if (modulation_order < 2) throw InvalidModulation("modulation order must be >= 2");
    if (z_min && !(*z_min >= 0.0)) throw ArgumentError("z_min must be >= 0");
    if (z_min && z_max && !(*z_max > *z_min)) throw ArgumentError("z_max must exceed z_min");
    if (log_grid && z_min && !(*z_min > 0.0)) throw ArgumentError("log grid needs z_min > 0");
    if (!(snr_step_db > 0.0) || snr_max_db < snr_min_db) throw ArgumentError("bad SNR sweep");
    if (!(dkw_delta > 0.0 && dkw_delta < 1.0)) throw ArgumentError("dkw_delta must lie in (0,1)");
    if (command == Command::validate && sample_count() < 1000) throw ArgumentError("validate needs samples >= 1000");
    if (!p1.empty() || !p2.empty()) {
      if (scenario || drop_seed) throw ArgumentError("give either a scenario, a drop or explicit p1/p2, not several");
    }
    if (scenario && drop_seed) throw ArgumentError("give either a scenario or a drop, not both");
    if (workers < 1) throw ArgumentError("workers must be >= 1");
  }

  std::size_t sample_count() const { return samples.value_or(command == Command::validate ? 1000000 : 100000); }
};

/// 17 significant digits, locale independent.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string json_number(double x) { return std::isfinite(x) ? fmt(x) : "null"; }

inline std::string json_string(std::string_view s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    if (c == '\n') {
      o += "\\n";
      continue;
    }
    o += c;
  }
  return o + "\"";
}

struct System {
  PowerProfile profile;
  double sigma2;
  std::string label;
};

/// Resolves the configured system; an explicit sigma2 overrides the scenario's.
inline System resolve_system(const RunConfig& cfg) {
  if (cfg.scenario) {
    auto sc = build_scenario(table1_scenario(*cfg.scenario, cfg.rho_db));
    return {sc.profile, cfg.sigma2.value_or(sc.sigma2), *cfg.scenario};
  }
  if (cfg.drop_seed) {
    DropSpec ds;
    ds.seed = *cfg.drop_seed;
    return {random_drop(ds), cfg.sigma2.value_or(1.0), "drop " + std::to_string(*cfg.drop_seed)};
  }
  if (cfg.p1.empty() || cfg.p2.empty()) throw ArgumentError("no system given: use a scenario, a drop or p1/p2");
  if (!cfg.sigma2 && cfg.command != Command::ser_curve) throw ArgumentError("explicit p1/p2 need sigma2");
  return {PowerProfile(cfg.p1, cfg.p2), cfg.sigma2.value_or(1.0), "explicit"};
}

inline CdfEvaluator make_evaluator(const PowerProfile& p, double sigma2, Receiver rx, const RunConfig& cfg,
                                   std::ostream& diag) {
  CdfOptions opts;
  opts.auto_jitter = cfg.auto_jitter;
  auto ev = CdfEvaluator::build(p, sigma2, rx, opts);
  for (const auto& n : ev.diagnostics()) diag << n << '\n';
  if (!cfg.inject_psi_sign_flip) return ev;
  auto c = ev.constants();
  std::visit(
      [](auto& cs) {
        for (auto* t : {&cs.psi_tilde, &cs.psi})
          for (auto& row : *t)
            for (auto& v : row) v = -v;
      },
      c);
  return CdfEvaluator(ev.profile(), sigma2, rx, std::move(c), ev.options());
}

inline std::vector<double> make_grid(double lo, double hi, int n, bool log_grid) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / (n - 1);
    g[j] = log_grid ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.back() = hi;
  return g;
}

inline std::vector<double> z_grid(const RunConfig& cfg, const CdfEvaluator& ev, double default_min) {
  const double hi = cfg.z_max ? *cfg.z_max : cdf_quantile(ev, 0.999);
  double lo = cfg.z_min.value_or(cfg.log_grid ? hi * 1e-4 : default_min * hi);
  if (!(hi > lo)) throw ArgumentError("z_max must exceed z_min");
  return make_grid(lo, hi, cfg.n_points, cfg.log_grid);
}

// ---- commands --------------------------------------------------------------

/// CSV z,cdf_analytic[,cdf_empirical,dkw_halfwidth]
inline int cmd_cdf(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const auto sys = resolve_system(cfg);
  const auto ev = make_evaluator(sys.profile, sys.sigma2, cfg.receiver, cfg, diag);
  const auto grid = z_grid(cfg, ev, 0.0);
  const bool mc = !cfg.no_mc && cfg.sample_count() > 0;
  std::optional<EmpiricalCdf> emp;
  if (mc) {
    // The MC system is the unjittered one: it is the oracle for the jitter error.
    const auto run = run_mc(sys.profile, sys.sigma2, cfg.receiver, cfg.sample_count(), cfg.seed, cfg.workers);
    emp = empirical_cdf(run, grid, cfg.dkw_delta);
  }
  out << (mc ? "z,cdf_analytic,cdf_empirical,dkw_halfwidth\n" : "z,cdf_analytic\n");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out << fmt(grid[j]) << ',' << fmt(ev(grid[j]));
    if (mc) out << ',' << fmt(emp->curve.points[j].second) << ',' << fmt(emp->dkw_halfwidth);
    out << '\n';
  }
  return kOk;
}

/// CSV z,pdf_numeric
inline int cmd_pdf(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const auto sys = resolve_system(cfg);
  const auto ev = make_evaluator(sys.profile, sys.sigma2, cfg.receiver, cfg, diag);
  const auto grid = z_grid(cfg, ev, 1.0 / cfg.n_points);
  const double h = cfg.pdf_step.value_or(1e-4 * grid.back());
  out << "z,pdf_numeric\n";
  for (double z : grid) {
    if (!(z > h)) continue;
    out << fmt(z) << ',' << fmt(pdf_numeric(ev, z, h)) << '\n';
  }
  return kOk;
}

/// CSV snr_db,ser_mc,ser_laplace,ser_exact_asym with sigma^2 = 10^{-snr/10}.
inline int cmd_ser_curve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto sys = resolve_system(cfg);
  const auto mod = mpsk_params(cfg.modulation_order);
  const bool mc = !cfg.no_mc && cfg.sample_count() > 1;
  out << (mc ? "snr_db,ser_mc,ser_laplace,ser_exact_asym\n" : "snr_db,ser_laplace,ser_exact_asym\n");
  const bool zf = cfg.receiver == Receiver::zf;
  const auto lap = zf ? asymptote_zf_laplace(sys.profile, mod) : asymptote_mmse_laplace(sys.profile, mod);
  const auto exa = zf ? asymptote_zf_exact(sys.profile, mod) : asymptote_mmse_exact(sys.profile, mod);
  const int steps = static_cast<int>(std::floor((cfg.snr_max_db - cfg.snr_min_db) / cfg.snr_step_db + 1e-9));
  for (int j = 0; j <= steps; ++j) {
    const double db = cfg.snr_min_db + j * cfg.snr_step_db;
    const double s2 = 1.0 / db_to_linear(db);
    out << fmt(db);
    if (mc) out << ',' << fmt(ser_mc_conditional(sys.profile, s2, cfg.receiver, mod, cfg.sample_count(), cfg.seed, cfg.workers).value);
    out << ',' << fmt(lap.at_sigma2(s2)) << ',' << fmt(exa.at_sigma2(s2)) << '\n';
  }
  return kOk;
}

inline void write_profile_json(std::ostream& out, const System& sys) {
  auto arr = [](std::span<const double> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s + "]";
  };
  const auto rep = validate_profile(sys.profile);
  out << "{\"label\":" << json_string(sys.label) << ",\"p1\":" << arr(sys.profile.p1())
      << ",\"p2\":" << arr(sys.profile.p2()) << ",\"sigma2\":" << fmt(sys.sigma2)
      << ",\"rho_db\":" << fmt(linear_to_db(sys.profile.trace_p1() / (sys.profile.n_rx() * sys.sigma2)))
      << ",\"varsigma\":" << fmt(sys.profile.trace_p1() / sys.profile.trace_p2())
      << ",\"theta\":" << fmt(theta_metric(sys.profile).value)
      << ",\"degenerate\":" << (rep.degenerate() ? "true" : "false") << "}\n";
}

inline int cmd_scenario(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (!cfg.scenario) throw ArgumentError("scenario command needs --scenario S1..S10");
  write_profile_json(out, resolve_system(cfg));
  return kOk;
}

inline int cmd_drop(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  RunConfig c = cfg;
  if (!c.drop_seed) c.drop_seed = cfg.seed;
  write_profile_json(out, resolve_system(c));
  return kOk;
}

// ---- validate --------------------------------------------------------------

struct PropertyResult {
  std::string property_name;
  bool pass;
  double measured;
  double bound;
};

/// Oracle checks on the reference scenarios: Kolmogorov distance to Monte Carlo,
/// monotonicity, range, MMSE/ZF dominance (analytic and per draw) and the
/// small-noise ZF limit.
inline std::vector<PropertyResult> run_validation(const RunConfig& cfg, std::ostream& diag) {
  std::vector<PropertyResult> res;
  auto ids = cfg.validate_scenarios;
  if (ids.empty()) ids.assign(kTableIds.begin(), kTableIds.end());
  const double ks_bound = std::max(0.005, dkw_halfwidth(cfg.sample_count(), cfg.dkw_delta));

  // Evaluation that turns range failures into a failed property instead of an abort.
  auto guarded = [&](const std::string& name, double bound, auto&& measure) {
    try {
      const double m = measure();
      res.push_back({name, m <= bound, m, bound});
    } catch (const NumericalError& e) {
      diag << name << ": " << e.what() << '\n';
      res.push_back({name, false, std::numeric_limits<double>::quiet_NaN(), bound});
    }
  };

  for (const auto& id : ids) {
    const auto sc = build_scenario(table1_scenario(id, cfg.rho_db));
    std::optional<McRun> runs[2];
    std::optional<CdfEvaluator> evs[2];
    for (int r = 0; r < 2; ++r) {
      const Receiver rx = r == 0 ? Receiver::mmse : Receiver::zf;
      const std::string tag = id + "/" + std::string(to_string(rx));
      evs[r].emplace(make_evaluator(sc.profile, sc.sigma2, rx, cfg, diag));
      runs[r] = run_mc(sc.profile, sc.sigma2, rx, cfg.sample_count(), cfg.seed, cfg.workers);
      const auto& ev = *evs[r];
      const auto emp = empirical_cdf(*runs[r], quantile_grid(*runs[r], cfg.n_points), cfg.dkw_delta);
      guarded(tag + "/ks_vs_mc", ks_bound, [&] { return ks_distance_on_grid(emp, [&](double z) { return ev(z); }); });

      const auto lin = make_grid(0.0, emp.curve.points.back().first * 1.5, 2 * cfg.n_points, false);
      guarded(tag + "/monotone", 1e-9, [&] {
        double worst = 0.0, prev = 0.0;
        for (double z : lin) {
          const double f = ev.evaluate(z).raw;
          worst = std::max(worst, prev - f);
          prev = f;
        }
        return worst;
      });
      guarded(tag + "/range_before_clamp", ev.range_tolerance(), [&] {
        double worst = 0.0;
        for (double z : lin) {
          const double f = ev.evaluate(z).raw;
          worst = std::max({worst, -f, f - 1.0});
        }
        return worst;
      });
    }

    guarded(id + "/dominance_analytic", 1e-6, [&] {
      const auto lin = make_grid(0.0, cdf_quantile(*evs[1], 0.999), 2 * cfg.n_points, false);
      double worst = -1.0;
      for (double z : lin) worst = std::max(worst, (*evs[0])(z) - (*evs[1])(z));
      return worst;
    });
    {
      // Same seed, same channels: compare per realization.
      std::size_t bad = 0;
      for (std::size_t j = 0; j < runs[0]->samples.size(); ++j)
        bad += runs[0]->samples[j] < runs[1]->samples[j] * (1.0 - 1e-12);
      res.push_back({id + "/dominance_per_draw", bad == 0, static_cast<double>(bad), 0.0});
    }
    guarded(id + "/zf_limit", 1e-3, [&] {
      const double s2 = 1e-6 * sc.profile.trace_p1() / sc.profile.n_rx();
      const auto m = make_evaluator(sc.profile, s2, Receiver::mmse, cfg, diag);
      const auto z = make_evaluator(sc.profile, s2, Receiver::zf, cfg, diag);
      double worst = 0.0;
      for (double x : make_grid(0.0, cdf_quantile(z, 0.999), 2 * cfg.n_points, false))
        worst = std::max(worst, std::abs(m(x) - z(x)));
      return worst;
    });
  }
  return res;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  const auto res = run_validation(cfg, diag);
  bool all = true;
  out << "[\n";
  for (std::size_t j = 0; j < res.size(); ++j) {
    const auto& r = res[j];
    all = all && r.pass;
    out << "  {\"property_name\":" << json_string(r.property_name) << ",\"status\":\""
        << (r.pass ? "pass" : "fail") << "\",\"measured\":" << json_number(r.measured)
        << ",\"bound\":" << json_number(r.bound) << '}' << (j + 1 < res.size() ? "," : "") << '\n';
  }
  out << "]\n";
  return all ? kOk : kValidationFailed;
}

/// Dispatch with the exit-code contract: 1 bad configuration, 2 degeneracy
/// that jitter could not remove, 3 failed validation or out-of-range values.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
  try {
    cfg.validate();
    switch (cfg.command) {
      case Command::cdf: return cmd_cdf(cfg, out, diag);
      case Command::pdf: return cmd_pdf(cfg, out, diag);
      case Command::ser_curve: return cmd_ser_curve(cfg, out, diag);
      case Command::validate: return cmd_validate(cfg, out, diag);
      case Command::scenario: return cmd_scenario(cfg, out, diag);
      case Command::drop: return cmd_drop(cfg, out, diag);
    }
  } catch (const DegeneracyError& e) {
    diag << "error: " << e.what();
    if (e.has_pair()) diag << " (antennas " << e.first() + 1 << " and " << e.second() + 1 << ")";
    diag << '\n';
    return kDegenerate;
  } catch (const NumericalError& e) {
    diag << "error: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const std::invalid_argument& e) {
    diag << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    diag << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace macrodiv::cli
