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

// Command line and JSON config handling for the macrodiv tool.
// Precedence, lowest first: built-in defaults, MACRODIV_SEED, config file, flags.

#include "macrodiv/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace macrodiv::cli {

struct ParsedArgs {
  RunConfig config;
  std::string output;  // empty: stdout
};

namespace detail {

inline std::uint64_t parse_seed(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ArgumentError(std::string(what) + ": not an unsigned integer: '" + s + "'");
  }
}

/// Applies one JSON document to the config. Unknown keys are rejected.
inline void apply_json(const nlohmann::json& j, ParsedArgs& a) {
  if (!j.is_object()) throw ArgumentError("config: top level must be an object");
  auto& c = a.config;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "command") c.command = parse_command(v.get<std::string>());
      else if (key == "scenario") c.scenario = v.get<std::string>();
      else if (key == "rho_db") c.rho_db = v.get<double>();
      else if (key == "drop_seed") c.drop_seed = v.get<std::uint64_t>();
      else if (key == "p1") c.p1 = v.get<std::vector<double>>();
      else if (key == "p2") c.p2 = v.get<std::vector<double>>();
      else if (key == "sigma2") c.sigma2 = v.get<double>();
      else if (key == "receiver") c.receiver = parse_receiver(v.get<std::string>());
      else if (key == "modulation_order") c.modulation_order = v.get<int>();
      else if (key == "auto_jitter") c.auto_jitter = v.get<bool>();
      else if (key == "z_min") c.z_min = v.get<double>();
      else if (key == "z_max") c.z_max = v.get<double>();
      else if (key == "n_points") c.n_points = v.get<int>();
      else if (key == "log_grid") c.log_grid = v.get<bool>();
      else if (key == "pdf_step") c.pdf_step = v.get<double>();
      else if (key == "snr_min_db") c.snr_min_db = v.get<double>();
      else if (key == "snr_max_db") c.snr_max_db = v.get<double>();
      else if (key == "snr_step_db") c.snr_step_db = v.get<double>();
      else if (key == "samples") c.samples = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "no_mc") c.no_mc = v.get<bool>();
      else if (key == "dkw_delta") c.dkw_delta = v.get<double>();
      else if (key == "scenarios") c.validate_scenarios = v.get<std::vector<std::string>>();
      else if (key == "output") a.output = v.get<std::string>();
      else throw ArgumentError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ArgumentError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError("config: " + path + ": " + e.what());
  }
}

}  // namespace detail

/// Parses argv. Returns the parsed arguments, or an exit code when the
/// process should stop (help printed: 0, bad usage: 1).
class ArgParser {
public:
  ArgParser() : app_("Closed-form SINR distributions and SER asymptotics for dual-user macrodiversity MIMO") {
    app_.require_subcommand(1);
    add("cdf", "analytic CDF on a z grid, optionally with a Monte Carlo empirical CDF");
    add("pdf", "numerical PDF (central difference of the analytic CDF)");
    add("ser-curve", "SER vs SNR: Monte Carlo, Laplace and exact high-SNR asymptotes");
    add("validate", "oracle checks on the reference scenarios, JSON report");
    add("scenario", "print a reference scenario's powers and noise level");
    add("drop", "print a random two-user drop");
  }

  std::variant<ParsedArgs, int> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app_.help();
      return 0;
    } catch (const CLI::CallForAllHelp& e) {
      out << app_.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return static_cast<int>(kConfigError);
    }
    try {
      return build();
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return static_cast<int>(kConfigError);
    }
  }

private:
  struct Flags {
    std::string config, scenario, receiver, output, seed, drop_seed;
    double rho_db = 0, sigma2 = 0, z_min = 0, z_max = 0, pdf_step = 0;
    double snr_min = 0, snr_max = 0, snr_step = 0, dkw_delta = 0;
    std::vector<double> p1, p2;
    std::vector<std::string> scenarios;
    int modulation = 0, points = 0;
    std::size_t samples = 0;
    unsigned workers = 0;
    bool no_jitter = false, log_grid = false, no_mc = false;
  };

  void add(const char* name, const char* help) {
    auto* sub = app_.add_subcommand(name, help);
    auto& f = flags_[name];
    std::vector<CLI::Option*> opts;
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--scenario", f.scenario, "reference scenario S1..S10");
    sub->add_option("--rho-db", f.rho_db, "average SNR rho in dB for scenarios (default 5)");
    sub->add_option("--drop-seed", f.drop_seed, "use a random drop with this seed");
    sub->add_option("--p1", f.p1, "desired-user link powers")->delimiter(',');
    sub->add_option("--p2", f.p2, "interferer link powers")->delimiter(',');
    sub->add_option("--sigma2", f.sigma2, "noise power (linear)");
    sub->add_option("--receiver", f.receiver, "mmse or zf");
    sub->add_option("--modulation,-M", f.modulation, "MPSK order (default 4)");
    sub->add_flag("--no-jitter", f.no_jitter, "fail on degenerate profiles instead of jittering");
    sub->add_option("--z-min", f.z_min, "grid start");
    sub->add_option("--z-max", f.z_max, "grid end (default: 0.999 quantile)");
    sub->add_option("--points", f.points, "grid points (default 200)");
    sub->add_flag("--log-grid", f.log_grid, "logarithmic z grid");
    sub->add_option("--pdf-step", f.pdf_step, "central-difference step for pdf");
    sub->add_option("--snr-min", f.snr_min, "sweep start, dB");
    sub->add_option("--snr-max", f.snr_max, "sweep end, dB");
    sub->add_option("--snr-step", f.snr_step, "sweep step, dB");
    sub->add_option("--samples", f.samples, "Monte Carlo sample count");
    sub->add_option("--seed", f.seed, "Monte Carlo seed (default: MACRODIV_SEED or 1)");
    sub->add_option("--workers", f.workers, "Monte Carlo threads; results do not depend on it");
    sub->add_flag("--no-mc", f.no_mc, "skip Monte Carlo columns");
    sub->add_option("--dkw-delta", f.dkw_delta, "DKW band confidence parameter (default 0.01)");
    sub->add_option("--scenarios", f.scenarios, "validate: scenario ids")->delimiter(',');
    sub->add_option("--output,-o", f.output, "output file (default stdout)");
  }

  ParsedArgs build() {
    CLI::App* sub = app_.get_subcommands().front();
    const std::string name = sub->get_name();
    const Flags& f = flags_.at(name);
    auto given = [&](const char* opt) { return sub->count(opt) > 0; };

    ParsedArgs a;
    a.config.command = parse_command(name);
    if (const char* env = std::getenv("MACRODIV_SEED"); env && *env)
      a.config.seed = detail::parse_seed(env, "MACRODIV_SEED");
    if (given("--config")) {
      detail::apply_json(detail::load_json(f.config), a);
      a.config.command = parse_command(name);  // the subcommand always wins
    }

    auto& c = a.config;
    if (given("--scenario")) c.scenario = f.scenario;
    if (given("--rho-db")) c.rho_db = f.rho_db;
    if (given("--drop-seed")) c.drop_seed = detail::parse_seed(f.drop_seed, "--drop-seed");
    if (given("--p1")) c.p1 = f.p1;
    if (given("--p2")) c.p2 = f.p2;
    if (given("--sigma2")) c.sigma2 = f.sigma2;
    if (given("--receiver")) c.receiver = parse_receiver(f.receiver);
    if (given("--modulation")) c.modulation_order = f.modulation;
    if (given("--no-jitter")) c.auto_jitter = false;
    if (given("--z-min")) c.z_min = f.z_min;
    if (given("--z-max")) c.z_max = f.z_max;
    if (given("--points")) c.n_points = f.points;
    if (given("--log-grid")) c.log_grid = true;
    if (given("--pdf-step")) c.pdf_step = f.pdf_step;
    if (given("--snr-min")) c.snr_min_db = f.snr_min;
    if (given("--snr-max")) c.snr_max_db = f.snr_max;
    if (given("--snr-step")) c.snr_step_db = f.snr_step;
    if (given("--samples")) c.samples = f.samples;
    if (given("--seed")) c.seed = detail::parse_seed(f.seed, "--seed");
    if (given("--workers")) c.workers = f.workers;
    if (given("--no-mc")) c.no_mc = true;
    if (given("--dkw-delta")) c.dkw_delta = f.dkw_delta;
    if (given("--scenarios")) c.validate_scenarios = f.scenarios;
    if (given("--output")) a.output = f.output;
    c.validate();
    return a;
  }

  CLI::App app_;
  std::map<std::string, Flags> flags_;
};

}  // namespace macrodiv::cli
