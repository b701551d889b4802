// hidmom: hidden momentum of a hydrogen atom in a uniform electric field.
//
// Subcommands reproduce the reference tables as machine-readable CSV/JSON:
//   hidden-momentum   one state, full report
//   figure3           the eleven-state m sweep
//   figure4           the (3,1,-1) tilt sweep
//   appendix          n=2 Stark eigensystem and the evolved |2,1,1> numbers
//
// Exit codes: 0 success, 2 tolerance breach under --check, 3 invalid config.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hidmom/cli_commands.hpp"

namespace {

using hidmom::RunConfig;

class Timer {
 public:
  [[nodiscard]] double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

int write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "hidmom: cannot open output file '" << path << "'\n";
    return 3;
  }
  os << payload;
  return 0;
}

std::string render(const hidmom::FigureTable& table, const RunConfig& cfg, double elapsed_ms) {
  if (cfg.format == "json") {
    hidmom::Json j = hidmom::table_to_json(table);
    j["elapsed_ms"] = elapsed_ms;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  hidmom::write_csv(table, os, elapsed_ms);
  return os.str();
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& state_arg) {
  cmd->add_option("--state", state_arg, "initial state as n,l,m");
  cmd->add_option("--field", cfg.field, "field magnitude in atomic units");
  cmd->add_option("--theta", cfg.theta, "field tilt in radians, x-z plane");
  cmd->add_option("--nmax", cfg.n_max, "basis truncation n_max");
  cmd->add_option("--format", cfg.format, "output format: csv or json");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
  cmd->add_option("--c", cfg.c, "speed of light in atomic units");
  cmd->add_option("--radial-margin", cfg.quadrature.radial_margin,
                  "extra Gauss-Laguerre nodes beyond the exactness bound");
  cmd->add_option("--angular-margin", cfg.quadrature.angular_margin,
                  "extra Gauss-Legendre nodes beyond the exactness bound");
  cmd->add_flag("--check", cfg.check, "verify acceptance tolerances; exit 2 on breach");
  cmd->add_flag("--lenient-guard", cfg.lenient_guard,
                "flag linear-regime guard breaches instead of failing");
}

hidmom::QuantumNumbers parse_state(const std::string& arg) {
  int n = 0, l = 0, m = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(arg);
  if (!(is >> n >> c1 >> l >> c2 >> m) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof()) {
    throw std::invalid_argument("--state expects n,l,m (got '" + arg + "')");
  }
  return {n, l, m};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidden momentum of hydrogen in a uniform electric field"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string state_arg;
  std::string dump_elements_path;
  app.add_option("--dump-elements", dump_elements_path,
                 "write every memoized matrix element to this CSV after the run");

  CLI::App* hm = app.add_subcommand("hidden-momentum", "both estimators for one state");
  CLI::App* f3 = app.add_subcommand("figure3", "eleven-state m sweep at theta = 0");
  CLI::App* f4 = app.add_subcommand("figure4", "(3,1,-1) tilt sweep");
  CLI::App* ax = app.add_subcommand("appendix", "n=2 eigensystem and evolved-state numbers");
  for (CLI::App* cmd : {hm, f3, f4, ax}) add_common_options(cmd, cfg, state_arg);
  f4->add_option("--theta-count", cfg.theta_count, "number of tilt grid points on [0, pi]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (!state_arg.empty()) cfg.state = parse_state(state_arg);
    cfg.validate();

    const Timer timer;
    int check_failures = 0;
    std::string payload;
    hidmom::ElementEngine engine(cfg.engine_config());

    if (hm->parsed()) {
      const auto outcome = hidmom::cmd_hidden_momentum(cfg, engine);
      check_failures = outcome.table.check_failures;
      if (cfg.format == "json") {
        hidmom::Json j = outcome.json;
        j["elapsed_ms"] = timer.elapsed_ms();
        payload = j.dump(2) + "\n";
      } else {
        payload = render(outcome.table, cfg, timer.elapsed_ms());
      }
    } else if (f3->parsed()) {
      const auto table = hidmom::cmd_figure3(cfg, engine);
      check_failures = table.check_failures;
      payload = render(table, cfg, timer.elapsed_ms());
    } else if (f4->parsed()) {
      const auto table = hidmom::cmd_figure4(cfg, engine);
      check_failures = table.check_failures;
      payload = render(table, cfg, timer.elapsed_ms());
    } else if (ax->parsed()) {
      auto outcome = hidmom::cmd_appendix(cfg, engine);
      check_failures = outcome.check_failures;
      outcome.json["elapsed_ms"] = timer.elapsed_ms();
      payload = outcome.json.dump(2) + "\n";
    }

    if (!dump_elements_path.empty()) {
      std::ofstream os(dump_elements_path, std::ios::binary);
      if (!os) {
        std::cerr << "hidmom: cannot open '" << dump_elements_path << "'\n";
        return 3;
      }
      engine.dump_csv(os);
    }

    const int rc = write_output(cfg.out, payload);
    if (rc != 0) return rc;
    if (cfg.check && check_failures > 0) {
      std::cerr << "hidmom: " << check_failures << " acceptance check(s) breached\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "hidmom: " << e.what() << '\n';
    return 3;
  }
}
