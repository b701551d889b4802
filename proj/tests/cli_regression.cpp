// End-to-end checks of the hidmom binary: exit codes, golden tables,
// rerun determinism, JSON shape. Usage:
//   cli_regression <path-to-hidmom> <golden-dir>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::printf("[PASS] %s\n", what.c_str());
  } else {
    std::printf("[FAIL] %s\n", what.c_str());
    ++g_failures;
  }
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string strip_timing(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# elapsed_ms=", 0) == 0) continue;
    if (line.find("\"elapsed_ms\"") != std::string::npos) continue;
    os << line << '\n';
  }
  return os.str();
}

bool tokens_match(const std::string& a, const std::string& b) {
  char* enda = nullptr;
  char* endb = nullptr;
  const double va = std::strtod(a.c_str(), &enda);
  const double vb = std::strtod(b.c_str(), &endb);
  const bool numa = enda != a.c_str() && *enda == '\0';
  const bool numb = endb != b.c_str() && *endb == '\0';
  if (numa && numb) return std::abs(va - vb) <= 1e-9 * std::max({1.0, std::abs(va)});
  return a == b;
}

/// Line- and comma-tokenized comparison: numeric cells within 1e-9, all
/// other text exact. Keeps the golden files portable across libm builds.
bool tables_match(const std::string& got, const std::string& expected, std::string& why) {
  std::istringstream ga(got), gb(expected);
  std::string la, lb;
  int line_no = 0;
  while (true) {
    const bool ha = static_cast<bool>(std::getline(ga, la));
    const bool hb = static_cast<bool>(std::getline(gb, lb));
    ++line_no;
    if (ha != hb) {
      why = "line count differs at line " + std::to_string(line_no);
      return false;
    }
    if (!ha) return true;
    std::istringstream ta(la), tb(lb);
    std::string ca, cb;
    while (true) {
      const bool fa = static_cast<bool>(std::getline(ta, ca, ','));
      const bool fb = static_cast<bool>(std::getline(tb, cb, ','));
      if (fa != fb) {
        why = "cell count differs at line " + std::to_string(line_no);
        return false;
      }
      if (!fa) break;
      if (!tokens_match(ca, cb)) {
        why = "line " + std::to_string(line_no) + ": '" + ca + "' vs '" + cb + "'";
        return false;
      }
    }
  }
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_regression <hidmom-binary> <golden-dir>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const std::string golden = argv[2];

  // exit codes ------------------------------------------------------------
  expect(run(bin + " hidden-momentum --state 2,1,1 --nmax 10").exit_code == 0,
         "hidden-momentum exits 0");
  expect(run(bin + " hidden-momentum --state 2,1,0 --field 1e-2 --nmax 10").exit_code == 3,
         "linear-regime guard breach exits 3");
  expect(run(bin + " hidden-momentum --state 2,1").exit_code == 3, "malformed state exits 3");
  expect(run(bin + " hidden-momentum --state 2,2,0").exit_code == 3,
         "invalid quantum numbers exit 3");
  expect(run(bin + " hidden-momentum --format xml").exit_code == 3, "unknown format exits 3");
  expect(run(bin + " nonsense-subcommand").exit_code == 3, "unknown subcommand exits 3");
  expect(run(bin + " --help").exit_code == 0, "--help exits 0");

  // check mode ------------------------------------------------------------
  expect(run(bin + " hidden-momentum --state 2,1,1 --nmax 12 --check").exit_code == 0,
         "--check passes for (2,1,1)");
  expect(run(bin + " appendix --check").exit_code == 0, "appendix --check passes");
  // under-truncated basis: the tilt-sweep endpoints sit just past the 0.15
  // tolerance at n_max 10, so --check must report the breach
  expect(run(bin + " figure4 --nmax 10 --theta-count 3 --check").exit_code == 2,
         "--check breach exits 2");

  // determinism -----------------------------------------------------------
  {
    const std::string cmd = bin + " figure4 --nmax 10 --theta-count 5";
    const RunResult first = run(cmd);
    const RunResult second = run(cmd);
    expect(first.exit_code == 0 && second.exit_code == 0 &&
               strip_timing(first.output) == strip_timing(second.output) &&
               !strip_timing(first.output).empty(),
           "figure4 rerun is byte-identical up to the timing line");
  }

  // golden tables -----------------------------------------------------------
  {
    const RunResult result = run(bin + " figure3");
    std::string why;
    const bool ok = result.exit_code == 0 &&
                    tables_match(strip_timing(result.output),
                                 strip_timing(slurp(golden + "/figure3.csv")), why);
    expect(ok, "figure3 matches the golden table" + (why.empty() ? "" : " (" + why + ")"));
  }
  {
    const RunResult result = run(bin + " figure4");
    std::string why;
    const bool ok = result.exit_code == 0 &&
                    tables_match(strip_timing(result.output),
                                 strip_timing(slurp(golden + "/figure4.csv")), why);
    expect(ok, "figure4 matches the golden table" + (why.empty() ? "" : " (" + why + ")"));
  }
  {
    const RunResult result = run(bin + " hidden-momentum --state 2,1,1");
    std::string why;
    const bool ok = result.exit_code == 0 &&
                    tables_match(strip_timing(result.output),
                                 strip_timing(slurp(golden + "/hidden_momentum_211.csv")), why);
    expect(ok, "hidden-momentum (2,1,1) matches the golden table" +
                   (why.empty() ? "" : " (" + why + ")"));
  }

  // JSON outputs ------------------------------------------------------------
  {
    const RunResult result = run(bin + " hidden-momentum --state 1,0,0 --nmax 10 --format json");
    bool ok = result.exit_code == 0;
    try {
      const auto j = nlohmann::json::parse(result.output);
      ok = ok && j.at("state").at("n") == 1;
      ok = ok && std::abs(j.at("ratio").get<double>()) < 0.15;
      ok = ok && j.at("momenta_mu_b_e_over_c2").contains("p2b");
      ok = ok && j.at("metadata").at("si_factors").contains("velocity_m_s_per_au");
      ok = ok && j.contains("elapsed_ms");
    } catch (...) {
      ok = false;
    }
    expect(ok, "hidden-momentum JSON parses against the documented shape");
  }
  {
    const RunResult result = run(bin + " appendix --format json");
    bool ok = result.exit_code == 0;
    try {
      const auto j = nlohmann::json::parse(result.output);
      ok = ok && std::abs(j.at("p_y_at_t0").at("coefficient").get<double>() + 8.25) < 0.05;
      ok = ok && std::abs(j.at("velocity_ratio").at("value").get<double>() - 1.09) < 0.02;
      ok = ok && j.at("stark_n2").at("eigenpairs").size() == 4;
    } catch (...) {
      ok = false;
    }
    expect(ok, "appendix JSON carries the reference numbers");
  }
  {
    const RunResult result = run(bin + " figure3 --nmax 6 --format json");
    bool ok = result.exit_code == 0;
    try {
      const auto j = nlohmann::json::parse(result.output);
      ok = ok && j.at("rows").size() == 11;
      ok = ok && j.at("metadata").at("partial") == "1";
      // rows that cannot be built at nmax 6 carry null ratios
      ok = ok && j.at("rows")[0].at("ratio").is_null();
      ok = ok && j.at("rows")[6].at("ratio").is_number();
    } catch (...) {
      ok = false;
    }
    expect(ok, "figure3 JSON flags partial tables with null cells");
  }

  // file output and element dump --------------------------------------------
  {
    const std::string out = "/tmp/hidmom_cli_out.csv";
    const std::string dump = "/tmp/hidmom_cli_elements.csv";
    std::remove(out.c_str());
    std::remove(dump.c_str());
    const RunResult result = run(bin + " --dump-elements " + dump +
                                 " hidden-momentum --state 2,1,1 --nmax 8 --out " + out);
    const std::string written = slurp(out);
    const std::string elements = slurp(dump);
    expect(result.exit_code == 0 && written.find("# command=hidden-momentum") == 0 &&
               result.output.empty(),
           "--out writes the table to a file instead of stdout");
    expect(elements.rfind("bra_n,bra_l,bra_m,ket_n,ket_l,ket_m,kind,re,im", 0) == 0 &&
               elements.find(",p_y_p2,") != std::string::npos,
           "--dump-elements writes the memoized element table");
  }

  std::printf("%s\n", g_failures == 0 ? "CLI REGRESSION: all checks passed"
                                      : "CLI REGRESSION: FAILURES PRESENT");
  return g_failures == 0 ? 0 : 1;
}
