#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "exlab/csv.hpp"
#include "exlab/distribution.hpp"
#include "exlab/rng.hpp"
#include "exlab/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::path("/tmp") / ("exlab_harness_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_path = work_dir() / ("stdout." + std::to_string(counter));
  const fs::path err_path = work_dir() / ("stderr." + std::to_string(counter));
  ++counter;

  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += "\"";
  cmd += EXCHANGE_LAB_BIN;
  cmd += "\" " + args + " > " + out_path.string() + " 2> " + err_path.string();

  const int raw = std::system(cmd.c_str());
  CmdResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("version flag") {
  const auto r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find(exlab::kVersion) != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("equilibrium --mu 1").code == 2);
  CHECK(run_cli("equilibrium --mu 0 --nu 1").code == 2);
  CHECK(run_cli("equilibrium --mu 1 --nu 1 --window 5:10").code == 2);
  CHECK(run_cli("simulate --agents 1 --mu 1 --nu 1 --events 1 --seed 1 --out x.csv").code == 2);
  CHECK(run_cli("simulate --agents 10 --mu 1 --nu 1 --events 1 --seed 1 "
                "--f bogus --out x.csv").code == 2);
}

TEST_CASE("equilibrium prints the solution as JSON") {
  const auto r = run_cli("equilibrium --mu 1 --nu 1");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(std::abs(doc["beta_plus"].get<double>() - 0.5852) <= 5e-4);
  CHECK(std::abs(doc["beta_minus"].get<double>() - 0.6772) <= 5e-4);
  CHECK(std::abs(doc["p0_star"].get<double>() - 0.15386) <= 5e-4);
  CHECK(doc["quartic"].size() == 5);
  CHECK(doc["admissible_roots_found"].get<int>() == 1);
  CHECK(doc["residuals"].contains("mass"));
}

TEST_CASE("equilibrium writes distribution, manifest and svg") {
  const auto out = path_of("eq.json");
  const auto svg = path_of("eq.svg");
  const auto r = run_cli("equilibrium --mu 1 --nu 1 --out " + out + " --svg " + svg);
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(out));
  REQUIRE(fs::exists(out + ".dist.csv"));
  REQUIRE(fs::exists(out + ".manifest.json"));
  REQUIRE(fs::exists(svg));

  const auto p = exlab::read_histogram_csv(out + ".dist.csv");
  CHECK(std::abs(exlab::moments(p).mass - 1.0) <= 1e-9);
  CHECK(std::abs(exlab::moments(p).mean - 1.0) <= 1e-9);
  CHECK(std::abs(exlab::debt_level(p) - 1.0) <= 1e-9);

  const json manifest = json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "equilibrium");
  CHECK(manifest["version"] == exlab::kVersion);
  CHECK(manifest["generator"] == exlab::kGeneratorId);
  CHECK(manifest["argv"].is_array());
  CHECK(manifest["params"]["mu"] == 1);
  CHECK(manifest["derived"].contains("beta_plus"));
  const std::string stamp = manifest["timestamp_utc"].get<std::string>();
  CHECK(stamp.size() == 20);
  CHECK(stamp.back() == 'Z');

  CHECK(slurp(svg).rfind("<svg", 0) == 0);

  const std::string csv = slurp(out + ".dist.csv");
  CHECK(csv.rfind("n,probability\n", 0) == 0);
  CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("simulate is reproducible byte for byte") {
  const std::string flags =
      "simulate --agents 200 --mu 1 --nu 1 --events 20000 --seed 9 --f fstar "
      "--snapshot-every 5000 --out ";
  const auto a = path_of("sim_a.csv");
  const auto b = path_of("sim_b.csv");
  REQUIRE(run_cli(flags + a).code == 0);
  REQUIRE(run_cli(flags + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a + ".snapshots.csv") == slurp(b + ".snapshots.csv"));

  const auto p = exlab::read_histogram_csv(a);
  CHECK(std::abs(exlab::moments(p).mass - 1.0) <= 1e-9);

  const json manifest = json::parse(slurp(a + ".manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["derived"]["events"] == 20000);
  CHECK(manifest["derived"]["events_blocked"].is_number());

  const auto c = path_of("sim_c.csv");
  REQUIRE(run_cli("simulate --agents 200 --mu 1 --nu 1 --events 20000 --seed 10 "
                  "--f fstar --out " + c).code == 0);
  CHECK(slurp(a) != slurp(c));
}

TEST_CASE("zero-event simulation writes the initial point mass") {
  const auto out = path_of("sim_zero.csv");
  REQUIRE(run_cli("simulate --agents 10 --mu 2 --nu 1 --events 0 --seed 1 --out " + out)
              .code == 0);
  const auto p = exlab::read_histogram_csv(out);
  CHECK(p.prob(2) == 1.0);
  CHECK(std::abs(exlab::moments(p).mass - 1.0) <= 1e-12);
}

TEST_CASE("replica merging is deterministic under any thread cap") {
  const std::string flags =
      "simulate --agents 100 --mu 1 --nu 1 --events 5000 --seed 5 --replicas 3 --out ";
  const auto serial = path_of("rep_serial.csv");
  const auto threaded = path_of("rep_threaded.csv");
  REQUIRE(run_cli(flags + serial, "EXCHANGE_LAB_THREADS=1").code == 0);
  REQUIRE(run_cli(flags + threaded, "EXCHANGE_LAB_THREADS=3").code == 0);
  CHECK(slurp(serial) == slurp(threaded));

  const json manifest = json::parse(slurp(serial + ".manifest.json"));
  CHECK(manifest["derived"]["replicas"] == 3);
  CHECK(manifest["derived"]["events_blocked"].is_array());
  CHECK(manifest["derived"]["events_blocked"].size() == 3);
}

TEST_CASE("invalid thread cap is a computation error") {
  const auto r = run_cli("simulate --agents 10 --mu 1 --nu 1 --events 10 --seed 1 --out " +
                             path_of("threads.csv"),
                         "EXCHANGE_LAB_THREADS=abc");
  CHECK(r.code == 1);
  CHECK(r.err.find("EXCHANGE_LAB_THREADS") != std::string::npos);
}

TEST_CASE("exact marginal worked example and method agreement") {
  const auto closed = path_of("exact_closed.csv");
  const auto enumd = path_of("exact_enum.csv");
  REQUIRE(run_cli("exact --agents 2 --money 2 --bank 1 --method closed-form --out " +
                  closed).code == 0);
  REQUIRE(run_cli("exact --agents 2 --money 2 --bank 1 --method enumerate --out " +
                  enumd).code == 0);

  const std::string text = slurp(closed);
  CHECK(text == slurp(enumd));
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,p_num,p_den,p_decimal");
  const char* expected[] = {"-1,3,11,", "0,2,11,", "1,1,11,", "2,2,11,", "3,3,11,"};
  for (const char* prefix : expected) {
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind(prefix, 0) == 0);
  }
  CHECK_FALSE(std::getline(lines, line));

  // Methods agree byte for byte across a small parameter sweep.
  const struct { int n; int m; int b; } grid[] = {
      {1, 2, 1}, {2, 1, 0}, {3, 3, 2}, {4, 4, 2}, {4, 6, 4}};
  for (const auto& g : grid) {
    const std::string base = "exact --agents " + std::to_string(g.n) + " --money " +
                             std::to_string(g.m) + " --bank " + std::to_string(g.b);
    const auto f1 = path_of("exact_sweep_closed.csv");
    const auto f2 = path_of("exact_sweep_enum.csv");
    REQUIRE(run_cli(base + " --method closed-form --out " + f1).code == 0);
    REQUIRE(run_cli(base + " --method enumerate --out " + f2).code == 0);
    CHECK(slurp(f1) == slurp(f2));
  }

  // Single agent: the whole mass sits at M.
  const auto single = path_of("exact_single.csv");
  REQUIRE(run_cli("exact --agents 1 --money 2 --bank 1 --method enumerate --out " +
                  single).code == 0);
  const std::string single_text = slurp(single);
  CHECK(single_text == "n,p_num,p_den,p_decimal\n2,1,1,1\n");
}

TEST_CASE("exact enumeration guard trips on huge requests") {
  const auto r = run_cli("exact --agents 4 --money 400 --bank 200 --method enumerate --out " +
                         path_of("exact_huge.csv"));
  CHECK(r.code == 1);
  CHECK(r.err.find("10000000") != std::string::npos);
}

TEST_CASE("compare distances and failure modes") {
  const auto d0 = path_of("delta0.csv");
  const auto d1 = path_of("delta1.csv");
  exlab::write_histogram_csv(d0, exlab::WealthDistribution::delta(0, -1, 1));
  exlab::write_histogram_csv(d1, exlab::WealthDistribution::delta(1, -1, 1));

  auto r = run_cli("compare --a " + d0 + " --b " + d0);
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");

  r = run_cli("compare --a " + d0 + " --b " + d1 + " --metric tv");
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");

  const auto cmp_json = path_of("cmp.json");
  r = run_cli("compare --a " + d0 + " --b " + d1 + " --metric l2 --out " + cmp_json);
  CHECK(r.code == 0);
  CHECK(r.out == exlab::format_double(std::sqrt(2.0)) + "\n");
  const json doc = json::parse(slurp(cmp_json));
  CHECK(doc["metric"] == "l2");
  CHECK(std::abs(doc["distance"].get<double>() - std::sqrt(2.0)) <= 1e-15);

  const auto broken = path_of("broken.csv");
  spit(broken, "n,probability\n0,1\nnot a number,0.5\n");
  r = run_cli("compare --a " + broken + " --b " + d0);
  CHECK(r.code == 1);
  CHECK(r.err.find(":3:") != std::string::npos);

  const auto bad_header = path_of("bad_header.csv");
  spit(bad_header, "x,y\n0,1\n");
  r = run_cli("compare --a " + bad_header + " --b " + d0);
  CHECK(r.code == 1);
  CHECK(r.err.find(":1:") != std::string::npos);

  const auto dup = path_of("dup.csv");
  spit(dup, "n,probability\n0,0.5\n0,0.5\n");
  r = run_cli("compare --a " + dup + " --b " + d0);
  CHECK(r.code == 1);
  CHECK(r.err.find("duplicate") != std::string::npos);

  r = run_cli("compare --a " + path_of("missing.csv") + " --b " + d0);
  CHECK(r.code == 1);
}

TEST_CASE("ode command emits trajectory, summary and manifest") {
  const auto out = path_of("ode.csv");
  const auto r = run_cli("ode --mu 1 --nu 1 --dt 0.02 --t-end 8 --window -80:120 --out " + out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("t_star=") != std::string::npos);
  REQUIRE(fs::exists(out));
  REQUIRE(fs::exists(out + ".summary.csv"));
  REQUIRE(fs::exists(out + ".manifest.json"));

  CHECK(slurp(out).rfind("t,n,probability\n", 0) == 0);
  const std::string summary = slurp(out + ".summary.csv");
  CHECK(summary.rfind("t,l2_to_equilibrium,debt,mass_defect\n", 0) == 0);

  const json manifest = json::parse(slurp(out + ".manifest.json"));
  const double t_star = manifest["derived"]["t_star"].get<double>();
  CHECK(t_star > 4.0);
  CHECK(t_star < 7.0);
  CHECK(manifest["derived"]["truncation_warning"] == false);
  CHECK(manifest["derived"]["debt_decrease_warning"] == false);
  CHECK(manifest["derived"]["max_debt_defect_phase2"].get<double>() <= 1e-6);

  // The last summary row carries the pinned debt level.
  std::istringstream lines(summary);
  std::string line, last;
  std::getline(lines, line);  // header
  while (std::getline(lines, line))
    if (!line.empty()) last = line;
  double t = 0, l2 = 0, debt = 0, defect = 0;
  REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf", &t, &l2, &debt, &defect) == 4);
  CHECK(t == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(std::abs(debt - 1.0) <= 1e-6);
  CHECK(std::abs(defect) <= 1e-8);
}

TEST_CASE("ode honors explicit snapshot times") {
  const auto out = path_of("ode_snaps.csv");
  const auto r = run_cli(
      "ode --mu 1 --nu 1 --dt 0.02 --t-end 8 --window -80:120 --snapshots 1,2.5 --out " + out);
  REQUIRE(r.code == 0);

  std::istringstream lines(slurp(out + ".summary.csv"));
  std::string line;
  std::getline(lines, line);
  std::vector<double> times;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    times.push_back(std::strtod(line.c_str(), nullptr));
  }
  // Requested times, the crossing, and the final state.
  REQUIRE(times.size() == 4);
  CHECK(times[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(times[1] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(times[2] > 4.0);
  CHECK(times[2] < 7.0);
  CHECK(times[3] == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("config files feed flags with command-line override") {
  const auto cfg = path_of("run.cfg");
  const auto out = path_of("cfg_out.csv");
  spit(cfg,
       "[simulate]\n"
       "agents=50\n"
       "mu=1\n"
       "nu=1\n"
       "events=1000\n"
       "seed=3\n"
       "out=" + out + "\n");

  auto r = run_cli("--config " + cfg + " simulate");
  REQUIRE(r.code == 0);
  json manifest = json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["derived"]["events"] == 1000);

  r = run_cli("--config " + cfg + " simulate --events 2500");
  REQUIRE(r.code == 0);
  manifest = json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["derived"]["events"] == 2500);
}

TEST_CASE("ode rejects impossible horizons with a computation error") {
  const auto r = run_cli("ode --mu 1 --nu 1 --dt 0.02 --t-end 2 --window -60:80 --out " +
                         path_of("ode_short.csv"));
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}
