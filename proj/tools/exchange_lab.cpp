#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "exlab/agent_sim.hpp"
#include "exlab/csv.hpp"
#include "exlab/distribution.hpp"
#include "exlab/equilibrium.hpp"
#include "exlab/exact_markov.hpp"
#include "exlab/manifest.hpp"
#include "exlab/meanfield.hpp"
#include "exlab/svg.hpp"
#include "exlab/version.hpp"

namespace {

using namespace exlab;

std::pair<int, int> parse_window(const std::string& s) {
  const size_t colon = s.find(':', 1);
  int lo = 0, hi = 0;
  auto grab = [&](size_t from, size_t to, int& v) {
    const char* b = s.data() + from;
    const char* e = s.data() + to;
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e && b != e;
  };
  if (colon == std::string::npos || !grab(0, colon, lo) ||
      !grab(colon + 1, s.size(), hi) || lo > 0 || hi < 0 || lo >= hi)
    throw std::invalid_argument("window must be MIN:MAX with MIN <= 0 <= MAX");
  return {lo, hi};
}

std::string check_window(const std::string& s) {
  try {
    parse_window(s);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

int thread_cap() {
  if (const char* env = std::getenv("EXCHANGE_LAB_THREADS")) {
    int v = 0;
    const std::string s = env;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 1)
      throw std::invalid_argument("EXCHANGE_LAB_THREADS must be a positive integer");
    return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

nlohmann::json equilibrium_json(const EquilibriumSolution& sol) {
  nlohmann::json doc;
  doc["mu"] = sol.mu;
  doc["nu"] = sol.nu;
  doc["beta_plus"] = sol.beta_plus;
  doc["beta_minus"] = sol.beta_minus;
  doc["p0_star"] = sol.p0_star;
  doc["quartic"] = sol.quartic;
  doc["residuals"] = {{"mass", sol.residuals[0]},
                      {"mean", sol.residuals[1]},
                      {"debt", sol.residuals[2]}};
  doc["admissible_roots_found"] = sol.admissible_roots_found;
  return doc;
}

struct EquilibriumOpts {
  int mu = 1, nu = 1;
  std::string out, svg;
  std::string window = "-150:200";
};

int cmd_equilibrium(const EquilibriumOpts& o, const std::vector<std::string>& argv) {
  const EquilibriumSolution sol = solve_equilibrium(o.mu, o.nu);
  const auto [lo, hi] = parse_window(o.window);
  const WealthDistribution p = equilibrium_distribution(sol, RateFunction::star(), lo, hi);

  const nlohmann::json doc = equilibrium_json(sol);
  std::cout << doc.dump(2) << '\n';

  if (!o.out.empty()) {
    ModelParams params;
    params.mu = o.mu;
    params.nu = o.nu;
    write_json(o.out, doc);
    write_histogram_csv(o.out + ".dist.csv", p);
    nlohmann::json manifest = make_manifest("equilibrium", argv, params);
    manifest["derived"] = doc;
    write_json(o.out + ".manifest.json", manifest);
  }
  if (!o.svg.empty())
    svg_bar_chart(o.svg, p,
                  "equilibrium p* (mu=" + std::to_string(o.mu) +
                      ", nu=" + std::to_string(o.nu) + ")");
  return 0;
}

struct SimulateOpts {
  int agents = 2;
  int mu = 1, nu = 1;
  long long events = 0;
  std::uint64_t seed = 0;
  std::string rate = "fstar";
  long long snapshot_every = 0;  // 0 = none
  int replicas = 1;
  std::string out, svg;
};

WealthDistribution merge_histograms(const std::vector<SimResult>& results) {
  int lo = 0, hi = 0;
  for (const SimResult& r : results) {
    lo = std::min(lo, r.histogram.window_min());
    hi = std::max(hi, r.histogram.window_max());
  }
  WealthDistribution merged(lo, hi);
  const double w = 1.0 / static_cast<double>(results.size());
  for (const SimResult& r : results)
    for (int n = r.histogram.window_min(); n <= r.histogram.window_max(); ++n)
      merged.set(n, merged.prob(n) + w * r.histogram.prob(n));
  return merged;
}

int cmd_simulate(const SimulateOpts& o, const std::vector<std::string>& argv) {
  ModelParams params;
  params.mu = o.mu;
  params.nu = o.nu;
  params.n_agents = o.agents;
  params.rate = RateFunction::from_name(o.rate);

  const std::optional<long long> snap =
      o.snapshot_every > 0 ? std::optional<long long>(o.snapshot_every) : std::nullopt;

  std::vector<SimResult> results(static_cast<size_t>(o.replicas));
  const int workers = std::min(o.replicas, thread_cap());
  if (workers <= 1) {
    for (int i = 0; i < o.replicas; ++i)
      results[static_cast<size_t>(i)] =
          run(params, o.events, o.seed + static_cast<std::uint64_t>(i),
              i == 0 ? snap : std::nullopt);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = next.fetch_add(1); i < o.replicas; i = next.fetch_add(1))
            results[static_cast<size_t>(i)] =
                run(params, o.events, o.seed + static_cast<std::uint64_t>(i),
                    i == 0 ? snap : std::nullopt);
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const WealthDistribution merged = merge_histograms(results);
  write_histogram_csv(o.out, merged);

  const SimResult& first = results.front();
  if (snap && !first.snapshots.empty()) {
    std::vector<double> times;
    std::vector<WealthDistribution> snaps;
    for (const auto& [ev, dist] : first.snapshots) {
      times.push_back(static_cast<double>(ev));
      snaps.push_back(dist);
    }
    write_trajectory_csv(o.out + ".snapshots.csv", times, snaps);
  }

  nlohmann::json manifest = make_manifest("simulate", argv, params);
  manifest["seed"] = o.seed;
  nlohmann::json& derived = manifest["derived"];
  derived["events"] = o.events;
  derived["replicas"] = o.replicas;
  nlohmann::json blocked = nlohmann::json::array();
  nlohmann::json thinned = nlohmann::json::array();
  nlohmann::json first_empty = nlohmann::json::array();
  for (const SimResult& r : results) {
    blocked.push_back(r.final_state.events_blocked);
    thinned.push_back(r.final_state.events_thinned);
    if (r.final_state.first_empty_event)
      first_empty.push_back(*r.final_state.first_empty_event);
    else
      first_empty.push_back(nullptr);
  }
  derived["events_blocked"] = o.replicas == 1 ? blocked[0] : blocked;
  derived["events_thinned"] = o.replicas == 1 ? thinned[0] : thinned;
  derived["first_empty_event"] = o.replicas == 1 ? first_empty[0] : first_empty;
  write_json(o.out + ".manifest.json", manifest);

  if (!o.svg.empty())
    svg_bar_chart(o.svg, merged, "simulated wealth histogram (N=" +
                                     std::to_string(o.agents) + ")");
  std::cout << "wrote " << o.out << " (events=" << o.events
            << ", blocked=" << first.final_state.events_blocked
            << ", replicas=" << o.replicas << ")\n";
  return 0;
}

struct OdeOpts {
  int mu = 1, nu = 1;
  double dt = 0.01;
  double t_end = 0;
  std::vector<double> snapshots;
  std::string window = "-150:200";
  std::string out, svg;
};

int cmd_ode(const OdeOpts& o, const std::vector<std::string>& argv) {
  ModelParams params;
  params.mu = o.mu;
  params.nu = o.nu;
  const auto [lo, hi] = parse_window(o.window);
  if (o.mu > hi) throw std::invalid_argument("window does not contain mu");

  std::vector<double> snaps = o.snapshots;
  if (snaps.empty()) {
    for (double t = 0; t < o.t_end; t += 1.0) snaps.push_back(t);
    snaps.push_back(o.t_end);
  }

  const WealthDistribution start = WealthDistribution::delta(o.mu, lo, hi);
  const TwoPhaseTrajectory traj = run_two_phase(params, start, o.dt, o.t_end, snaps);

  const EquilibriumSolution sol = solve_equilibrium(o.mu, o.nu);
  const WealthDistribution p_star =
      equilibrium_distribution(sol, RateFunction::star(), lo, hi);

  write_trajectory_csv(o.out, traj.times, traj.snapshots);
  std::vector<SummaryRow> rows;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const WealthDistribution& p = traj.snapshots[i];
    rows.push_back({traj.times[i], distance(p, p_star, Metric::l2), debt_level(p),
                    moments(p).mass - 1.0});
  }
  write_summary_csv(o.out + ".summary.csv", rows);

  nlohmann::json manifest = make_manifest("ode", argv, params);
  nlohmann::json& derived = manifest["derived"];
  derived["t_star"] = traj.t_star;
  derived["dt"] = o.dt;
  derived["t_end"] = o.t_end;
  derived["window"] = {lo, hi};
  derived["beta_plus"] = sol.beta_plus;
  derived["beta_minus"] = sol.beta_minus;
  derived["p0_star"] = sol.p0_star;
  derived["max_debt_defect_phase2"] = traj.max_debt_defect_phase2;
  derived["truncation_warning"] = traj.truncation_warning;
  derived["debt_decrease_warning"] = traj.debt_decrease_warning;
  derived["final_l2_to_equilibrium"] = rows.back().l2_to_equilibrium;
  write_json(o.out + ".manifest.json", manifest);

  if (!o.svg.empty()) {
    std::vector<double> xs, ys;
    for (const SummaryRow& r : rows) {
      xs.push_back(r.t);
      ys.push_back(r.l2_to_equilibrium);
    }
    svg_line_chart(o.svg, xs, ys, "l2 distance to equilibrium", true);
  }
  std::cout << "t_star=" << format_double(traj.t_star)
            << " final_l2=" << format_double(rows.back().l2_to_equilibrium) << '\n';
  return 0;
}

struct ExactOpts {
  int agents = 1;
  long long money = 0;
  long long bank = 0;
  std::string method = "closed-form";
  std::string out, svg;
};

int cmd_exact(const ExactOpts& o, const std::vector<std::string>& argv) {
  std::vector<std::pair<int, Rational>> rows;
  const int lo = static_cast<int>(-o.bank);
  const int hi = static_cast<int>(o.money + o.bank);
  if (o.method == "enumerate") {
    const ExactDistribution dist =
        enumerate_stationary(o.agents, o.money, o.bank, RateFunction::star());
    for (int n = lo; n <= hi; ++n) {
      Rational q = marginal(dist, n);
      if (q != 0) rows.emplace_back(n, std::move(q));
    }
  } else {
    for (int n = lo; n <= hi; ++n) {
      Rational q = limiting_marginal(n, o.agents, o.money, o.bank);
      if (q != 0) rows.emplace_back(n, std::move(q));
    }
  }
  write_exact_csv(o.out, rows);

  nlohmann::json manifest = make_manifest("exact", argv);
  manifest["params"] = {{"agents", o.agents},
                        {"money", o.money},
                        {"bank", o.bank},
                        {"rate", "fstar"},
                        {"method", o.method}};
  write_json(o.out + ".manifest.json", manifest);

  if (!o.svg.empty()) {
    WealthDistribution p(std::min(lo, 0), std::max(hi, 0));
    for (const auto& [n, q] : rows) p.set(n, q.convert_to<double>());
    svg_bar_chart(o.svg, p, "exact stationary marginal");
  }
  std::cout << "wrote " << o.out << " (" << rows.size() << " rows)\n";
  return 0;
}

struct CompareOpts {
  std::string a, b;
  std::string metric = "tv";
  std::string out;
};

int cmd_compare(const CompareOpts& o) {
  const WealthDistribution pa = read_histogram_csv(o.a);
  const WealthDistribution pb = read_histogram_csv(o.b);
  const Metric metric = o.metric == "l2" ? Metric::l2 : Metric::tv;
  const double d = distance(pa, pb, metric);
  std::cout << format_double(d) << '\n';
  if (!o.out.empty()) {
    nlohmann::json doc;
    doc["a"] = o.a;
    doc["b"] = o.b;
    doc["metric"] = o.metric;
    doc["distance"] = d;
    write_json(o.out, doc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the f-biased dollar-exchange model "
               "with a collective debt limit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key=value config file ([subcommand] sections)");
  app.require_subcommand(1);

  EquilibriumOpts eq;
  CLI::App* s_eq = app.add_subcommand("equilibrium",
                                      "solve the star-rate equilibrium for (mu, nu)");
  s_eq->add_option("--mu", eq.mu, "average wealth per agent")->required()
      ->check(CLI::PositiveNumber);
  s_eq->add_option("--nu", eq.nu, "bank capital per unit of agent wealth")->required()
      ->check(CLI::PositiveNumber);
  s_eq->add_option("--out", eq.out, "JSON output path (also writes .dist.csv and .manifest.json)");
  s_eq->add_option("--window", eq.window, "distribution window MIN:MAX")
      ->check(check_window);
  s_eq->add_option("--svg", eq.svg, "bar-chart SVG path");

  SimulateOpts sim;
  CLI::App* s_sim = app.add_subcommand("simulate", "finite-N stochastic simulation");
  s_sim->add_option("--agents", sim.agents, "number of agents")->required()
      ->check(CLI::Range(2, 100000000));
  s_sim->add_option("--mu", sim.mu, "average wealth per agent")->required()
      ->check(CLI::PositiveNumber);
  s_sim->add_option("--nu", sim.nu, "bank capital per unit of agent wealth")->required()
      ->check(CLI::PositiveNumber);
  s_sim->add_option("--events", sim.events, "accepted exchange events to run")->required()
      ->check(CLI::NonNegativeNumber);
  s_sim->add_option("--seed", sim.seed, "RNG seed")->required();
  s_sim->add_option("--f", sim.rate, "rate function")
      ->check(CLI::IsMember({"fstar", "const", "fabs"}));
  s_sim->add_option("--snapshot-every", sim.snapshot_every,
                    "histogram snapshot every K accepted events")
      ->check(CLI::PositiveNumber);
  s_sim->add_option("--replicas", sim.replicas,
                    "independent replicas (seeds seed..seed+R-1), histograms averaged")
      ->check(CLI::PositiveNumber);
  s_sim->add_option("--out", sim.out, "histogram CSV path")->required();
  s_sim->add_option("--svg", sim.svg, "bar-chart SVG path");

  OdeOpts ode;
  CLI::App* s_ode = app.add_subcommand("ode", "two-phase mean-field integration from delta_mu");
  s_ode->add_option("--mu", ode.mu, "average wealth per agent")->required()
      ->check(CLI::PositiveNumber);
  s_ode->add_option("--nu", ode.nu, "bank capital per unit of agent wealth")->required()
      ->check(CLI::PositiveNumber);
  s_ode->add_option("--dt", ode.dt, "RK4 step")->check(CLI::PositiveNumber);
  s_ode->add_option("--t-end", ode.t_end, "integration horizon")->required()
      ->check(CLI::PositiveNumber);
  s_ode->add_option("--snapshots", ode.snapshots,
                    "comma-separated snapshot times (default: unit grid)")
      ->delimiter(',');
  s_ode->add_option("--window", ode.window, "distribution window MIN:MAX")
      ->check(check_window);
  s_ode->add_option("--out", ode.out, "trajectory CSV path (also writes .summary.csv)")
      ->required();
  s_ode->add_option("--svg", ode.svg, "line-chart SVG path (l2 vs t)");

  ExactOpts ex;
  CLI::App* s_ex = app.add_subcommand("exact", "exact stationary marginal for finite N");
  s_ex->add_option("--agents", ex.agents, "number of agents")->required()
      ->check(CLI::PositiveNumber);
  s_ex->add_option("--money", ex.money, "total agent money M")->required()
      ->check(CLI::NonNegativeNumber);
  s_ex->add_option("--bank", ex.bank, "bank capacity B")->required()
      ->check(CLI::NonNegativeNumber);
  s_ex->add_option("--method", ex.method, "computation route")
      ->check(CLI::IsMember({"enumerate", "closed-form"}));
  s_ex->add_option("--out", ex.out, "rational CSV path")->required();
  s_ex->add_option("--svg", ex.svg, "bar-chart SVG path");

  CompareOpts cmp;
  CLI::App* s_cmp = app.add_subcommand("compare", "distance between two histogram CSVs");
  s_cmp->add_option("--a", cmp.a, "first histogram CSV")->required();
  s_cmp->add_option("--b", cmp.b, "second histogram CSV")->required();
  s_cmp->add_option("--metric", cmp.metric, "distance metric")
      ->check(CLI::IsMember({"l2", "tv"}));
  s_cmp->add_option("--out", cmp.out, "JSON result path");

  std::vector<std::string> argv_copy(argv, argv + argc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0, any usage problem exits 2
  }

  try {
    if (app.got_subcommand(s_eq)) return cmd_equilibrium(eq, argv_copy);
    if (app.got_subcommand(s_sim)) return cmd_simulate(sim, argv_copy);
    if (app.got_subcommand(s_ode)) return cmd_ode(ode, argv_copy);
    if (app.got_subcommand(s_ex)) return cmd_exact(ex, argv_copy);
    if (app.got_subcommand(s_cmp)) return cmd_compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
