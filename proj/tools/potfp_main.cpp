// potfp: sample, analyze, and simulate fictitious play on potential games.
//
// Subcommands: gen, potential-check, equilibria, simulate, rate, batch.
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "potfp/potfp.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<int> parse_counts(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    out.push_back(std::stoi(tok));
  if (out.empty()) throw potfp::InvalidCounts("empty action counts");
  return out;
}

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    out.push_back(std::stod(tok));
  return out;
}

potfp::Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return potfp::Metric::euclidean;
  if (name == "sup") return potfp::Metric::sup;
  throw potfp::Error("unknown metric: " + name);
}

struct CommonOpts {
  std::string game_path;
  std::string x0_csv;
  std::string out_dir = ".";
  std::string metric_name = "euclidean";
  double horizon = 50.0;
  double tol = -1.0;  // < 0 means defaults
  std::uint64_t seed = 1;
};

potfp::Tolerances effective_tol(double override_tol) {
  potfp::Tolerances tol;
  if (override_tol > 0.0) {
    tol.tie = override_tol;
    tol.equilibrium = override_tol;
    tol.potential_check = override_tol;
  }
  return tol;
}

potfp::PotentialGame load_potential_game(const CommonOpts& opt) {
  return potfp::potential_game_from_json(potfp::load_json(opt.game_path),
                                         effective_tol(opt.tol).potential_check);
}

potfp::XProfile parse_x0(const potfp::Game& g, const std::string& csv) {
  potfp::XProfile x = potfp::unflatten(g.action_counts, parse_reals(csv));
  potfp::validate_x(x, potfp::default_tolerances().simplex);
  return x;
}

int cmd_gen(const CommonOpts& opt, const std::string& actions_csv, int n) {
  const std::vector<int> counts = parse_counts(actions_csv);
  fs::create_directories(opt.out_dir);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t game_seed =
        potfp::substream(opt.seed, "game", static_cast<std::uint64_t>(i))();
    potfp::PotentialGame pg = potfp::sample_potential_game(counts, game_seed);
    std::ostringstream name;
    name << "game_" << std::setw(3) << std::setfill('0') << i << ".json";
    potfp::save_json((fs::path(opt.out_dir) / name.str()).string(),
                     potfp::game_to_json(pg.game, &pg.potential));
  }
  std::cout << "wrote " << n << " games to " << opt.out_dir << "\n";
  return 0;
}

int cmd_potential_check(const CommonOpts& opt, const std::string& out_file) {
  const json j = potfp::load_json(opt.game_path);
  potfp::Game g = potfp::game_from_json(j);
  const double tol = effective_tol(opt.tol).potential_check;
  json report;
  if (j.contains("potential")) {
    potfp::PotentialCheck chk =
        potfp::check_exact_potential(g, j["potential"].get<potfp::Tensor>(), tol);
    report["mode"] = "verify";
    report["ok"] = chk.ok;
    report["max_violation"] = chk.max_violation;
    std::cout << report.dump(2) << "\n";
    if (!chk.ok) {
      std::cerr << "stored potential fails the deviation identity\n";
      return 2;
    }
  } else {
    potfp::PotentialGame pg = potfp::extract_potential(g, tol);
    report["mode"] = "extract";
    report["ok"] = true;
    report["max_violation"] =
        potfp::check_exact_potential(g, pg.potential, tol).max_violation;
    std::cout << report.dump(2) << "\n";
    if (!out_file.empty())
      potfp::save_json(out_file, potfp::game_to_json(g, &pg.potential));
  }
  return 0;
}

int cmd_equilibria(const CommonOpts& opt, const std::string& out_file) {
  potfp::PotentialGame pg = load_potential_game(opt);
  json out = potfp::equilibria_to_json(potfp::enumerate_all_nash(pg));
  if (!out_file.empty())
    potfp::save_json(out_file, out);
  else
    std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opt) {
  potfp::PotentialGame pg = load_potential_game(opt);
  potfp::XProfile x0 = parse_x0(pg.game, opt.x0_csv);
  potfp::SimOptions sim;
  sim.tol = effective_tol(opt.tol);
  sim.lock_seed = opt.seed;
  potfp::Trajectory traj = potfp::simulate_fp(pg, x0, opt.horizon, sim);
  auto eqs = potfp::enumerate_all_nash(pg);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  std::ofstream csv(dir / "trajectory.csv");
  if (!csv) throw potfp::IOFailure("cannot open trajectory.csv");
  potfp::write_trajectory_csv(csv, traj, pg, eqs);
  potfp::save_json((dir / "events.json").string(), potfp::events_to_json(traj));
  std::cout << "status: " << potfp::to_string(traj.status) << ", "
            << traj.segments.size() << " segments, " << traj.events.size()
            << " events\n";
  return 0;
}

int cmd_rate(const CommonOpts& opt) {
  potfp::PotentialGame pg = load_potential_game(opt);
  potfp::XProfile x0 = parse_x0(pg.game, opt.x0_csv);
  const potfp::Metric metric = parse_metric(opt.metric_name);
  potfp::SimOptions sim;
  sim.tol = effective_tol(opt.tol);
  sim.lock_seed = opt.seed;
  potfp::Trajectory traj = potfp::simulate_fp(pg, x0, opt.horizon, sim);
  if (traj.status != potfp::SimStatus::Converged) {
    json j;
    j["status"] = potfp::to_string(traj.status);
    fs::create_directories(opt.out_dir);
    potfp::save_json((fs::path(opt.out_dir) / "certificate.json").string(), j);
    std::cerr << "no certificate: trajectory status is "
              << potfp::to_string(traj.status) << "\n";
    return 2;
  }
  potfp::RateCertificate cert = potfp::rate_certificate(traj, metric);
  auto eqs = potfp::enumerate_all_nash(pg);
  potfp::BoundCheck bound =
      potfp::verify_bound(traj, cert, eqs, sim.tol.equilibrium, metric);
  json j = potfp::certificate_to_json(cert, traj.status);
  j["bound_ok"] = bound.ok;
  j["worst_slack"] = bound.worst_slack;
  fs::create_directories(opt.out_dir);
  potfp::save_json((fs::path(opt.out_dir) / "certificate.json").string(), j);
  std::cout << j.dump(2) << "\n";
  if (!bound.ok) {
    std::cerr << "bound verification failed, worst slack "
              << bound.worst_slack << "\n";
    return 2;
  }
  return 0;
}

int cmd_batch(const CommonOpts& opt,
              const std::vector<std::string>& actions_list, int n_games,
              int n_inits, int jobs) {
  potfp::BatchConfig cfg;
  cfg.shapes.clear();
  for (const auto& a : actions_list) cfg.shapes.push_back(parse_counts(a));
  if (cfg.shapes.empty()) cfg.shapes = {{2, 2}};
  cfg.n_games = n_games;
  cfg.n_inits = n_inits;
  cfg.seed = opt.seed;
  cfg.horizon = opt.horizon;
  cfg.tol = effective_tol(opt.tol);
  cfg.jobs = jobs;
  potfp::BatchResult res = potfp::run_batch(cfg);
  json summary = potfp::write_batch_summary(res);
  fs::create_directories(opt.out_dir);
  potfp::save_json((fs::path(opt.out_dir) / "summary.json").string(), summary);
  std::cout << "runs: " << summary["n_runs"] << ", fraction converged pure: "
            << summary["fraction_converged_pure"]
            << ", fraction regular: " << summary["fraction_regular"] << "\n";
  if (summary["n_bound_failures"].get<int>() > 0 ||
      summary["n_lock_failures"].get<int>() > 0) {
    std::cerr << "verification failures in batch\n";
    return 2;
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"fictitious play on finite potential games"};
  app.require_subcommand(1);
  CommonOpts opt;

  std::string actions_csv;
  std::vector<std::string> actions_list;
  std::string out_file;
  int n = 1, n_inits = 20, jobs = 1;

  auto add_common = [&](CLI::App* sub, bool needs_game) {
    if (needs_game)
      sub->add_option("--game", opt.game_path, "game JSON file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--tol", opt.tol, "tolerance override");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--horizon", opt.horizon, "simulation horizon");
    sub->add_option("--metric", opt.metric_name, "euclidean|sup");
  };

  CLI::App* gen = app.add_subcommand("gen", "sample potential games");
  add_common(gen, false);
  gen->add_option("--actions", actions_csv, "action counts, e.g. 2,3")
      ->required();
  gen->add_option("--n", n, "number of games");

  CLI::App* pcheck =
      app.add_subcommand("potential-check", "verify or extract a potential");
  add_common(pcheck, true);
  pcheck->add_option("--out-file", out_file, "write game+potential JSON here");

  CLI::App* eq = app.add_subcommand("equilibria", "enumerate and classify");
  add_common(eq, true);
  eq->add_option("--out-file", out_file, "write equilibria JSON here");

  CLI::App* sim = app.add_subcommand("simulate", "fictitious play trajectory");
  add_common(sim, true);
  sim->add_option("--x0", opt.x0_csv, "flattened X coordinates")->required();

  CLI::App* rate = app.add_subcommand("rate", "convergence-rate certificate");
  add_common(rate, true);
  rate->add_option("--x0", opt.x0_csv, "flattened X coordinates")->required();

  CLI::App* batch = app.add_subcommand("batch", "games x inits experiment");
  add_common(batch, false);
  batch->add_option("--actions", actions_list,
                    "action counts (repeatable; cycled across games)")
      ->required();
  batch->add_option("--n", n, "number of games");
  batch->add_option("--n-inits", n_inits, "initial conditions per game");
  batch->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(opt, actions_csv, n);
    if (pcheck->parsed()) return cmd_potential_check(opt, out_file);
    if (eq->parsed()) return cmd_equilibria(opt, out_file);
    if (sim->parsed()) return cmd_simulate(opt);
    if (rate->parsed()) return cmd_rate(opt);
    if (batch->parsed())
      return cmd_batch(opt, actions_list, n, n_inits, jobs);
  } catch (const potfp::NotPotentialGame& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const potfp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
