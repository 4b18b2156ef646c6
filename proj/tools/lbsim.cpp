// lbsim: command-line front end for the load-balancing testbed.
//
//   lbsim generate-trace  write one mobility/demand trace to a file
//   lbsim run             execute a sweep of (rb, ue, seed, policy) cells
//   lbsim report          rebuild report files from an existing results.csv

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lbsim/config.hpp"
#include "lbsim/harness.hpp"
#include "lbsim/trace.hpp"
#include "lbsim/util.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  bool full_scale = false;
};

using lbsim::SimConfig;

// Baseline defaults, desk-scaled unless asked for the full-size scenario,
// then any config file on top.
SimConfig make_base_config(const CommonOpts& opts) {
  SimConfig base;
  if (!opts.full_scale) lbsim::apply_desk_scale(base);
  if (!opts.config_path.empty()) {
    base = lbsim::load_config(opts.config_path, base);
  }
  return base;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "config file with `key = value` lines (overrides defaults)")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--full-scale", opts.full_scale,
                "full-size scenario (1440-epoch horizon, 100 episodes) "
                "instead of the fast desk-scale preset");
}

int cmd_generate_trace(const CommonOpts& opts, std::uint64_t seed, int num_ue,
                       const std::string& out_path) {
  SimConfig cfg = make_base_config(opts);
  if (num_ue > 0) cfg.num_ue = num_ue;
  cfg.rng_seed = seed;
  cfg.validate();
  const lbsim::Trace trace = lbsim::generate_trace(cfg, seed);
  lbsim::save_trace(trace, out_path);
  std::cout << "wrote " << out_path << " (" << cfg.num_ue << " users, "
            << cfg.horizon_epochs << " epochs, hash "
            << lbsim::fnv1a64_file(out_path) << ")\n";
  return 0;
}

int cmd_run(const CommonOpts& opts, const std::vector<std::uint64_t>& seeds,
            const std::string& policy, std::vector<int> rbs,
            std::vector<int> ues, int episodes, const std::string& out_dir) {
  lbsim::ExperimentPlan plan;
  plan.base = make_base_config(opts);
  if (episodes > 0) plan.base.hp.episodes = episodes;
  plan.out_dir = out_dir;

  if (rbs.empty()) rbs.push_back(plan.base.rb_per_bs);
  if (ues.empty()) ues.push_back(plan.base.num_ue);

  std::vector<lbsim::PolicyKind> kinds;
  if (policy == "dqn" || policy == "both") kinds.push_back(lbsim::PolicyKind::dqn);
  if (policy == "max_sinr" || policy == "both")
    kinds.push_back(lbsim::PolicyKind::max_sinr);
  lbsim::require(!kinds.empty(), "unknown policy '", policy,
                 "' (expected dqn, max_sinr, or both)");

  for (int rb : rbs)
    for (int ue : ues)
      for (std::uint64_t seed : seeds)
        for (lbsim::PolicyKind kind : kinds)
          plan.cells.push_back({rb, ue, seed, kind});

  const std::vector<lbsim::ResultRow> rows = lbsim::run_experiment(plan);
  lbsim::emit_report(rows, out_dir);

  int failed = 0;
  for (const lbsim::ResultRow& row : rows) {
    if (row.failed) {
      ++failed;
      std::cerr << "FAILED rb=" << row.rb_per_bs << " ue=" << row.num_ue
                << " seed=" << row.seed << " policy="
                << lbsim::policy_kind_name(row.policy) << ": " << row.error
                << '\n';
    }
  }
  std::cout << rows.size() << " cells, " << failed << " failed; report in "
            << out_dir << "/results.csv\n";
  return failed == 0 ? 0 : 1;
}

int cmd_report(const std::string& results_path, const std::string& out_dir) {
  const std::vector<lbsim::ResultRow> rows = lbsim::load_results(results_path);
  lbsim::emit_report(rows, out_dir);
  std::cout << "rebuilt report for " << rows.size() << " rows in " << out_dir
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic cellular load-balancing testbed"};
  app.require_subcommand(1);

  CommonOpts gen_opts;
  std::uint64_t gen_seed = 1;
  int gen_ue = 0;
  std::string gen_out = "trace.csv";
  CLI::App* gen = app.add_subcommand("generate-trace",
                                     "write one mobility/demand trace");
  add_common(gen, gen_opts);
  gen->add_option("--seed", gen_seed, "trace RNG seed");
  gen->add_option("--ue", gen_ue, "user count (default: from config)");
  gen->add_option("--out", gen_out, "output trace file");

  CommonOpts run_opts;
  std::vector<std::uint64_t> run_seeds;
  std::string run_policy = "both";
  std::vector<int> run_rbs;
  std::vector<int> run_ues;
  int run_episodes = 0;
  std::string run_out = "out";
  CLI::App* run = app.add_subcommand("run", "execute an experiment sweep");
  add_common(run, run_opts);
  run->add_option("--seed", run_seeds, "RNG seed (repeatable)");
  run->add_option("--policy", run_policy, "dqn, max_sinr, or both")
      ->check(CLI::IsMember({"dqn", "max_sinr", "both"}));
  run->add_option("--rb", run_rbs, "per-cell resource-block budget (repeatable)");
  run->add_option("--ue", run_ues, "user count (repeatable)");
  run->add_option("--episodes", run_episodes, "training episodes per DQN cell");
  run->add_option("--out", run_out, "output directory");

  std::string rep_results = "out/results.csv";
  std::string rep_out = "out";
  CLI::App* rep = app.add_subcommand("report",
                                     "rebuild report files from results.csv");
  rep->add_option("--results", rep_results, "existing results.csv")
      ->check(CLI::ExistingFile);
  rep->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_trace(gen_opts, gen_seed, gen_ue, gen_out);
    if (run->parsed()) {
      if (run_seeds.empty()) run_seeds.push_back(1);
      return cmd_run(run_opts, run_seeds, run_policy, run_rbs, run_ues,
                     run_episodes, run_out);
    }
    if (rep->parsed()) return cmd_report(rep_results, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
