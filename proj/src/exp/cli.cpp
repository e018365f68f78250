#include "mmarena/exp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmarena/exp/dataset.hpp"
#include "mmarena/exp/runner.hpp"
#include "mmarena/io/csv.hpp"
#include "mmarena/market/world.hpp"

namespace mmarena::exp {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int cmd_run(const ExperimentConfig& cfg) {
  const ResultsDataset ds = run_experiment(cfg);
  for (const SummaryRow& row : summarize(ds))
    std::cout << row.mm_id << ": mean=" << io::format_double(row.mean, 1)
              << " top=" << io::format_double(row.top, 1)
              << " bottom=" << io::format_double(row.bottom, 1)
              << " std=" << io::format_double(row.std_dev, 1) << "  (n=" << row.n
              << ")\n";
  if (!cfg.out_dir.empty())
    std::cout << "outputs written to " << cfg.out_dir << '\n';
  return 0;
}

int cmd_report(const std::string& dir, const std::string& out_dir, int window,
               bool kilo) {
  ResultsDataset ds = read_results_csv(dir + "/results.csv");
  const auto summary = summarize(ds);
  for (const SummaryRow& row : summary)
    if (row.n == 1)
      std::cerr << "note: " << row.mm_id
                << " has a single sample; std reported as 0\n";
  std::filesystem::create_directories(out_dir);
  write_summary_csv(out_dir + "/summary.csv", summary, kilo);

  const auto series = rolling_series(ds, window);
  {
    auto out = open_out(out_dir + "/rolling.csv");
    out << "simulation,mm_id,mean_reward\n";
    for (int sim = 0; sim < ds.simulations; ++sim)
      for (std::size_t mm = 0; mm < ds.roster.size(); ++mm)
        out << sim << ',' << ds.roster[mm] << ','
            << io::format_double(series[mm][static_cast<std::size_t>(sim)])
            << '\n';
  }

  read_actions_csv(dir + "/actions.csv", ds);
  const auto eps = eps_series(ds, window);
  {
    auto out = open_out(out_dir + "/eps_evolution.csv");
    out << "simulation,mm_id,eps_buy,eps_sell,eps_hedge\n";
    for (int sim = 0; sim < ds.simulations; ++sim)
      for (std::size_t mm = 0; mm < ds.roster.size(); ++mm) {
        const auto& e = eps[mm][static_cast<std::size_t>(sim)];
        out << sim << ',' << ds.roster[mm] << ',' << io::format_double(e[0])
            << ',' << io::format_double(e[1]) << ',' << io::format_double(e[2])
            << '\n';
      }
  }
  std::cout << "report written to " << out_dir << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Simulated market where learning market makers compete"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "train agents and record results");
  std::string config_path, experiment, out_dir;
  std::uint64_t seed = 0;
  int sims = 0, steps = 0, rounds = 0;
  std::vector<std::string> frozen;
  bool dump_ledger = false;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--experiment", experiment, "single|multi|transfer");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--sims", sims, "simulations per round");
  run->add_option("--steps", steps, "steps per simulation");
  run->add_option("--rounds", rounds, "independent rounds");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--frozen", frozen,
                  "frozen checkpoint paths (transfer; exactly two)");
  run->add_flag("--dump-ledger", dump_ledger,
                "write per-step MM accounting CSVs");

  // ---- report ----
  auto* report = app.add_subcommand(
      "report", "summaries, rolling series and epsilon evolution");
  std::string report_dir, report_out;
  int window = 50;
  bool kilo = false;
  report->add_option("dir", report_dir, "results directory")->required();
  report->add_option("--out", report_out, "output directory (default: dir)");
  report->add_option("--window", window, "rolling window in simulations");
  report->add_flag("--kilo", kilo, "report rewards divided by 1000");

  // ---- eval-checkpoints ----
  auto* evalc = app.add_subcommand("eval-checkpoints",
                                   "rank saved checkpoints by greedy play");
  std::string eval_dir, eval_agent, eval_out, eval_config;
  int eval_round = 0, eval_sims = 10, eval_steps = 2000;
  std::uint64_t eval_seed = 1;
  std::vector<int> schedule = {0, 10, 20, 30, 40, 50, 100, 150, 200, 250};
  evalc->add_option("--dir", eval_dir, "run output directory")->required();
  evalc->add_option("--round", eval_round, "round whose checkpoints to rank");
  evalc->add_option("--agent", eval_agent,
                    "agent subdirectory (multi-learner runs)");
  evalc->add_option("--schedule", schedule, "simulation indices to rank")
      ->delimiter(',');
  evalc->add_option("--sims", eval_sims, "evaluation simulations");
  evalc->add_option("--steps", eval_steps, "steps per evaluation simulation");
  evalc->add_option("--seed", eval_seed, "evaluation seed");
  evalc->add_option("--config", eval_config,
                    "JSON config for market/agent parameters");
  evalc->add_option("--out", eval_out, "ranking CSV path");

  // ---- importance ----
  auto* imp = app.add_subcommand("importance",
                                 "permutation importance of state features");
  std::string imp_ckpt, imp_out, imp_config;
  int probes = 1000, imp_steps = 2000;
  std::uint64_t imp_seed = 1;
  imp->add_option("--checkpoint", imp_ckpt, "checkpoint file")->required();
  imp->add_option("--probes", probes, "probe states to collect");
  imp->add_option("--steps", imp_steps, "steps per probe simulation");
  imp->add_option("--seed", imp_seed, "probe seed");
  imp->add_option("--config", imp_config,
                  "JSON config for market/agent parameters");
  imp->add_option("--out", imp_out, "importance CSV path");

  // ---- market-dump ----
  auto* dump = app.add_subcommand("market-dump",
                                  "per-step background market snapshots");
  std::string dump_out;
  std::uint64_t dump_seed = 1;
  int dump_steps = 1000;
  std::string dump_config;
  dump->add_option("--out", dump_out, "CSV path")->required();
  dump->add_option("--seed", dump_seed, "market seed");
  dump->add_option("--steps", dump_steps, "steps to simulate");
  dump->add_option("--config", dump_config,
                   "JSON config for market parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      ExperimentConfig cfg;
      if (run->count("--config")) cfg = load_config(config_path);
      if (run->count("--experiment")) cfg.kind = kind_from_string(experiment);
      if (run->count("--seed")) cfg.seed = seed;
      if (run->count("--sims")) cfg.simulations = sims;
      if (run->count("--steps")) cfg.steps = steps;
      if (run->count("--rounds")) cfg.rounds = rounds;
      if (run->count("--out")) cfg.out_dir = out_dir;
      if (run->count("--frozen")) cfg.frozen_checkpoints = frozen;
      if (run->count("--dump-ledger")) cfg.dump_ledger = dump_ledger;
      if (cfg.out_dir.empty())
        throw std::invalid_argument("run needs --out (or out_dir in config)");
      return cmd_run(cfg);
    }
    if (report->parsed()) {
      return cmd_report(report_dir,
                        report->count("--out") ? report_out : report_dir,
                        window, kilo);
    }
    if (evalc->parsed()) {
      EvalConfig ecfg;
      if (evalc->count("--config")) {
        const ExperimentConfig base = load_config(eval_config);
        ecfg.arena = base.arena;
        ecfg.agent = base.agent;
      }
      ecfg.simulations = eval_sims;
      ecfg.steps = eval_steps;
      ecfg.seed = eval_seed;
      std::vector<EvalEntry> entries;
      for (int k : schedule) {
        std::string path = eval_dir + "/checkpoints/";
        if (!eval_agent.empty()) path += eval_agent + "/";
        path += "ckpt_round" + std::to_string(eval_round) + "_sim" +
                std::to_string(k) + ".json";
        if (!std::filesystem::exists(path)) {
          std::cerr << "note: skipping sim " << k << " (no " << path << ")\n";
          continue;
        }
        entries.push_back(EvalEntry{k, path});
      }
      if (entries.empty())
        throw std::runtime_error("no checkpoints found under " + eval_dir);
      const auto ranking = evaluate_checkpoints(entries, ecfg);
      std::cout << "rank,sim_index,mean_reward\n";
      for (std::size_t i = 0; i < ranking.size(); ++i)
        std::cout << i + 1 << ',' << ranking[i].sim_index << ','
                  << io::format_double(ranking[i].mean_reward) << '\n';
      std::cout << "best checkpoint: sim " << ranking.front().sim_index << '\n';
      if (!eval_out.empty()) {
        auto out = open_out(eval_out);
        out << "rank,sim_index,mean_reward\n";
        for (std::size_t i = 0; i < ranking.size(); ++i)
          out << i + 1 << ',' << ranking[i].sim_index << ','
              << io::format_double(ranking[i].mean_reward) << '\n';
      }
      return 0;
    }
    if (imp->parsed()) {
      env::ArenaConfig arena_cfg;
      agent::DqnConfig agent_cfg;
      if (imp->count("--config")) {
        const ExperimentConfig base = load_config(imp_config);
        arena_cfg = base.arena;
        agent_cfg = base.agent;
      }
      const auto ckpt = nn::load_checkpoint(imp_ckpt);
      const auto net = nn::net_from_checkpoint(ckpt);
      const auto std_ = nn::standardizer_from_checkpoint(ckpt);
      const auto probe_states = collect_probe_states(
          ckpt, arena_cfg, agent_cfg, probes, imp_steps, imp_seed);
      Rng rng = make_rng(imp_seed, stream::kImportance, 0xfeed);
      const auto rows =
          permutation_importance(net, std_, probe_states, rng);
      std::cout << "rank,feature_index,feature_name,importance\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        std::cout << i + 1 << ',' << rows[i].feature << ',' << rows[i].name
                  << ',' << io::format_double(rows[i].importance) << '\n';
      if (!imp_out.empty()) {
        auto out = open_out(imp_out);
        out << "rank,feature_index,feature_name,importance\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
          out << i + 1 << ',' << rows[i].feature << ',' << rows[i].name << ','
              << io::format_double(rows[i].importance) << '\n';
      }
      return 0;
    }
    if (dump->parsed()) {
      market::MarketConfig mcfg;
      if (dump->count("--config")) mcfg = load_config(dump_config).arena.market;
      market::MarketWorld world(mcfg, derive_seed(dump_seed, stream::kMarket));
      auto out = open_out(dump_out);
      out << "step,mid,spread_ref,volume,mid_var\n";
      auto emit = [&out](const market::MarketSnapshot& s) {
        out << s.step << ',' << s.mid_price << ',' << s.spread_ref << ','
            << s.volume << ',' << s.mid_price_variation << '\n';
      };
      emit(world.snapshot());
      for (int t = 0; t < dump_steps; ++t) emit(world.step());
      std::cout << "market dump written to " << dump_out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mmarena::exp
