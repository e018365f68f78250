#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mmarena/env/action.hpp"

namespace mmarena::exp {

struct ResultRow {
  int round = 0;
  int simulation = 0;
  int mm = 0;  // roster index
  std::int64_t total_reward = 0;
};

struct ActionRec {
  std::int32_t round = 0;
  std::int32_t simulation = 0;
  std::int32_t step = 0;
  std::int16_t mm = 0;
  std::int8_t buy = 0;  // grid indices
  std::int8_t sell = 0;
  std::int8_t hedge = 0;
};

struct ResultsDataset {
  std::vector<std::string> roster;  // mm names in registration order
  std::vector<ResultRow> results;   // ordered by (round, simulation, mm)
  std::vector<ActionRec> actions;   // same ordering, one row per step
  std::string config_hash;
  std::uint64_t seed = 0;
  int rounds = 0;
  int simulations = 0;
};

struct SummaryRow {
  std::string mm_id;
  double mean = 0;
  double top = 0;
  double bottom = 0;
  double std_dev = 0;  // sample std; 0 by convention when n = 1
  int n = 0;
};

// Per-MM mean/max/min/sample-std over all (round, simulation) rewards.
std::vector<SummaryRow> summarize(const ResultsDataset& ds);

// Trailing mean over the last `window` simulations of the cross-round mean
// reward; the first window-1 points average the available prefix.
// Indexed [mm][simulation].
std::vector<std::vector<double>> rolling_series(const ResultsDataset& ds,
                                                int window = 50);

// Same rolling treatment applied to the per-simulation mean of each chosen
// epsilon component. Indexed [mm][simulation][component: buy, sell, hedge].
std::vector<std::vector<std::array<double, 3>>> eps_series(
    const ResultsDataset& ds, int window = 50);

void write_results_csv(const std::string& path, const ResultsDataset& ds);
void write_actions_csv(const std::string& path, const ResultsDataset& ds);
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows, bool kilo);

// Rebuilds a dataset from emitted CSVs (report path). Roster order is the
// first-appearance order of mm ids in results.csv.
ResultsDataset read_results_csv(const std::string& path);
void read_actions_csv(const std::string& path, ResultsDataset& ds);

}  // namespace mmarena::exp
