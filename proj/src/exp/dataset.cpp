#include "mmarena/exp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mmarena/io/csv.hpp"

namespace mmarena::exp {
namespace {

// Rewards of one MM grouped as [round][simulation].
std::vector<std::vector<std::int64_t>> per_round_rewards(
    const ResultsDataset& ds, int mm) {
  std::vector<std::vector<std::int64_t>> by_round(
      static_cast<std::size_t>(ds.rounds),
      std::vector<std::int64_t>(static_cast<std::size_t>(ds.simulations), 0));
  for (const ResultRow& r : ds.results)
    if (r.mm == mm)
      by_round.at(static_cast<std::size_t>(r.round))
          .at(static_cast<std::size_t>(r.simulation)) = r.total_reward;
  return by_round;
}

std::vector<double> rolling(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(series.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    sum += series[k];
    if (k >= static_cast<std::size_t>(window))
      sum -= series[k - static_cast<std::size_t>(window)];
    const auto span = std::min<std::size_t>(k + 1,
                                            static_cast<std::size_t>(window));
    out[k] = sum / static_cast<double>(span);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<SummaryRow> summarize(const ResultsDataset& ds) {
  if (ds.results.empty()) throw std::invalid_argument("empty dataset");
  std::vector<SummaryRow> rows;
  for (std::size_t mm = 0; mm < ds.roster.size(); ++mm) {
    SummaryRow row;
    row.mm_id = ds.roster[mm];
    double sum = 0.0;
    std::int64_t top = 0, bottom = 0;
    bool first = true;
    for (const ResultRow& r : ds.results) {
      if (r.mm != static_cast<int>(mm)) continue;
      ++row.n;
      sum += static_cast<double>(r.total_reward);
      if (first || r.total_reward > top) top = r.total_reward;
      if (first || r.total_reward < bottom) bottom = r.total_reward;
      first = false;
    }
    if (row.n == 0) continue;
    row.mean = sum / row.n;
    row.top = static_cast<double>(top);
    row.bottom = static_cast<double>(bottom);
    if (row.n > 1) {
      double ss = 0.0;
      for (const ResultRow& r : ds.results) {
        if (r.mm != static_cast<int>(mm)) continue;
        const double d = static_cast<double>(r.total_reward) - row.mean;
        ss += d * d;
      }
      row.std_dev = std::sqrt(ss / (row.n - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<double>> rolling_series(const ResultsDataset& ds,
                                                int window) {
  if (ds.results.empty()) throw std::invalid_argument("empty dataset");
  std::vector<std::vector<double>> out;
  for (std::size_t mm = 0; mm < ds.roster.size(); ++mm) {
    const auto by_round = per_round_rewards(ds, static_cast<int>(mm));
    std::vector<double> mean_per_sim(static_cast<std::size_t>(ds.simulations),
                                     0.0);
    for (int k = 0; k < ds.simulations; ++k) {
      double sum = 0.0;
      for (int r = 0; r < ds.rounds; ++r)
        sum += static_cast<double>(
            by_round[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]);
      mean_per_sim[static_cast<std::size_t>(k)] = sum / ds.rounds;
    }
    out.push_back(rolling(mean_per_sim, window));
  }
  return out;
}

std::vector<std::vector<std::array<double, 3>>> eps_series(
    const ResultsDataset& ds, int window) {
  if (ds.actions.empty()) throw std::invalid_argument("no action records");
  const auto mms = ds.roster.size();
  const auto sims = static_cast<std::size_t>(ds.simulations);
  // Accumulate per (mm, simulation) means across rounds and steps.
  std::vector<std::vector<std::array<double, 3>>> sums(
      mms, std::vector<std::array<double, 3>>(sims, {0.0, 0.0, 0.0}));
  std::vector<std::vector<std::int64_t>> counts(
      mms, std::vector<std::int64_t>(sims, 0));
  for (const ActionRec& a : ds.actions) {
    auto& cell = sums.at(static_cast<std::size_t>(a.mm))
                     .at(static_cast<std::size_t>(a.simulation));
    cell[0] += env::kSpreadGrid[static_cast<std::size_t>(a.buy)];
    cell[1] += env::kSpreadGrid[static_cast<std::size_t>(a.sell)];
    cell[2] += env::kHedgeGrid[static_cast<std::size_t>(a.hedge)];
    ++counts[static_cast<std::size_t>(a.mm)]
            [static_cast<std::size_t>(a.simulation)];
  }
  std::vector<std::vector<std::array<double, 3>>> out(
      mms, std::vector<std::array<double, 3>>(sims, {0.0, 0.0, 0.0}));
  for (std::size_t mm = 0; mm < mms; ++mm) {
    for (int c = 0; c < 3; ++c) {
      std::vector<double> series(sims, 0.0);
      for (std::size_t k = 0; k < sims; ++k)
        series[k] = counts[mm][k] > 0
                        ? sums[mm][k][static_cast<std::size_t>(c)] /
                              static_cast<double>(counts[mm][k])
                        : 0.0;
      const auto smooth = rolling(series, window);
      for (std::size_t k = 0; k < sims; ++k)
        out[mm][k][static_cast<std::size_t>(c)] = smooth[k];
    }
  }
  return out;
}

void write_results_csv(const std::string& path, const ResultsDataset& ds) {
  auto out = open_out(path);
  out << "round,simulation,mm_id,total_reward\n";
  for (const ResultRow& r : ds.results)
    out << r.round << ',' << r.simulation << ','
        << ds.roster.at(static_cast<std::size_t>(r.mm)) << ','
        << r.total_reward << '\n';
}

void write_actions_csv(const std::string& path, const ResultsDataset& ds) {
  auto out = open_out(path);
  out << "round,simulation,step,mm_id,eps_buy,eps_sell,eps_hedge\n";
  std::string buf;
  buf.reserve(1 << 20);
  char line[160];
  for (const ActionRec& a : ds.actions) {
    std::snprintf(line, sizeof(line), "%d,%d,%d,%s,%.2f,%.2f,%.2f\n", a.round,
                  a.simulation, a.step,
                  ds.roster.at(static_cast<std::size_t>(a.mm)).c_str(),
                  env::kSpreadGrid[static_cast<std::size_t>(a.buy)],
                  env::kSpreadGrid[static_cast<std::size_t>(a.sell)],
                  env::kHedgeGrid[static_cast<std::size_t>(a.hedge)]);
    buf += line;
    if (buf.size() > (1 << 20) - 256) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows, bool kilo) {
  auto out = open_out(path);
  const double scale = kilo ? 1e-3 : 1.0;
  out << "mm_id,mean,top,bottom,std\n";
  for (const SummaryRow& r : rows)
    out << r.mm_id << ',' << io::format_double(r.mean * scale) << ','
        << io::format_double(r.top * scale) << ','
        << io::format_double(r.bottom * scale) << ','
        << io::format_double(r.std_dev * scale) << '\n';
}

ResultsDataset read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  ResultsDataset ds;
  std::map<std::string, int> index;
  std::string line;
  if (!std::getline(in, line) ||
      line != "round,simulation,mm_id,total_reward")
    throw std::runtime_error("bad results.csv header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 4)
      throw std::runtime_error("bad results.csv row: " + line);
    ResultRow r;
    r.round = std::stoi(f[0]);
    r.simulation = std::stoi(f[1]);
    auto it = index.find(f[2]);
    if (it == index.end()) {
      it = index.emplace(f[2], static_cast<int>(ds.roster.size())).first;
      ds.roster.push_back(f[2]);
    }
    r.mm = it->second;
    r.total_reward = std::stoll(f[3]);
    ds.results.push_back(r);
    ds.rounds = std::max(ds.rounds, r.round + 1);
    ds.simulations = std::max(ds.simulations, r.simulation + 1);
  }
  if (ds.results.empty())
    throw std::runtime_error("results.csv has no rows: " + path);
  return ds;
}

void read_actions_csv(const std::string& path, ResultsDataset& ds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < ds.roster.size(); ++i)
    index[ds.roster[i]] = static_cast<int>(i);
  std::string line;
  if (!std::getline(in, line) ||
      line != "round,simulation,step,mm_id,eps_buy,eps_sell,eps_hedge")
    throw std::runtime_error("bad actions.csv header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 7) throw std::runtime_error("bad actions.csv row: " + line);
    const auto it = index.find(f[3]);
    if (it == index.end())
      throw std::runtime_error("actions.csv mm not in results.csv: " + f[3]);
    const auto action = env::MMAction::from_eps(
        std::stod(f[4]), std::stod(f[5]), std::stod(f[6]));
    ActionRec rec;
    rec.round = std::stoi(f[0]);
    rec.simulation = std::stoi(f[1]);
    rec.step = std::stoi(f[2]);
    rec.mm = static_cast<std::int16_t>(it->second);
    rec.buy = static_cast<std::int8_t>(action.buy_index());
    rec.sell = static_cast<std::int8_t>(action.sell_index());
    rec.hedge = static_cast<std::int8_t>(action.hedge_index());
    ds.actions.push_back(rec);
  }
}

}  // namespace mmarena::exp
