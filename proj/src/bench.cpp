#include "pabcd/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace pabcd {

namespace {

GeneratorSpec generator_from_json(const nlohmann::json& j) {
  GeneratorSpec spec;
  spec.rows = j.at("rows").get<index_t>();
  spec.cols = j.at("cols").get<index_t>();
  spec.nnz_per_col = j.at("nnz_per_col").get<index_t>();
  if (j.contains("support")) spec.support_size = j["support"].get<index_t>();
  if (j.contains("lambda")) spec.lambda = j["lambda"].get<double>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  return spec;
}

SolverParams params_from_json(const nlohmann::json& j) {
  SolverParams p;
  if (j.contains("mode")) p.mode = mode_from_string(j["mode"].get<std::string>());
  if (j.contains("delta_dp")) p.delta_dp = j["delta_dp"].get<index_t>();
  if (j.contains("delta_f")) p.delta_f = j["delta_f"].get<index_t>();
  if (j.contains("alpha")) p.alpha = j["alpha"].get<double>();
  if (j.contains("c0")) p.c0 = j["c0"].get<index_t>();
  if (j.contains("epsilon")) p.epsilon = j["epsilon"].get<double>();
  if (j.contains("l_max")) p.l_max = j["l_max"].get<long long>();
  return p;
}

}  // namespace

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j = nlohmann::json::parse(in);

  BenchConfig cfg;
  for (const auto& ji : j.at("instances")) {
    InstanceConfig inst;
    inst.name = ji.at("name").get<std::string>();
    if (ji.contains("path")) inst.path = ji["path"].get<std::string>();
    if (ji.contains("gen")) inst.gen = generator_from_json(ji["gen"]);
    if (ji.contains("f_target")) inst.f_target = ji["f_target"].get<double>();
    if (ji.contains("target_rel")) inst.target_rel = ji["target_rel"].get<double>();
    if (ji.contains("lambda")) inst.lambda = ji["lambda"].get<double>();
    cfg.instances.push_back(std::move(inst));
  }
  for (const auto& jm : j.at("methods")) {
    MethodConfig method;
    method.name = jm.at("name").get<std::string>();
    method.params = params_from_json(jm);
    if (jm.contains("threads"))
      method.threads = jm["threads"].get<std::vector<int>>();
    cfg.methods.push_back(std::move(method));
  }
  if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
  if (j.contains("time_floor")) cfg.time_floor = j["time_floor"].get<double>();
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (cfg.runs < 1) throw std::runtime_error("runs must be >= 1");
  return cfg;
}

namespace {

struct ResolvedInstance {
  CompositeProblem problem;
  std::optional<double> f_target;
};

ResolvedInstance resolve_instance(const InstanceConfig& cfg) {
  ResolvedInstance out;
  if (cfg.gen) {
    auto inst = generate(*cfg.gen);
    out.problem = build_lasso(std::move(inst.A), std::move(inst.b),
                              cfg.gen->lambda);
    out.f_target = cfg.f_target
                       ? cfg.f_target
                       : std::optional<double>(inst.f_star *
                                               (1.0 + cfg.target_rel));
    return out;
  }
  if (cfg.path.ends_with(".mtx")) {
    auto inst = read_instance(cfg.path);
    const double lambda = cfg.lambda ? *cfg.lambda : inst.lambda;
    out.f_target = cfg.f_target;
    if (!out.f_target && inst.f_star)
      out.f_target = *inst.f_star * (1.0 + cfg.target_rel);
    out.problem = build_lasso(std::move(inst.A), std::move(inst.b), lambda);
    return out;
  }
  auto data = load_libsvm(cfg.path);
  const double lambda =
      cfg.lambda ? *cfg.lambda : default_lambda(data.matrix, data.labels);
  out.problem =
      build_lasso(std::move(data.matrix), std::move(data.labels), lambda);
  out.f_target = cfg.f_target;
  return out;
}

}  // namespace

std::vector<CellResult> run_benchmark(const BenchConfig& cfg) {
  std::vector<CellResult> cells;
  for (const auto& icfg : cfg.instances) {
    std::optional<ResolvedInstance> inst;
    std::string failure;
    try {
      inst = resolve_instance(icfg);
    } catch (const std::exception& e) {
      failure = e.what();
      std::cerr << "warning: instance '" << icfg.name
                << "' failed to load: " << failure << "\n";
    }
    for (const auto& mcfg : cfg.methods) {
      for (int tau : mcfg.threads) {
        CellResult cell;
        cell.instance = icfg.name;
        cell.method = mcfg.name;
        cell.tau = tau;
        if (!inst) {
          cell.failed = true;
          cell.note = failure;
          cells.push_back(std::move(cell));
          continue;
        }
        SolverParams params = mcfg.params;
        params.tau = tau;
        params.f_target = inst->f_target;

        double total_seconds = 0.0, total_updates = 0.0;
        int successes = 0, runs = 0;
        while (runs < cfg.runs || total_seconds < cfg.time_floor) {
          params.seed = cfg.seed + static_cast<std::uint64_t>(runs);
          const RunRecord record = solve(inst->problem, params);
          total_seconds += record.wall_seconds;
          total_updates += static_cast<double>(record.total_updates);
          const bool ok = inst->f_target
                              ? record.termination == Termination::target_reached
                              : record.termination == Termination::v_small;
          if (ok) ++successes;
          ++runs;
        }
        cell.runs = runs;
        cell.mean_seconds = total_seconds / runs;
        cell.mean_updates = total_updates / runs;
        cell.success_rate = static_cast<double>(successes) / runs;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<std::vector<ProfilePoint>> performance_profile(
    const std::vector<std::vector<double>>& times) {
  const std::size_t problems = times.size();
  const std::size_t methods = problems == 0 ? 0 : times[0].size();
  std::vector<std::vector<double>> ratios(methods);

  for (std::size_t row = 0; row < problems; ++row) {
    double best = std::numeric_limits<double>::infinity();
    for (double t : times[row])
      if (std::isfinite(t) && t > 0.0) best = std::min(best, t);
    for (std::size_t col = 0; col < methods; ++col) {
      const double t = times[row][col];
      ratios[col].push_back(std::isfinite(t) && std::isfinite(best)
                                ? std::log2(t / best)
                                : std::numeric_limits<double>::infinity());
    }
  }

  std::vector<std::vector<ProfilePoint>> profile(methods);
  for (std::size_t col = 0; col < methods; ++col) {
    auto& r = ratios[col];
    std::sort(r.begin(), r.end());
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (!std::isfinite(r[k])) break;
      const double fraction =
          static_cast<double>(k + 1) / static_cast<double>(problems);
      if (!profile[col].empty() && profile[col].back().log2_ratio == r[k])
        profile[col].back().fraction_solved = fraction;
      else
        profile[col].push_back({r[k], fraction});
    }
  }
  return profile;
}

std::vector<SpeedupEntry> speedup_table(const std::vector<CellResult>& cells) {
  std::map<std::pair<std::string, std::string>, double> serial_time;
  for (const auto& cell : cells)
    if (cell.tau == 1 && !cell.failed)
      serial_time[{cell.instance, cell.method}] = cell.mean_seconds;

  std::vector<SpeedupEntry> table;
  for (const auto& cell : cells) {
    if (cell.tau == 1 || cell.failed) continue;
    const auto it = serial_time.find({cell.instance, cell.method});
    if (it == serial_time.end()) {
      std::cerr << "warning: no tau=1 cell for (" << cell.instance << ", "
                << cell.method << "); speedup omitted\n";
      continue;
    }
    table.push_back(
        {cell.instance, cell.method, cell.tau, it->second / cell.mean_seconds});
  }
  return table;
}

std::vector<SpeedupQuantiles> speedup_quantiles(
    const std::vector<SpeedupEntry>& table) {
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const auto& e : table) groups[{e.method, e.tau}].push_back(e.ratio);

  auto quantile = [](const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
  };

  std::vector<SpeedupQuantiles> out;
  for (auto& [key, ratios] : groups) {
    std::sort(ratios.begin(), ratios.end());
    SpeedupQuantiles row;
    row.method = key.first;
    row.tau = key.second;
    row.min = ratios.front();
    row.q25 = quantile(ratios, 0.25);
    row.median = quantile(ratios, 0.5);
    row.q75 = quantile(ratios, 0.75);
    row.max = ratios.back();
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "instance,method,tau,runs,mean_seconds,mean_updates,success_rate,"
         "failed,note\n";
  for (const auto& c : cells)
    out << c.instance << ',' << c.method << ',' << c.tau << ',' << c.runs
        << ',' << c.mean_seconds << ',' << c.mean_updates << ','
        << c.success_rate << ',' << (c.failed ? 1 : 0) << ",\"" << c.note
        << "\"\n";
}

nlohmann::json cells_json(const std::vector<CellResult>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells)
    arr.push_back({{"instance", c.instance},
                   {"method", c.method},
                   {"tau", c.tau},
                   {"runs", c.runs},
                   {"mean_seconds", c.mean_seconds},
                   {"mean_updates", c.mean_updates},
                   {"success_rate", c.success_rate},
                   {"failed", c.failed},
                   {"note", c.note}});
  return arr;
}

// (problems × method-variants) time matrix from the cell list
void profile_inputs(const std::vector<CellResult>& cells,
                    std::vector<std::string>& variants,
                    std::vector<std::vector<double>>& times) {
  std::vector<std::string> instances;
  std::map<std::string, std::size_t> variant_col, instance_row;
  for (const auto& c : cells) {
    const std::string variant = c.method + "-" + std::to_string(c.tau) + "T";
    if (!variant_col.count(variant)) {
      variant_col[variant] = variants.size();
      variants.push_back(variant);
    }
    if (!instance_row.count(c.instance)) {
      instance_row[c.instance] = instances.size();
      instances.push_back(c.instance);
    }
  }
  times.assign(instances.size(),
               std::vector<double>(variants.size(),
                                   std::numeric_limits<double>::infinity()));
  for (const auto& c : cells)
    if (!c.failed && c.success_rate > 0.0)
      times[instance_row[c.instance]]
           [variant_col[c.method + "-" + std::to_string(c.tau) + "T"]] =
               c.mean_seconds;
}

}  // namespace

void write_results(const BenchConfig& cfg,
                   const std::vector<CellResult>& cells) {
  std::vector<std::string> variants;
  std::vector<std::vector<double>> times;
  profile_inputs(cells, variants, times);
  const auto profile = performance_profile(times);
  const auto speedups = speedup_table(cells);
  const auto quantiles = speedup_quantiles(speedups);

  if (cfg.format == "json") {
    nlohmann::json doc;
    doc["cells"] = cells_json(cells);
    nlohmann::json prof = nlohmann::json::object();
    for (std::size_t col = 0; col < variants.size(); ++col) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& pt : profile[col])
        pts.push_back({{"log2_ratio", pt.log2_ratio},
                       {"fraction_solved", pt.fraction_solved}});
      prof[variants[col]] = pts;
    }
    doc["profile"] = prof;
    nlohmann::json sp = nlohmann::json::array();
    for (const auto& e : speedups)
      sp.push_back({{"instance", e.instance},
                    {"method", e.method},
                    {"tau", e.tau},
                    {"ratio", e.ratio}});
    doc["speedup"] = sp;
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : quantiles)
      qs.push_back({{"method", q.method},
                    {"tau", q.tau},
                    {"min", q.min},
                    {"q25", q.q25},
                    {"median", q.median},
                    {"q75", q.q75},
                    {"max", q.max}});
    doc["speedup_quantiles"] = qs;
    if (cfg.output.empty()) {
      std::cout << doc.dump(2) << '\n';
    } else {
      std::ofstream out(cfg.output);
      out << doc.dump(2) << '\n';
    }
    return;
  }

  if (cfg.output.empty()) {
    write_cells_csv(std::cout, cells);
    return;
  }
  {
    std::ofstream out(cfg.output);
    write_cells_csv(out, cells);
  }
  {
    std::ofstream out(cfg.output + ".profile.csv");
    out << "method,log2_ratio,fraction_solved\n";
    for (std::size_t col = 0; col < variants.size(); ++col)
      for (const auto& pt : profile[col])
        out << variants[col] << ',' << pt.log2_ratio << ','
            << pt.fraction_solved << '\n';
  }
  {
    std::ofstream out(cfg.output + ".speedup.csv");
    out << "instance,method,tau,ratio\n";
    for (const auto& e : speedups)
      out << e.instance << ',' << e.method << ',' << e.tau << ',' << e.ratio
          << '\n';
  }
  {
    std::ofstream out(cfg.output + ".speedup_quantiles.csv");
    out << "method,tau,min,q25,median,q75,max\n";
    for (const auto& q : quantiles)
      out << q.method << ',' << q.tau << ',' << q.min << ',' << q.q25 << ','
          << q.median << ',' << q.q75 << ',' << q.max << '\n';
  }
}

}  // namespace pabcd
