#include "rankgap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rankgap/errors.hpp"
#include "rankgap/io.hpp"

namespace rankgap {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) items.push_back(trim(item));
  return items;
}

// Accumulates schema violations so they can be reported together.
class Problems {
 public:
  void add(std::string message) { list_.push_back(std::move(message)); }
  bool empty() const { return list_.empty(); }
  void throw_if_any(const std::string& source) const {
    if (list_.empty()) return;
    std::string text = source + ": invalid configuration";
    for (const auto& p : list_) text += "\n  - " + p;
    throw ConfigError(text);
  }

 private:
  std::vector<std::string> list_;
};

std::optional<double> parse_real(const std::string& key, const std::string& text, Problems& p) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  p.add(key + ": '" + text + "' is not a number");
  return std::nullopt;
}

std::optional<std::uint64_t> parse_count(const std::string& key, const std::string& text,
                                         Problems& p) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
    }
  }
  p.add(key + ": '" + text + "' is not a non-negative integer");
  return std::nullopt;
}

std::optional<bool> parse_bool(const std::string& key, const std::string& text, Problems& p) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  p.add(key + ": '" + text + "' is not a boolean (true/false)");
  return std::nullopt;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Problems& p, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    if (auto v = parse(key, item, p)) out.push_back(static_cast<T>(*v));
  }
  return out;
}

// "0-19" or "1,2,5" or a mix.
std::vector<std::uint64_t> parse_seeds(const std::string& key, const std::string& text, Problems& p) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      if (auto v = parse_count(key, item, p)) seeds.push_back(*v);
      continue;
    }
    const auto lo = parse_count(key, trim(item.substr(0, dash)), p);
    const auto hi = parse_count(key, trim(item.substr(dash + 1)), p);
    if (!lo || !hi) continue;
    if (*lo > *hi) {
      p.add(key + ": empty range '" + item + "'");
      continue;
    }
    for (auto s = *lo; s <= *hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

using Section = std::map<std::string, std::string>;

Section read_section(const pt::ptree& tree, const std::string& name,
                     const std::set<std::string>& allowed, Problems& p) {
  Section out;
  for (const auto& [key, node] : tree) {
    if (!allowed.count(key)) {
      p.add("[" + name + "] unknown key '" + key + "'");
      continue;
    }
    out[key] = trim(node.data());
  }
  return out;
}

void require_keys(const Section& s, const std::string& name, std::initializer_list<const char*> keys,
                  Problems& p) {
  for (const char* k : keys) {
    if (!s.count(k)) p.add("[" + name + "] missing required key '" + k + "'");
  }
}

template <typename Fn>
void check(Problems& p, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    p.add(e.what());
  }
}

std::string arm_label(double delta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "delta_%g", delta);
  return buf;
}

std::string strip_comments(std::istream& in) {
  std::string out;
  for (std::string line; std::getline(in, line);) {
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  std::istringstream body(strip_comments(in));
  try {
    pt::read_ini(body, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Problems p;
  static const std::map<std::string, std::set<std::string>> kSchema = {
      {"synth", {"n_total", "prevalence", "target_auroc", "rescale_to_prevalence"}},
      {"groups", {"ids", "n", "prevalence", "target_auroc", "rescale_to_prevalence"}},
      {"optimizer", {"procedure", "objective", "steps", "candidates_per_step", "delta_max", "gamma"}},
      {"seeds", {"values"}},
      {"output", {"scores", "trajectory", "band"}},
  };
  std::map<std::string, Section> sections;
  for (const auto& [name, node] : tree) {
    auto schema = kSchema.find(name);
    if (schema == kSchema.end()) {
      p.add(node.empty() ? "key '" + name + "' is outside any section" : "unknown section [" + name + "]");
      continue;
    }
    sections[name] = read_section(node, name, schema->second, p);
  }

  ExperimentConfig cfg;
  if (sections.count("synth") && sections.count("groups")) {
    p.add("[synth] and [groups] are mutually exclusive");
  }
  if (!sections.count("synth") && !sections.count("groups")) {
    p.add("one of [synth] or [groups] is required");
  }

  if (auto it = sections.find("synth"); it != sections.end()) {
    const Section& s = it->second;
    require_keys(s, "synth", {"n_total", "prevalence", "target_auroc"}, p);
    SynthConfig sc;
    bool ok = true;
    if (s.count("n_total")) {
      if (auto v = parse_count("synth.n_total", s.at("n_total"), p)) sc.n_total = *v; else ok = false;
    }
    if (s.count("prevalence")) {
      if (auto v = parse_real("synth.prevalence", s.at("prevalence"), p)) sc.prevalence = *v; else ok = false;
    }
    if (s.count("target_auroc")) {
      if (auto v = parse_real("synth.target_auroc", s.at("target_auroc"), p)) sc.target_auroc = *v; else ok = false;
    }
    if (s.count("rescale_to_prevalence")) {
      if (auto v = parse_bool("synth.rescale_to_prevalence", s.at("rescale_to_prevalence"), p)) {
        sc.rescale_to_prevalence = *v;
      }
    }
    if (ok && s.count("n_total") && s.count("prevalence") && s.count("target_auroc")) {
      check(p, [&] { sc.validate(); });
    }
    cfg.synth = sc;
  }

  if (auto it = sections.find("groups"); it != sections.end()) {
    const Section& s = it->second;
    require_keys(s, "groups", {"ids", "n", "prevalence", "target_auroc"}, p);
    if (s.count("ids") && s.count("n") && s.count("prevalence") && s.count("target_auroc")) {
      const auto ids = parse_list<std::uint64_t>("groups.ids", s.at("ids"), p, parse_count);
      const auto ns = parse_list<std::uint64_t>("groups.n", s.at("n"), p, parse_count);
      const auto prevs = parse_list<double>("groups.prevalence", s.at("prevalence"), p, parse_real);
      const auto targets = parse_list<double>("groups.target_auroc", s.at("target_auroc"), p, parse_real);
      if (ns.size() != ids.size() || prevs.size() != ids.size() || targets.size() != ids.size()) {
        p.add("[groups] ids, n, prevalence and target_auroc must list the same number of values");
      } else {
        GroupSpec spec;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          spec.groups.push_back({static_cast<GroupId>(ids[i]), ns[i], prevs[i], targets[i]});
        }
        if (s.count("rescale_to_prevalence")) {
          if (auto v = parse_bool("groups.rescale_to_prevalence", s.at("rescale_to_prevalence"), p)) {
            spec.rescale_to_prevalence = *v;
          }
        }
        check(p, [&] { spec.validate(); });
        cfg.groups = spec;
      }
    }
  }

  if (auto it = sections.find("optimizer"); it != sections.end()) {
    const Section& s = it->second;
    require_keys(s, "optimizer", {"procedure", "objective"}, p);
    std::optional<Procedure> procedure;
    std::optional<Objective> objective;
    if (s.count("procedure")) check(p, [&] { procedure = parse_procedure(s.at("procedure")); });
    if (s.count("objective")) check(p, [&] { objective = parse_objective(s.at("objective").c_str()); });
    if (procedure && objective) {
      OptimizerConfig oc = OptimizerConfig::defaults(*procedure, *objective);
      if (s.count("steps")) {
        if (auto v = parse_count("optimizer.steps", s.at("steps"), p)) oc.steps = *v;
      }
      if (s.count("candidates_per_step")) {
        if (auto v = parse_count("optimizer.candidates_per_step", s.at("candidates_per_step"), p)) {
          oc.candidates_per_step = *v;
        }
      }
      if (s.count("gamma")) {
        if (auto v = parse_count("optimizer.gamma", s.at("gamma"), p)) oc.gamma = *v;
      }
      if (s.count("delta_max")) {
        cfg.delta_grid = parse_list<double>("optimizer.delta_max", s.at("delta_max"), p, parse_real);
        if (cfg.delta_grid.empty()) p.add("optimizer.delta_max: no values given");
        if (cfg.delta_grid.size() > 1 && *procedure != Procedure::kRandomNoise) {
          p.add("optimizer.delta_max: a grid of values is only meaningful for M1");
        }
        if (!cfg.delta_grid.empty()) oc.delta_max = cfg.delta_grid.front();
        for (double d : cfg.delta_grid) {
          if (!(d >= 0.0)) p.add("optimizer.delta_max: values must be non-negative");
        }
      } else {
        cfg.delta_grid = {oc.delta_max};
      }
      check(p, [&] { oc.validate(); });
      cfg.optimizer = oc;
    }
  }

  if (auto it = sections.find("seeds"); it != sections.end()) {
    if (it->second.count("values")) cfg.seeds = parse_seeds("seeds.values", it->second.at("values"), p);
  }
  if (cfg.seeds.empty()) p.add("[seeds] values must list at least one seed");

  if (auto it = sections.find("output"); it != sections.end()) {
    const Section& s = it->second;
    if (s.count("scores")) cfg.scores_path = s.at("scores");
    if (s.count("trajectory")) cfg.trajectory_path = s.at("trajectory");
    if (s.count("band")) cfg.band_path = s.at("band");
  }
  if (cfg.delta_grid.size() > 1) {
    for (const auto* path : {&cfg.trajectory_path, &cfg.band_path}) {
      if (!path->empty() && path->find("{arm}") == std::string::npos) {
        p.add("[output] paths must contain {arm} when optimizer.delta_max lists several values");
        break;
      }
    }
  }

  p.throw_if_any(source);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_experiment_config(in, path.string());
}

std::string expand_path(const std::string& pattern, std::optional<std::uint64_t> seed,
                        const std::string& arm) {
  std::string out = pattern;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size())) {
      out.replace(pos, key.size(), value);
    }
  };
  if (seed) replace("{seed}", std::to_string(*seed));
  replace("{arm}", arm);
  return out;
}

ScoreSet make_dataset(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.groups) return build_group_dataset(*cfg.groups, rng);
  if (cfg.synth) return sample_target_auroc(*cfg.synth, rng);
  throw ConfigError("configuration has neither [synth] nor [groups]");
}

std::vector<SynthResult> run_synth(const ExperimentConfig& cfg) {
  std::vector<SynthResult> out;
  for (std::uint64_t seed : cfg.seeds) {
    Rng rng = make_rng(seed);
    out.push_back({seed, make_dataset(cfg, rng)});
  }
  return out;
}

std::vector<ArmResult> run_optimize(const ExperimentConfig& cfg, unsigned jobs) {
  if (!cfg.optimizer) throw ConfigError("configuration has no [optimizer] section");
  std::vector<ArmResult> arms;
  for (double delta : cfg.delta_grid) {
    ArmResult arm;
    arm.optimizer = *cfg.optimizer;
    arm.optimizer.delta_max = delta;
    if (cfg.delta_grid.size() > 1) arm.label = arm_label(delta);
    arms.push_back(std::move(arm));
  }

  const std::size_t per_arm = cfg.seeds.size();
  const std::size_t total = arms.size() * per_arm;
  std::vector<std::optional<Trajectory>> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const ArmResult& arm = arms[task / per_arm];
      const std::uint64_t seed = cfg.seeds[task % per_arm];
      try {
        Rng rng = make_rng(seed);
        const ScoreSet data = make_dataset(cfg, rng);
        OptimizerConfig oc = arm.optimizer;
        oc.seed = seed;
        results[task] = run_optimizer(data, oc, rng);
      } catch (...) {
        errors[task] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t task = 0; task < total; ++task) {
    arms[task / per_arm].runs.push_back({cfg.seeds[task % per_arm], std::move(*results[task])});
  }
  return arms;
}

namespace {

std::vector<GroupId> scopes_of(const std::vector<SeedRun>& runs) {
  std::set<GroupId> ids;
  for (const auto& r : runs) {
    for (const auto& step : r.trajectory.steps) {
      for (const auto& [id, g] : step.groups) ids.insert(id);
    }
  }
  return {ids.begin(), ids.end()};
}

std::optional<double> value_at(const StepRecord& r, std::optional<GroupId> group, Metric m) {
  if (!group) return m == Metric::kAuroc ? r.auroc : r.auprc;
  auto it = r.groups.find(*group);
  if (it == r.groups.end()) return std::nullopt;
  return m == Metric::kAuroc ? it->second.auroc : it->second.auprc;
}

std::string scope_name(std::optional<GroupId> group) {
  return group ? "group:" + std::to_string(*group) : "overall";
}

std::string cell(std::optional<double> v) { return v ? format_fixed(*v) : "NA"; }

}  // namespace

void write_trajectory_csv(const std::vector<SeedRun>& runs, std::ostream& out) {
  out << "seed,step,scope,metric,value\n";
  for (const auto& run : runs) {
    std::vector<std::optional<GroupId>> scopes{std::nullopt};
    for (const auto& [id, g] : run.trajectory.steps.front().groups) scopes.emplace_back(id);
    for (const auto& step : run.trajectory.steps) {
      for (const auto& scope : scopes) {
        for (Metric m : {Metric::kAuroc, Metric::kAuprc}) {
          out << run.seed << ',' << step.step << ',' << scope_name(scope) << ','
              << (m == Metric::kAuroc ? "auroc" : "auprc") << ',' << cell(value_at(step, scope, m))
              << '\n';
        }
      }
    }
  }
}

void write_band_csv(const std::vector<SeedRun>& runs, std::ostream& out) {
  if (runs.size() < 2) throw DataError("percentile band needs at least 2 seeds");
  std::size_t steps = 0;
  for (const auto& r : runs) steps = std::max(steps, r.trajectory.steps.size());
  std::vector<std::optional<GroupId>> scopes{std::nullopt};
  for (GroupId id : scopes_of(runs)) scopes.emplace_back(id);

  out << "step,scope,metric,p05,mean,p95\n";
  for (std::size_t step = 0; step < steps; ++step) {
    for (const auto& scope : scopes) {
      for (Metric m : {Metric::kAuroc, Metric::kAuprc}) {
        std::vector<double> values;
        for (const auto& r : runs) {
          const auto& traj = r.trajectory.steps;
          const StepRecord& rec = traj[std::min(step, traj.size() - 1)];
          if (auto v = value_at(rec, scope, m)) values.push_back(*v);
        }
        out << step << ',' << scope_name(scope) << ',' << (m == Metric::kAuroc ? "auroc" : "auprc");
        if (values.size() < 2) {
          out << ",NA,NA,NA\n";
          continue;
        }
        const BandPoint b = percentile_band({values}).front();
        out << ',' << format_fixed(b.lo) << ',' << format_fixed(b.mean) << ',' << format_fixed(b.hi)
            << '\n';
      }
    }
  }
}

}  // namespace rankgap
