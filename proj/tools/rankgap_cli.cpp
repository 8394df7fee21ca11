// rankgap command-line front end. Talks to the library only through rankgap.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rankgap/rankgap.h"

namespace {

using json = nlohmann::ordered_json;

// Thrown inside commands to leave with a specific status.
struct Failure {
  rg_status status;
};

void check(rg_status status) {
  if (status == RG_OK || status == RG_CONVERGED) return;
  std::cerr << "error: " << rg_last_error() << "\n";
  throw Failure{status};
}

struct SetDeleter {
  void operator()(rg_score_set* s) const { rg_score_set_destroy(s); }
};
struct CurveDeleter {
  void operator()(rg_curve* c) const { rg_curve_destroy(c); }
};
struct MistakesDeleter {
  void operator()(rg_mistake_list* m) const { rg_mistake_list_destroy(m); }
};
struct ExperimentDeleter {
  void operator()(rg_experiment* e) const { rg_experiment_destroy(e); }
};
using SetPtr = std::unique_ptr<rg_score_set, SetDeleter>;
using CurvePtr = std::unique_ptr<rg_curve, CurveDeleter>;
using MistakesPtr = std::unique_ptr<rg_mistake_list, MistakesDeleter>;
using ExperimentPtr = std::unique_ptr<rg_experiment, ExperimentDeleter>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  rg_string_free(s);
  return out;
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

json optional_number(int has, double v) { return has ? json(v) : json(nullptr); }

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    std::cerr << "error: cannot write '" << path << "'\n";
    throw Failure{RG_ERROR_DATA};
  }
}

SetPtr load_scores(const std::string& path) {
  rg_score_set* raw = nullptr;
  check(rg_score_set_read_csv(path.c_str(), &raw));
  return SetPtr(raw);
}

std::string tie_message(const std::string& path, std::size_t a, std::size_t b) {
  return path + ": tied scores on lines " + std::to_string(a + 2) + " and " + std::to_string(b + 2);
}

void export_curve(const rg_score_set* set, bool roc, const std::string& path) {
  rg_curve* raw = nullptr;
  check(roc ? rg_roc_curve(set, &raw) : rg_pr_curve(set, &raw));
  CurvePtr curve(raw);
  std::string out = roc ? "threshold,fpr,tpr\n" : "threshold,recall,precision\n";
  for (std::size_t i = 0; i < rg_curve_size(curve.get()); ++i) {
    rg_threshold_stats p;
    check(rg_curve_point(curve.get(), i, &p));
    out += fmt(p.threshold, "%.9f") + ",";
    if (roc) {
      out += fmt(p.fpr, "%.9f") + "," + fmt(p.tpr, "%.9f") + "\n";
    } else {
      out += fmt(p.tpr, "%.9f") + "," + (p.has_precision ? fmt(p.precision, "%.9f") : "NA") + "\n";
    }
  }
  write_text(path, out);
}

// ---- metrics -----------------------------------------------------------------

struct MetricsArgs {
  std::string input;
  std::string json_out;
  std::string roc_out;
  std::string pr_out;
  bool per_group = false;
};

int cmd_metrics(const MetricsArgs& a) {
  SetPtr set = load_scores(a.input);
  const rg_score_set* s = set.get();
  const std::size_t n = rg_score_set_size(s);
  const std::size_t np = rg_score_set_num_positive(s);
  if (np == 0 || np == n) {
    std::cerr << "error: " << a.input << ": AUROC and AUPRC are undefined for single-class input ("
              << (np == 0 ? "no positives" : "no negatives") << ")\n";
    return RG_ERROR_UNDEFINED;
  }
  if (a.per_group && !rg_score_set_has_groups(s)) {
    std::cerr << "error: " << a.input << ": --per-group needs a group column\n";
    return RG_ERROR_DATA;
  }
  double auroc = 0.0, auprc = 0.0;
  check(rg_auroc(s, &auroc));
  check(rg_auprc(s, &auprc));

  json doc;
  doc["input"] = a.input;
  doc["n"] = n;
  doc["num_positive"] = np;
  doc["prevalence"] = static_cast<double>(np) / static_cast<double>(n);
  doc["auroc"] = auroc;
  doc["auprc"] = auprc;

  std::cout << "samples      " << n << " (" << np << " positive)\n";
  std::cout << "prevalence   " << fmt(static_cast<double>(np) / static_cast<double>(n)) << "\n";
  std::cout << "auroc        " << fmt(auroc) << "\n";
  std::cout << "auprc        " << fmt(auprc) << "\n";

  std::size_t t1 = 0, t2 = 0;
  if (rg_score_set_find_tie(s, &t1, &t2)) {
    std::cerr << "warning: " << tie_message(a.input, t1, t2)
              << "; reparametrized forms need distinct scores and were skipped\n";
    doc["reparam"] = nullptr;
  } else {
    double auroc_r = 0.0;
    rg_auprc_forms forms;
    check(rg_auroc_reparam(s, &auroc_r));
    check(rg_auprc_reparam(s, &forms));
    const double auroc_resid = std::abs(auroc_r - auroc);
    doc["reparam"] = {{"auroc", auroc_r},
                      {"auroc_residual", auroc_resid},
                      {"auprc_mean_precision", forms.mean_precision},
                      {"auprc_mean_precision_residual", forms.precision_residual},
                      {"auprc_firing_rate_form", forms.bayes_form},
                      {"auprc_firing_rate_form_residual", forms.bayes_residual}};
    std::cout << "auroc via 1 - mean FPR          " << fmt(auroc_r) << "  residual "
              << fmt(auroc_resid, "%.3g") << "\n";
    std::cout << "auprc via mean precision        " << fmt(forms.mean_precision) << "  residual "
              << fmt(forms.precision_residual, "%.3g") << "\n";
    std::cout << "auprc via 1 - p0 mean(FPR/FR)   " << fmt(forms.bayes_form) << "  residual "
              << fmt(forms.bayes_residual, "%.3g") << "\n";
  }

  if (a.per_group) {
    std::size_t count = 0;
    check(rg_per_group_metrics(s, nullptr, 0, &count));
    std::vector<rg_group_metrics> groups(count);
    check(rg_per_group_metrics(s, groups.data(), groups.size(), &count));
    json arr = json::array();
    std::cout << "\ngroup  n       positives  prevalence  auroc     auprc\n";
    for (const auto& g : groups) {
      arr.push_back({{"group", g.group},
                     {"n", g.n},
                     {"num_positive", g.num_positive},
                     {"prevalence", g.prevalence},
                     {"auroc", optional_number(g.has_auroc, g.auroc)},
                     {"auprc", optional_number(g.has_auprc, g.auprc)},
                     {"flagged", !(g.has_auroc && g.has_auprc)}});
      char line[160];
      std::snprintf(line, sizeof line, "%-6u %-7zu %-10zu %-11.6f %-9s %s%s\n", g.group, g.n,
                    g.num_positive, g.prevalence, g.has_auroc ? fmt(g.auroc).c_str() : "NA",
                    g.has_auprc ? fmt(g.auprc).c_str() : "NA",
                    (g.has_auroc && g.has_auprc) ? "" : "  (single class)");
      std::cout << line;
    }
    doc["groups"] = arr;
  }

  if (!a.roc_out.empty()) export_curve(s, true, a.roc_out);
  if (!a.pr_out.empty()) export_curve(s, false, a.pr_out);
  if (!a.json_out.empty()) write_text(a.json_out, doc.dump(2) + "\n");
  return RG_OK;
}

// ---- mistakes ----------------------------------------------------------------

int cmd_mistakes(const std::string& input, const std::string& json_out) {
  SetPtr set = load_scores(input);
  std::size_t t1 = 0, t2 = 0;
  if (rg_score_set_find_tie(set.get(), &t1, &t2)) {
    std::cerr << "error: " << tie_message(input, t1, t2)
              << "; mistakes are defined only for distinct scores\n";
    return RG_ERROR_DATA;
  }
  rg_mistake_list* raw = nullptr;
  check(rg_mistakes_enumerate(set.get(), &raw));
  MistakesPtr list(raw);
  std::vector<rg_mistake> rows(rg_mistake_list_size(list.get()));
  for (std::size_t i = 0; i < rows.size(); ++i) check(rg_mistake_list_get(list.get(), i, &rows[i]));
  std::stable_sort(rows.begin(), rows.end(),
                   [](const rg_mistake& x, const rg_mistake& y) { return x.delta_auprc > y.delta_auprc; });

  json arr = json::array();
  for (const auto& m : rows) {
    json row = {{"position", m.low_index + 1},
                {"positive_line", m.low_sample + 2},
                {"negative_line", m.high_sample + 2},
                {"positive_score", m.low_score},
                {"negative_score", m.high_score}};
    if (m.has_groups) {
      row["positive_group"] = m.low_group;
      row["negative_group"] = m.high_group;
    }
    row["delta_auroc"] = m.delta_auroc;
    row["delta_auprc"] = m.delta_auprc;
    arr.push_back(row);
  }

  if (rows.empty()) {
    std::cout << "no mistakes: every positive already ranks above its next-higher neighbour\n";
  } else {
    const bool groups = rows.front().has_groups;
    std::cout << "position  pos_score    neg_score    " << (groups ? "pos_grp  neg_grp  " : "")
              << "d_auroc      d_auprc\n";
    for (const auto& m : rows) {
      char line[200];
      if (groups) {
        std::snprintf(line, sizeof line, "%-9zu %-12.9f %-12.9f %-8u %-8u %-12.9f %.9f\n",
                      m.low_index + 1, m.low_score, m.high_score, m.low_group, m.high_group,
                      m.delta_auroc, m.delta_auprc);
      } else {
        std::snprintf(line, sizeof line, "%-9zu %-12.9f %-12.9f %-12.9f %.9f\n", m.low_index + 1,
                      m.low_score, m.high_score, m.delta_auroc, m.delta_auprc);
      }
      std::cout << line;
    }
    std::cout << rows.size() << " mistake(s); positions are 1-based in ascending score order\n";
  }
  if (!json_out.empty()) write_text(json_out, json({{"input", input}, {"mistakes", arr}}).dump(2) + "\n");
  return RG_OK;
}

// ---- synth -------------------------------------------------------------------

ExperimentPtr load_experiment(const std::string& path) {
  rg_experiment* raw = nullptr;
  check(rg_experiment_load(path.c_str(), &raw));
  return ExperimentPtr(raw);
}

int cmd_synth(const std::string& config, const std::string& scores_out) {
  ExperimentPtr exp = load_experiment(config);
  char* raw = nullptr;
  check(rg_experiment_synth(exp.get(), scores_out.empty() ? nullptr : scores_out.c_str(), &raw));
  const json summary = json::parse(take_string(raw));
  for (const auto& e : summary) {
    std::cout << "seed " << e["seed"].get<std::uint64_t>() << ": " << e["path"].get<std::string>()
              << "  n=" << e["n"].get<std::size_t>() << " positives=" << e["num_positive"].get<std::size_t>()
              << "  auroc=" << fmt(e["auroc"].get<double>());
    if (e.contains("groups")) {
      for (const auto& g : e["groups"]) {
        std::cout << "  group " << g["group"].get<unsigned>() << " auroc=";
        std::cout << (g["auroc"].is_null() ? std::string("NA") : fmt(g["auroc"].get<double>()));
      }
    }
    std::cout << "\n";
  }
  return RG_OK;
}

// ---- optimize ----------------------------------------------------------------

int cmd_optimize(const std::string& config, const std::string& traj, const std::string& band,
                 unsigned jobs, const std::string& summary_out) {
  ExperimentPtr exp = load_experiment(config);
  char* raw = nullptr;
  check(rg_experiment_optimize(exp.get(), traj.empty() ? nullptr : traj.c_str(),
                               band.empty() ? nullptr : band.c_str(), jobs, &raw));
  const std::string text = take_string(raw);
  const json summary = json::parse(text);
  for (const auto& arm : summary) {
    std::cout << arm["procedure"].get<std::string>() << "/" << arm["objective"].get<std::string>();
    if (!arm["label"].get<std::string>().empty()) std::cout << " [" << arm["label"].get<std::string>() << "]";
    std::cout << "  seeds=" << arm["seeds"].get<std::size_t>()
              << "  auroc " << fmt(arm["mean_initial_auroc"].get<double>()) << " -> "
              << fmt(arm["mean_final_auroc"].get<double>())
              << "  auprc " << fmt(arm["mean_initial_auprc"].get<double>()) << " -> "
              << fmt(arm["mean_final_auprc"].get<double>()) << "\n";
    if (arm.contains("two_group")) {
      const auto& g = arm["two_group"];
      std::cout << "  auroc gap (high - low prevalence): " << fmt(g["mean_initial_auroc_gap"].get<double>())
                << " -> " << fmt(g["mean_final_auroc_gap"].get<double>()) << "; positive in "
                << fmt(100.0 * g["fraction_final_auroc_gap_positive"].get<double>(), "%.0f")
                << "% of seeds\n";
    }
    std::cout << "  trajectory: " << arm["trajectory_path"].get<std::string>() << "\n";
    if (!arm["band_path"].is_null()) std::cout << "  band: " << arm["band_path"].get<std::string>() << "\n";
  }
  if (!summary_out.empty()) write_text(summary_out, summary.dump(2) + "\n");
  return RG_OK;
}

// ---- sweep -------------------------------------------------------------------

int cmd_sweep(const std::string& input, const std::string& json_out) {
  char* raw = nullptr;
  check(rg_sweep_analyze(input.c_str(), &raw));
  const json doc = json::parse(take_string(raw));
  for (const auto& d : doc["datasets"]) {
    std::cout << "dataset " << d["dataset"].get<std::string>() << ": high-prevalence group "
              << d["high_group"].get<unsigned>() << ", prevalence ratio "
              << fmt(d["prevalence_ratio"].get<double>(), "%.4g") << "\n";
    std::cout << "  split        runs  rho(gap,auprc)  rho(gap,auroc)  difference\n";
    for (const auto& s : d["splits"]) {
      char line[200];
      std::snprintf(line, sizeof line, "  %-12s %-5zu %-15.4f %-15.4f %.4f\n",
                    s["split_id"].get<std::string>().c_str(), s["runs"].get<std::size_t>(),
                    s["rho_gap_vs_auprc"].get<double>(), s["rho_gap_vs_auroc"].get<double>(),
                    s["difference"].get<double>());
      std::cout << line;
    }
    std::cout << "  mean difference " << fmt(d["mean_difference"].get<double>(), "%.4f");
    if (!d["ci95"].is_null()) {
      std::cout << "  95% CI [" << fmt(d["ci95"][0].get<double>(), "%.4f") << ", "
                << fmt(d["ci95"][1].get<double>(), "%.4f") << "]";
    }
    std::cout << "\n";
  }
  if (!doc["meta"].is_null()) {
    std::cout << "meta correlation over " << doc["meta"]["datasets"].get<std::size_t>()
              << " datasets: rho " << fmt(doc["meta"]["rho"].get<double>(), "%.4f") << ", p "
              << fmt(doc["meta"]["p_value"].get<double>(), "%.4g") << "\n";
  }
  if (!json_out.empty()) write_text(json_out, doc.dump(2) + "\n");
  return RG_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subgroup-aware AUROC/AUPRC analysis and metric-optimization experiments"};
  app.set_version_flag("--version", std::string(rg_version()));
  app.require_subcommand(1);

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "AUROC, AUPRC and their reparametrized forms for a score CSV");
  m->add_option("input", metrics.input, "score CSV (score,label[,group])")->required();
  m->add_option("--json", metrics.json_out, "also write the report as JSON");
  m->add_flag("--per-group", metrics.per_group, "add per-group metrics");
  m->add_option("--roc-out", metrics.roc_out, "write the ROC curve as CSV");
  m->add_option("--pr-out", metrics.pr_out, "write the precision-recall curve as CSV");

  std::string mistakes_input, mistakes_json;
  auto* mk = app.add_subcommand("mistakes", "list adjacent mis-ordered pairs and their metric gains");
  mk->add_option("input", mistakes_input, "score CSV")->required();
  mk->add_option("--json", mistakes_json, "also write the table as JSON");

  std::string synth_cfg, synth_out;
  auto* sy = app.add_subcommand("synth", "generate synthetic score CSVs from a config");
  sy->add_option("config", synth_cfg, "experiment config")->required();
  sy->add_option("--scores-out", synth_out, "output path; may contain {seed}");

  std::string opt_cfg, opt_traj, opt_band, opt_summary;
  unsigned jobs = 0;
  auto* op = app.add_subcommand("optimize", "run a metric-greedy optimizer experiment from a config");
  op->add_option("config", opt_cfg, "experiment config")->required();
  op->add_option("--trajectory-out", opt_traj, "trajectory CSV path; may contain {arm}");
  op->add_option("--band-out", opt_band, "percentile band CSV path; may contain {arm}");
  op->add_option("--summary-json", opt_summary, "write per-arm summary statistics as JSON");
  op->add_option("--jobs", jobs, "worker threads (0 = all cores)")->default_val(0u);

  std::string sweep_input, sweep_json;
  auto* sw = app.add_subcommand("sweep", "correlate subgroup AUROC gaps with overall metrics over a sweep");
  sw->add_option("input", sweep_input, "run-record CSV")->required();
  sw->add_option("--json-out", sweep_json, "write the summary as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return RG_ERROR_CONFIG;
  }

  try {
    if (m->parsed()) return cmd_metrics(metrics);
    if (mk->parsed()) return cmd_mistakes(mistakes_input, mistakes_json);
    if (sy->parsed()) return cmd_synth(synth_cfg, synth_out);
    if (op->parsed()) return cmd_optimize(opt_cfg, opt_traj, opt_band, jobs, opt_summary);
    if (sw->parsed()) return cmd_sweep(sweep_input, sweep_json);
  } catch (const Failure& f) {
    return f.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return RG_ERROR_INTERNAL;
  }
  return RG_ERROR_CONFIG;
}
