#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thoma_rsk/diagnostics.hpp"
#include "thoma_rsk/exact.hpp"
#include "thoma_rsk/io.hpp"
#include "thoma_rsk/lemmas.hpp"
#include "thoma_rsk/stats.hpp"

#ifndef THOMA_RSK_BUILD_ID
#define THOMA_RSK_BUILD_ID "unknown"
#endif

namespace thoma::cli {

const char* build_id() noexcept { return THOMA_RSK_BUILD_ID; }

namespace {

// Usage and configuration errors exit with kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  // shared
  std::vector<double> alphas, betas;
  double gamma = 0.0;
  std::string params_file;
  std::string order;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  std::string format = "json";
  std::string output;
  bool quiet = false;

  // per command
  int n = 0;
  double nu = 0.0;
  std::size_t trials = 0;
  std::size_t K = 2, L = 1;
  bool per_trial = false;
  double se_band = 4.0;
  double ks_threshold = 0.01;
  std::vector<std::size_t> n_grid{100, 400, 1600, 6400};
  std::vector<double> nu_grid;
  std::string compare_order;
  std::size_t independence_n = 200;
  double tolerance = 0.01;
  std::size_t exhaustive_cap = 8;
  std::size_t random_words = 10000;
  double q1 = 0.2, q3 = 0.5;
  bool series = false;
};

struct Resolved {
  ThomaParams params;
  LinearOrder order;
  json config;  // echo of everything that determines the output
};

struct Outcome {
  json results = json::object();
  std::string csv;  // table without the header comments
  std::vector<CheckResult> checks;
};

class Command {
 public:
  Command(CLI::App& app, std::string name, std::string description) : name_(std::move(name)) {
    sub_ = app.add_subcommand(name_, std::move(description));
  }
  virtual ~Command() = default;

  CLI::App* sub() const noexcept { return sub_; }
  const std::string& name() const noexcept { return name_; }
  Config& config() noexcept { return cfg_; }

  // options echoed into the output
  void add_params_options() {
    alphas_ = sub_->add_option("--alphas", cfg_.alphas, "row masses, comma separated")->delimiter(',');
    betas_ = sub_->add_option("--betas", cfg_.betas, "column masses, comma separated")->delimiter(',');
    gamma_ = sub_->add_option("--gamma", cfg_.gamma, "mass of the continuous part");
    params_file_ = sub_->add_option("--params", cfg_.params_file, "JSON file {alphas, betas, gamma}");
    sub_->add_option("--order", cfg_.order, "linear order, e.g. x1<x2<y1<G (default: rows, columns, G)");
    has_params_ = true;
  }
  void add_seed_option() {
    sub_->add_option("--seed", cfg_.seed, "master seed")->envname("THOMA_RSK_SEED");
    has_seed_ = true;
  }
  void add_run_options() {
    sub_->add_option("--workers", cfg_.workers, "worker threads (does not change results)")
        ->check(CLI::Range(1u, 1024u));
    sub_->add_option("--format", cfg_.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub_->add_option("--output", cfg_.output, "output file (default: standard output)");
    sub_->add_flag("--quiet", cfg_.quiet, "no progress on standard error");
  }

  Resolved resolve() const {
    Resolved r{ThomaParams::make({0.4, 0.25}, {0.2}, 0.15), {}, json::object()};
    if (has_params_) {
      const bool flags = alphas_->count() + betas_->count() + gamma_->count() > 0;
      if (params_file_->count() > 0) {
        if (flags) throw UsageError("--params cannot be combined with --alphas/--betas/--gamma");
        std::ifstream in(cfg_.params_file);
        if (!in) throw UsageError("cannot read params file '" + cfg_.params_file + "'");
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw UsageError(std::string("params file is not valid JSON: ") + e.what());
        }
        r.params = params_from_json(j);
      } else if (flags) {
        r.params = validate_params(cfg_.alphas, cfg_.betas, cfg_.gamma);
      }
      r.order = cfg_.order.empty() ? LinearOrder::standard(r.params)
                                   : LinearOrder::parse(cfg_.order, r.params.num_alphas(), r.params.num_betas());
      r.config["alphas"] = r.params.alphas();
      r.config["betas"] = r.params.betas();
      r.config["gamma"] = r.params.gamma();
      r.config["order"] = r.order.to_string();
    }
    if (has_seed_) r.config["seed"] = cfg_.seed;
    return r;
  }

  /// Adds the command's own echo entries and runs it.
  virtual Outcome execute(Resolved& r, std::ostream& progress) = 0;

 protected:
  Config cfg_;
  CLI::App* sub_ = nullptr;
  std::string name_;

 private:
  CLI::Option* alphas_ = nullptr;
  CLI::Option* betas_ = nullptr;
  CLI::Option* gamma_ = nullptr;
  CLI::Option* params_file_ = nullptr;
  bool has_params_ = false;
  bool has_seed_ = false;
};

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fmt(double x) { return format_double(x); }

RunOptions run_options(const Config& c, std::size_t trials) { return {trials, c.workers, SeededGenerator(c.seed)}; }

json report_json(const CovarianceReport& r) {
  return json{{"trials", r.trials},
              {"mean", r.mean},
              {"mean_se", r.mean_se},
              {"covariance", matrix_to_json(r.covariance)},
              {"covariance_se", matrix_to_json(r.covariance_se)},
              {"theory", matrix_to_json(r.theory)},
              {"ks", r.ks},
              {"max_mean_dev_se", r.max_mean_dev_se},
              {"max_cov_dev_se", r.max_cov_dev_se},
              {"max_ks", r.max_ks}};
}

std::string report_csv(const CovarianceReport& r) {
  std::string out = "quantity;i;j;value;se;reference\n";
  const std::size_t d = r.mean.size();
  for (std::size_t i = 0; i < d; ++i)
    out += "mean;" + std::to_string(i + 1) + ";;" + fmt(r.mean[i]) + ";" + fmt(r.mean_se[i]) + ";0\n";
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      out += "covariance;" + std::to_string(i + 1) + ";" + std::to_string(j + 1) + ";" + fmt(r.covariance(i, j)) +
             ";" + fmt(r.covariance_se(i, j)) + ";" + fmt(r.theory(i, j)) + "\n";
  for (std::size_t i = 0; i < d; ++i) out += "ks;" + std::to_string(i + 1) + ";;" + fmt(r.ks[i]) + ";;0\n";
  return out;
}

json drift_json(const DriftReport& d) {
  json rows = json::array();
  for (const auto& row : d.rows) rows.push_back({{"size", row.size}, {"mean_abs", row.mean_abs}, {"se", row.se}});
  std::vector<bool> band(d.within_band.begin(), d.within_band.end());
  return json{{"rows", rows}, {"growth_ratio", d.growth_ratio}, {"within_band", band}};
}

std::string drift_csv(const DriftReport& d, const char* size_name) {
  std::string out = std::string(size_name) + ";coordinate;mean_abs;se\n";
  for (const auto& row : d.rows)
    for (std::size_t k = 0; k < row.mean_abs.size(); ++k)
      out += fmt(row.size) + ";" + std::to_string(k + 1) + ";" + fmt(row.mean_abs[k]) + ";" + fmt(row.se[k]) + "\n";
  return out;
}

CheckResult drift_check(const DriftReport& d, const std::string& label) {
  std::string detail;
  for (std::size_t k = 0; k < d.within_band.size(); ++k) {
    if (k) detail += " ";
    detail += "coord" + std::to_string(k + 1) + ":" + fmt(d.rows.front().mean_abs[k]) + "->" +
              fmt(d.rows.back().mean_abs[k]);
  }
  return {label, d.all_within_band(), detail};
}

CheckResult covariance_check(const CovarianceReport& r, double band) {
  return {"covariance within " + fmt(band) + " SE of the limit", r.max_cov_dev_se <= band,
          "max deviation " + fmt(r.max_cov_dev_se) + " SE"};
}

//---------------------------------------------------------------------------//
// Commands
//---------------------------------------------------------------------------//

class ExactCommand : public Command {
 public:
  explicit ExactCommand(CLI::App& app) : Command(app, "exact", "exact measure M_n and its coherency residual") {
    sub_->add_option("--n", cfg_.n, "diagram size")->required();
    add_params_options();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream&) override {
    r.config["n"] = cfg_.n;
    const ExactMeasure m = measure_Mn(r.params, cfg_.n);
    const double residual = coherency_residual(r.params, cfg_.n);
    Outcome o;
    // only the support is listed; partitions of mass exactly zero are omitted
    ExactMeasure support{m.n, {}};
    for (const auto& [d, v] : m.table)
      if (v > 0.0) support.table.emplace(d, v);
    json rows = json::array();
    for (auto it = support.table.rbegin(); it != support.table.rend(); ++it)
      rows.push_back({{"partition", diagram_to_json(it->first)}, {"probability", it->second}});
    o.results = {{"measure", rows}, {"total_mass", m.total()}, {"coherency_residual", residual}};
    o.csv = "partition;probability\n" + support.to_csv();
    o.checks.push_back({"total mass is 1", std::abs(m.total() - 1.0) <= 1e-10, "mass " + fmt(m.total())});
    o.checks.push_back({"coherency residual", residual <= 1e-10, "residual " + fmt(residual)});
    return o;
  }
};

class SampleCommand : public Command {
 public:
  explicit SampleCommand(CLI::App& app) : Command(app, "sample", "RSK shapes of random words") {
    cfg_.n = 10;
    cfg_.trials = 10000;
    sub_->add_option("--n", cfg_.n, "word length")->check(CLI::NonNegativeNumber);
    sub_->add_option("--nu", cfg_.nu, "Poisson mean of the word length (overrides --n)")
        ->check(CLI::NonNegativeNumber);
    sub_->add_option("--trials", cfg_.trials, "number of words");
    sub_->add_flag("--per-trial", cfg_.per_trial, "list every shape instead of a histogram");
    add_params_options();
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    const bool poisson = cfg_.nu > 0.0;
    if (poisson)
      r.config["nu"] = cfg_.nu;
    else
      r.config["n"] = cfg_.n;
    r.config["trials"] = cfg_.trials;
    r.config["per-trial"] = cfg_.per_trial;

    progress << "[sample] " << cfg_.trials << " words\n";
    const LetterSampler sampler(r.params);
    const SeededGenerator gen(cfg_.seed);
    const auto n = static_cast<std::size_t>(cfg_.n);
    auto shapes = run_trials<YoungDiagram>(cfg_.trials, cfg_.workers, [&](std::size_t t) {
      RngStream rng = gen.stream(Experiment::Sample, t);
      const std::size_t len = poisson ? static_cast<std::size_t>(rng.poisson(cfg_.nu)) : n;
      return rsk_shape(sample_word(sampler, len, rng), r.order);
    });

    Outcome o;
    if (cfg_.per_trial) {
      json list = json::array();
      o.csv = "trial;partition\n";
      for (std::size_t t = 0; t < shapes.size(); ++t) {
        list.push_back(diagram_to_json(shapes[t]));
        o.csv += std::to_string(t) + ";" + shapes[t].to_string() + "\n";
      }
      o.results["shapes"] = list;
      return o;
    }

    std::map<YoungDiagram, std::int64_t> counts;
    for (const auto& s : shapes) ++counts[s];
    const bool exact = !poisson && cfg_.n <= kExactCap && cfg_.trials > 0;
    std::map<YoungDiagram, double> reference;
    if (exact) {
      reference = measure_Mn(r.params, cfg_.n).table;
      for (const auto& [d, p] : reference) counts.try_emplace(d, 0);
    }
    const double T = static_cast<double>(cfg_.trials);
    json hist = json::array();
    o.csv = exact ? "partition;count;frequency;se;exact\n" : "partition;count;frequency;se\n";
    std::vector<std::int64_t> observed;
    std::vector<double> probs;
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
      const double f = static_cast<double>(it->second) / T;
      const double se = std::sqrt(f * (1.0 - f) / T);
      json row{{"partition", diagram_to_json(it->first)}, {"count", it->second}, {"frequency", f}, {"se", se}};
      std::string line = it->first.to_string() + ";" + std::to_string(it->second) + ";" + fmt(f) + ";" + fmt(se);
      if (exact) {
        const double p = reference.count(it->first) ? reference.at(it->first) : 0.0;
        row["exact"] = p;
        line += ";" + fmt(p);
        observed.push_back(it->second);
        probs.push_back(p);
      }
      hist.push_back(std::move(row));
      o.csv += line + "\n";
    }
    o.results["histogram"] = hist;
    if (exact) {
      const ChiSquareResult chi = chi_square_goodness(observed, probs, 5.0);
      o.results["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
      o.checks.push_back({"shape frequencies match the exact measure", chi.p_value > 1e-3,
                          "chi2=" + fmt(chi.statistic) + " dof=" + std::to_string(chi.dof) + " p=" +
                              fmt(chi.p_value)});
    }
    return o;
  }
};

class CltCommand : public Command {
 public:
  explicit CltCommand(CLI::App& app) : Command(app, "clt", "row/column fluctuations against the Gaussian limit") {
    cfg_.n = 2000;
    cfg_.trials = 100000;
    sub_->add_option("--n", cfg_.n, "word length")->check(CLI::PositiveNumber);
    sub_->add_option("--K", cfg_.K, "rows");
    sub_->add_option("--L", cfg_.L, "columns");
    sub_->add_option("--trials", cfg_.trials, "number of words")->check(CLI::Range(2ul, 1ul << 40));
    sub_->add_option("--se-band", cfg_.se_band, "allowed deviation in standard errors");
    sub_->add_option("--ks-threshold", cfg_.ks_threshold, "largest allowed marginal KS statistic");
    add_params_options();
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["n"] = cfg_.n;
    r.config["K"] = cfg_.K;
    r.config["L"] = cfg_.L;
    r.config["trials"] = cfg_.trials;
    r.config["se-band"] = cfg_.se_band;
    r.config["ks-threshold"] = cfg_.ks_threshold;
    progress << "[clt] n=" << cfg_.n << " trials=" << cfg_.trials << "\n";
    const auto res = run_clt(r.params, cfg_.K, cfg_.L, static_cast<std::size_t>(cfg_.n), r.order,
                             run_options(cfg_, cfg_.trials));
    Outcome o;
    o.results = report_json(res.report);
    o.csv = report_csv(res.report);
    o.checks.push_back(covariance_check(res.report, cfg_.se_band));
    o.checks.push_back({"means within " + fmt(cfg_.se_band) + " SE of 0", res.report.max_mean_dev_se <= cfg_.se_band,
                        "max deviation " + fmt(res.report.max_mean_dev_se) + " SE"});
    o.checks.push_back({"marginal KS below " + fmt(cfg_.ks_threshold), res.report.max_ks < cfg_.ks_threshold,
                        "max KS " + fmt(res.report.max_ks)});
    return o;
  }
};

class DriftCommand : public Command {
 public:
  explicit DriftCommand(CLI::App& app) : Command(app, "drift", "rows minus letter counts across word lengths") {
    cfg_.trials = 10000;
    sub_->add_option("--n-grid", cfg_.n_grid, "increasing word lengths")->delimiter(',');
    sub_->add_option("--K", cfg_.K, "rows");
    sub_->add_option("--L", cfg_.L, "columns");
    sub_->add_option("--trials", cfg_.trials, "words per length");
    sub_->add_option("--compare-order", cfg_.compare_order, "second order for the order-independence test");
    sub_->add_option("--independence-n", cfg_.independence_n, "word length of the order-independence test");
    add_params_options();
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["n-grid"] = cfg_.n_grid;
    r.config["K"] = cfg_.K;
    r.config["L"] = cfg_.L;
    r.config["trials"] = cfg_.trials;
    if (!cfg_.compare_order.empty()) {
      r.config["compare-order"] = cfg_.compare_order;
      r.config["independence-n"] = cfg_.independence_n;
    }
    if (cfg_.n_grid.empty()) throw UsageError("--n-grid is empty");
    progress << "[drift] grid of " << cfg_.n_grid.size() << " lengths, " << cfg_.trials << " trials each\n";
    const auto rep = run_drift(r.params, cfg_.K, cfg_.L, cfg_.n_grid, r.order, run_options(cfg_, cfg_.trials));
    Outcome o;
    o.results = drift_json(rep);
    o.csv = drift_csv(rep, "n");
    o.checks.push_back(drift_check(rep, "drift stays in the no-growth band"));
    if (!cfg_.compare_order.empty()) {
      const LinearOrder other =
          LinearOrder::parse(cfg_.compare_order, r.params.num_alphas(), r.params.num_betas());
      progress << "[drift] order independence at n=" << cfg_.independence_n << "\n";
      const auto tests = drift_order_independence(r.params, cfg_.K, cfg_.L, cfg_.independence_n, r.order, other,
                                                  run_options(cfg_, cfg_.trials));
      json arr = json::array();
      for (std::size_t k = 0; k < tests.size(); ++k) {
        arr.push_back({{"coordinate", k + 1},
                       {"statistic", tests[k].statistic},
                       {"dof", tests[k].dof},
                       {"p_value", tests[k].p_value}});
        o.checks.push_back({"drift law of coordinate " + std::to_string(k + 1) + " is order independent",
                            tests[k].p_value > 1e-3,
                            "chi2=" + fmt(tests[k].statistic) + " dof=" + std::to_string(tests[k].dof) +
                                " p=" + fmt(tests[k].p_value)});
      }
      o.results["order_independence"] = arr;
    }
    return o;
  }
};

class LlnCommand : public Command {
 public:
  explicit LlnCommand(CLI::App& app) : Command(app, "lln", "scaled row and column lengths across word lengths") {
    cfg_.trials = 1000;
    sub_->add_option("--n-grid", cfg_.n_grid, "increasing word lengths")->delimiter(',');
    sub_->add_option("--K", cfg_.K, "rows");
    sub_->add_option("--L", cfg_.L, "columns");
    sub_->add_option("--trials", cfg_.trials, "words per length");
    sub_->add_option("--tolerance", cfg_.tolerance, "allowed |mean - limit| at the largest length");
    add_params_options();
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["n-grid"] = cfg_.n_grid;
    r.config["K"] = cfg_.K;
    r.config["L"] = cfg_.L;
    r.config["trials"] = cfg_.trials;
    r.config["tolerance"] = cfg_.tolerance;
    if (cfg_.n_grid.empty()) throw UsageError("--n-grid is empty");
    progress << "[lln] grid of " << cfg_.n_grid.size() << " lengths\n";
    const auto rows = run_lln(r.params, cfg_.K, cfg_.L, cfg_.n_grid, r.order, run_options(cfg_, cfg_.trials));
    std::vector<double> limit;
    for (std::size_t i = 1; i <= cfg_.K; ++i) limit.push_back(r.params.alpha(i));
    for (std::size_t j = 1; j <= cfg_.L; ++j) limit.push_back(r.params.beta(j));
    Outcome o;
    json arr = json::array();
    o.csv = "n;coordinate;mean;se;limit\n";
    for (const auto& row : rows) {
      arr.push_back({{"n", row.n}, {"mean", row.mean}, {"se", row.se}});
      for (std::size_t k = 0; k < row.mean.size(); ++k)
        o.csv += std::to_string(row.n) + ";" + std::to_string(k + 1) + ";" + fmt(row.mean[k]) + ";" + fmt(row.se[k]) +
                 ";" + fmt(limit[k]) + "\n";
    }
    o.results = {{"rows", arr}, {"limit", limit}};
    if (cfg_.trials > 0) {
      double worst = 0.0;
      for (std::size_t k = 0; k < limit.size(); ++k) worst = std::max(worst, std::abs(rows.back().mean[k] - limit[k]));
      o.checks.push_back({"scaled lengths near their limits", worst < cfg_.tolerance,
                          "max |mean - limit| " + fmt(worst) + " at n=" + std::to_string(rows.back().n)});
    }
    return o;
  }
};

class PoissonCommand : public Command {
 public:
  explicit PoissonCommand(CLI::App& app) : Command(app, "poisson", "poissonized fluctuations and drift") {
    cfg_.nu = 2000.0;
    cfg_.trials = 100000;
    sub_->add_option("--nu", cfg_.nu, "Poisson mean of the word length")->check(CLI::PositiveNumber);
    sub_->add_option("--K", cfg_.K, "rows");
    sub_->add_option("--L", cfg_.L, "columns");
    sub_->add_option("--trials", cfg_.trials, "number of words")->check(CLI::Range(2ul, 1ul << 40));
    sub_->add_option("--se-band", cfg_.se_band, "allowed deviation in standard errors");
    sub_->add_option("--nu-grid", cfg_.nu_grid, "increasing Poisson means for the drift check")->delimiter(',');
    add_params_options();
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["nu"] = cfg_.nu;
    r.config["K"] = cfg_.K;
    r.config["L"] = cfg_.L;
    r.config["trials"] = cfg_.trials;
    r.config["se-band"] = cfg_.se_band;
    if (!cfg_.nu_grid.empty()) r.config["nu-grid"] = cfg_.nu_grid;
    progress << "[poisson] nu=" << cfg_.nu << " trials=" << cfg_.trials << "\n";
    const auto res = run_clt_poisson(r.params, cfg_.K, cfg_.L, cfg_.nu, r.order, run_options(cfg_, cfg_.trials));
    Outcome o;
    o.results = report_json(res.report);
    o.csv = report_csv(res.report);
    o.checks.push_back(covariance_check(res.report, cfg_.se_band));
    if (!cfg_.nu_grid.empty()) {
      progress << "[poisson] drift over " << cfg_.nu_grid.size() << " means\n";
      const auto d =
          run_drift_poisson(r.params, cfg_.K, cfg_.L, cfg_.nu_grid, r.order, run_options(cfg_, cfg_.trials));
      o.results["drift"] = drift_json(d);
      o.csv += "\n" + drift_csv(d, "nu");
      o.checks.push_back(drift_check(d, "poissonized drift stays in the no-growth band"));
    }
    return o;
  }
};

class LemmasCommand : public Command {
 public:
  explicit LemmasCommand(CLI::App& app) : Command(app, "lemmas", "exhaustive and coupled verification suites") {
    cfg_.trials = 100000;
    sub_->add_option("--exhaustive-cap", cfg_.exhaustive_cap, "word length of the bijection and Greene suites")
        ->check(CLI::Range(std::size_t{1}, kGreeneCap));
    sub_->add_option("--trials", cfg_.trials, "trials of the coupled checks");
    sub_->add_option("--random-words", cfg_.random_words, "random words of the possible-transformation check");
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["exhaustive-cap"] = cfg_.exhaustive_cap;
    r.config["trials"] = cfg_.trials;
    r.config["random-words"] = cfg_.random_words;
    LemmaOptions opt;
    opt.exhaustive_cap = cfg_.exhaustive_cap;
    opt.trials = cfg_.trials;
    opt.random_words = cfg_.random_words;
    opt.workers = cfg_.workers;
    opt.gen = SeededGenerator(cfg_.seed);
    Outcome o;
    o.checks = run_lemma_suite(opt, [&](const std::string& label) { progress << "[lemmas] " << label << "\n"; });
    o.csv = "check;passed;detail\n";
    for (const auto& c : o.checks) o.csv += c.name + ";" + (c.passed ? "1" : "0") + ";" + c.detail + "\n";
    o.results["count"] = o.checks.size();
    return o;
  }
};

class WalkCommand : public Command {
 public:
  explicit WalkCommand(CLI::App& app) : Command(app, "walk", "reflecting random walk and its expectation bound") {
    cfg_.n = 1000;
    cfg_.trials = 0;
    sub_->add_option("--q1", cfg_.q1, "probability of a step right");
    sub_->add_option("--q3", cfg_.q3, "probability of a step left");
    sub_->add_option("--n", cfg_.n, "steps")->check(CLI::Range(0, 10000));
    sub_->add_option("--trials", cfg_.trials, "simulated walks (0: exact only)");
    sub_->add_flag("--series", cfg_.series, "emit E psi(k) for every k <= n");
    add_seed_option();
    add_run_options();
  }
  Outcome execute(Resolved& r, std::ostream& progress) override {
    r.config["q1"] = cfg_.q1;
    r.config["q3"] = cfg_.q3;
    r.config["n"] = cfg_.n;
    r.config["trials"] = cfg_.trials;
    r.config["series"] = cfg_.series;
    const WalkConfig walk = WalkConfig::make(cfg_.q1, cfg_.q3);
    const auto series = walk_expectation_series(walk, static_cast<std::size_t>(cfg_.n));
    const double bound = walk.expectation_bound();
    bool monotone = true;
    for (std::size_t k = 1; k < series.size(); ++k) monotone = monotone && series[k] >= series[k - 1] - 1e-12;
    Outcome o;
    o.results = {{"expectation", series.back()}, {"bound", bound}, {"nondecreasing", monotone}};
    o.checks.push_back({"expectation below the bound", series.back() <= bound,
                        "E psi=" + fmt(series.back()) + " bound=" + fmt(bound)});
    o.checks.push_back({"expectation nondecreasing in n", monotone, ""});
    if (cfg_.trials > 0) {
      progress << "[walk] simulating " << cfg_.trials << " walks\n";
      const SeededGenerator gen(cfg_.seed);
      auto pos = run_trials<std::int64_t>(cfg_.trials, cfg_.workers, [&](std::size_t t) {
        RngStream rng = gen.stream(Experiment::Walk, t);
        return walk_position(walk, cfg_.n, rng);
      });
      CompensatedSum s, s2;
      for (auto v : pos) s += static_cast<double>(v);
      const double T = static_cast<double>(pos.size());
      const double mean = s.value() / T;
      for (auto v : pos) s2 += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
      const double se = T > 1 ? std::sqrt(s2.value() / (T - 1.0) / T) : 0.0;
      o.results["simulated_mean"] = mean;
      o.results["simulated_se"] = se;
      const double diff = std::abs(mean - series.back());
      o.checks.push_back({"simulation matches the exact expectation", diff <= 4.0 * se || diff <= 1e-12,
                          "mean=" + fmt(mean) + " se=" + fmt(se)});
    }
    if (cfg_.series) {
      o.results["series"] = series;
      o.csv = "step;expectation\n";
      for (std::size_t k = 0; k < series.size(); ++k) o.csv += std::to_string(k) + ";" + fmt(series[k]) + "\n";
    } else {
      o.csv = "step;expectation;bound\n" + std::to_string(cfg_.n) + ";" + fmt(series.back()) + ";" + fmt(bound) + "\n";
    }
    return o;
  }
};

std::string csv_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& e : v) parts.push_back(csv_value(e));
    return join(parts, ',');
  }
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

std::string render(const std::string& command, const Config& cfg, const json& config, const Outcome& o) {
  bool passed = std::all_of(o.checks.begin(), o.checks.end(), [](const CheckResult& c) { return c.passed; });
  if (cfg.format == "csv") {
    std::string out = "# command=" + command + "\n# build=" + build_id() + "\n";
    for (const auto& [key, value] : config.items()) out += "# " + key + "=" + csv_value(value) + "\n";
    out += o.csv;
    for (const auto& c : o.checks)
      out += "# check " + std::string(c.passed ? "PASS" : "FAIL") + " " + c.name + (c.detail.empty() ? "" : ": ") +
             c.detail + "\n";
    return out;
  }
  json checks = json::array();
  for (const auto& c : o.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json doc{{"command", command}, {"build", build_id()}, {"config", config},
           {"results", o.results}, {"checks", checks}, {"passed", passed}};
  return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized RSK on Thoma alphabets: exact measures, sampling and limit-theorem checks",
               args.empty() ? "thoma-rsk" : args.front()};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<ExactCommand>(app));
  commands.push_back(std::make_unique<SampleCommand>(app));
  commands.push_back(std::make_unique<CltCommand>(app));
  commands.push_back(std::make_unique<DriftCommand>(app));
  commands.push_back(std::make_unique<LlnCommand>(app));
  commands.push_back(std::make_unique<PoissonCommand>(app));
  commands.push_back(std::make_unique<LemmasCommand>(app));
  commands.push_back(std::make_unique<WalkCommand>(app));

  try {
    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Command* cmd = nullptr;
  for (auto& c : commands)
    if (c->sub()->parsed()) cmd = c.get();
  if (!cmd) {
    err << "error: no command given\n";
    return kExitUsage;
  }
  const Config& cfg = cmd->config();

  Resolved resolved;
  Outcome outcome;
  std::ostringstream sink;
  std::ostream& progress = cfg.quiet ? static_cast<std::ostream&>(sink) : err;
  try {
    if (cmd->name() == "exact" && cfg.n > kExactCap)
      throw UsageError("n=" + std::to_string(cfg.n) + " is above the exact cap " + std::to_string(kExactCap));
    if (cmd->name() == "exact" && cfg.n < 0) throw UsageError("n must be nonnegative");
    resolved = cmd->resolve();
    resolved.config["format"] = cfg.format;
    outcome = cmd->execute(resolved, progress);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  const std::string text = render(cmd->name(), cfg, resolved.config, outcome);
  if (cfg.output.empty()) {
    out << text;
    out.flush();
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  for (const auto& c : outcome.checks) {
    if (!c.passed) {
      err << "check failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
      return kExitCheckFailed;
    }
  }
  return kExitOk;
}

}  // namespace thoma::cli
