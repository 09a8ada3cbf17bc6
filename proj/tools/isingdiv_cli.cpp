// Command-line driver: model-pair generation, exact computation, divergence
// estimation, bound reports, verification suites and benchmark sweeps.
//
// Every run prints one JSON record {command, config, seed, result} to stdout.
// All randomness flows from --seed, and results are independent of --threads,
// so a rerun with the same seed is byte-identical (exact / noisy backends).
// Wall-clock timings go to stderr (or into the record with --timings) to keep
// the default output reproducible.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isingdiv/analysis.hpp"
#include "isingdiv/divergences.hpp"
#include "isingdiv/errors.hpp"
#include "isingdiv/estimators.hpp"
#include "isingdiv/exact.hpp"
#include "isingdiv/graphs.hpp"
#include "isingdiv/instances.hpp"
#include "isingdiv/json_io.hpp"
#include "isingdiv/model.hpp"
#include "isingdiv/oracles.hpp"
#include "isingdiv/rng.hpp"
#include "isingdiv/verify.hpp"

namespace {

using isingdiv::Backend;
using isingdiv::DivergenceKind;
using isingdiv::EdgeList;
using isingdiv::InputError;
using isingdiv::IsingModel;
using isingdiv::ModelPair;
using isingdiv::OracleBundle;
using isingdiv::Rng;
using nlohmann::json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string backend = "exact";
  bool quiet = false;
  bool timings = false;
  std::string output;
  double glauber_c = 20.0;
  std::optional<int> count_reps;
};

std::uint64_t resolve_seed(const GlobalOptions& g) {
  if (g.seed) return *g.seed;
  std::random_device entropy;
  return (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
}

OracleBundle make_bundle(const GlobalOptions& g) {
  OracleBundle bundle;
  bundle.backend = isingdiv::parse_backend(g.backend);
  bundle.glauber_sweep_multiplier = g.glauber_c;
  bundle.counting_repetitions = g.count_reps;
  return bundle;
}

json bundle_config(const GlobalOptions& g) {
  json j;
  j["backend"] = g.backend;
  j["glauber_c"] = g.glauber_c;
  if (g.count_reps) j["count_reps"] = *g.count_reps;
  j["threads"] = g.threads;
  return j;
}

class PhaseTimer {
 public:
  void start(const std::string& phase) {
    finish();
    current_ = phase;
    begin_ = std::chrono::steady_clock::now();
  }
  void finish() {
    if (current_.empty()) return;
    const auto end = std::chrono::steady_clock::now();
    timings_[current_] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - begin_)
            .count();
    current_.clear();
  }
  const std::map<std::string, double>& timings() const { return timings_; }

 private:
  std::string current_;
  std::chrono::steady_clock::time_point begin_;
  std::map<std::string, double> timings_;
};

void emit_record(const GlobalOptions& g, const std::string& command, const json& config,
                 std::uint64_t seed, const json& result, PhaseTimer& timer) {
  timer.finish();
  json record;
  record["command"] = command;
  record["config"] = config;
  record["seed"] = seed;
  record["result"] = result;
  if (g.timings) {
    record["timing_ms"] = timer.timings();
  } else if (!g.quiet) {
    json t = timer.timings();
    std::cerr << "timings_ms " << t.dump() << "\n";
  }
  const std::string text = record.dump(2) + "\n";
  std::cout << text;
  if (!g.output.empty() && command != "gen") {
    isingdiv::write_text_file(g.output, text);
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw InputError("bad integer \"" + text + "\" in " + what);
  }
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw InputError("bad number \"" + text + "\" in " + what);
  }
}

// Graph family specs: path:<n>, cycle:<n>, complete:<n>, regular:<n>:<delta>,
// petersen. Consumes tokens from `parts` starting at `pos`.
std::pair<int, EdgeList> parse_graph(const std::vector<std::string>& parts, std::size_t& pos,
                                     Rng& rng) {
  if (pos >= parts.size()) throw InputError("missing graph family");
  const std::string family = parts[pos++];
  auto next_int = [&](const char* what) {
    if (pos >= parts.size()) throw InputError(std::string("family needs ") + what);
    return parse_int(parts[pos++], what);
  };
  if (family == "path") {
    const int n = next_int("vertex count");
    return {n, isingdiv::path_graph(n)};
  }
  if (family == "cycle") {
    const int n = next_int("vertex count");
    return {n, isingdiv::cycle_graph(n)};
  }
  if (family == "complete") {
    const int n = next_int("vertex count");
    return {n, isingdiv::complete_graph(n)};
  }
  if (family == "regular") {
    const int n = next_int("vertex count");
    const int delta = next_int("degree");
    return {n, isingdiv::random_regular_graph(n, delta, rng)};
  }
  if (family == "petersen") return {10, isingdiv::petersen_graph()};
  throw InputError("unknown graph family \"" + family +
                   "\" (path, cycle, complete, regular, petersen)");
}

struct GenOptions {
  std::string family;
  std::string j_range = "-1:1";
  std::string h_range = "-1:1";
  std::optional<double> j_nu, j_mu, h_nu, h_mu;
};

isingdiv::Interval parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw InputError("range \"" + text + "\" in " + what + " must be lo:hi");
  return {parse_real(parts[0], what), parse_real(parts[1], what)};
}

ModelPair generate_pair(const GenOptions& opt, std::uint64_t seed) {
  Rng rng(isingdiv::derive_seed(seed, 0x9e4));
  const auto parts = split(opt.family, ':');
  std::size_t pos = 0;
  if (!parts.empty() && parts[0] == "unified") {
    ++pos;
    auto [n, edges] = parse_graph(parts, pos, rng);
    if (pos + 2 != parts.size()) throw InputError("unified family needs :<beta_nu>:<beta_mu>");
    const double beta_nu = parse_real(parts[pos], "beta_nu");
    const double beta_mu = parse_real(parts[pos + 1], "beta_mu");
    return isingdiv::unified_pair(n, edges, beta_nu, beta_mu);
  }
  auto [n, edges] = parse_graph(parts, pos, rng);
  if (pos != parts.size()) throw InputError("trailing tokens in family \"" + opt.family + "\"");
  const isingdiv::Interval j_range = parse_range(opt.j_range, "--j-range");
  const isingdiv::Interval h_range = parse_range(opt.h_range, "--h-range");

  auto build = [&](std::optional<double> j_const, std::optional<double> h_const) {
    std::vector<isingdiv::Edge> es;
    es.reserve(edges.size());
    for (auto [u, v] : edges) {
      es.push_back({u, v, j_const ? *j_const : rng.next_in(j_range.lo, j_range.hi)});
    }
    std::vector<double> fields(static_cast<std::size_t>(n));
    for (auto& h : fields) h = h_const ? *h_const : rng.next_in(h_range.lo, h_range.hi);
    return IsingModel(n, std::move(es), std::move(fields));
  };
  IsingModel nu = build(opt.j_nu, opt.h_nu);
  IsingModel mu = build(opt.j_mu, opt.h_mu);
  return ModelPair(std::move(nu), std::move(mu));
}

json estimate_to_json(const isingdiv::Estimate& est) {
  json r;
  r["value"] = est.value;
  r["regime"] = isingdiv::regime_name(est.regime);
  r["d_par"] = est.d_par;
  r["theta"] = est.theta;
  r["b"] = est.b;
  r["samples_used"] = est.samples_used;
  json terms = json::array();
  for (const auto& t : est.terms) terms.push_back({{"label", t.label}, {"value", t.value}});
  r["terms"] = std::move(terms);
  return r;
}

json suite_to_json(const isingdiv::SuiteResult& suite) {
  json checks = json::array();
  for (const auto& c : suite.checks) {
    checks.push_back({{"name", c.name},
                      {"cases", c.cases},
                      {"violations", c.violations},
                      {"worst", c.worst},
                      {"pass", c.pass},
                      {"note", c.note}});
  }
  return {{"suite", suite.suite}, {"pass", suite.pass}, {"checks", std::move(checks)}};
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f-divergence estimation between Ising models"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "root RNG seed (default: drawn from entropy)");
  app.add_option("--threads", global.threads, "worker count (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--backend", global.backend, "oracle backend: exact, glauber, noisy")
      ->check(CLI::IsMember({"exact", "glauber", "noisy"}));
  app.add_flag("--quiet", global.quiet, "suppress all non-JSON output");
  app.add_flag("--timings", global.timings,
               "include wall-clock phase timings in the JSON record (breaks byte-for-byte "
               "reproducibility)");
  app.add_option("--output", global.output, "also write the output to this file");
  app.add_option("--glauber-c", global.glauber_c, "Glauber sweep multiplier C");
  app.add_option("--count-reps", global.count_reps, "median-boost repetitions (odd)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a model-pair file");
  GenOptions gen_opt;
  gen->add_option("family", gen_opt.family,
                  "graph family: path:<n>, cycle:<n>, complete:<n>, regular:<n>:<d>, petersen, "
                  "or unified:<family...>:<beta_nu>:<beta_mu>")
      ->required();
  gen->add_option("--j-range", gen_opt.j_range, "coupling range lo:hi (default -1:1)");
  gen->add_option("--h-range", gen_opt.h_range, "field range lo:hi (default -1:1)");
  gen->add_option("--j-nu", gen_opt.j_nu, "constant coupling for the first model");
  gen->add_option("--j-mu", gen_opt.j_mu, "constant coupling for the second model");
  gen->add_option("--h-nu", gen_opt.h_nu, "constant field for the first model");
  gen->add_option("--h-mu", gen_opt.h_mu, "constant field for the second model");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "brute-force divergence of a pair file");
  std::string exact_pair, exact_divspec = "kl";
  exact_cmd->add_option("--pair", exact_pair, "pair JSON file")->required();
  exact_cmd->add_option("--divergence", exact_divspec,
                        "divergence spec: chi:<int>, kl, renyi, js, alpha:<real>, hellinger2, tv");

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "randomized divergence estimate");
  std::string est_pair, est_divspec = "kl", est_mode = "practical";
  double est_eps = 0.3;
  std::optional<std::uint64_t> est_samples;
  double est_delta_floor = 1e-3;
  est_cmd->add_option("--pair", est_pair, "pair JSON file")->required();
  est_cmd->add_option("--divergence", est_divspec, "divergence spec");
  est_cmd->add_option("--eps", est_eps, "target relative error in (0,1)");
  est_cmd->add_option("--mode", est_mode, "theory or practical")
      ->check(CLI::IsMember({"theory", "practical"}));
  est_cmd->add_option("--samples", est_samples, "sample count per term (practical mode)");
  est_cmd->add_option("--delta-floor", est_delta_floor,
                      "minimum counting-oracle error budget in practical mode");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form lower bound report");
  std::string bounds_pair;
  std::vector<std::string> bounds_kinds = {"kl", "renyi", "js", "alpha:2", "hellinger2"};
  std::vector<int> bounds_alphas = {1, 2, 3};
  bool bounds_no_exact = false;
  bounds_cmd->add_option("--pair", bounds_pair, "pair JSON file")->required();
  bounds_cmd->add_option("--divergence", bounds_kinds, "divergence specs to bound");
  bounds_cmd->add_option("--chi-alpha", bounds_alphas, "chi orders to bound");
  bounds_cmd->add_flag("--no-exact", bounds_no_exact, "skip brute-force comparison columns");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  std::string verify_suite = "all";
  isingdiv::VerifyParams verify_params;
  verify_cmd->add_option("--suite", verify_suite,
                         "identities, lemmas, bcoeff, condition, hardness, oracles, estimators, "
                         "or all");
  verify_cmd->add_option("--n-max", verify_params.n_max, "largest enumerated instance size");
  verify_cmd->add_option("--cases", verify_params.cases, "random cases per check");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "seeded estimator benchmark sweep");
  std::string bench_pair, bench_divspec = "chi:2", bench_csv = "bench.csv", bench_label;
  std::vector<std::uint64_t> bench_samples;
  std::vector<double> bench_eps = {0.3};
  int bench_trials = 30;
  bench_cmd->add_option("--pair", bench_pair, "pair JSON file")->required();
  bench_cmd->add_option("--divergence", bench_divspec, "divergence spec");
  bench_cmd->add_option("--samples-list", bench_samples, "sample counts to sweep")->required();
  bench_cmd->add_option("--eps-list", bench_eps, "relative error targets to sweep");
  bench_cmd->add_option("--trials", bench_trials, "seeded trials per cell")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", bench_csv, "CSV output path");
  bench_cmd->add_option("--label", bench_label, "instance label for the CSV (default: file stem)");

  CLI11_PARSE(app, argc, argv);

  PhaseTimer timer;
  try {
    const std::uint64_t seed = resolve_seed(global);

    if (gen->parsed()) {
      timer.start("generate");
      const ModelPair pair = generate_pair(gen_opt, seed);
      const json pair_json = isingdiv::pair_to_json(pair);
      timer.start("write");
      if (!global.output.empty()) {
        isingdiv::write_text_file(global.output, pair_json.dump(2) + "\n");
      }
      json config;
      config["family"] = gen_opt.family;
      config["j_range"] = gen_opt.j_range;
      config["h_range"] = gen_opt.h_range;
      if (gen_opt.j_nu) config["j_nu"] = *gen_opt.j_nu;
      if (gen_opt.j_mu) config["j_mu"] = *gen_opt.j_mu;
      if (gen_opt.h_nu) config["h_nu"] = *gen_opt.h_nu;
      if (gen_opt.h_mu) config["h_mu"] = *gen_opt.h_mu;
      if (!global.output.empty()) config["output"] = global.output;
      emit_record(global, "gen", config, seed, pair_json, timer);
      return 0;
    }

    if (exact_cmd->parsed()) {
      timer.start("load");
      const ModelPair pair = isingdiv::load_pair_file(exact_pair);
      const DivergenceKind kind = DivergenceKind::parse(exact_divspec);
      timer.start("enumerate");
      json result;
      result["value"] = isingdiv::exact_divergence(pair, kind);
      result["log_z_nu"] =
          isingdiv::partition_function(pair.nu(), {}, global.threads).log_z;
      result["log_z_mu"] =
          isingdiv::partition_function(pair.mu(), {}, global.threads).log_z;
      json config{{"pair", exact_pair}, {"divergence", exact_divspec}};
      emit_record(global, "exact", config, seed, result, timer);
      return 0;
    }

    if (est_cmd->parsed()) {
      timer.start("load");
      const ModelPair pair = isingdiv::load_pair_file(est_pair);
      const DivergenceKind kind = DivergenceKind::parse(est_divspec);
      isingdiv::EstimatorConfig cfg;
      cfg.epsilon = est_eps;
      cfg.mode = est_mode == "theory" ? isingdiv::EstimatorMode::TheoryFaithful
                                      : isingdiv::EstimatorMode::Practical;
      cfg.t_override = est_samples;
      cfg.seed = seed;
      cfg.threads = global.threads;
      cfg.practical_delta_floor = est_delta_floor;
      timer.start("estimate");
      const isingdiv::Estimate est = isingdiv::estimate(pair, kind, cfg, make_bundle(global));
      json config = bundle_config(global);
      config["pair"] = est_pair;
      config["divergence"] = est_divspec;
      config["eps"] = est_eps;
      config["mode"] = est_mode;
      if (est_samples) config["samples"] = *est_samples;
      config["delta_floor"] = est_delta_floor;
      config["failure_target"] = cfg.failure_target;
      emit_record(global, "estimate", config, seed, estimate_to_json(est), timer);
      return 0;
    }

    if (bounds_cmd->parsed()) {
      timer.start("load");
      const ModelPair pair = isingdiv::load_pair_file(bounds_pair);
      std::vector<DivergenceKind> kinds;
      for (const auto& spec : bounds_kinds) kinds.push_back(DivergenceKind::parse(spec));
      const bool with_exact = !bounds_no_exact && pair.n() <= isingdiv::ExactLimit{}.max_n;
      timer.start("bounds");
      const isingdiv::BoundsReport report =
          isingdiv::bounds_report(pair, kinds, bounds_alphas, with_exact);
      json entries = json::array();
      for (const auto& e : report.entries) {
        json entry{{"name", e.name}, {"bound", e.bound}, {"slack", e.slack}};
        if (e.exact) entry["exact"] = *e.exact;
        if (e.holds) entry["holds"] = *e.holds;
        entries.push_back(std::move(entry));
      }
      json result{{"d_par", report.d_par},
                  {"b", report.b},
                  {"theta", report.theta},
                  {"all_hold", report.all_hold},
                  {"entries", std::move(entries)}};
      json config{{"pair", bounds_pair},
                  {"divergence", bounds_kinds},
                  {"chi_alpha", bounds_alphas},
                  {"with_exact", with_exact}};
      emit_record(global, "bounds", config, seed, result, timer);
      return report.all_hold ? 0 : 1;
    }

    if (verify_cmd->parsed()) {
      verify_params.seed = seed;
      verify_params.threads = global.threads;
      timer.start("verify");
      std::vector<isingdiv::SuiteResult> suites;
      if (verify_suite == "all") {
        suites = isingdiv::run_all_suites(verify_params);
      } else {
        suites.push_back(isingdiv::run_suite(verify_suite, verify_params));
      }
      bool pass = true;
      json suite_json = json::array();
      for (const auto& suite : suites) {
        pass = pass && suite.pass;
        suite_json.push_back(suite_to_json(suite));
        if (!global.quiet) {
          for (const auto& check : suite.checks) {
            std::cerr << (check.pass ? "[PASS] " : "[FAIL] ") << suite.suite << ": " << check.name
                      << " (" << check.violations << "/" << check.cases << " violations)\n";
          }
        }
      }
      json config{{"suite", verify_suite},
                  {"n_max", verify_params.n_max},
                  {"cases", verify_params.cases}};
      emit_record(global, "verify", config, seed, json{{"pass", pass}, {"suites", suite_json}},
                  timer);
      return pass ? 0 : 1;
    }

    if (bench_cmd->parsed()) {
      timer.start("load");
      const ModelPair pair = isingdiv::load_pair_file(bench_pair);
      const DivergenceKind kind = DivergenceKind::parse(bench_divspec);
      const std::string label =
          bench_label.empty() ? std::filesystem::path(bench_pair).stem().string() : bench_label;
      timer.start("exact");
      const double exact = isingdiv::exact_divergence(pair, kind);
      timer.start("sweep");
      const OracleBundle bundle = make_bundle(global);
      json rows = json::array();
      std::string csv =
          "instance,kind,T,eps,trials,success_rate,median_abs_log_error,wall_ms\n";
      for (double eps : bench_eps) {
        for (std::uint64_t samples : bench_samples) {
          const auto cell_begin = std::chrono::steady_clock::now();
          int ok = 0;
          std::vector<double> errors;
          for (int trial = 0; trial < bench_trials; ++trial) {
            isingdiv::EstimatorConfig cfg;
            cfg.epsilon = eps;
            cfg.mode = isingdiv::EstimatorMode::Practical;
            cfg.t_override = samples;
            cfg.threads = global.threads;
            cfg.seed = isingdiv::derive_seed(seed, samples, static_cast<std::uint64_t>(trial));
            const isingdiv::Estimate est = isingdiv::estimate(pair, kind, cfg, bundle);
            const double log_err =
                est.value > 0.0 && exact > 0.0 ? std::abs(std::log(est.value / exact)) : HUGE_VAL;
            errors.push_back(log_err);
            ok += log_err <= eps;
          }
          const double wall_ms = std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
                                     std::chrono::steady_clock::now() - cell_begin)
                                     .count();
          const double success = static_cast<double>(ok) / bench_trials;
          const double median = median_of(errors);
          rows.push_back({{"instance", label},
                          {"kind", bench_divspec},
                          {"T", samples},
                          {"eps", eps},
                          {"trials", bench_trials},
                          {"success_rate", success},
                          {"median_abs_log_error", median}});
          std::ostringstream line;
          line << label << ',' << bench_divspec << ',' << samples << ',' << eps << ','
               << bench_trials << ',' << success << ',' << median << ',' << wall_ms << '\n';
          csv += line.str();
        }
      }
      timer.start("write");
      if (!bench_csv.empty()) isingdiv::write_text_file(bench_csv, csv);
      json config{{"pair", bench_pair},   {"divergence", bench_divspec},
                  {"samples_list", bench_samples}, {"eps_list", bench_eps},
                  {"trials", bench_trials},        {"csv", bench_csv},
                  {"backend", global.backend}};
      emit_record(global, "bench", config, seed, json{{"exact", exact}, {"rows", rows}}, timer);
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
