#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpcover/harness.hpp"
#include "gpcover/io.hpp"
#include "gpcover/parallel.hpp"
#include "gpcover/solver.hpp"

namespace {

using namespace gpcover;
using nlohmann::json;

// Exit codes: 0 covered/verified/clean, 1 not covered or property violated,
// 2 input error, 3 resource cap exceeded.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kCapError = 3;

struct Deadline {
  std::chrono::steady_clock::time_point end;
  bool armed = false;
  void arm(double seconds) {
    end = std::chrono::steady_clock::now() +
          std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
    armed = true;
  }
  void check() const {
    if (armed && std::chrono::steady_clock::now() > end)
      throw CapError("time budget exceeded");
  }
};

struct CommonOpts {
  std::string group_path;
  std::string out_path;
  unsigned threads = 0;
  std::uint32_t cap_elements = GroupTable::kDefaultCap;
  double time_budget_s = 0;
  Deadline deadline;

  void attach(CLI::App* app, bool need_group = true) {
    auto* g = app->add_option("--group", group_path, "group JSON file");
    if (need_group) g->required();
    app->add_option("--out", out_path, "output JSON path (default: stdout)");
    app->add_option("--threads", threads, "worker pool width");
    app->add_option("--cap-elements", cap_elements,
                    "maximum group order to enumerate")
        ->check(CLI::PositiveNumber);
    app->add_option("--time-budget-s", time_budget_s,
                    "abort with exit 3 after this many seconds");
  }

  void apply() {
    if (threads > 0) thread_count() = threads;
    if (time_budget_s > 0) deadline.arm(time_budget_s);
  }

  GroupTable load() const { return load_group(group_path, cap_elements); }

  void emit(const json& report) const {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      write_text_file(out_path, text);
  }
};

int cmd_group_info(CommonOpts& opts, const std::string& family,
                   unsigned q, unsigned n) {
  opts.apply();
  GroupTable g = !family.empty()
                     ? build_family(family_from_name(family),
                                    q ? q : n, opts.cap_elements)
                     : opts.load();
  ClassSpectrum sp = conjugacy_classes(g);
  json rep = report_envelope(g, json::object());
  rep["simple"] = sp.simple;
  rep["minclass"] = sp.minclass;
  rep["minclass_central"] = sp.minclass_central;
  rep["center_size"] = sp.center_size;
  json classes = json::array();
  for (const auto& c : sp.classes)
    classes.push_back({{"rep", c.rep}, {"size", c.size}});
  rep["classes"] = classes;
  try {
    MindegInfo k = mindeg(g, sp);
    rep["mindeg"] = {{"value", k.value},
                     {"kind", k.kind == MindegInfo::Kind::exact
                                  ? "exact"
                                  : "lower_bound"},
                     {"trivial_only", k.trivial_only}};
    if (!k.degrees.empty()) rep["mindeg"]["degrees"] = k.degrees;
  } catch (const InputError& e) {
    rep["mindeg"] = {{"error", e.what()}};
  }
  opts.emit(rep);
  std::cout << g.describe() << (sp.simple ? " (simple)" : " (not simple)")
            << ", minclass " << sp.minclass << "\n";
  return kOk;
}

int cmd_solve(CommonOpts& opts, const std::string& sets_path,
              const std::string& config_path, const std::string& strategy,
              std::uint64_t seed, std::uint64_t cap_candidates,
              const std::string& cert_out) {
  opts.apply();
  GroupTable g = opts.load();
  ClassSpectrum sp = conjugacy_classes(g);
  std::vector<Subset> sets = parse_sets(load_json_file(sets_path), g, &sp);
  PipelineConfig cfg = config_path.empty()
                           ? PipelineConfig::for_rank(
                                 g.has_lie_meta() ? g.rank() : 1)
                           : parse_config(load_json_file(config_path));
  if (seed) cfg.seed = seed;
  if (cap_candidates) cfg.candidate_cap = cap_candidates;
  opts.deadline.check();

  json rep = report_envelope(g, config_to_json(cfg));
  rep["strategy"] = strategy;
  if (strategy == "exhaustive") {
    auto sol = exhaustive_oracle(g, sets);
    rep["covered"] = sol.has_value();
    if (sol) {
      CoverCertificate cert;
      cert.conjugators = *sol;
      Subset p = conjugate_subset(g, sets[0], (*sol)[0]);
      for (std::size_t i = 1; i < sets.size(); ++i)
        p = product(g, p, conjugate_subset(g, sets[i], (*sol)[i]));
      cert.final_size = p.size();
      cert.covered = p.is_full();
      cert.trace.push_back({Phase::gowers, 0,
                            static_cast<std::uint32_t>(sets.size() - 1),
                            p.size()});
      rep["certificate"] = certificate_to_json(cert);
      if (!cert_out.empty())
        write_text_file(cert_out, certificate_to_json(cert).dump(2) + "\n");
    }
    opts.emit(rep);
    return sol ? kOk : kNegative;
  }
  if (strategy != "pipeline")
    throw InputError("unknown strategy: " + strategy);
  PipelineResult r = pipeline(g, sets, cfg, &sp);
  rep["covered"] = r.ok;
  if (r.ok) {
    rep["certificate"] = certificate_to_json(r.certificate);
    if (!cert_out.empty())
      write_text_file(cert_out,
                      certificate_to_json(r.certificate).dump(2) + "\n");
  } else {
    rep["failure"] = {{"phase", r.failed_phase}, {"reason", r.reason}};
  }
  if (!r.growth_log.empty()) {
    json rounds = json::array();
    for (const auto& rl : r.growth_log)
      rounds.push_back({{"round", rl.round}, {"sizes", rl.sizes}});
    rep["growth_rounds"] = rounds;
  }
  opts.emit(rep);
  return r.ok ? kOk : kNegative;
}

int cmd_replay(CommonOpts& opts, const std::string& sets_path,
               const std::string& cert_path) {
  opts.apply();
  GroupTable g = opts.load();
  ClassSpectrum sp = conjugacy_classes(g);
  std::vector<Subset> sets = parse_sets(load_json_file(sets_path), g, &sp);
  CoverCertificate cert = certificate_from_json(load_json_file(cert_path));
  VerifyResult v = verify_certificate(g, sets, cert);
  json rep = report_envelope(g, json::object());
  rep["verified"] = v.ok;
  if (!v.ok) {
    rep["reason"] = v.reason;
    rep["first_divergent_trace"] = v.first_divergent_trace;
  }
  opts.emit(rep);
  return v.ok ? kOk : kNegative;
}

int cmd_verify(CommonOpts& opts, const std::string& suite_name_arg,
               std::uint64_t trials, std::uint64_t seed) {
  opts.apply();
  GroupTable g = opts.load();
  ClassSpectrum sp = conjugacy_classes(g);
  Suite suite = suite_from_name(suite_name_arg);
  opts.deadline.check();
  TrialReport r = run_suite(g, sp, suite, trials, seed);
  json rep = report_envelope(
      g, {{"suite", r.suite}, {"trials", r.trials}, {"seed", r.seed}});
  rep["violations"] = r.violations;
  rep["violation_count"] = r.violations.size();
  rep["stats"] = r.stats;
  rep["passed"] = r.passed();
  opts.emit(rep);
  return r.passed() ? kOk : kNegative;
}

int cmd_rs_exponent(CommonOpts& opts, unsigned max_len,
                    std::uint64_t memo_cap) {
  opts.apply();
  GroupTable g = opts.load();
  ClassSpectrum sp = conjugacy_classes(g);
  opts.deadline.check();
  RsReport r = rs_exponent_search(g, sp, max_len, memo_cap);
  json rep = report_envelope(
      g, {{"max_len", r.max_len}, {"memo_cap", memo_cap}});
  rep["c_star"] = r.c_star;
  rep["states"] = r.states;
  rep["any_cover"] = r.any_cover;
  if (r.any_cover) rep["min_cover_mass"] = r.min_cover_mass;
  json per = json::array();
  std::vector<std::vector<std::string>> rows;
  for (auto [len, mass] : r.per_length) {
    per.push_back({{"length", len}, {"best_noncover_mass", mass}});
    rows.push_back({std::to_string(len), std::to_string(mass)});
  }
  rep["per_length"] = per;
  opts.emit(rep);
  if (!opts.out_path.empty())
    write_text_file(opts.out_path + ".csv",
                    to_csv({"length", "best_noncover_mass"}, rows));
  return kOk;
}

int cmd_estimate_eta(CommonOpts& opts, std::uint64_t trials,
                     std::uint64_t seed, std::uint32_t size_lo,
                     std::uint32_t size_hi) {
  opts.apply();
  GroupTable g = opts.load();
  if (size_hi == 0 || size_hi > g.order()) size_hi = g.order();
  if (size_lo < 2) size_lo = 2;
  json rep = report_envelope(g, {{"trials", trials},
                                 {"seed", seed},
                                 {"size_lo", size_lo},
                                 {"size_hi", size_hi}});
  json samples = json::array();
  std::vector<std::vector<std::string>> rows;
  double min_eta = INFINITY;
  for (std::uint64_t t = 0; t < trials; ++t) {
    opts.deadline.check();
    SplitMix64 rng(derive_seed(seed, t));
    std::uint32_t size =
        size_lo + static_cast<std::uint32_t>(rng.below(size_hi - size_lo + 1));
    Subset s = random_subset(g, size, rng.next());
    if (!generates(g, s)) {
      rows.push_back({std::to_string(t), std::to_string(size), "", "skipped"});
      continue;
    }
    TriplingResult r = measure_tripling(g, s);
    json row{{"trial", t}, {"size", size}, {"cube", r.s3}};
    if (r.tripled_to_G) {
      row["tripled_to_G"] = true;
      rows.push_back({std::to_string(t), std::to_string(size),
                      std::to_string(r.s3), "full"});
    } else {
      row["eta_emp"] = r.eta_emp;
      min_eta = std::min(min_eta, r.eta_emp);
      rows.push_back({std::to_string(t), std::to_string(size),
                      std::to_string(r.s3), std::to_string(r.eta_emp)});
    }
    samples.push_back(std::move(row));
  }
  rep["samples"] = samples;
  if (min_eta != INFINITY) rep["min_eta_emp"] = min_eta;
  opts.emit(rep);
  if (!opts.out_path.empty())
    write_text_file(opts.out_path + ".csv",
                    to_csv({"trial", "size", "cube_size", "eta_emp"}, rows));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-group covering toolkit"};
  app.require_subcommand(1);

  CommonOpts oinfo, osolve, overify, oreplay, ors, oeta;

  auto* info = app.add_subcommand("group-info", "class data for one group");
  std::string info_family;
  unsigned info_q = 0, info_n = 0;
  oinfo.attach(info, /*need_group=*/false);
  info->add_option("--family", info_family, "builtin family name");
  info->add_option("--q", info_q, "field size for psl2/sl2");
  info->add_option("--n", info_n, "degree or order for sym/alt/...");

  auto* solve = app.add_subcommand("solve", "find covering conjugators");
  std::string solve_sets, solve_config, solve_strategy = "pipeline";
  std::string solve_cert_out;
  std::uint64_t solve_seed = 0, solve_cap_cand = 0;
  osolve.attach(solve);
  solve->add_option("--sets", solve_sets, "sets JSON file")->required();
  solve->add_option("--config", solve_config, "pipeline config JSON");
  solve->add_option("--strategy", solve_strategy, "pipeline|exhaustive");
  solve->add_option("--seed", solve_seed, "seed override");
  solve->add_option("--cap-candidates", solve_cap_cand,
                    "conjugator scan sample cap");
  solve->add_option("--cert-out", solve_cert_out,
                    "write the bare certificate here as well");

  auto* verify = app.add_subcommand("verify", "run one verification suite");
  std::string verify_suite;
  std::uint64_t verify_trials = 1000, verify_seed = 1;
  overify.attach(verify);
  verify->add_option("--suite", verify_suite,
                     "triple|classsum|petridis|gen32|translate|tripling|"
                     "trichotomy|gowers|bounds")
      ->required();
  verify->add_option("--trials", verify_trials, "trial count");
  verify->add_option("--seed", verify_seed, "master seed");

  auto* replay = app.add_subcommand("replay", "verify a stored certificate");
  std::string replay_sets, replay_cert;
  oreplay.attach(replay);
  replay->add_option("--sets", replay_sets, "sets JSON file")->required();
  replay->add_option("--cert", replay_cert, "certificate JSON file")
      ->required();

  auto* rs = app.add_subcommand("rs-exponent",
                                "class-product exponent experiment");
  unsigned rs_len = 8;
  std::uint64_t rs_memo = 100'000;
  ors.attach(rs);
  rs->add_option("--max-len", rs_len, "maximum product length");
  rs->add_option("--memo-cap", rs_memo, "distinct-state cap");

  auto* eta = app.add_subcommand("estimate-eta",
                                 "empirical tripling exponent sweep");
  std::uint64_t eta_trials = 100, eta_seed = 1;
  std::uint32_t eta_lo = 2, eta_hi = 0;
  oeta.attach(eta);
  eta->add_option("--trials", eta_trials, "trial count");
  eta->add_option("--seed", eta_seed, "master seed");
  eta->add_option("--size-lo", eta_lo, "smallest sampled size");
  eta->add_option("--size-hi", eta_hi, "largest sampled size (0 = |G|)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) {
      if (info_family.empty() == oinfo.group_path.empty())
        throw InputError("group-info needs exactly one of --group, --family");
      return cmd_group_info(oinfo, info_family, info_q, info_n);
    }
    if (solve->parsed())
      return cmd_solve(osolve, solve_sets, solve_config, solve_strategy,
                       solve_seed, solve_cap_cand, solve_cert_out);
    if (verify->parsed())
      return cmd_verify(overify, verify_suite, verify_trials, verify_seed);
    if (replay->parsed()) return cmd_replay(oreplay, replay_sets, replay_cert);
    if (rs->parsed()) return cmd_rs_exponent(ors, rs_len, rs_memo);
    if (eta->parsed())
      return cmd_estimate_eta(oeta, eta_trials, eta_seed, eta_lo, eta_hi);
  } catch (const CapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kCapError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
