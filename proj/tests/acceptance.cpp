// Acceptance gate: one line per criterion, [PASS]/[FAIL], pinned
// parameters and seeds. Exit 0 iff every criterion passes.

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpcover/harness.hpp"
#include "gpcover/io.hpp"
#include "gpcover/parallel.hpp"
#include "gpcover/solver.hpp"

using namespace gpcover;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void run(int index, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(index, name, ok, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

struct Instance {
  std::vector<Subset> sets;
};

// Seeded instance with k sets and product-of-cardinalities mass of at
// least |G|^4; resamples deterministically until the mass bound holds.
Instance sample_instance(const GroupTable& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double need = 4.0 * std::log(double(g.order()));
  for (;;) {
    std::uint64_t k = 4 + rng.below(13);  // k in [4,16]
    std::vector<Subset> sets;
    double mass = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
      // Log-uniform sizes in [2, |G|] for genuinely mixed instances.
      double u = rng.uniform01();
      double v = std::exp(std::log(2.0) +
                          u * (std::log(double(g.order())) - std::log(2.0)));
      std::uint32_t size = std::min<std::uint32_t>(
          g.order(), std::max<std::uint32_t>(2, std::uint32_t(v)));
      sets.push_back(random_subset(g, size, rng.next()));
      mass += std::log(double(size));
    }
    if (mass >= need) return {std::move(sets)};
  }
}

}  // namespace

int main() {
  thread_count() = 1;

  // 1. Exact identity suites: 10^4 (A,B) trials per group, zero violations,
  // exact arithmetic throughout.
  run(1, "exact identity suites", []() -> std::pair<bool, std::string> {
    struct Spec {
      Family fam;
      unsigned param;
    };
    const Spec groups[] = {{Family::alt, 5},
                           {Family::psl2, 7},
                           {Family::psl2, 11},
                           {Family::sym, 5},
                           {Family::sl2, 5}};
    std::uint64_t viol = 0;
    for (const auto& s : groups) {
      GroupTable g = build_family(s.fam, s.param);
      ClassSpectrum sp = conjugacy_classes(g);
      TrialReport tri = run_suite(g, sp, Suite::triple, 10'000, 42);
      TrialReport cls = run_suite(g, sp, Suite::classsum, 10'000, 43);
      viol += tri.violations.size() + cls.violations.size();
    }
    std::ostringstream os;
    os << "5 groups x 10000 trials x 2 identities, " << viol << " violations";
    return {viol == 0, os.str()};
  });

  // 2. Small-set exact conjugation on PSL(2,13): 500 sampled pairs with
  // |A|,|B| < minclass^{1/4} = 84^{1/4}, 100% exact.
  run(2, "small-set exact conjugation", []() -> std::pair<bool, std::string> {
    GroupTable g = build_family(Family::psl2, 13);
    ClassSpectrum sp = conjugacy_classes(g);
    if (sp.minclass != 84) return {false, "unexpected minclass"};
    SplitMix64 rng(202);
    int exact = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
      // 84^{1/4} = 3.027..., so admissible sizes are 1..3.
      Subset a = random_subset(g, 1 + rng.below(3), rng.next());
      Subset b = random_subset(g, 1 + rng.below(3), rng.next());
      SmallPhaseResult r = small_phase_find_g(g, a, b);
      if (r.exact && r.size == std::uint64_t(a.size()) * b.size()) ++exact;
    }
    std::ostringstream os;
    os << exact << "/" << trials << " exact on PSL(2,13)";
    return {exact == trials, os.str()};
  });

  // 3. Conjugate-growth consequence: 10^3 trials on Alt(5) and PSL(2,7)
  // for h in {2,3}; exponent triple at h=3 is exactly (15,2,7).
  run(3, "power-growth inequality", []() -> std::pair<bool, std::string> {
    auto e3 = petridis_exponents(3);
    if (e3.alpha != 15 || e3.beta != 2 || e3.gamma != 7)
      return {false, "exponent triple at h=3 is not (15,2,7)"};
    auto e2 = petridis_exponents(2);
    if (e2.alpha != 7 || e2.beta != 1 || e2.gamma != 3)
      return {false, "exponent triple at h=2 is not (7,1,3)"};
    std::uint64_t viol = 0, trials_done = 0;
    for (GroupTable g : {build_family(Family::alt, 5),
                         build_family(Family::psl2, 7)}) {
      std::uint32_t cap = std::min<std::uint32_t>(g.order(), 40);
      for (std::uint64_t t = 0; t < 1000; ++t) {
        SplitMix64 rng(derive_seed(303, t));
        Subset a = random_subset(g, 2 + rng.below(cap - 1), rng.next());
        Subset b = random_subset(g, 2 + rng.below(cap - 1), rng.next());
        int h = 2 + static_cast<int>(t % 2);
        if (!check_petridis_consequence(g, a, b, h)) ++viol;
        ++trials_done;
      }
    }
    std::ostringstream os;
    os << trials_done << " trials (h in {2,3}), " << viol << " violations";
    return {viol == 0, os.str()};
  });

  // 4. Triple-product criterion on Alt(5) with oracle-exact k = 3:
  // 10^3 sampled triples meeting the criterion all cover; pinned threshold
  // instances behave as expected.
  run(4, "triple-product coverage criterion",
      []() -> std::pair<bool, std::string> {
        GroupTable g = build_family(Family::alt, 5);
        ClassSpectrum sp = conjugacy_classes(g);
        MindegInfo k = mindeg(g, sp);
        if (k.value != 3 || k.kind != MindegInfo::Kind::exact ||
            k.degrees.size() != 5)
          return {false, "degree oracle did not give exact k = 3"};
        std::uint64_t sumsq = 0;
        for (auto d : k.degrees) sumsq += std::uint64_t(d) * d;
        if (sumsq != 60) return {false, "degree squares do not sum to 60"};
        std::uint64_t checked = 0, failures_here = 0;
        for (std::uint64_t t = 0; t < 1000; ++t) {
          SplitMix64 rng(derive_seed(404, t));
          // Sizes in [42,60]: every such triple meets |A||B||C|k >= |G|^3.
          Subset a = random_subset(g, 42 + rng.below(19), rng.next());
          Subset b = random_subset(g, 42 + rng.below(19), rng.next());
          Subset c = random_subset(g, 42 + rng.below(19), rng.next());
          GowersResult r = gowers_cover(g, a, b, c, k);
          if (!r.criterion_holds || !r.covered) ++failures_here;
          ++checked;
        }
        Subset t45 = random_subset(g, 45, 1);
        GowersResult thr = gowers_cover(g, t45, t45, t45, k);
        bool t45_ok = thr.criterion_holds && thr.covered;
        Subset t10 = random_subset(g, 10, 2);
        bool t10_ok = !gowers_cover(g, t10, t10, t10, k).criterion_holds;
        std::ostringstream os;
        os << checked << " criterion triples, " << failures_here
           << " failures; |45|^3 covers, |10|^3 below criterion";
        return {failures_here == 0 && t45_ok && t10_ok, os.str()};
      });

  // 5. Structural bounds for PSL(2,q), q in {5,7,9,11,13}: exact integer
  // comparisons, zero tolerance.
  run(5, "rank and dimension bounds", []() -> std::pair<bool, std::string> {
    int held = 0, total = 0;
    for (unsigned q : {5u, 7u, 9u, 11u, 13u}) {
      GroupTable g = build_family(Family::psl2, q);
      ClassSpectrum sp = conjugacy_classes(g);
      BoundReport rb = check_rank_bounds(g, sp);
      BoundReport ls = check_landseitz(g, sp, mindeg(g, sp));
      total += 2;
      if (rb.applicable && rb.all_hold()) ++held;
      if (ls.applicable && ls.all_hold()) ++held;
    }
    std::ostringstream os;
    os << held << "/" << total << " bound reports hold over q in {5,7,9,11,13}";
    return {held == total, os.str()};
  });

  // 6. Generation facts: 3/2-generation exhaustively on Alt(5) and
  // PSL(2,7); generating translate found for 10^3 random S with |S| >= 2.
  run(6, "generation facts", []() -> std::pair<bool, std::string> {
    std::uint64_t translate_fail = 0;
    for (GroupTable g : {build_family(Family::alt, 5),
                         build_family(Family::psl2, 7)}) {
      Gen32Result r = check_32_generation(g, true);
      if (!r.all_pass)
        return {false, g.describe() + ": element without a partner"};
      for (std::uint64_t t = 0; t < 1000; ++t) {
        SplitMix64 rng(derive_seed(606, t));
        Subset s = random_subset(
            g, 2 + rng.below(g.order() - 2), rng.next());
        try {
          ElementId x = find_generating_translate(g, s);
          if (!generates(g, translate(g, s, x))) ++translate_fail;
        } catch (const PreconditionError&) {
          ++translate_fail;
        }
      }
    }
    std::ostringstream os;
    os << "exhaustive pair-generation on Alt(5), PSL(2,7); "
       << (2000 - translate_fail) << "/2000 generating translates";
    return {translate_fail == 0, os.str()};
  });

  // 7. Pipeline end-to-end: 100 seeded instances (50 per group) with
  // k in [4,16] and mass >= |G|^4; certificates replay; success >= 95%;
  // failures phase-tagged. Oracle agreement on 200 toy instances.
  run(7, "pipeline end-to-end", []() -> std::pair<bool, std::string> {
    int success = 0, replay_fail = 0, untagged = 0, total = 0;
    for (GroupTable g : {build_family(Family::alt, 5),
                         build_family(Family::psl2, 7)}) {
      ClassSpectrum sp = conjugacy_classes(g);
      for (int t = 0; t < 50; ++t) {
        Instance inst = sample_instance(g, derive_seed(707, total));
        PipelineResult r =
            pipeline(g, inst.sets, PipelineConfig::for_rank(1), &sp);
        ++total;
        if (r.ok) {
          ++success;
          if (!verify_certificate(g, inst.sets, r.certificate).ok)
            ++replay_fail;
        } else if (r.failed_phase.empty() || r.reason.empty()) {
          ++untagged;
        }
      }
    }
    // Oracle agreement: pipeline success must imply oracle feasibility.
    int agree = 0, agree_total = 0, pipeline_successes = 0;
    GroupTable s3 = build_family(Family::sym, 3);
    GroupTable a4 = build_family(Family::alt, 4);
    GroupTable a5 = build_family(Family::alt, 5);
    ClassSpectrum sp3 = conjugacy_classes(s3);
    ClassSpectrum sp4 = conjugacy_classes(a4);
    ClassSpectrum sp5 = conjugacy_classes(a5);
    struct Case {
      const GroupTable* g;
      const ClassSpectrum* sp;
    };
    const Case cases[] = {{&s3, &sp3}, {&a4, &sp4}, {&a5, &sp5}};
    for (int t = 0; t < 200; ++t) {
      const Case& c = cases[t % 3];
      SplitMix64 rng(derive_seed(708, t));
      std::vector<Subset> sets;
      // k = 4 on Alt(5) keeps the oracle's candidate space under its cap.
      int k = t % 3 == 2 ? 4 : 4 + static_cast<int>(rng.below(2));
      for (int i = 0; i < k; ++i)
        sets.push_back(random_subset(
            *c.g, 2 + rng.below(c.g->order() - 2), rng.next()));
      PipelineResult r =
          pipeline(*c.g, sets, PipelineConfig::for_rank(1), c.sp);
      ++agree_total;
      if (!r.ok) {
        ++agree;  // no success claimed: nothing to contradict the oracle
        continue;
      }
      ++pipeline_successes;
      if (exhaustive_oracle(*c.g, sets).has_value()) ++agree;
    }
    std::ostringstream os;
    os << success << "/" << total << " certificates (replay failures: "
       << replay_fail << ", untagged failures: " << untagged << "); oracle"
       << " agreement " << agree << "/" << agree_total << " ("
       << pipeline_successes << " successes cross-checked)";
    bool ok = success * 100 >= total * 95 && replay_fail == 0 &&
              untagged == 0 && agree == agree_total;
    return {ok, os.str()};
  });

  // 8. Class-product exponent experiment: K = 8 on SL(2,5) and PSL(2,7)
  // terminates under the memo cap with c*_K <= 12.
  run(8, "class-product exponent experiment",
      []() -> std::pair<bool, std::string> {
        std::ostringstream os;
        bool ok = true;
        for (GroupTable g : {build_family(Family::sl2, 5),
                             build_family(Family::psl2, 7)}) {
          ClassSpectrum sp = conjugacy_classes(g);
          RsReport r = rs_exponent_search(g, sp, 8, 100'000);
          os << g.describe() << " c*_8 = " << r.c_star << " (" << r.states
             << " states); ";
          if (!(r.c_star <= 12.0)) ok = false;
        }
        return {ok, os.str()};
      });

  // 9. Determinism: identical seeds give identical certificates and suite
  // reports across thread counts 1 and 8.
  run(9, "thread-count determinism", []() -> std::pair<bool, std::string> {
    GroupTable g = build_family(Family::psl2, 7);
    ClassSpectrum sp = conjugacy_classes(g);
    Instance inst = sample_instance(g, 909);
    auto run_all = [&](unsigned nt) {
      thread_count() = nt;
      PipelineResult pr =
          pipeline(g, inst.sets, PipelineConfig::for_rank(1), &sp);
      TrialReport tr = run_suite(g, sp, Suite::triple, 500, 99);
      TrialReport pe = run_suite(g, sp, Suite::petridis, 50, 99);
      nlohmann::json j;
      j["cert"] = certificate_to_json(pr.certificate);
      j["ok"] = pr.ok;
      j["tri"] = {{"violations", tr.violations}, {"stats", tr.stats}};
      j["pet"] = {{"violations", pe.violations}, {"stats", pe.stats}};
      return j.dump();
    };
    std::string one = run_all(1);
    std::string eight = run_all(8);
    thread_count() = 1;
    bool ok = one == eight;
    return {ok, ok ? "identical certificates and reports at 1 and 8 threads"
                   : "outputs diverged between 1 and 8 threads"};
  });

  if (failures == 0)
    std::printf("all 9 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
