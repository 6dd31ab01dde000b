#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpcover/group.hpp"
#include "gpcover/parallel.hpp"
#include "gpcover/rng.hpp"
#include "gpcover/solver.hpp"
#include "gpcover/spectrum.hpp"
#include "gpcover/subset.hpp"

#include "json.hpp"

namespace gpcover {

using BigInt = boost::multiprecision::cpp_int;

// --- exact identity and inequality checks --------------------------------

// |AB| * |A^-1 A  intersect  B B^-1| >= |A| * |B|. Holds in every finite
// group; a violation is an implementation bug, so witnesses matter.
inline bool check_triple_inequality(const GroupTable& g, const Subset& a,
                                    const Subset& b) {
  require_nonempty(a, "check_triple_inequality");
  require_nonempty(b, "check_triple_inequality");
  std::uint64_t ab = product(g, a, b).size();
  Subset aia = product(g, inverse_set(g, a), a);
  Subset bbi = product(g, b, inverse_set(g, b));
  std::uint64_t mid = intersection_size(aia, bbi);
  return static_cast<unsigned __int128>(ab) * mid >=
         static_cast<unsigned __int128>(a.size()) * b.size();
}

// Class-sum identity:
//   sum_C |A cap C||B cap C|/|C| = (1/|B^G|) sum_{B' in B^G} |A cap B'|.
// The left side runs over the class partition; the right side enumerates
// the distinct conjugate masks of B by direct scan (each distinct mask
// appears |G|/|B^G| times in the multiset {B^g}, so the weighted multiset
// average equals the set average). Exact rational comparison throughout.
inline bool check_class_sum_identity(const GroupTable& g,
                                     const ClassSpectrum& sp, const Subset& a,
                                     const Subset& b) {
  require_nonempty(a, "check_class_sum_identity");
  require_nonempty(b, "check_class_sum_identity");
  const std::uint64_t n = g.order();
  // LHS * |G| is an integer because every class size divides |G|.
  std::uint64_t lhs_times_n = 0;
  for (const auto& c : sp.classes)
    lhs_times_n += std::uint64_t(intersection_size(a, c.members)) *
                   intersection_size(b, c.members) * (n / c.size);
  // RHS: distinct conjugates with a direct scan over all g.
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t sum_distinct = 0, distinct = 0;
  for (ElementId x = 0; x < n; ++x) {
    Subset bc = conjugate_subset(g, b, x);
    if (seen.insert(bc.hash()).second) {
      sum_distinct += intersection_size(a, bc);
      ++distinct;
    }
  }
  // lhs_times_n / n == sum_distinct / distinct, cross-multiplied.
  return static_cast<unsigned __int128>(lhs_times_n) * distinct ==
         static_cast<unsigned __int128>(sum_distinct) * n;
}

// --- Petridis-type growth ------------------------------------------------

// Exponent triple (8h-9, h-1, 4h-5).
struct ExponentTriple {
  int alpha, beta, gamma;
};
inline ExponentTriple petridis_exponents(int h) {
  return {8 * h - 9, h - 1, 4 * h - 5};
}

struct PetridisWitness {
  ElementId translate_x = 0;  // B_0 = B * x generates G
  std::uint64_t ab0 = 0;      // |A B_0|; alpha = ab0 / |A|
  std::uint64_t beta_num = 0; // max_b |A * B_0^{b^-1}|; beta = beta_num / |A|
  std::uint64_t b0h = 0;      // |B_0^h|
  bool holds = false;
};

// |B_0^h| <= alpha^{8h-9} beta^{h-1} gamma^{4h-5} |A| with B_0 a generating
// translate of B and alpha, beta, gamma computed from (A, B_0). Exact
// big-integer cross-multiplication.
inline bool check_petridis_consequence(const GroupTable& g, const Subset& a,
                                       const Subset& b, int h,
                                       PetridisWitness* out = nullptr) {
  if (h < 2) throw InputError("check_petridis_consequence: h must be >= 2");
  require_nonempty(a, "check_petridis_consequence");
  require_nonempty(b, "check_petridis_consequence");
  PetridisWitness w;
  w.translate_x = find_generating_translate(g, b);
  Subset b0 = translate(g, b, w.translate_x);
  w.ab0 = product(g, a, b0).size();
  for (ElementId bi : b0.elements()) {
    std::uint64_t s =
        product(g, a, conjugate_subset(g, b0, g.inv(bi))).size();
    w.beta_num = std::max(w.beta_num, s);
  }
  w.b0h = power(g, b0, static_cast<unsigned>(h)).size();

  const ExponentTriple e = petridis_exponents(h);
  const BigInt A = a.size(), B = b0.size();
  // alpha = ab0/A, beta = beta_num/A, gamma = A/B. Cross-multiplied:
  //   b0h * A^{e.alpha} * A^{e.beta} * B^{e.gamma}
  //     <= ab0^{e.alpha} * beta_num^{e.beta} * A^{e.gamma} * A.
  BigInt lhs = BigInt(w.b0h) * pow(A, e.alpha + e.beta) * pow(B, e.gamma);
  BigInt rhs = pow(BigInt(w.ab0), e.alpha) * pow(BigInt(w.beta_num), e.beta) *
               pow(A, e.gamma) * A;
  w.holds = lhs <= rhs;
  if (out) *out = w;
  return w.holds;
}

// --- generation facts ----------------------------------------------------

struct Gen32Result {
  bool skipped_not_simple = false;
  bool all_pass = false;
  std::vector<ElementId> failures;
  std::uint32_t checked = 0;
};

// 3/2-generation: every nontrivial x has a partner y with <x,y> = G.
// Exhaustive over x; for each x the y-scan stops at the first partner.
inline Gen32Result check_32_generation(const GroupTable& g, bool simple) {
  Gen32Result r;
  if (!simple) {
    r.skipped_not_simple = true;
    return r;
  }
  const std::uint32_t n = g.order();
  std::vector<char> fail(n, 0);
  parallel_for(n - 1, [&](std::uint64_t i) {
    ElementId x = static_cast<ElementId>(i + 1);
    for (ElementId y = 0; y < n; ++y) {
      if (generates(g, Subset::of(g, {x, y}))) return;
    }
    fail[x] = 1;
  });
  for (ElementId x = 1; x < n; ++x)
    if (fail[x]) r.failures.push_back(x);
  r.checked = n - 1;
  r.all_pass = r.failures.empty();
  return r;
}

inline bool check_translate_generates(const GroupTable& g, const Subset& s) {
  if (s.size() < 2)
    throw PreconditionError("check_translate_generates needs |S| >= 2");
  ElementId x = find_generating_translate(g, s);  // throws on failure
  return generates(g, translate(g, s, x));
}

// --- tripling measurement ------------------------------------------------

struct TriplingResult {
  bool tripled_to_G = false;
  double eta_emp = 0;  // log|S^3|/log|S| - 1 when S^3 != G
  std::uint64_t s3 = 0;
};

inline TriplingResult measure_tripling(const GroupTable& g, const Subset& s) {
  if (s.size() < 2) throw InputError("measure_tripling needs |S| >= 2");
  if (!generates(g, s))
    throw PreconditionError("measure_tripling: S does not generate G");
  TriplingResult r;
  Subset s3 = power(g, s, 3);
  r.s3 = s3.size();
  if (s3.is_full()) {
    r.tripled_to_G = true;
  } else {
    r.eta_emp =
        std::log(double(r.s3)) / std::log(double(s.size())) - 1.0;
  }
  return r;
}

// --- two-sets trichotomy -------------------------------------------------

// Which disjuncts of the medium-set dichotomies hold for a given pair, plus
// the largest epsilon / eta the argmax scans support. eps gates the four-way
// statement; (eta, delta) gate its two-sided refinement. The two constants
// are kept apart on purpose (eps ~ eta_PT/25 vs the pairing eta).
struct TrichotomyReport {
  // Four-way statement.
  bool opt_a_large = false;        // |A| >= |B|^{1+eps}
  bool opt_conj_growth = false;    // exists g: |A B^g| >= |A||B|^eps
  bool opt_a_vs_g = false;         // |A|^26 >= |G| |B|^25 (exact)
  bool opt_conj_vs_g = false;      // exists g: |A B^g|^25 >= |G||A|^24 (exact)
  // Two-sided refinement.
  bool pair_a_large = false;       // |A| >= |B|^{1+eta}
  bool pair_both_sides = false;    // right and left conjugate growth
  bool pair_b_large = false;       // |B| >= |G|^delta
  ElementId best_g = 0, best_h = 0;
  std::uint64_t max_right = 0, max_left = 0;
  double best_eps = 0;  // largest eps for which the four-way disjunction holds
  double best_eta = 0;  // largest eta for which the refinement holds
  bool any_option() const {
    return opt_a_large || opt_conj_growth || opt_a_vs_g || opt_conj_vs_g;
  }
  bool any_pair_option() const {
    return pair_a_large || pair_both_sides || pair_b_large;
  }
};

inline TrichotomyReport check_twosets_trichotomy(const GroupTable& g,
                                                 const Subset& a,
                                                 const Subset& b, double eps,
                                                 double delta, double eta) {
  if (b.size() < 2 || b.size() > a.size())
    throw InputError("check_twosets_trichotomy needs 2 <= |B| <= |A|");
  TrichotomyReport r;
  const double A = a.size(), B = b.size(), n = g.order();

  ConjugatorResult right =
      best_conjugator(g, a, b, double(g.order()) + 1, Side::right, g.order());
  ConjugatorResult left =
      best_conjugator(g, b, a, double(g.order()) + 1, Side::left, g.order());
  r.best_g = right.g;
  r.best_h = left.g;
  r.max_right = right.size;
  r.max_left = left.size;

  r.opt_a_large = A >= std::pow(B, 1.0 + eps);
  r.opt_conj_growth = double(r.max_right) >= A * std::pow(B, eps);
  r.opt_a_vs_g = pow(BigInt(a.size()), 26) >=
                 BigInt(g.order()) * pow(BigInt(b.size()), 25);
  r.opt_conj_vs_g = pow(BigInt(r.max_right), 25) >=
                    BigInt(g.order()) * pow(BigInt(a.size()), 24);

  r.pair_a_large = A >= std::pow(B, 1.0 + eta);
  r.pair_both_sides = double(r.max_right) >= A * std::pow(B, eta) &&
                      double(r.max_left) >= A * std::pow(B, eta);
  r.pair_b_large = B >= std::pow(n, delta);

  const double logB = std::log(B);
  r.best_eps = std::max(std::log(A) / logB - 1.0,
                        std::log(double(r.max_right) / A) / logB);
  r.best_eta = std::max(std::log(A) / logB - 1.0,
                        std::min(std::log(double(r.max_right) / A) / logB,
                                 std::log(double(r.max_left) / A) / logB));
  return r;
}

// --- suite drivers -------------------------------------------------------

struct TrialReport {
  std::string suite;
  std::string group;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::vector<nlohmann::json> violations;
  nlohmann::json stats;
  bool passed() const { return violations.empty(); }
};

namespace detail {

// Log-uniform size in [lo, hi]: exercises all scales without making every
// draw half the group.
inline std::uint32_t sample_size(SplitMix64& rng, std::uint32_t lo,
                                 std::uint32_t hi) {
  double u = rng.uniform01();
  double v = std::exp(std::log(double(lo)) +
                      u * (std::log(double(hi)) - std::log(double(lo))));
  std::uint32_t s = static_cast<std::uint32_t>(v);
  return std::min(hi, std::max(lo, s));
}

}  // namespace detail

enum class Suite {
  triple,
  classsum,
  petridis,
  gen32,
  translate,
  tripling,
  trichotomy,
  gowers,
  bounds
};

inline Suite suite_from_name(const std::string& s) {
  if (s == "triple") return Suite::triple;
  if (s == "classsum") return Suite::classsum;
  if (s == "petridis") return Suite::petridis;
  if (s == "gen32") return Suite::gen32;
  if (s == "translate") return Suite::translate;
  if (s == "tripling") return Suite::tripling;
  if (s == "trichotomy") return Suite::trichotomy;
  if (s == "gowers") return Suite::gowers;
  if (s == "bounds") return Suite::bounds;
  throw InputError("unknown suite: " + s);
}

inline const char* suite_name(Suite s) {
  switch (s) {
    case Suite::triple: return "triple";
    case Suite::classsum: return "classsum";
    case Suite::petridis: return "petridis";
    case Suite::gen32: return "gen32";
    case Suite::translate: return "translate";
    case Suite::tripling: return "tripling";
    case Suite::trichotomy: return "trichotomy";
    case Suite::gowers: return "gowers";
    default: return "bounds";
  }
}

// Runs `trials` independent seeded trials of one suite. Trials derive their
// seeds from the master seed, so reports do not depend on the thread count.
inline TrialReport run_suite(const GroupTable& g, const ClassSpectrum& sp,
                             Suite suite, std::uint64_t trials,
                             std::uint64_t seed) {
  TrialReport rep;
  rep.suite = suite_name(suite);
  rep.group = g.describe();
  rep.seed = seed;
  const std::uint32_t n = g.order();
  std::mutex mu;
  auto violate = [&](nlohmann::json j) {
    std::lock_guard<std::mutex> lock(mu);
    rep.violations.push_back(std::move(j));
  };

  switch (suite) {
    case Suite::triple: {
      rep.trials = trials;
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        Subset a = random_subset(g, detail::sample_size(rng, 1, n), rng.next());
        Subset b = random_subset(g, detail::sample_size(rng, 1, n), rng.next());
        if (!check_triple_inequality(g, a, b))
          violate({{"trial", t},
                   {"A", a.elements()},
                   {"B", b.elements()}});
      });
      break;
    }
    case Suite::classsum: {
      rep.trials = trials;
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        Subset a = random_subset(g, detail::sample_size(rng, 1, n), rng.next());
        Subset b = random_subset(g, detail::sample_size(rng, 1, n), rng.next());
        if (!check_class_sum_identity(g, sp, a, b))
          violate({{"trial", t},
                   {"A", a.elements()},
                   {"B", b.elements()}});
      });
      break;
    }
    case Suite::petridis: {
      if (!sp.simple) {
        rep.stats["skipped"] = "not simple";
        rep.trials = 0;
        break;
      }
      rep.trials = trials;
      std::uint32_t cap = std::min<std::uint32_t>(n, 48);
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        Subset a = random_subset(g, detail::sample_size(rng, 2, cap), rng.next());
        Subset b = random_subset(g, detail::sample_size(rng, 2, cap), rng.next());
        int h = 2 + static_cast<int>(rng.below(2));  // h in {2, 3}
        PetridisWitness w;
        if (!check_petridis_consequence(g, a, b, h, &w))
          violate({{"trial", t},
                   {"h", h},
                   {"A", a.elements()},
                   {"B", b.elements()},
                   {"ab0", w.ab0},
                   {"beta_num", w.beta_num},
                   {"b0h", w.b0h}});
      });
      break;
    }
    case Suite::gen32: {
      Gen32Result r = check_32_generation(g, sp.simple);
      rep.trials = r.checked;
      if (r.skipped_not_simple)
        rep.stats["skipped"] = "not simple";
      else if (!r.all_pass)
        violate({{"elements_without_partner", r.failures}});
      break;
    }
    case Suite::translate: {
      if (!sp.simple) {
        rep.stats["skipped"] = "not simple";
        break;
      }
      rep.trials = trials;
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        Subset s = random_subset(g, detail::sample_size(rng, 2, n), rng.next());
        try {
          if (!check_translate_generates(g, s))
            violate({{"trial", t}, {"S", s.elements()}});
        } catch (const PreconditionError& e) {
          violate({{"trial", t}, {"S", s.elements()}, {"error", e.what()}});
        }
      });
      break;
    }
    case Suite::tripling: {
      rep.trials = trials;
      std::vector<double> etas(trials, INFINITY);
      std::vector<char> tripled(trials, 0);
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        // Rejection-sample a generating set.
        for (int attempt = 0; attempt < 64; ++attempt) {
          Subset s =
              random_subset(g, detail::sample_size(rng, 2, n), rng.next());
          if (!generates(g, s)) continue;
          TriplingResult r = measure_tripling(g, s);
          if (r.tripled_to_G)
            tripled[t] = 1;
          else
            etas[t] = r.eta_emp;
          return;
        }
        tripled[t] = 2;  // no generating sample found (tiny groups)
      });
      double min_eta = INFINITY;
      std::uint64_t n_tripled = 0, n_skipped = 0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        if (tripled[t] == 1)
          ++n_tripled;
        else if (tripled[t] == 2)
          ++n_skipped;
        else {
          min_eta = std::min(min_eta, etas[t]);
          if (etas[t] <= 0)
            violate({{"trial", t}, {"eta_emp", etas[t]}});
        }
      }
      rep.stats["tripled_to_G"] = n_tripled;
      rep.stats["skipped"] = n_skipped;
      if (min_eta != INFINITY) rep.stats["min_eta_emp"] = min_eta;
      break;
    }
    case Suite::trichotomy: {
      rep.trials = trials;
      PipelineConfig cfg = PipelineConfig::for_rank(
          g.has_lie_meta() ? g.rank() : 1);
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        std::uint32_t cap = std::min<std::uint32_t>(n, 64);
        Subset x = random_subset(g, detail::sample_size(rng, 2, cap), rng.next());
        Subset y = random_subset(g, detail::sample_size(rng, 2, cap), rng.next());
        const Subset& a = x.size() >= y.size() ? x : y;
        const Subset& b = x.size() >= y.size() ? y : x;
        TrichotomyReport r = check_twosets_trichotomy(
            g, a, b, cfg.epsilon, cfg.delta.value(), cfg.eta);
        if (!r.any_option() || !r.any_pair_option())
          violate({{"trial", t},
                   {"A", a.elements()},
                   {"B", b.elements()},
                   {"max_right", r.max_right},
                   {"max_left", r.max_left}});
      });
      break;
    }
    case Suite::gowers: {
      MindegInfo k = mindeg(g, sp);
      rep.trials = trials;
      rep.stats["mindeg"] = k.value;
      rep.stats["mindeg_kind"] =
          k.kind == MindegInfo::Kind::exact ? "exact" : "lower_bound";
      // Sample triples that meet the criterion; each must cover.
      double target = std::pow(double(n), 3.0) / double(k.value);
      std::uint32_t lo = std::max<std::uint32_t>(
          2, static_cast<std::uint32_t>(std::cbrt(target)));
      if (lo > n) {
        rep.stats["skipped"] = "criterion unreachable (k too small)";
        rep.trials = 0;
        break;
      }
      parallel_for(trials, [&](std::uint64_t t) {
        SplitMix64 rng(derive_seed(seed, t));
        Subset a = random_subset(g, detail::sample_size(rng, lo, n), rng.next());
        Subset b = random_subset(g, detail::sample_size(rng, lo, n), rng.next());
        Subset c = random_subset(g, detail::sample_size(rng, lo, n), rng.next());
        GowersResult r;
        try {
          r = gowers_cover(g, a, b, c, k);
        } catch (const std::logic_error& e) {
          violate({{"trial", t}, {"error", e.what()}});
          return;
        }
        if (r.criterion_holds && !r.covered)
          violate({{"trial", t},
                   {"sizes", {a.size(), b.size(), c.size()}}});
      });
      break;
    }
    case Suite::bounds: {
      BoundReport rb = check_rank_bounds(g, sp);
      BoundReport ls;
      try {
        MindegInfo k = mindeg(g, sp);
        ls = check_landseitz(g, sp, k);
      } catch (const InputError& e) {
        ls.check = "landseitz";
        ls.note = e.what();
      }
      rep.trials = 2;
      auto to_json = [](const BoundReport& r) {
        nlohmann::json j{{"check", r.check},
                         {"applicable", r.applicable},
                         {"note", r.note}};
        j["inequalities"] = nlohmann::json::array();
        for (const auto& i : r.inequalities)
          j["inequalities"].push_back({{"name", i.name},
                                       {"lhs", i.lhs},
                                       {"rhs", i.rhs},
                                       {"holds", i.holds}});
        return j;
      };
      rep.stats["rank_bounds"] = to_json(rb);
      rep.stats["landseitz"] = to_json(ls);
      if (rb.applicable && !rb.all_hold()) violate(to_json(rb));
      if (ls.applicable && !ls.all_hold()) violate(to_json(ls));
      break;
    }
  }
  // Canonical violation order for cross-thread determinism.
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const nlohmann::json& a, const nlohmann::json& b) {
              return a.dump() < b.dump();
            });
  return rep;
}

}  // namespace gpcover
