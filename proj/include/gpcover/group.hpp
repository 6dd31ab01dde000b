#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gpcover/errors.hpp"
#include "gpcover/gf.hpp"
#include "gpcover/rng.hpp"

namespace gpcover {

// Index of an element inside one GroupTable. Valid only relative to the
// table that produced it.
using ElementId = std::uint32_t;

enum class Family { custom, sym, alt, psl2, sl2, dihedral, cyclic };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::sym: return "sym";
    case Family::alt: return "alt";
    case Family::psl2: return "psl2";
    case Family::sl2: return "sl2";
    case Family::dihedral: return "dihedral";
    case Family::cyclic: return "cyclic";
    default: return "custom";
  }
}

inline Family family_from_name(const std::string& s) {
  if (s == "sym") return Family::sym;
  if (s == "alt") return Family::alt;
  if (s == "psl2") return Family::psl2;
  if (s == "sl2") return Family::sl2;
  if (s == "dihedral") return Family::dihedral;
  if (s == "cyclic") return Family::cyclic;
  if (s == "custom") return Family::custom;
  throw InputError("unknown family: " + s);
}

// Underlying element representation: permutation images (0-based) or the
// four entries of a 2x2 matrix over a small field, row-major.
using Rep = std::vector<std::uint16_t>;

struct RepHash {
  std::size_t operator()(const Rep& r) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint16_t v : r) {
      h ^= v;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// A fully enumerated finite group. Elements are indexed 0..n-1 with the
// identity at index 0 and the rest assigned by breadth-first closure from
// the generator list, so two builds from identical input agree index for
// index. Groups up to kDenseLimit elements carry a full multiplication
// table; larger groups multiply through their representations and a
// representation->index hash.
//
// Immutable after construction; safe to share across threads.
class GroupTable {
 public:
  static constexpr std::uint32_t kDenseLimit = 1u << 12;
  static constexpr std::uint32_t kDefaultCap = 2'000'000;

  enum class RepKind { permutation, matrix, table };

  std::uint32_t order() const { return n_; }
  ElementId identity() const { return 0; }

  ElementId mul(ElementId a, ElementId b) const {
    if (!mul_.empty()) return mul_[static_cast<std::size_t>(a) * n_ + b];
    Rep r = compose(reps_[a], reps_[b]);
    auto it = index_.find(r);
    return it->second;
  }

  ElementId inv(ElementId a) const { return inv_[a]; }

  // a^g = g^-1 a g. conj(a, 0) = a and (a^g)^h = a^{gh}.
  ElementId conj(ElementId a, ElementId g) const {
    return mul(mul(inv_[g], a), g);
  }

  const std::vector<ElementId>& generators() const { return gens_; }
  Family family() const { return family_; }
  int rank() const { return rank_; }
  unsigned field_size() const { return q_; }
  bool has_lie_meta() const {
    return family_ == Family::psl2 || family_ == Family::sl2;
  }
  unsigned degree() const { return degree_; }
  RepKind rep_kind() const { return kind_; }
  const Rep& rep(ElementId a) const { return reps_[a]; }

  unsigned element_order(ElementId a) const {
    unsigned k = 1;
    ElementId x = a;
    while (x != 0) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

  // Hash of the multiplication data; identifies the group table in reports.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ULL;
    };
    mix(n_);
    if (!mul_.empty()) {
      for (std::uint32_t v : mul_) mix(v);
    } else {
      for (const Rep& r : reps_)
        for (std::uint16_t v : r) mix(v);
    }
    return h;
  }

  std::string describe() const {
    std::ostringstream os;
    os << family_name(family_);
    if (family_ == Family::psl2 || family_ == Family::sl2)
      os << "(2," << q_ << ")";
    else if (family_ != Family::custom)
      os << "(" << degree_ << ")";
    os << " order " << n_;
    return os.str();
  }

  // --- construction -------------------------------------------------------

  // Breadth-first closure from generator representations. The identity gets
  // index 0; elements are numbered in discovery order (parent index, then
  // generator list order).
  static GroupTable closure(RepKind kind, const Rep& id,
                            std::vector<Rep> gens, Family family, int rank,
                            unsigned q, unsigned degree,
                            std::uint32_t cap = kDefaultCap) {
    GroupTable g;
    g.kind_ = kind;
    g.family_ = family;
    g.rank_ = rank;
    g.q_ = q;
    g.degree_ = degree;
    if (kind == RepKind::matrix) g.field_ = std::make_shared<SmallField>(q);

    g.reps_.push_back(id);
    g.index_[id] = 0;
    for (std::size_t i = 0; i < g.reps_.size(); ++i) {
      for (const Rep& gen : gens) {
        Rep r = g.compose(g.reps_[i], gen);
        if (g.index_.emplace(r, static_cast<ElementId>(g.reps_.size()))
                .second) {
          g.reps_.push_back(std::move(r));
          if (g.reps_.size() > cap) throw CapError("group too large");
        }
      }
    }
    g.n_ = static_cast<std::uint32_t>(g.reps_.size());
    g.gens_.clear();
    for (const Rep& gen : gens) g.gens_.push_back(g.index_.at(gen));
    g.finish();
    return g;
  }

 private:
  Rep compose(const Rep& x, const Rep& y) const {
    if (kind_ == RepKind::permutation) {
      // Left-to-right: apply x, then y.
      Rep z(x.size());
      for (std::size_t p = 0; p < x.size(); ++p) z[p] = y[x[p]];
      return z;
    }
    // Matrix product x*y over the field.
    const SmallField& F = *field_;
    Rep z(4);
    z[0] = static_cast<std::uint16_t>(
        F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2])));
    z[1] = static_cast<std::uint16_t>(
        F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3])));
    z[2] = static_cast<std::uint16_t>(
        F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2])));
    z[3] = static_cast<std::uint16_t>(
        F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3])));
    return z;
  }

  Rep invert_rep(const Rep& x) const {
    if (kind_ == RepKind::permutation) {
      Rep z(x.size());
      for (std::size_t p = 0; p < x.size(); ++p) z[x[p]] = static_cast<std::uint16_t>(p);
      return z;
    }
    // det = 1, so the inverse is the adjugate.
    const SmallField& F = *field_;
    Rep z(4);
    z[0] = x[3];
    z[1] = static_cast<std::uint16_t>(F.neg(x[1]));
    z[2] = static_cast<std::uint16_t>(F.neg(x[2]));
    z[3] = x[0];
    return z;
  }

  void finish() {
    inv_.resize(n_);
    if (kind_ == RepKind::table) return;  // filled by from_cayley
    for (std::uint32_t i = 0; i < n_; ++i)
      inv_[i] = index_.at(invert_rep(reps_[i]));
    if (n_ <= kDenseLimit) {
      mul_.resize(static_cast<std::size_t>(n_) * n_);
      for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = 0; j < n_; ++j)
          mul_[static_cast<std::size_t>(i) * n_ + j] =
              index_.at(compose(reps_[i], reps_[j]));
    }
  }

  std::uint32_t n_ = 0;
  std::vector<std::uint32_t> mul_;  // dense table when n <= kDenseLimit
  std::vector<ElementId> inv_;
  std::vector<ElementId> gens_;
  Family family_ = Family::custom;
  int rank_ = 0;
  unsigned q_ = 0;
  unsigned degree_ = 0;
  RepKind kind_ = RepKind::permutation;
  std::vector<Rep> reps_;
  std::unordered_map<Rep, ElementId, RepHash> index_;
  std::shared_ptr<SmallField> field_;

  friend GroupTable build_from_cayley_table(
      const std::vector<std::vector<std::uint32_t>>&);
};

// --- permutation input ----------------------------------------------------

// Cycle notation uses 1-based points with fixed points omitted.
inline Rep perm_from_cycles(unsigned degree,
                            const std::vector<std::vector<int>>& cycles) {
  Rep images(degree);
  std::iota(images.begin(), images.end(), 0);
  std::vector<bool> seen(degree, false);
  for (const auto& cyc : cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int from = cyc[i];
      int to = cyc[(i + 1) % cyc.size()];
      if (from < 1 || from > static_cast<int>(degree) || to < 1 ||
          to > static_cast<int>(degree))
        throw InputError("cycle point out of range 1.." +
                         std::to_string(degree));
      if (seen[from - 1])
        throw InputError("point " + std::to_string(from) +
                         " repeated in permutation");
      seen[from - 1] = true;
      images[from - 1] = static_cast<std::uint16_t>(to - 1);
    }
  }
  // Repeated targets would make this a non-permutation.
  std::vector<bool> hit(degree, false);
  for (std::uint16_t v : images) {
    if (hit[v]) throw InputError("malformed cycles: map is not a bijection");
    hit[v] = true;
  }
  return images;
}

inline GroupTable build_from_permutations(
    unsigned degree, const std::vector<std::vector<std::vector<int>>>& gens,
    std::uint32_t cap = GroupTable::kDefaultCap) {
  if (degree < 1) throw InputError("degree must be positive");
  Rep id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Rep> greps;
  for (const auto& cycles : gens) greps.push_back(perm_from_cycles(degree, cycles));
  return GroupTable::closure(GroupTable::RepKind::permutation, id,
                             std::move(greps), Family::custom, 0, 0, degree,
                             cap);
}

// --- Cayley table input ---------------------------------------------------

inline GroupTable build_from_cayley_table(
    const std::vector<std::vector<std::uint32_t>>& table) {
  const std::size_t n = table.size();
  if (n == 0) throw InputError("empty table");
  for (const auto& row : table)
    if (row.size() != n) throw InputError("table is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (table[i][j] >= n) throw InputError("table entry out of range");
  for (std::size_t j = 0; j < n; ++j)
    if (table[0][j] != j) throw InputError("row 0 is not the identity");
  for (std::size_t i = 0; i < n; ++i)
    if (table[i][0] != i) throw InputError("column 0 is not the identity");

  GroupTable g;
  g.kind_ = GroupTable::RepKind::table;
  g.family_ = Family::custom;
  g.n_ = static_cast<std::uint32_t>(n);
  g.degree_ = 0;
  g.mul_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.mul_[i * n + j] = table[i][j];
  g.reps_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g.reps_[i] = Rep{static_cast<std::uint16_t>(i & 0xffff),
                     static_cast<std::uint16_t>(i >> 16)};

  // Inverses: each row must contain the identity.
  g.inv_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < n; ++j)
      if (table[i][j] == 0) {
        g.inv_[i] = static_cast<ElementId>(j);
        found = true;
        break;
      }
    if (!found)
      throw InputError("element " + std::to_string(i) + " has no inverse");
  }

  // Associativity: exhaustive for n <= 512, 10^6 seeded random triples above.
  auto check = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (table[table[a][b]][c] != table[a][table[b][c]])
      throw InputError("associativity fails at triple (" + std::to_string(a) +
                       "," + std::to_string(b) + "," + std::to_string(c) + ")");
  };
  if (n <= 512) {
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t c = 0; c < n; ++c) check(a, b, c);
  } else {
    SplitMix64 rng(0x67726f7570746162ULL);
    for (int t = 0; t < 1'000'000; ++t)
      check(static_cast<std::uint32_t>(rng.below(n)),
            static_cast<std::uint32_t>(rng.below(n)),
            static_cast<std::uint32_t>(rng.below(n)));
  }

  // Greedy generator list: repeatedly add the first element outside the
  // current closure.
  std::vector<bool> closed(n, false);
  closed[0] = true;
  std::size_t closed_count = 1;
  while (closed_count < n) {
    std::uint32_t pick = 0;
    for (std::uint32_t i = 1; i < n; ++i)
      if (!closed[i]) {
        pick = i;
        break;
      }
    g.gens_.push_back(pick);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i)
      if (closed[i]) queue.push_back(i);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (ElementId gen : g.gens_) {
        std::uint32_t z = table[queue[h]][gen];
        if (!closed[z]) {
          closed[z] = true;
          ++closed_count;
          queue.push_back(z);
        }
      }
  }
  return g;
}

// --- builtin families -----------------------------------------------------

namespace detail {

inline Rep cycle_perm(unsigned m) {
  Rep r(m);
  for (unsigned i = 0; i < m; ++i) r[i] = static_cast<std::uint16_t>((i + 1) % m);
  return r;
}

inline GroupTable build_perm_family(Family fam, unsigned degree,
                                    std::vector<Rep> gens, int rank,
                                    unsigned q, std::uint32_t cap) {
  Rep id(degree);
  std::iota(id.begin(), id.end(), 0);
  return GroupTable::closure(GroupTable::RepKind::permutation, id,
                             std::move(gens), fam, rank, q, degree,
                             cap);
}

// Greedy generating set over a deterministically ordered element list:
// scan in order, adding any element not yet in the closure of the picks.
template <typename Compose>
inline std::vector<Rep> greedy_generators(const std::set<Rep>& all,
                                          const Rep& id, Compose compose) {
  std::vector<Rep> gens;
  std::unordered_map<Rep, bool, RepHash> closed;
  std::vector<Rep> queue;
  closed[id] = true;
  queue.push_back(id);
  for (const Rep& r : all) {
    if (closed.count(r)) continue;
    gens.push_back(r);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (const Rep& gen : gens) {
        Rep z = compose(queue[h], gen);
        if (closed.emplace(z, true).second) queue.push_back(z);
      }
  }
  return gens;
}

inline GroupTable build_psl2(unsigned q, std::uint32_t cap) {
  SmallField F(q);
  const unsigned deg = q + 1;  // projective line; point q is infinity
  auto moebius = [&](unsigned a, unsigned b, unsigned c, unsigned d) {
    // Row-vector action (z,1) * [[a,b],[c,d]] = (za+c, zb+d).
    Rep img(deg);
    for (unsigned z = 0; z < q; ++z) {
      unsigned num = F.add(F.mul(a, z), c);
      unsigned den = F.add(F.mul(b, z), d);
      img[z] = static_cast<std::uint16_t>(den == 0 ? q : F.div(num, den));
    }
    img[q] = static_cast<std::uint16_t>(b == 0 ? q : F.div(a, b));
    return img;
  };
  std::set<Rep> perms;
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b)
      for (unsigned c = 0; c < q; ++c)
        for (unsigned d = 0; d < q; ++d)
          if (F.sub(F.mul(a, d), F.mul(b, c)) == 1)
            perms.insert(moebius(a, b, c, d));
  Rep id(deg);
  std::iota(id.begin(), id.end(), 0);
  auto compose = [](const Rep& x, const Rep& y) {
    Rep z(x.size());
    for (std::size_t p = 0; p < x.size(); ++p) z[p] = y[x[p]];
    return z;
  };
  std::vector<Rep> gens = greedy_generators(perms, id, compose);
  return GroupTable::closure(GroupTable::RepKind::permutation, id,
                             std::move(gens), Family::psl2, 1, q, deg,
                             cap);
}

inline GroupTable build_sl2(unsigned q, std::uint32_t cap) {
  SmallField F(q);
  std::set<Rep> mats;
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b)
      for (unsigned c = 0; c < q; ++c)
        for (unsigned d = 0; d < q; ++d)
          if (F.sub(F.mul(a, d), F.mul(b, c)) == 1)
            mats.insert(Rep{static_cast<std::uint16_t>(a),
                            static_cast<std::uint16_t>(b),
                            static_cast<std::uint16_t>(c),
                            static_cast<std::uint16_t>(d)});
  Rep id{1, 0, 0, 1};
  auto compose = [&F](const Rep& x, const Rep& y) {
    Rep z(4);
    z[0] = static_cast<std::uint16_t>(F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2])));
    z[1] = static_cast<std::uint16_t>(F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3])));
    z[2] = static_cast<std::uint16_t>(F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2])));
    z[3] = static_cast<std::uint16_t>(F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3])));
    return z;
  };
  std::vector<Rep> gens = greedy_generators(mats, id, compose);
  return GroupTable::closure(GroupTable::RepKind::matrix, id, std::move(gens),
                             Family::sl2, 1, q, 0, cap);
}

}  // namespace detail

// param is q for psl2/sl2 and n (degree) for sym/alt/dihedral/cyclic.
inline GroupTable build_family(Family fam, unsigned param,
                               std::uint32_t cap = GroupTable::kDefaultCap) {
  using detail::build_perm_family;
  switch (fam) {
    case Family::sym: {
      if (param < 1) throw InputError("sym needs degree >= 1");
      std::vector<Rep> gens;
      if (param >= 2) {
        gens.push_back(detail::cycle_perm(param));
        Rep t(param);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[0], t[1]);
        gens.push_back(t);
      }
      return build_perm_family(fam, param, std::move(gens), 0, 0, cap);
    }
    case Family::alt: {
      if (param < 1) throw InputError("alt needs degree >= 1");
      std::vector<Rep> gens;
      if (param >= 3) {
        Rep three(param);
        std::iota(three.begin(), three.end(), 0);
        three[0] = 1;
        three[1] = 2;
        three[2] = 0;
        gens.push_back(three);
        if (param > 3) {
          Rep big(param);
          std::iota(big.begin(), big.end(), 0);
          if (param % 2 == 1) {
            for (unsigned i = 0; i < param; ++i)
              big[i] = static_cast<std::uint16_t>((i + 1) % param);
          } else {
            // (2 3 ... n), fixing point 1.
            big[0] = 0;
            for (unsigned i = 1; i < param; ++i)
              big[i] = static_cast<std::uint16_t>(i % (param - 1) + 1);
          }
          gens.push_back(big);
        }
      }
      return build_perm_family(fam, param, std::move(gens), 0, 0, cap);
    }
    case Family::cyclic: {
      if (param < 1) throw InputError("cyclic needs order >= 1");
      std::vector<Rep> gens;
      if (param >= 2) gens.push_back(detail::cycle_perm(param));
      return build_perm_family(fam, param, std::move(gens), 0, 0, cap);
    }
    case Family::dihedral: {
      if (param < 1) throw InputError("dihedral needs n >= 1");
      if (param == 1)
        return build_perm_family(fam, 2, {Rep{1, 0}}, 0, 0, cap);
      if (param == 2)
        return build_perm_family(fam, 4, {Rep{1, 0, 2, 3}, Rep{0, 1, 3, 2}},
                                 0, 0, cap);
      std::vector<Rep> gens;
      gens.push_back(detail::cycle_perm(param));
      Rep refl(param);
      refl[0] = 0;
      for (unsigned i = 1; i < param; ++i)
        refl[i] = static_cast<std::uint16_t>(param - i);
      gens.push_back(refl);
      return build_perm_family(fam, param, std::move(gens), 0, 0, cap);
    }
    case Family::psl2:
      if (param < 2 || param > 64) throw InputError("psl2: q must be in [2,64]");
      return detail::build_psl2(param, cap);
    case Family::sl2:
      if (param < 2 || param > 64) throw InputError("sl2: q must be in [2,64]");
      return detail::build_sl2(param, cap);
    default:
      throw InputError("unsupported family");
  }
}

// --- simplicity -----------------------------------------------------------

// True iff the normal closure of every nontrivial element is the whole
// group. Conjugacy orbits are computed with the generator list; the normal
// closure of a class is the subgroup its members generate.
inline bool is_simple(const GroupTable& g) {
  const std::uint32_t n = g.order();
  if (n < 2) throw PreconditionError("is_simple needs |G| >= 2");
  std::vector<std::uint32_t> class_of(n, UINT32_MAX);
  for (std::uint32_t x = 1; x < n; ++x) {
    if (class_of[x] != UINT32_MAX) continue;
    // Conjugacy orbit of x.
    std::vector<std::uint32_t> orbit{x};
    class_of[x] = x;
    for (std::size_t h = 0; h < orbit.size(); ++h)
      for (ElementId gen : g.generators()) {
        std::uint32_t y = g.conj(orbit[h], gen);
        if (class_of[y] == UINT32_MAX) {
          class_of[y] = x;
          orbit.push_back(y);
        }
      }
    // Subgroup generated by the orbit.
    std::vector<bool> in(n, false);
    std::vector<std::uint32_t> queue;
    in[0] = true;
    queue.push_back(0);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (std::uint32_t m : orbit) {
        std::uint32_t z = g.mul(queue[h], m);
        if (!in[z]) {
          in[z] = true;
          queue.push_back(z);
        }
      }
    if (queue.size() != n) return false;
  }
  return true;
}

}  // namespace gpcover
