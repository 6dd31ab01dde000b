#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "gpcover/errors.hpp"
#include "gpcover/group.hpp"
#include "gpcover/rng.hpp"

namespace gpcover {

// Bit-mask over element indices of one group, with cached cardinality.
// Immutable value semantics: every operation returns a fresh mask.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::uint32_t universe)
      : w_((universe + 63) / 64, 0), n_(universe), card_(0) {}

  static Subset full(const GroupTable& g) {
    Subset s(g.order());
    for (std::uint32_t i = 0; i < g.order(); ++i) s.insert(i);
    return s;
  }

  static Subset of(const GroupTable& g, std::initializer_list<ElementId> ids) {
    Subset s(g.order());
    for (ElementId i : ids) s.insert(i);
    return s;
  }

  static Subset of(const GroupTable& g, const std::vector<ElementId>& ids) {
    Subset s(g.order());
    for (ElementId i : ids) s.insert(i);
    return s;
  }

  std::uint32_t universe() const { return n_; }
  std::uint32_t size() const { return card_; }
  bool empty() const { return card_ == 0; }
  bool is_full() const { return card_ == n_; }

  bool contains(ElementId i) const {
    return (w_[i >> 6] >> (i & 63)) & 1u;
  }

  void insert(ElementId i) {
    if (i >= n_) throw InputError("element id out of range");
    std::uint64_t bit = 1ULL << (i & 63);
    if (!(w_[i >> 6] & bit)) {
      w_[i >> 6] |= bit;
      ++card_;
    }
  }

  bool operator==(const Subset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Subset& o) const { return !(*this == o); }

  template <class F>
  void for_each(F f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t w = w_[wi];
      while (w) {
        unsigned b = std::countr_zero(w);
        f(static_cast<ElementId>(wi * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<ElementId> elements() const {
    std::vector<ElementId> out;
    out.reserve(card_);
    for_each([&out](ElementId i) { out.push_back(i); });
    return out;
  }

  // Used as an identity proxy when deduplicating conjugate masks, so it
  // needs strong per-word mixing (a plain xor-multiply chain collides on
  // single-bit masks straddling word boundaries).
  std::uint64_t hash() const {
    auto mix = [](std::uint64_t z) {
      z ^= z >> 30;
      z *= 0xbf58476d1ce4e5b9ULL;
      z ^= z >> 27;
      z *= 0x94d049bb133111ebULL;
      z ^= z >> 31;
      return z;
    };
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < w_.size(); ++i)
      h = mix(h ^ mix(w_[i] + 0x9e3779b97f4a7c15ULL * (i + 1)));
    return h;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  std::vector<std::uint64_t> w_;
  std::uint32_t n_ = 0;
  std::uint32_t card_ = 0;
};

struct SubsetHash {
  std::size_t operator()(const Subset& s) const {
    return static_cast<std::size_t>(s.hash());
  }
};

inline void require_nonempty(const Subset& s, const char* op) {
  if (s.empty()) throw InputError(std::string(op) + ": empty subset");
}

inline std::uint32_t intersection_size(const Subset& a, const Subset& b) {
  std::uint32_t c = 0;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i)
    c += std::popcount(wa[i] & wb[i]);
  return c;
}

// Product set AB = {ab : a in A, b in B}.
inline Subset product(const GroupTable& g, const Subset& a, const Subset& b) {
  require_nonempty(a, "product");
  require_nonempty(b, "product");
  Subset r(g.order());
  const auto bs = b.elements();
  a.for_each([&](ElementId x) {
    for (ElementId y : bs) r.insert(g.mul(x, y));
  });
  return r;
}

// S^g = {g^-1 s g}.
inline Subset conjugate_subset(const GroupTable& g, const Subset& s,
                               ElementId x) {
  Subset r(g.order());
  s.for_each([&](ElementId e) { r.insert(g.conj(e, x)); });
  return r;
}

// Sg = {sg}.
inline Subset translate(const GroupTable& g, const Subset& s, ElementId x) {
  Subset r(g.order());
  s.for_each([&](ElementId e) { r.insert(g.mul(e, x)); });
  return r;
}

inline Subset inverse_set(const GroupTable& g, const Subset& s) {
  Subset r(g.order());
  s.for_each([&](ElementId e) { r.insert(g.inv(e)); });
  return r;
}

inline Subset power(const GroupTable& g, const Subset& s, unsigned h) {
  require_nonempty(s, "power");
  if (h < 1) throw InputError("power: exponent must be >= 1");
  Subset r = s;
  for (unsigned i = 1; i < h; ++i) r = product(g, r, s);
  return r;
}

// Closure of S under products: the subgroup <S> (a finite cancellative
// semigroup is a group).
inline Subset generated_closure(const GroupTable& g, const Subset& s) {
  require_nonempty(s, "generated_closure");
  const auto gens = s.elements();
  Subset in(g.order());
  std::vector<ElementId> queue = gens;
  for (ElementId e : gens) in.insert(e);
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (ElementId x : gens) {
      ElementId z = g.mul(queue[h], x);
      if (!in.contains(z)) {
        in.insert(z);
        queue.push_back(z);
      }
    }
  return in;
}

inline bool generates(const GroupTable& g, const Subset& s) {
  return generated_closure(g, s).is_full();
}

// Smallest x (by index) with <Sx> = G. Existence is guaranteed for simple G
// and |S| >= 2; outside that regime the scan can fail, which is reported as
// a precondition failure naming the set size.
inline ElementId find_generating_translate(const GroupTable& g,
                                           const Subset& s) {
  require_nonempty(s, "find_generating_translate");
  for (std::uint32_t x = 0; x < g.order(); ++x)
    if (generates(g, translate(g, s, x))) return x;
  throw PreconditionError(
      "no generating translate found (group not simple or |S| < 2; |S| = " +
      std::to_string(s.size()) + ")");
}

// Seeded sample of `size` distinct elements; same seed gives the same set
// on every platform.
inline Subset random_subset(const GroupTable& g, std::uint32_t size,
                            std::uint64_t seed) {
  const std::uint32_t n = g.order();
  if (size < 1 || size > n)
    throw InputError("random subset size out of range [1,|G|]");
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  Subset s(n);
  for (std::uint32_t i = 0; i < size; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
    s.insert(pool[i]);
  }
  return s;
}

// Words of length <= radius in the given generators (radius 0 = {e}).
inline Subset ball(const GroupTable& g, const std::vector<ElementId>& gens,
                   unsigned radius) {
  Subset s(g.order());
  s.insert(g.identity());
  std::vector<ElementId> frontier{g.identity()};
  for (unsigned r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<ElementId> next;
    for (ElementId x : frontier)
      for (ElementId gen : gens) {
        ElementId z = g.mul(x, gen);
        if (!s.contains(z)) {
          s.insert(z);
          next.push_back(z);
        }
      }
    frontier = std::move(next);
  }
  return s;
}

}  // namespace gpcover
