#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gpcover/errors.hpp"
#include "gpcover/group.hpp"
#include "gpcover/subset.hpp"

namespace gpcover {

struct ConjClass {
  ElementId rep;    // smallest index in the class
  Subset members;
  std::uint32_t size;
};

// Conjugacy structure of a group. Classes are sorted by (size, rep).
struct ClassSpectrum {
  std::vector<ConjClass> classes;
  std::vector<std::uint32_t> class_of;  // element -> class index
  std::uint32_t minclass = 0;      // smallest class of a non-identity element
  bool minclass_central = false;   // that class is central (size 1)
  std::uint32_t center_size = 0;
  bool simple = false;

  std::uint32_t order() const {
    std::uint32_t n = 0;
    for (const auto& c : classes) n += c.size;
    return n;
  }
};

inline ClassSpectrum conjugacy_classes(const GroupTable& g) {
  const std::uint32_t n = g.order();
  ClassSpectrum sp;
  std::vector<std::uint32_t> cls(n, UINT32_MAX);
  for (std::uint32_t x = 0; x < n; ++x) {
    if (cls[x] != UINT32_MAX) continue;
    std::vector<ElementId> orbit{x};
    cls[x] = static_cast<std::uint32_t>(sp.classes.size());
    for (std::size_t h = 0; h < orbit.size(); ++h)
      for (ElementId gen : g.generators()) {
        ElementId y = g.conj(orbit[h], gen);
        if (cls[y] == UINT32_MAX) {
          cls[y] = cls[x];
          orbit.push_back(y);
        }
      }
    ConjClass c;
    c.rep = *std::min_element(orbit.begin(), orbit.end());
    c.members = Subset::of(g, orbit);
    c.size = static_cast<std::uint32_t>(orbit.size());
    sp.classes.push_back(std::move(c));
  }
  std::sort(sp.classes.begin(), sp.classes.end(),
            [](const ConjClass& a, const ConjClass& b) {
              return a.size != b.size ? a.size < b.size : a.rep < b.rep;
            });
  sp.class_of.assign(n, 0);
  for (std::uint32_t ci = 0; ci < sp.classes.size(); ++ci)
    sp.classes[ci].members.for_each(
        [&](ElementId e) { sp.class_of[e] = ci; });

  sp.minclass = n;  // trivial group: stays |G| = 1 with no nontrivial class
  for (const auto& c : sp.classes) {
    if (c.size == 1) ++sp.center_size;
    if (c.rep != g.identity() && c.size < sp.minclass) {
      sp.minclass = c.size;
      sp.minclass_central = (c.size == 1);
    }
  }
  sp.simple = n >= 2 && is_simple(g);
  return sp;
}

// --- mindeg ---------------------------------------------------------------

struct MindegInfo {
  std::uint32_t value = 0;
  enum class Kind { exact, lower_bound } kind = Kind::exact;
  enum class Source { oracle, family_table } source = Source::oracle;
  bool trivial_only = false;  // abelian: every irreducible degree is 1
  std::vector<std::uint32_t> degrees;  // full multiset when exact
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  return powmod(a, p - 2, p);
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Tonelli-Shanks; p odd prime, a a quadratic residue.
inline std::optional<std::uint64_t> sqrtmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p),
                r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1 && i < m) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    if (i == m) return std::nullopt;
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

using FpVec = std::vector<std::uint64_t>;
using FpMat = std::vector<FpVec>;  // row-major

// Characteristic polynomial coefficients (c_0..c_d, monic c_d = 1) via
// power-sum traces and Newton's identities; valid because p > d.
inline FpVec charpoly(const FpMat& m, std::uint64_t p) {
  const std::size_t d = m.size();
  std::vector<FpMat> pw;
  FpVec traces(d + 1, 0);
  FpMat cur = m;
  for (std::size_t k = 1; k <= d; ++k) {
    std::uint64_t tr = 0;
    for (std::size_t i = 0; i < d; ++i) tr = (tr + cur[i][i]) % p;
    traces[k] = tr;
    if (k < d) {
      FpMat nxt(d, FpVec(d, 0));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l) {
          if (cur[i][l] == 0) continue;
          std::uint64_t v = cur[i][l];
          for (std::size_t j = 0; j < d; ++j)
            nxt[i][j] = (nxt[i][j] + mulmod(v, m[l][j], p)) % p;
        }
      cur = std::move(nxt);
    }
  }
  // e_k: elementary symmetric functions of eigenvalues.
  FpVec e(d + 1, 0);
  e[0] = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    std::uint64_t acc = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      std::uint64_t term = mulmod(e[k - i], traces[i], p);
      acc = (i % 2 == 1) ? (acc + term) % p : (acc + p - term) % p;
    }
    e[k] = mulmod(acc, invmod(k % p, p), p);
  }
  // charpoly(x) = sum_k (-1)^k e_k x^{d-k}.
  FpVec c(d + 1, 0);
  for (std::size_t k = 0; k <= d; ++k) {
    std::uint64_t v = e[k];
    if (k % 2 == 1) v = (p - v) % p;
    c[d - k] = v;
  }
  return c;
}

// Basis of the nullspace of m (d x d over F_p).
inline std::vector<FpVec> nullspace(FpMat m, std::uint64_t p) {
  const std::size_t d = m.size();
  std::vector<int> pivot_col(d, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < d; ++col) {
    std::size_t sel = rank;
    while (sel < d && m[sel][col] == 0) ++sel;
    if (sel == d) continue;
    std::swap(m[rank], m[sel]);
    std::uint64_t iv = invmod(m[rank][col], p);
    for (std::size_t j = 0; j < d; ++j) m[rank][j] = mulmod(m[rank][j], iv, p);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      std::uint64_t f = m[r][col];
      for (std::size_t j = 0; j < d; ++j)
        m[r][j] = (m[r][j] + p - mulmod(f, m[rank][j], p)) % p;
    }
    pivot_col[rank] = static_cast<int>(col);
    ++rank;
  }
  std::vector<bool> is_pivot(d, false);
  for (std::size_t r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
  std::vector<FpVec> basis;
  for (std::size_t free = 0; free < d; ++free) {
    if (is_pivot[free]) continue;
    FpVec v(d, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r)
      v[pivot_col[r]] = (p - m[r][free]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace detail

// Exact irreducible character degrees via the class-algebra eigenvalue
// method: the class-sum matrices commute, their simultaneous eigenvectors
// over a suitable prime field are the columns of the character table up to
// scaling, and the degrees come out of the orthogonality relation. The
// prime is the least p = 1 (mod exponent(G)) with p > 2*sqrt(|G|).
//
// Returns the sorted degree multiset, or nullopt when the decomposition
// degenerates (which the cross-checks would catch anyway).
inline std::optional<std::vector<std::uint32_t>> character_degrees(
    const GroupTable& g, const ClassSpectrum& sp) {
  using namespace detail;
  const std::uint64_t n = g.order();
  const std::size_t k = sp.classes.size();

  std::uint64_t expo = 1;
  for (const auto& c : sp.classes)
    expo = std::lcm<std::uint64_t>(expo, g.element_order(c.rep));
  // p > k is also needed so Newton's identities can divide by 1..k.
  const std::uint64_t p_floor =
      std::max<std::uint64_t>(static_cast<std::uint64_t>(2.0 * std::sqrt(double(n))),
                              k);
  std::uint64_t p = expo + 1;
  while (p <= p_floor || !is_prime_u64(p)) p += expo;

  // Class-sum matrices M_i with (M_i)_{j,l} = a_{ijl}, where
  // C_i C_j = sum_l a_{ijl} C_l in the class algebra. For fixed l, a_{ijl}
  // counts x with x in C_i and x^-1 z_l in C_j.
  std::vector<FpMat> mats(k, FpMat(k, FpVec(k, 0)));
  for (std::size_t l = 0; l < k; ++l) {
    ElementId zl = sp.classes[l].rep;
    for (std::uint32_t x = 0; x < n; ++x) {
      std::uint32_t i = sp.class_of[x];
      std::uint32_t j = sp.class_of[g.mul(g.inv(x), zl)];
      mats[i][j][l] = (mats[i][j][l] + 1) % p;
    }
  }

  // Split the common eigenspaces. Subspaces are kept as lists of k-vectors;
  // they stay invariant under every M_i because the class algebra is
  // commutative.
  std::vector<std::vector<FpVec>> spaces;
  {
    std::vector<FpVec> full;
    for (std::size_t i = 0; i < k; ++i) {
      FpVec e(k, 0);
      e[i] = 1;
      full.push_back(std::move(e));
    }
    spaces.push_back(std::move(full));
  }
  for (std::size_t mi = 0; mi < k; ++mi) {
    bool all_one = true;
    for (const auto& s : spaces) all_one &= (s.size() == 1);
    if (all_one) break;
    std::vector<std::vector<FpVec>> next;
    for (auto& basis : spaces) {
      const std::size_t d = basis.size();
      if (d == 1) {
        next.push_back(std::move(basis));
        continue;
      }
      // Coordinates of M_i * basis vectors in terms of the basis. Reduce the
      // basis first so membership coordinates can be read off pivots.
      // Build matrix B (d x k) and its RREF with pivot bookkeeping.
      FpMat B = FpMat(basis.begin(), basis.end());
      std::vector<int> pivots(d, -1);
      {
        std::size_t r = 0;
        for (std::size_t col = 0; col < k && r < d; ++col) {
          std::size_t sel = r;
          while (sel < d && B[sel][col] == 0) ++sel;
          if (sel == d) continue;
          std::swap(B[r], B[sel]);
          std::uint64_t iv = invmod(B[r][col], p);
          for (std::size_t j = 0; j < k; ++j) B[r][j] = mulmod(B[r][j], iv, p);
          for (std::size_t rr = 0; rr < d; ++rr) {
            if (rr == r || B[rr][col] == 0) continue;
            std::uint64_t f = B[rr][col];
            for (std::size_t j = 0; j < k; ++j)
              B[rr][j] = (B[rr][j] + p - mulmod(f, B[r][j], p)) % p;
          }
          pivots[r] = static_cast<int>(col);
          ++r;
        }
        if (r != d) return std::nullopt;  // degenerate basis
      }
      auto coords = [&](const FpVec& v) {
        // v must lie in span(B); read coordinates at pivot columns.
        FpVec c(d);
        for (std::size_t r = 0; r < d; ++r) c[r] = v[pivots[r]];
        return c;
      };
      // Restricted operator R: column t = coords(M_mi * B_t).
      FpMat R(d, FpVec(d, 0));
      for (std::size_t t = 0; t < d; ++t) {
        FpVec img(k, 0);
        for (std::size_t j = 0; j < k; ++j) {
          if (B[t][j] == 0) continue;
          for (std::size_t row = 0; row < k; ++row)
            img[row] = (img[row] + mulmod(mats[mi][row][j], B[t][j], p)) % p;
        }
        FpVec c = coords(img);
        for (std::size_t row = 0; row < d; ++row) R[row][t] = c[row];
      }
      // Eigenvalues: roots of the characteristic polynomial by direct scan.
      FpVec cp = charpoly(R, p);
      std::vector<std::uint64_t> roots;
      for (std::uint64_t lam = 0; lam < p; ++lam) {
        std::uint64_t v = 0;
        for (std::size_t j = cp.size(); j-- > 0;)
          v = (mulmod(v, lam, p) + cp[j]) % p;
        if (v == 0) roots.push_back(lam);
        if (roots.size() == d) break;
      }
      for (std::uint64_t lam : roots) {
        FpMat shifted = R;
        for (std::size_t i = 0; i < d; ++i)
          shifted[i][i] = (shifted[i][i] + p - lam) % p;
        auto null_basis = nullspace(shifted, p);
        if (null_basis.empty()) continue;
        std::vector<FpVec> sub;
        for (const auto& nv : null_basis) {
          FpVec lifted(k, 0);
          for (std::size_t t = 0; t < d; ++t) {
            if (nv[t] == 0) continue;
            for (std::size_t j = 0; j < k; ++j)
              lifted[j] = (lifted[j] + mulmod(nv[t], B[t][j], p)) % p;
          }
          sub.push_back(std::move(lifted));
        }
        next.push_back(std::move(sub));
      }
    }
    spaces = std::move(next);
  }
  if (spaces.size() != k) return std::nullopt;

  // Identity class index and inverse-class map.
  std::size_t id_class = sp.class_of[g.identity()];
  std::vector<std::size_t> inv_class(k);
  for (std::size_t l = 0; l < k; ++l)
    inv_class[l] = sp.class_of[g.inv(sp.classes[l].rep)];

  std::vector<std::uint32_t> degrees;
  for (const auto& space : spaces) {
    const FpVec& raw = space[0];
    if (raw[id_class] == 0) return std::nullopt;
    std::uint64_t norm = detail::invmod(raw[id_class], p);
    FpVec v(k);
    for (std::size_t l = 0; l < k; ++l) v[l] = mulmod(raw[l], norm, p);
    // d^2 = |G| / sum_l v_l v_{l*} / |C_l|  (mod p).
    std::uint64_t s = 0;
    for (std::size_t l = 0; l < k; ++l) {
      std::uint64_t term = mulmod(v[l], v[inv_class[l]], p);
      term = mulmod(term, invmod(sp.classes[l].size % p, p), p);
      s = (s + term) % p;
    }
    if (s == 0) return std::nullopt;
    std::uint64_t d2 = mulmod(n % p, invmod(s, p), p);
    auto root = detail::sqrtmod(d2, p);
    if (!root) return std::nullopt;
    std::uint64_t d = std::min(*root, p - *root);
    if (d == 0 || d * d > n || n % d != 0) return std::nullopt;
    degrees.push_back(static_cast<std::uint32_t>(d));
  }
  std::sort(degrees.begin(), degrees.end());
  // Cross-checks: one degree per class, sum of squares = |G|.
  if (degrees.size() != k) return std::nullopt;
  std::uint64_t sumsq = 0;
  for (std::uint32_t d : degrees) sumsq += std::uint64_t(d) * d;
  if (sumsq != n) return std::nullopt;
  return degrees;
}

// Smallest dimension of a nontrivial complex irreducible representation.
// Exact via the degree oracle at desk scale, else a family lower bound.
inline MindegInfo mindeg(const GroupTable& g, const ClassSpectrum& sp,
                         std::uint64_t limit = 100'000) {
  if (g.order() <= limit && sp.classes.size() <= 64) {
    auto degs = character_degrees(g, sp);
    if (degs) {
      MindegInfo info;
      info.kind = MindegInfo::Kind::exact;
      info.source = MindegInfo::Source::oracle;
      info.degrees = *degs;
      info.value = 1;
      info.trivial_only = true;
      for (std::uint32_t d : *degs)
        if (d > 1) {
          info.value = d;
          info.trivial_only = false;
          break;
        }
      return info;
    }
  }
  if (g.family() == Family::psl2 || g.family() == Family::sl2) {
    unsigned q = g.field_size();
    MindegInfo info;
    info.kind = MindegInfo::Kind::lower_bound;
    info.source = MindegInfo::Source::family_table;
    info.value = std::max(1u, (q - 1) / std::gcd(2u, q - 1));
    return info;
  }
  throw InputError("mindeg unavailable: oracle limits exceeded and no family bound");
}

// --- bound reports --------------------------------------------------------

struct Inequality {
  std::string name;
  double lhs = 0, rhs = 0;  // display values; comparisons are exact integer
  bool holds = false;
  bool strict = false;
};

struct BoundReport {
  std::string check;
  bool applicable = false;
  std::string note;
  std::vector<Inequality> inequalities;

  bool all_hold() const {
    if (!applicable) return false;
    for (const auto& i : inequalities)
      if (!i.holds) return false;
    return true;
  }
};

namespace detail {
inline unsigned __int128 ipow128(std::uint64_t base, unsigned e) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}
}  // namespace detail

// q^{r/2} <= minclass < |G| <= q^{8r^2}, all in exact integers (the half
// power compared via squaring).
inline BoundReport check_rank_bounds(const GroupTable& g,
                                     const ClassSpectrum& sp) {
  BoundReport rep;
  rep.check = "rank_bounds";
  if (!g.has_lie_meta()) {
    rep.note = "no (r,q) metadata: not a builtin Lie family";
    return rep;
  }
  if (!sp.simple) {
    rep.note = "not simple";
    return rep;
  }
  rep.applicable = true;
  const unsigned r = static_cast<unsigned>(g.rank());
  const std::uint64_t q = g.field_size(), n = g.order(),
                      mc = sp.minclass;
  using detail::ipow128;
  Inequality a{"q^(r/2) <= minclass", std::pow(double(q), r / 2.0),
               double(mc),
               ipow128(q, r) <= ipow128(mc, 2), false};
  Inequality b{"minclass < |G|", double(mc), double(n), mc < n, true};
  Inequality c{"|G| <= q^(8r^2)", double(n), std::pow(double(q), 8.0 * r * r),
               static_cast<unsigned __int128>(n) <= ipow128(q, 8 * r * r),
               false};
  rep.inequalities = {a, b, c};
  return rep;
}

// |G| < k^{8r^2} with k = mindeg(G).
inline BoundReport check_landseitz(const GroupTable& g,
                                   const ClassSpectrum& sp,
                                   const MindegInfo& k) {
  BoundReport rep;
  rep.check = "landseitz";
  if (!g.has_lie_meta()) {
    rep.note = "no (r,q) metadata: not a builtin Lie family";
    return rep;
  }
  if (!sp.simple) {
    rep.note = "not simple";
    return rep;
  }
  rep.applicable = true;
  const unsigned r = static_cast<unsigned>(g.rank());
  Inequality i{"|G| < mindeg^(8r^2)", double(g.order()),
               std::pow(double(k.value), 8.0 * r * r),
               static_cast<unsigned __int128>(g.order()) <
                   detail::ipow128(k.value, 8 * r * r),
               true};
  if (k.kind == MindegInfo::Kind::lower_bound)
    rep.note = "mindeg is a lower bound; inequality still sufficient if it holds";
  rep.inequalities = {i};
  return rep;
}

}  // namespace gpcover
