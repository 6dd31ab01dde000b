#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "gpcover/group.hpp"

using namespace gpcover;

namespace {

// Independent closure oracle: naive orbit of the generators under repeated
// multiplication, tracked as raw permutation images.
std::set<Rep> perm_closure_oracle(unsigned degree, std::vector<Rep> gens) {
  Rep id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<Rep> seen{id};
  std::vector<Rep> queue{id};
  auto compose = [](const Rep& x, const Rep& y) {
    Rep z(x.size());
    for (std::size_t p = 0; p < x.size(); ++p) z[p] = y[x[p]];
    return z;
  };
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const Rep& g : gens) {
      Rep z = compose(queue[h], g);
      if (seen.insert(z).second) queue.push_back(z);
    }
  return seen;
}

}  // namespace

TEST_CASE("cycle notation parses and rejects malformed input") {
  Rep t = perm_from_cycles(3, {{1, 2}});
  REQUIRE(t == Rep{1, 0, 2});
  Rep c = perm_from_cycles(5, {{1, 2, 3, 4, 5}});
  REQUIRE(c == Rep{1, 2, 3, 4, 0});
  Rep two = perm_from_cycles(5, {{1, 2}, {3, 4}});
  REQUIRE(two == Rep{1, 0, 3, 2, 4});
  CHECK_THROWS_AS(perm_from_cycles(3, {{1, 4}}), InputError);
  CHECK_THROWS_AS(perm_from_cycles(3, {{1, 2}, {2, 3}}), InputError);
  CHECK_THROWS_AS(perm_from_cycles(3, {{0, 1}}), InputError);
}

TEST_CASE("conjugation convention: (1 2) by (1 2 3) gives (2 3)") {
  GroupTable g = build_from_permutations(
      3, {{{1, 2}}, {{1, 2, 3}}});
  REQUIRE(g.order() == 6);
  ElementId t12 = g.generators()[0];
  ElementId c123 = g.generators()[1];
  ElementId r = g.conj(t12, c123);
  REQUIRE(g.rep(r) == perm_from_cycles(3, {{2, 3}}));
}

TEST_CASE("conjugation identities") {
  GroupTable g = build_family(Family::sym, 4);
  for (ElementId a = 0; a < g.order(); a += 3)
    for (ElementId x = 0; x < g.order(); x += 5)
      for (ElementId y = 0; y < g.order(); y += 7) {
        CHECK(g.conj(a, g.identity()) == a);
        CHECK(g.conj(g.conj(a, x), y) == g.conj(a, g.mul(x, y)));
      }
}

TEST_CASE("group axioms hold on every builtin family sample") {
  for (GroupTable g : {build_family(Family::sym, 4),
                       build_family(Family::alt, 5),
                       build_family(Family::dihedral, 7),
                       build_family(Family::cyclic, 12),
                       build_family(Family::psl2, 5),
                       build_family(Family::sl2, 3)}) {
    const std::uint32_t n = g.order();
    for (ElementId a = 0; a < n; ++a) {
      CHECK(g.mul(a, g.identity()) == a);
      CHECK(g.mul(g.identity(), a) == a);
      CHECK(g.mul(a, g.inv(a)) == g.identity());
      CHECK(g.mul(g.inv(a), a) == g.identity());
    }
    // Associativity spot-check on a deterministic lattice of triples.
    for (ElementId a = 0; a < n; a += 7)
      for (ElementId b = 0; b < n; b += 11)
        for (ElementId c = 0; c < n; c += 13)
          CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

TEST_CASE("family orders") {
  CHECK(build_family(Family::sym, 1).order() == 1);
  CHECK(build_family(Family::sym, 3).order() == 6);
  CHECK(build_family(Family::sym, 5).order() == 120);
  CHECK(build_family(Family::alt, 3).order() == 3);
  CHECK(build_family(Family::alt, 4).order() == 12);
  CHECK(build_family(Family::alt, 5).order() == 60);
  CHECK(build_family(Family::alt, 6).order() == 360);
  CHECK(build_family(Family::cyclic, 1).order() == 1);
  CHECK(build_family(Family::cyclic, 9).order() == 9);
  CHECK(build_family(Family::dihedral, 1).order() == 2);
  CHECK(build_family(Family::dihedral, 2).order() == 4);
  CHECK(build_family(Family::dihedral, 6).order() == 12);
  // |PSL(2,q)| = q(q^2-1)/gcd(2,q-1), |SL(2,q)| = q(q^2-1).
  CHECK(build_family(Family::psl2, 4).order() == 60);
  CHECK(build_family(Family::psl2, 5).order() == 60);
  CHECK(build_family(Family::psl2, 7).order() == 168);
  CHECK(build_family(Family::psl2, 8).order() == 504);
  CHECK(build_family(Family::psl2, 9).order() == 360);
  CHECK(build_family(Family::psl2, 11).order() == 660);
  CHECK(build_family(Family::psl2, 13).order() == 1092);
  CHECK(build_family(Family::sl2, 3).order() == 24);
  CHECK(build_family(Family::sl2, 5).order() == 120);
  CHECK(build_family(Family::sl2, 7).order() == 336);
}

TEST_CASE("family parameter validation") {
  CHECK_THROWS_AS(build_family(Family::sym, 0), InputError);
  CHECK_THROWS_AS(build_family(Family::psl2, 1), InputError);
  CHECK_THROWS_AS(build_family(Family::psl2, 65), InputError);
  CHECK_THROWS_AS(build_family(Family::psl2, 6), InputError);  // not a prime power
  CHECK_THROWS_AS(build_family(Family::cyclic, 0), InputError);
}

TEST_CASE("permutation closure matches the independent oracle") {
  std::vector<Rep> gens{perm_from_cycles(5, {{1, 2, 3, 4, 5}}),
                        perm_from_cycles(5, {{1, 2}})};
  auto oracle = perm_closure_oracle(5, gens);
  GroupTable g = build_from_permutations(5, {{{1, 2, 3, 4, 5}}, {{1, 2}}});
  REQUIRE(g.order() == oracle.size());
  for (ElementId i = 0; i < g.order(); ++i)
    CHECK(oracle.count(g.rep(i)) == 1);
}

TEST_CASE("closure indexing is deterministic and identity-first") {
  GroupTable a = build_from_permutations(4, {{{1, 2, 3, 4}}, {{1, 2}}});
  GroupTable b = build_from_permutations(4, {{{1, 2, 3, 4}}, {{1, 2}}});
  REQUIRE(a.order() == 24);
  CHECK(a.identity() == 0);
  Rep id(4);
  std::iota(id.begin(), id.end(), 0);
  CHECK(a.rep(0) == id);
  CHECK(a.fingerprint() == b.fingerprint());
  for (ElementId i = 0; i < a.order(); ++i) CHECK(a.rep(i) == b.rep(i));
}

TEST_CASE("element orders") {
  GroupTable g = build_family(Family::sym, 5);
  std::map<unsigned, int> hist;
  for (ElementId i = 0; i < g.order(); ++i) ++hist[g.element_order(i)];
  // Sym(5) order statistics: 1x1, 25x2, 20x3, 30x4, 24x5, 20x6.
  CHECK(hist[1] == 1);
  CHECK(hist[2] == 25);
  CHECK(hist[3] == 20);
  CHECK(hist[4] == 30);
  CHECK(hist[5] == 24);
  CHECK(hist[6] == 20);
}

TEST_CASE("cayley table input round-trips and validates") {
  // Z/4 from its table.
  std::vector<std::vector<std::uint32_t>> z4{
      {0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  GroupTable g = build_from_cayley_table(z4);
  REQUIRE(g.order() == 4);
  CHECK(g.mul(1, 3) == 0);
  CHECK(g.inv(1) == 3);
  CHECK(g.element_order(1) == 4);
  CHECK_FALSE(g.generators().empty());

  SECTION("bad identity row") {
    auto t = z4;
    t[0] = {1, 0, 2, 3};
    CHECK_THROWS_AS(build_from_cayley_table(t), InputError);
  }
  SECTION("non-square") {
    auto t = z4;
    t[2].pop_back();
    CHECK_THROWS_AS(build_from_cayley_table(t), InputError);
  }
  SECTION("entry out of range") {
    auto t = z4;
    t[1][1] = 9;
    CHECK_THROWS_AS(build_from_cayley_table(t), InputError);
  }
  SECTION("associativity violation is reported with a triple") {
    auto t = z4;
    t[1][1] = 3;  // breaks associativity, keeps identity row/column
    try {
      build_from_cayley_table(t);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("associativity") != std::string::npos);
      CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
  }
}

TEST_CASE("cayley-built group agrees with its source group") {
  GroupTable src = build_family(Family::dihedral, 5);
  std::vector<std::vector<std::uint32_t>> table(
      src.order(), std::vector<std::uint32_t>(src.order()));
  for (ElementId i = 0; i < src.order(); ++i)
    for (ElementId j = 0; j < src.order(); ++j) table[i][j] = src.mul(i, j);
  GroupTable g = build_from_cayley_table(table);
  REQUIRE(g.order() == src.order());
  for (ElementId i = 0; i < g.order(); ++i) {
    CHECK(g.inv(i) == src.inv(i));
    for (ElementId j = 0; j < g.order(); ++j) CHECK(g.mul(i, j) == src.mul(i, j));
  }
}

TEST_CASE("simplicity classification") {
  CHECK(is_simple(build_family(Family::alt, 5)));
  CHECK(is_simple(build_family(Family::alt, 6)));
  CHECK(is_simple(build_family(Family::psl2, 7)));
  CHECK(is_simple(build_family(Family::psl2, 11)));
  CHECK(is_simple(build_family(Family::cyclic, 7)));  // prime order
  CHECK_FALSE(is_simple(build_family(Family::sym, 3)));
  CHECK_FALSE(is_simple(build_family(Family::sym, 5)));
  CHECK_FALSE(is_simple(build_family(Family::alt, 4)));
  CHECK_FALSE(is_simple(build_family(Family::sl2, 5)));  // center {+-I}
  CHECK_FALSE(is_simple(build_family(Family::cyclic, 6)));
  CHECK_FALSE(is_simple(build_family(Family::dihedral, 6)));
  CHECK_THROWS_AS(is_simple(build_family(Family::cyclic, 1)),
                  PreconditionError);
}

TEST_CASE("psl2 and sl2 expose Lie metadata") {
  GroupTable p = build_family(Family::psl2, 7);
  CHECK(p.has_lie_meta());
  CHECK(p.rank() == 1);
  CHECK(p.field_size() == 7);
  GroupTable s = build_family(Family::sym, 4);
  CHECK_FALSE(s.has_lie_meta());
}

TEST_CASE("psl2(5) is isomorphic to alt(5) by order statistics") {
  GroupTable p = build_family(Family::psl2, 5);
  GroupTable a = build_family(Family::alt, 5);
  std::map<unsigned, int> hp, ha;
  for (ElementId i = 0; i < p.order(); ++i) ++hp[p.element_order(i)];
  for (ElementId i = 0; i < a.order(); ++i) ++ha[a.element_order(i)];
  CHECK(hp == ha);
}

TEST_CASE("closure cap raises a resource error") {
  CHECK_THROWS_AS(build_from_permutations(8, {{{1, 2, 3, 4, 5, 6, 7, 8}},
                                              {{1, 2}}},
                                          100),
                  CapError);
}
