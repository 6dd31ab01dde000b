#pragma once

#include <cstdint>
#include <vector>

#include "gpcover/errors.hpp"

namespace gpcover {

// GF(q) for prime powers q <= 64, table-driven. Elements are encoded as
// integers in [0, q): the base-p digit vector of the encoding gives the
// coefficients of the polynomial representative, so 0 is zero and 1 is one.
// The reducing polynomial is the lexicographically smallest monic
// irreducible of the right degree, which fixes the tables deterministically.
class SmallField {
 public:
  explicit SmallField(unsigned q) : q_(q) {
    if (q < 2 || q > 64) throw InputError("field size out of range [2,64]");
    p_ = smallest_prime_factor(q);
    unsigned t = q;
    deg_ = 0;
    while (t % p_ == 0) {
      t /= p_;
      ++deg_;
    }
    if (t != 1) throw InputError("field size is not a prime power");
    find_modulus();
    build_tables();
  }

  unsigned q() const { return q_; }
  unsigned characteristic() const { return p_; }

  unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
  unsigned sub(unsigned a, unsigned b) const { return add(a, neg(b)); }
  unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
  unsigned neg(unsigned a) const { return neg_[a]; }
  unsigned inv(unsigned a) const {
    if (a == 0) throw InputError("field inverse of zero");
    return inv_[a];
  }
  unsigned div(unsigned a, unsigned b) const { return mul(a, inv(b)); }

 private:
  static unsigned smallest_prime_factor(unsigned n) {
    for (unsigned d = 2; d * d <= n; ++d)
      if (n % d == 0) return d;
    return n;
  }

  std::vector<unsigned> digits(unsigned a) const {
    std::vector<unsigned> d(deg_);
    for (unsigned i = 0; i < deg_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }

  unsigned encode(const std::vector<unsigned>& d) const {
    unsigned a = 0;
    for (unsigned i = deg_; i-- > 0;) a = a * p_ + d[i];
    return a;
  }

  // Polynomial product of digit vectors reduced modulo the modulus.
  std::vector<unsigned> poly_mul_mod(const std::vector<unsigned>& a,
                                     const std::vector<unsigned>& b) const {
    std::vector<unsigned> prod(2 * deg_, 0);
    for (unsigned i = 0; i < deg_; ++i)
      for (unsigned j = 0; j < deg_; ++j)
        prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    // Reduce: x^deg = -modulus_low(x).
    for (unsigned i = 2 * deg_ - 1; i >= deg_; --i) {
      unsigned c = prod[i];
      if (c == 0) continue;
      prod[i] = 0;
      for (unsigned j = 0; j < deg_; ++j) {
        unsigned sub = (c * mod_low_[j]) % p_;
        prod[i - deg_ + j] = (prod[i - deg_ + j] + p_ - sub) % p_;
      }
    }
    prod.resize(deg_);
    return prod;
  }

  // Trial division by every monic polynomial of degree 1..deg/2.
  bool is_irreducible(const std::vector<unsigned>& low) const {
    if (deg_ == 1) return true;
    std::vector<unsigned> f(low);
    f.push_back(1);  // monic, degree deg_
    for (unsigned d = 1; 2 * d <= deg_; ++d) {
      unsigned count = 1;
      for (unsigned i = 0; i < d; ++i) count *= p_;
      for (unsigned c = 0; c < count; ++c) {
        std::vector<unsigned> g(d + 1);
        unsigned t = c;
        for (unsigned i = 0; i < d; ++i) {
          g[i] = t % p_;
          t /= p_;
        }
        g[d] = 1;
        // Remainder of f by g.
        std::vector<unsigned> r(f);
        for (unsigned i = deg_; i >= d && i < r.size(); --i) {
          unsigned lead = r[i];
          if (lead == 0) continue;
          r[i] = 0;
          for (unsigned j = 0; j < d; ++j)
            r[i - d + j] = (r[i - d + j] + p_ * p_ - lead * g[j] % p_) % p_;
        }
        bool zero = true;
        for (unsigned i = 0; i < d; ++i)
          if (r[i] != 0) zero = false;
        if (zero) return false;
      }
    }
    return true;
  }

  void find_modulus() {
    mod_low_.assign(deg_, 0);
    if (deg_ == 1) return;
    for (unsigned c = 0;; ++c) {
      if (c >= q_) throw InputError("no irreducible polynomial found");
      std::vector<unsigned> low(deg_);
      unsigned t = c;
      for (unsigned i = 0; i < deg_; ++i) {
        low[i] = t % p_;
        t /= p_;
      }
      if (is_irreducible(low)) {
        mod_low_ = low;
        return;
      }
    }
  }

  void build_tables() {
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (unsigned a = 0; a < q_; ++a) {
      auto da = digits(a);
      std::vector<unsigned> dn(deg_);
      for (unsigned i = 0; i < deg_; ++i) dn[i] = (p_ - da[i]) % p_;
      neg_[a] = encode(dn);
      for (unsigned b = 0; b < q_; ++b) {
        auto db = digits(b);
        std::vector<unsigned> ds(deg_);
        for (unsigned i = 0; i < deg_; ++i) ds[i] = (da[i] + db[i]) % p_;
        add_[a * q_ + b] = encode(ds);
        mul_[a * q_ + b] = encode(poly_mul_mod(da, db));
      }
    }
    for (unsigned a = 1; a < q_; ++a)
      for (unsigned b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) inv_[a] = b;
  }

  unsigned q_, p_, deg_;
  std::vector<unsigned> mod_low_;
  std::vector<unsigned> add_, mul_, neg_, inv_;
};

}  // namespace gpcover
