#pragma once

// Dense univariate polynomials over Q, index = exponent.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qaut::poly {

using Coeff = mpq_class;
using Poly = std::vector<Coeff>;

inline void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

inline Poly scale(const Poly& a, const Coeff& c) {
  if (sgn(c) == 0) return {};
  Poly r(a);
  for (auto& x : r) x *= c;
  return r;
}

// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly rem(a);
  trim(rem);
  const int db = degree(b);
  if (degree(rem) < db) return {Poly{}, rem};
  Poly quo(static_cast<std::size_t>(degree(rem) - db + 1));
  const Coeff& lead = b.back();
  while (!rem.empty() && degree(rem) >= db) {
    const int shift = degree(rem) - db;
    Coeff c = rem.back() / lead;
    quo[static_cast<std::size_t>(shift)] = c;
    for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(shift + i)] -= c * b[static_cast<std::size_t>(i)];
    trim(rem);
  }
  trim(quo);
  return {quo, rem};
}

inline Poly make_monic(const Poly& p) {
  if (p.empty()) return p;
  Coeff inv = 1 / p.back();
  return scale(p, inv);
}

inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

// Returns s with s*a = 1 mod m; throws if a is not invertible modulo m.
inline Poly inverse_mod(const Poly& a, const Poly& m) {
  Poly r0 = m, r1 = divmod(a, m).second;
  Poly s0{}, s1{Coeff(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (degree(r0) != 0) throw std::domain_error("element not invertible modulo cyclotomic polynomial");
  return divmod(scale(s0, 1 / r0[0]), m).second;
}

// Cyclotomic data for Q(zeta_N): Phi_N and the reduction of zeta^j, 0 <= j < N.
struct Cyclotomic {
  int order = 1;
  Poly phi;
  std::vector<Poly> powers;
  std::vector<Poly> neg_powers;  // zeta^{-j}
};

namespace detail {

inline Poly cyclotomic_poly(int n, std::map<int, Poly>& memo) {
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  Poly p(static_cast<std::size_t>(n) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = divmod(p, cyclotomic_poly(d, memo)).first;
  }
  memo[n] = p;
  return p;
}

}  // namespace detail

inline std::shared_ptr<const Cyclotomic> cyclotomic(int order) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Cyclotomic>> cache;
  static std::map<int, Poly> memo;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  auto c = std::make_shared<Cyclotomic>();
  c->order = order;
  c->phi = detail::cyclotomic_poly(order, memo);
  c->powers.reserve(static_cast<std::size_t>(order));
  for (int j = 0; j < order; ++j) {
    Poly x(static_cast<std::size_t>(j) + 1);
    x[static_cast<std::size_t>(j)] = 1;
    c->powers.push_back(divmod(x, c->phi).second);
  }
  c->neg_powers.resize(static_cast<std::size_t>(order));
  for (int j = 0; j < order; ++j) c->neg_powers[static_cast<std::size_t>(j)] = c->powers[static_cast<std::size_t>((order - j) % order)];
  cache[order] = c;
  return c;
}

// Reduce an arbitrary polynomial (exponents offset by `shift`) into the cyclotomic basis.
inline Poly reduce_cyclotomic(const Poly& p, long long shift, const Cyclotomic& cyc) {
  const long long n = cyc.order;
  Poly r(cyc.phi.size() > 0 ? cyc.phi.size() - 1 : 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (sgn(p[i]) == 0) continue;
    long long e = ((static_cast<long long>(i) + shift) % n + n) % n;
    const Poly& red = cyc.powers[static_cast<std::size_t>(e)];
    for (std::size_t k = 0; k < red.size(); ++k) {
      if (sgn(red[k]) != 0) r[k] += p[i] * red[k];
    }
  }
  trim(r);
  return r;
}

}  // namespace qaut::poly
