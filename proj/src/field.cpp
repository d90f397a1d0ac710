#include "rmf/field.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace rmf {
namespace {

using Poly = std::vector<std::uint8_t>;  // F_p[x], constant term first

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) {
    if (r > UINT64_MAX / b) throw std::invalid_argument("field order overflow");
    r *= b;
  }
  return r;
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly poly_mod(Poly f, const Poly& m, std::uint32_t p) {
  trim(f);
  const int dm = degree(m);
  while (degree(f) >= dm) {
    const int shift = degree(f) - dm;
    const std::uint32_t lead = f.back();
    // m is monic
    for (int i = 0; i <= dm; ++i)
      f[shift + i] =
          static_cast<std::uint8_t>((f[shift + i] + p - lead * m[i] % p) % p);
    trim(f);
  }
  return f;
}

Poly poly_mul_mod(const Poly& x, const Poly& y, const Poly& m, std::uint32_t p) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      r[i + j] = static_cast<std::uint8_t>((r[i + j] + x[i] * y[j]) % p);
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_pow_mod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mul_mod(r, base, m, p);
    base = poly_mul_mod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly x, Poly y, std::uint32_t p) {
  trim(x);
  trim(y);
  while (!y.empty()) {
    Poly r = x;
    // reduce r mod y (y not monic in general: scale)
    while (degree(r) >= degree(y)) {
      std::uint32_t inv = 1;
      for (std::uint32_t c = 1; c < p; ++c)
        if (c * y.back() % p == 1) inv = c;
      const std::uint32_t lead = static_cast<std::uint32_t>(r.back()) * inv % p;
      const int shift = degree(r) - degree(y);
      for (int i = 0; i <= degree(y); ++i)
        r[shift + i] = static_cast<std::uint8_t>((r[shift + i] + p - lead * y[i] % p) % p);
      trim(r);
    }
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d) continue;
    out.push_back(d);
    while (v % d == 0) v /= d;
  }
  if (v > 1) out.push_back(v);
  return out;
}

// Rabin test: f monic of degree d is irreducible over F_p iff
// x^{p^d} = x (mod f) and gcd(f, x^{p^{d/r}} - x) = 1 for every prime r | d.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  const int d = degree(f);
  if (d < 1) return false;
  if (d == 1) return true;
  if (f[0] == 0) return false;
  const Poly x{0, 1};
  for (const auto r : prime_factors(static_cast<std::uint64_t>(d))) {
    Poly h = poly_pow_mod(x, ipow(p, static_cast<std::uint32_t>(d / r)), f, p);
    if (h.size() < 2) h.resize(2, 0);
    h[1] = static_cast<std::uint8_t>((h[1] + p - 1) % p);  // h - x
    trim(h);
    if (degree(poly_gcd(f, h, p)) != 0) return false;
  }
  Poly t = poly_pow_mod(x, ipow(p, static_cast<std::uint32_t>(d)), f, p);
  trim(t);
  return t == x;
}

}  // namespace

FieldSpec FieldSpec::parse(std::string_view text) {
  FieldSpec fs;
  unsigned long p = 0, a = 0, n = 0, s = 0;
  const std::string t(text);
  if (std::sscanf(t.c_str(), "%lu^%lu:%lu:%lu", &p, &a, &n, &s) != 4)
    throw std::invalid_argument("bad field spec '" + t + "', expected p^a:n:s");
  fs.p = static_cast<std::uint32_t>(p);
  fs.a = static_cast<std::uint32_t>(a);
  fs.n = static_cast<std::uint32_t>(n);
  fs.s = static_cast<std::uint32_t>(s);
  return fs;
}

std::string FieldSpec::str() const {
  return std::to_string(p) + "^" + std::to_string(a) + ":" + std::to_string(n) +
         ":" + std::to_string(s);
}

Field::Field(const FieldSpec& spec) : spec_(spec) {
  if (!is_prime(spec_.p)) throw std::invalid_argument("p must be prime");
  if (spec_.a == 0 || spec_.n == 0 || spec_.s == 0)
    throw std::invalid_argument("a, n, s must be positive");
  if (std::gcd(spec_.s, spec_.n) != 1)
    throw std::invalid_argument("gcd(s, n) must be 1");
  deg_ = spec_.a * spec_.n;
  const std::uint64_t Q = ipow(spec_.p, deg_);
  if (Q > (1ull << 32))
    throw std::invalid_argument("field order exceeds element capacity 2^32");
  order_ = Q;
  q_ = static_cast<std::uint32_t>(ipow(spec_.p, spec_.a));

  // Modulus: first monic irreducible of degree a*n in index order.
  const std::uint32_t p = spec_.p;
  std::uint64_t low_count = ipow(p, deg_);
  for (std::uint64_t idx = 1; idx < low_count; ++idx) {
    if (idx % p == 0) continue;  // constant term must be nonzero
    Poly f(deg_ + 1, 0);
    std::uint64_t v = idx;
    for (std::uint32_t i = 0; i < deg_; ++i) {
      f[i] = static_cast<std::uint8_t>(v % p);
      v /= p;
    }
    f[deg_] = 1;
    if (is_irreducible(f, p)) {
      modulus_ = f;
      break;
    }
  }
  if (modulus_.empty()) throw std::invalid_argument("no modulus found");

  // Generator: smallest primitive element by index.
  const auto factors = prime_factors(order_ - 1);
  for (std::uint64_t c = 2; c < order_; ++c) {
    const Elem x = static_cast<Elem>(c);
    bool prim = true;
    for (const auto f : factors)
      if (pow_raw(x, (order_ - 1) / f) == 1) {
        prim = false;
        break;
      }
    if (prim) {
      gen_ = x;
      break;
    }
  }
  if (gen_ == 0) throw std::invalid_argument("no generator found");

  build_tables();
  build_coords();
}

std::string Field::modulus_str() const {
  std::string out;
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(modulus_[i]);
  }
  return out;
}

Elem Field::add_digits(Elem x, Elem y, bool negate_y) const {
  const std::uint32_t p = spec_.p;
  if (p == 2) return x ^ y;
  Elem out = 0;
  std::uint64_t mult = 1;
  for (std::uint32_t i = 0; i < deg_; ++i) {
    const std::uint32_t dx = x % p, dy = y % p;
    x /= p;
    y /= p;
    const std::uint32_t d = negate_y ? (dx + p - dy) % p : (dx + dy) % p;
    out += static_cast<Elem>(d * mult);
    mult *= p;
  }
  return out;
}

Elem Field::mul_raw(Elem x, Elem y) const {
  if (x == 0 || y == 0) return 0;
  const std::uint32_t p = spec_.p;
  Poly fx(deg_), fy(deg_);
  for (std::uint32_t i = 0; i < deg_; ++i) {
    fx[i] = static_cast<std::uint8_t>(x % p);
    x /= p;
    fy[i] = static_cast<std::uint8_t>(y % p);
    y /= p;
  }
  Poly r = poly_mul_mod(fx, fy, modulus_, p);
  Elem out = 0;
  std::uint64_t mult = 1;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += static_cast<Elem>(r[i] * mult);
    mult *= p;
  }
  return out;
}

Elem Field::pow_raw(Elem x, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul_raw(r, x);
    x = mul_raw(x, x);
    e >>= 1;
  }
  return r;
}

void Field::build_tables() {
  if (order_ <= (1u << 22)) {
    use_logs_ = true;
    const std::uint32_t Q = static_cast<std::uint32_t>(order_);
    exp_.resize(2 * (Q - 1));
    log_.assign(Q, 0);
    Elem v = 1;
    for (std::uint32_t i = 0; i < Q - 1; ++i) {
      exp_[i] = v;
      exp_[i + Q - 1] = v;
      log_[v] = i;
      v = mul_raw(v, gen_);
    }
  }
  if (use_logs_ && order_ * spec_.n <= (1u << 22)) {
    const std::uint32_t Q = static_cast<std::uint32_t>(order_);
    // exponent of sigma as a p-power, reduced since x^{p^{an}} = x
    const std::uint32_t r = (spec_.a * spec_.s) % deg_;
    const std::uint64_t pe = ipow(spec_.p, r);
    sigma_tab_.resize(static_cast<std::size_t>(spec_.n) * Q);
    for (std::uint32_t x = 0; x < Q; ++x) sigma_tab_[x] = x;  // sigma^0
    if (spec_.n > 1) {
      for (std::uint32_t x = 0; x < Q; ++x) sigma_tab_[Q + x] = pow(x, pe);
      for (std::uint32_t i = 2; i < spec_.n; ++i)
        for (std::uint32_t x = 0; x < Q; ++x)
          sigma_tab_[static_cast<std::size_t>(i) * Q + x] =
              sigma_tab_[Q + sigma_tab_[static_cast<std::size_t>(i - 1) * Q + x]];
    }
  }
  if (order_ <= 1024) {
    const std::uint32_t Q = static_cast<std::uint32_t>(order_);
    sub_tab_.resize(static_cast<std::size_t>(Q) * Q);
    for (std::uint32_t x = 0; x < Q; ++x)
      for (std::uint32_t y = 0; y < Q; ++y)
        sub_tab_[static_cast<std::size_t>(x) * Q + y] = add_digits(x, y, true);
  }
}

void Field::build_coords() {
  const std::uint32_t p = spec_.p, a = spec_.a, n = spec_.n;
  const Elem w = pow(gen_, (order_ - 1) / (q_ - 1));
  wpow_.resize(a);
  for (std::uint32_t t = 0; t < a; ++t) wpow_[t] = pow(w, t);

  // columns of M: F_p digits of w^t * g^j, index j*a + t
  const std::uint32_t d = deg_;
  std::vector<std::uint8_t> m(static_cast<std::size_t>(d) * d);
  for (std::uint32_t j = 0; j < n; ++j) {
    const Elem gj = pow(gen_, j);
    for (std::uint32_t t = 0; t < a; ++t) {
      Elem v = mul(wpow_[t], gj);
      for (std::uint32_t row = 0; row < d; ++row) {
        m[static_cast<std::size_t>(row) * d + (j * a + t)] =
            static_cast<std::uint8_t>(v % p);
        v /= p;
      }
    }
  }
  // Gauss-Jordan inverse over F_p
  std::vector<std::uint8_t> inv(static_cast<std::size_t>(d) * d, 0);
  for (std::uint32_t i = 0; i < d; ++i) inv[static_cast<std::size_t>(i) * d + i] = 1;
  auto at = [&](std::vector<std::uint8_t>& mm, std::uint32_t r, std::uint32_t c) -> std::uint8_t& {
    return mm[static_cast<std::size_t>(r) * d + c];
  };
  for (std::uint32_t col = 0; col < d; ++col) {
    std::uint32_t piv = col;
    while (piv < d && at(m, piv, col) == 0) ++piv;
    if (piv == d) throw std::invalid_argument("basis matrix singular");
    if (piv != col)
      for (std::uint32_t c = 0; c < d; ++c) {
        std::swap(at(m, piv, c), at(m, col, c));
        std::swap(at(inv, piv, c), at(inv, col, c));
      }
    std::uint32_t pinv = 1;
    for (std::uint32_t c = 1; c < p; ++c)
      if (c * at(m, col, col) % p == 1) pinv = c;
    for (std::uint32_t c = 0; c < d; ++c) {
      at(m, col, c) = static_cast<std::uint8_t>(at(m, col, c) * pinv % p);
      at(inv, col, c) = static_cast<std::uint8_t>(at(inv, col, c) * pinv % p);
    }
    for (std::uint32_t r = 0; r < d; ++r) {
      if (r == col || at(m, r, col) == 0) continue;
      const std::uint32_t f = at(m, r, col);
      for (std::uint32_t c = 0; c < d; ++c) {
        at(m, r, c) = static_cast<std::uint8_t>((at(m, r, c) + p * p - f * at(m, col, c)) % p);
        at(inv, r, c) = static_cast<std::uint8_t>((at(inv, r, c) + p * p - f * at(inv, col, c)) % p);
      }
    }
  }
  coord_inv_ = std::move(inv);
}

void Field::check(Elem x) const {
  if (x >= order_) throw std::invalid_argument("element out of field range");
}

Elem Field::add(Elem x, Elem y) const {
  check(x);
  check(y);
  return add_digits(x, y, false);
}

Elem Field::sub(Elem x, Elem y) const {
  check(x);
  check(y);
  if (!sub_tab_.empty())
    return sub_tab_[static_cast<std::size_t>(x) * order_ + y];
  return add_digits(x, y, true);
}

Elem Field::neg(Elem x) const { return sub(0, x); }

Elem Field::mul(Elem x, Elem y) const {
  check(x);
  check(y);
  if (x == 0 || y == 0) return 0;
  if (use_logs_) return exp_[log_[x] + log_[y]];
  return mul_raw(x, y);
}

Elem Field::inv(Elem x) const {
  check(x);
  if (x == 0) throw std::invalid_argument("inverse of zero");
  if (use_logs_) {
    const std::uint32_t Qm1 = static_cast<std::uint32_t>(order_ - 1);
    return exp_[(Qm1 - log_[x]) % Qm1];
  }
  return pow_raw(x, order_ - 2);
}

Elem Field::div(Elem x, Elem y) const { return mul(x, inv(y)); }

Elem Field::pow(Elem x, std::uint64_t e) const {
  check(x);
  if (x == 0) return e == 0 ? 1 : 0;
  if (use_logs_) {
    const std::uint64_t Qm1 = order_ - 1;
    return exp_[static_cast<std::uint64_t>(log_[x]) * (e % Qm1) % Qm1];
  }
  return pow_raw(x, e % (order_ - 1));
}

Elem Field::frob(Elem x, std::uint32_t r) const {
  return pow(x, ipow(spec_.p, r % deg_));
}

Elem Field::sigma(Elem x, std::uint32_t i) const {
  check(x);
  const std::uint32_t k = i % spec_.n;
  if (!sigma_tab_.empty())
    return sigma_tab_[static_cast<std::size_t>(k) * order_ + x];
  return frob(x, (spec_.a * spec_.s * k) % deg_);
}

Elem Field::norm(Elem x, std::uint32_t l) const {
  check(x);
  if (l == 0 || spec_.n % l)
    throw std::invalid_argument("norm target F_{q^l} needs l | n");
  if (x == 0) return 0;
  const std::uint64_t ql = ipow(q_, l);
  return pow(x, (order_ - 1) / (ql - 1));
}

Elem Field::trace(Elem x) const {
  check(x);
  Elem t = 0;
  Elem v = x;
  for (std::uint32_t i = 0; i < spec_.n; ++i) {
    t = add(t, v);
    v = frob(v, spec_.a);
  }
  return t;
}

std::vector<Elem> Field::norm_fiber(Elem a, std::uint32_t l) const {
  check(a);
  if (l == 0 || spec_.n % l)
    throw std::invalid_argument("norm fiber needs l | n");
  if (a == 0 || !in_subfield(a, l))
    throw std::invalid_argument("norm fiber value must lie in F_{q^l}*");
  std::vector<Elem> out;
  out.reserve((order_ - 1) / (ipow(q_, l) - 1));
  Elem v = 1;
  for (std::uint64_t i = 0; i < order_ - 1; ++i) {
    if (norm(v, l) == a) out.push_back(v);
    v = mul(v, gen_);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Elem> Field::subfield_elements(std::uint32_t l) const {
  if (l == 0 || spec_.n % l)
    throw std::invalid_argument("subfield F_{q^l} needs l | n");
  const std::uint64_t ql = ipow(q_, l);
  std::vector<Elem> out;
  out.reserve(ql);
  out.push_back(0);
  const std::uint64_t step = (order_ - 1) / (ql - 1);
  Elem v = 1;
  const Elem g_step = pow(gen_, step);
  for (std::uint64_t j = 0; j + 1 < ql; ++j) {
    out.push_back(v);
    v = mul(v, g_step);
  }
  return out;
}

bool Field::in_subfield(Elem x, std::uint32_t l) const {
  check(x);
  return pow(x, ipow(q_, l)) == x;
}

void Field::coords(Elem y, Elem* out) const {
  check(y);
  const std::uint32_t p = spec_.p, a = spec_.a, n = spec_.n, d = deg_;
  std::uint8_t digits[64];
  Elem v = y;
  for (std::uint32_t i = 0; i < d; ++i) {
    digits[i] = static_cast<std::uint8_t>(v % p);
    v /= p;
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    Elem c = 0;
    for (std::uint32_t t = 0; t < a; ++t) {
      std::uint32_t acc = 0;
      const std::uint32_t row = j * a + t;
      for (std::uint32_t i = 0; i < d; ++i)
        acc += coord_inv_[static_cast<std::size_t>(row) * d + i] * digits[i];
      c = add(c, mul(static_cast<Elem>(acc % p), wpow_[t]));
    }
    out[j] = c;
  }
}

Elem Field::from_coords(const Elem* c) const {
  Elem y = 0;
  Elem gj = 1;
  for (std::uint32_t j = 0; j < spec_.n; ++j) {
    y = add(y, mul(c[j], gj));
    gj = mul(gj, gen_);
  }
  return y;
}

}  // namespace rmf
