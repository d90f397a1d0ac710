#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rmf {

// Field elements are integer indices in [0, Q): base-p packing of the
// power-basis coordinates of the modulus root. 0 is zero, 1 is one.
using Elem = std::uint32_t;

struct FieldSpec {
  std::uint32_t p = 0;  // characteristic
  std::uint32_t a = 0;  // q = p^a
  std::uint32_t n = 0;  // extension degree of F_{q^n} over F_q
  std::uint32_t s = 0;  // sigma: x -> x^{q^s}, gcd(s, n) = 1

  // Grammar: "p^a:n:s", e.g. "3^1:3:1".
  static FieldSpec parse(std::string_view text);
  std::string str() const;

  bool operator==(const FieldSpec&) const = default;
};

// Arithmetic context for the tower F_p <= F_q <= F_{q^n}.  The modulus is
// the first monic irreducible polynomial of degree a*n over F_p in index
// order (coefficients base-p packed, constant term least significant), so
// element encodings are reproducible across runs and platforms.
class Field {
 public:
  explicit Field(const FieldSpec& spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  std::uint32_t q() const { return q_; }
  std::uint32_t n() const { return spec_.n; }
  std::uint32_t ext_degree() const { return deg_; }  // a*n over F_p
  std::uint64_t order() const { return order_; }     // Q = q^n
  Elem generator() const { return gen_; }

  // Monic modulus, length a*n+1, constant term first.
  const std::vector<std::uint8_t>& modulus() const { return modulus_; }
  std::string modulus_str() const;

  Elem add(Elem x, Elem y) const;
  Elem sub(Elem x, Elem y) const;
  Elem neg(Elem x) const;
  Elem mul(Elem x, Elem y) const;
  Elem inv(Elem x) const;  // rejects 0
  Elem div(Elem x, Elem y) const;
  Elem pow(Elem x, std::uint64_t e) const;

  Elem frob(Elem x, std::uint32_t r = 1) const;       // x^{p^r}
  Elem sigma(Elem x, std::uint32_t i = 1) const;      // x^{q^{s*i}}, i mod n
  Elem norm(Elem x, std::uint32_t l = 1) const;       // N_{q^n/q^l}, l | n
  Elem trace(Elem x) const;                           // F_{q^n} -> F_q

  // All y with N_{q^n/q^l}(y) = a, via one generator pass; a in F_{q^l}*.
  std::vector<Elem> norm_fiber(Elem a, std::uint32_t l = 1) const;

  // 0 followed by g^{j*(Q-1)/(q^l-1)}, j = 0..q^l-2.  The positions in this
  // list are the integer labels used to encode subsets of F_{q^l}.
  std::vector<Elem> subfield_elements(std::uint32_t l) const;
  bool in_subfield(Elem x, std::uint32_t l = 1) const;  // x^{q^l} == x

  // Coordinates w.r.t. the F_q-basis B = (1, g, ..., g^{n-1}); entries are
  // elements of F_q.  out must hold n slots.
  void coords(Elem y, Elem* out) const;
  Elem from_coords(const Elem* c) const;

  // Direct Q x Q lookup tables, present when Q <= 4096.  Hot loops may
  // index sub_table()[x * Q + y] directly.
  bool has_direct_tables() const { return !sub_tab_.empty(); }
  const Elem* sub_table() const { return sub_tab_.data(); }

  std::uint64_t elem_count() const { return order_; }
  void check(Elem x) const;  // range guard

 private:
  Elem pow_raw(Elem x, std::uint64_t e) const;
  Elem mul_raw(Elem x, Elem y) const;
  Elem add_digits(Elem x, Elem y, bool negate_y) const;
  void build_tables();
  void build_coords();

  FieldSpec spec_;
  std::uint32_t q_ = 0;
  std::uint32_t deg_ = 0;
  std::uint64_t order_ = 0;
  std::vector<std::uint8_t> modulus_;
  Elem gen_ = 0;

  bool use_logs_ = false;
  std::vector<Elem> exp_;           // size 2(Q-1), doubled for wraparound
  std::vector<std::uint32_t> log_;  // size Q, log_[0] unused
  std::vector<Elem> sigma_tab_;     // n*Q when small enough
  std::vector<Elem> sub_tab_;       // Q*Q when Q <= 4096
  std::vector<std::uint8_t> coord_inv_;  // (a*n)^2 inverse over F_p
  std::vector<Elem> wpow_;          // powers of the F_q generator over F_p
};

}  // namespace rmf
