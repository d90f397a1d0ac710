#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmf/field.hpp"
#include "rmf/linpoly.hpp"

namespace rmf {

enum class Family {
  GABIDULIN,
  TWISTED,
  TROMBETTI_ZHOU,
  OO_ADDITIVE,
  OO_NONLINEAR,
  C_SIGMA_T,
  EXPLICIT,
};

std::string family_name(Family f);

struct CodeParams {
  std::uint32_t k = 0;
  Elem eta = 0;
  Elem xi = 0;
  std::uint32_t q0 = 0;
  std::uint32_t h = 0;
  std::vector<std::uint32_t> labels;  // T or I, as subfield_elements positions
};

// A code is a finite set of sigma-polynomials with n coefficient slots.
// Constructors validate the family preconditions; enumeration is lazy,
// deduplicated, sorted by coefficient tuple, and size-asserted.
class RankCode {
 public:
  static RankCode gabidulin(const Field& f, std::uint32_t k);
  static RankCode twisted(const Field& f, std::uint32_t k, Elem eta, std::uint32_t h);
  static RankCode trombetti_zhou(const Field& f, std::uint32_t k, Elem xi);
  static RankCode oo_additive(const Field& f, std::uint32_t k, std::uint32_t q0,
                              Elem eta, std::uint32_t h);
  static RankCode oo_nonlinear(const Field& f, std::uint32_t k,
                               std::vector<std::uint32_t> i_labels);
  static RankCode c_sigma_t(const Field& f, std::uint32_t k,
                            std::vector<std::uint32_t> t_labels);
  static RankCode explicit_code(const Field& f, std::vector<std::vector<Elem>> words,
                                std::uint32_t claimed_distance);

  // Grammar: "gab:k=2", "tw:k=2,eta=17,h=0", "tz:k=1,xi=5",
  // "ooadd:k=1,q0=2,eta=9,h=1", "oonl:k=2,I=1", "cst:k=2,T=1,2".
  static RankCode parse_spec(const Field& f, std::string_view spec);

  const Field& field() const { return *field_; }
  Family family() const { return family_; }
  const CodeParams& params() const { return params_; }
  std::uint32_t claimed_distance() const { return claimed_distance_; }
  std::string spec_string() const;

  // q^{nk} for the constructed families, word count for EXPLICIT.
  std::uint64_t expected_size() const;

  bool member(const LinPoly& w) const;

  // Flat enumeration, n coefficients per word, sorted and deduplicated.
  const std::vector<Elem>& words() const;
  std::size_t size() const { return words().size() / field_->n(); }
  LinPoly word_at(std::size_t i) const;

 private:
  RankCode(const Field& f, Family fam) : field_(&f), family_(fam) {}
  void enumerate() const;

  const Field* field_;
  Family family_;
  CodeParams params_;
  std::uint32_t claimed_distance_ = 0;
  mutable std::vector<Elem> words_;
  mutable bool enumerated_ = false;

  // c_sigma_t cached data
  std::vector<Elem> t_set_;        // elements of T
  std::vector<std::uint64_t> ei_;  // exponents (q^{si}-1)/(q^s-1) mod Q-1
  // oo_nonlinear cached data
  std::vector<Elem> i_set_;        // norm values of I (0 allowed)
  std::vector<Elem> j_set_;        // (-1)^{n(k+1)} I
};

// Membership of a norm value in a set of F_q elements.
bool norm_in(const Field& f, Elem x, const std::vector<Elem>& set);

}  // namespace rmf
