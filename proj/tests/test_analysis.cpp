#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "rmf/analysis.hpp"

using namespace rmf;

namespace {

const Field& f23() {
  static Field f(FieldSpec::parse("2^1:3:1"));
  return f;
}
const Field& f33() {
  static Field f(FieldSpec::parse("3^1:3:1"));
  return f;
}
const Field& f24() {
  static Field f(FieldSpec::parse("2^1:4:1"));
  return f;
}

using Dist = std::map<std::uint32_t, std::uint64_t>;

std::vector<std::vector<Elem>> unflatten(const std::vector<Elem>& flat, std::uint32_t n) {
  std::vector<std::vector<Elem>> out;
  out.reserve(flat.size() / n);
  for (std::size_t i = 0; i + n <= flat.size(); i += n) {
    out.emplace_back(flat.begin() + i, flat.begin() + i + n);
  }
  return out;
}

// all words c X^{sigma^slot}, flat in ascending scalar order, which is the
// canonical word order when only one slot varies
std::vector<Elem> monomial_line(const Field& f, std::uint32_t slot) {
  std::vector<Elem> flat;
  for (std::uint64_t c = 0; c < f.order(); ++c) {
    std::vector<Elem> w(f.n(), 0);
    w[slot] = static_cast<Elem>(c);
    flat.insert(flat.end(), w.begin(), w.end());
  }
  return flat;
}

LinPoly random_poly(const Field& f, std::mt19937_64& rng) {
  std::vector<Elem> cs(f.n());
  for (auto& c : cs) c = static_cast<Elem>(rng() % f.order());
  return LinPoly(f, cs);
}

LinPoly random_invertible(const Field& f, std::mt19937_64& rng) {
  while (true) {
    LinPoly p = random_poly(f, rng);
    if (is_invertible(p)) return p;
  }
}

EquivalenceMap random_map(const Field& f, std::mt19937_64& rng, bool allow_adjoint) {
  return {random_invertible(f, rng), random_invertible(f, rng), random_poly(f, rng),
          static_cast<std::uint32_t>(rng() % f.spec().a),
          allow_adjoint && (rng() & 1) != 0};
}

Mat mat2(const Field&, std::array<Elem, 4> e) {
  Mat m(2, 2);
  m.at(0, 0) = e[0];
  m.at(0, 1) = e[1];
  m.at(1, 0) = e[2];
  m.at(1, 1) = e[3];
  return m;
}

}  // namespace

TEST_CASE("singleton_bound: values, symmetry, guards") {
  CHECK(singleton_bound(3, 3, 2, 2) == 64);
  CHECK(singleton_bound(3, 3, 3, 2) == 729);
  CHECK(singleton_bound(3, 4, 2, 2) == 256);
  CHECK(singleton_bound(4, 3, 2, 2) == 256);
  CHECK(singleton_bound(3, 3, 2, 1) == 512);
  CHECK(singleton_bound(4, 4, 3, 1) == 43046721);
  CHECK_THROWS_AS(singleton_bound(3, 3, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(singleton_bound(3, 4, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(singleton_bound(8, 8, 1000000007ull, 1), std::overflow_error);
}

TEST_CASE("min_distance exhaustive: gab k=2 over 2^1:3:1") {
  const auto code = RankCode::parse_spec(f23(), "gab:k=2");
  REQUIRE(code.size() == 64);

  const auto res = min_distance(code, DistanceMode::EXHAUSTIVE);
  CHECK(res.distance == 2);
  CHECK(res.certified);
  CHECK(res.pairs == 2016);
  CHECK(res.distribution == Dist{{2, 1568}, {3, 448}});

  // the same profile through single-word ranks: 49 of rank 2, 14 of rank 3
  Dist word_ranks;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const auto r = rank(code.word_at(i));
    if (r > 0) ++word_ranks[r];
  }
  CHECK(word_ranks == Dist{{2, 49}, {3, 14}});

  CHECK(is_mrd(code));
  CHECK(is_mrd(code, res));
  CHECK(fqn_closed(code));
}

TEST_CASE("min_distance quotient: equals exhaustive on closed codes") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  const auto ex = min_distance(gab, DistanceMode::EXHAUSTIVE);
  const auto qu = min_distance(gab, DistanceMode::QUOTIENT);
  CHECK(qu.distance == ex.distance);
  CHECK(qu.distribution == ex.distribution);
  CHECK(qu.certified);

  const auto cst = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto cex = min_distance(cst, DistanceMode::EXHAUSTIVE);
  const auto cqu = min_distance(cst, DistanceMode::QUOTIENT);
  CHECK(cex.distribution == Dist{{2, 123201}, {3, 142155}});
  CHECK(cqu.distribution == cex.distribution);
  CHECK(cqu.distance == 2);
}

TEST_CASE("min_distance quotient: refuses codes without scalar closure") {
  const auto oonl = RankCode::parse_spec(f33(), "oonl:k=2,I=1");
  CHECK_THROWS_AS(min_distance(oonl, DistanceMode::QUOTIENT), std::invalid_argument);

  // translating a linear code off the origin breaks closure the same way
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  EquivalenceMap shift = identity_equivalence(f23());
  shift.h = LinPoly::monomial(f23(), 1, 2);
  const auto moved = apply_equivalence(gab, shift);
  CHECK_FALSE(fqn_closed(moved));
  CHECK_THROWS_AS(min_distance(moved, DistanceMode::QUOTIENT), std::invalid_argument);
}

TEST_CASE("min_distance: needs two words") {
  const auto one = RankCode::explicit_code(f23(), {{0, 0, 0}}, 1);
  CHECK_THROWS_AS(min_distance(one, DistanceMode::EXHAUSTIVE), std::invalid_argument);
}

TEST_CASE("min_distance sampled: deterministic per seed, never certifies") {
  const auto code = RankCode::parse_spec(f23(), "gab:k=2");
  const auto a = min_distance(code, DistanceMode::SAMPLED, 7, 300);
  const auto b = min_distance(code, DistanceMode::SAMPLED, 7, 300);
  CHECK_FALSE(a.certified);
  CHECK(a.pairs == 300);
  CHECK(a.distribution == b.distribution);
  std::uint64_t total = 0;
  for (const auto& [r, c] : a.distribution) {
    CHECK((r == 2 || r == 3));  // every real pair has one of the true ranks
    total += c;
  }
  CHECK(total == 300);
  CHECK_THROWS_AS(is_mrd(code, a), std::invalid_argument);
}

TEST_CASE("cst k=2 T={1} over 3^1:3:1: certified MRD, closed, not additive") {
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  REQUIRE(code.size() == 729);

  const auto res = min_distance(code, DistanceMode::QUOTIENT);
  CHECK(res.distance == 2);
  CHECK(res.distribution == Dist{{2, 123201}, {3, 142155}});
  CHECK(is_mrd(code, res));

  const auto flags = closure_flags(code);
  CHECK(flags.fqn_closed);
  CHECK(flags.fq_closed);
  CHECK_FALSE(flags.additive);
  CHECK_FALSE(flags.fq_linear);
  REQUIRE(flags.additive_witness.has_value());
  const auto& [wa, wb] = *flags.additive_witness;
  CHECK(code.member(wa));
  CHECK(code.member(wb));
  CHECK_FALSE(code.member(add(wa, wb)));

  // witness choice is deterministic
  const auto again = closure_flags(code);
  REQUIRE(again.additive_witness.has_value());
  CHECK(again.additive_witness->first == wa);
  CHECK(again.additive_witness->second == wb);

  const auto aff = is_affine(code);
  REQUIRE(aff.affine.has_value());
  CHECK_FALSE(*aff.affine);
  CHECK_FALSE(aff.witness.has_value());
}

TEST_CASE("cst k=2 T={1,2} over 3^1:3:1: additive, affine, same profile as gab") {
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1,2");
  const auto gab = RankCode::parse_spec(f33(), "gab:k=2");
  REQUIRE(code.size() == 729);

  const auto res = min_distance(code, DistanceMode::QUOTIENT);
  const auto gres = min_distance(gab, DistanceMode::QUOTIENT);
  CHECK(res.distribution == Dist{{2, 123201}, {3, 142155}});
  CHECK(res.distribution == gres.distribution);

  const auto flags = closure_flags(code);
  CHECK(flags.additive);
  CHECK(flags.fq_linear);
  CHECK(flags.fqn_closed);
  CHECK_FALSE(flags.additive_witness.has_value());

  const auto aff = is_affine(code);
  REQUIRE(aff.affine.has_value());
  CHECK(*aff.affine);
  REQUIRE(aff.witness.has_value());
  CHECK(aff.witness->is_zero());
}

TEST_CASE("oonl k=2 I={1} over 3^1:3:1: MRD without any linear structure") {
  const auto code = RankCode::parse_spec(f33(), "oonl:k=2,I=1");
  REQUIRE(code.size() == 729);
  CHECK(code.member(LinPoly::monomial(f33(), 1, 0)));
  CHECK_FALSE(code.member(LinPoly::monomial(f33(), 2, 0)));

  const auto res = min_distance(code, DistanceMode::EXHAUSTIVE);
  CHECK(res.distance == 2);
  CHECK(res.distribution == Dist{{2, 123201}, {3, 142155}});
  CHECK(is_mrd(code, res));

  const auto flags = closure_flags(code);
  CHECK_FALSE(flags.fq_closed);
  CHECK_FALSE(flags.fqn_closed);
  CHECK_FALSE(flags.additive);
  CHECK_FALSE(flags.fq_linear);
  REQUIRE(flags.fq_witness.has_value());
  CHECK(flags.fq_witness->first == 2);  // 0 and 1 always pass, 2 is the first failure
  const LinPoly& w = flags.fq_witness->second;
  CHECK(code.member(w));
  CHECK_FALSE(code.member(scale(2, w)));

  const auto aff = is_affine(code);
  REQUIRE(aff.affine.has_value());
  CHECK_FALSE(*aff.affine);
}

TEST_CASE("census: oonl holds exactly one embedded line, the sigma monomials") {
  const auto code = RankCode::parse_spec(f33(), "oonl:k=2,I=1");
  const auto entries = gabidulin_subspace_census(code, 1);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].words == monomial_line(f33(), 1));
  CHECK(is_invertible(entries[0].f));
  CHECK(is_invertible(entries[0].g));
}

TEST_CASE("census: cst counts over 3^1:3:1 and the adjoint code agree") {
  const auto cst1 = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto entries = gabidulin_subspace_census(cst1, 1);
  CHECK(entries.size() == 28);

  // the two monomial lines inside the code
  bool has_top = false, has_id = false;
  for (const auto& e : entries) {
    if (e.words == monomial_line(f33(), 2)) has_top = true;
    if (e.words == monomial_line(f33(), 0)) has_id = true;
    CHECK(e.words.size() == 27 * 3);  // q^n words of n slots each
  }
  CHECK(has_top);
  CHECK(has_id);

  const auto cst12 = RankCode::parse_spec(f33(), "cst:k=2,T=1,2");
  CHECK(gabidulin_subspace_census(cst12, 1).size() == 28);

  const auto gab = RankCode::parse_spec(f33(), "gab:k=2");
  CHECK(gabidulin_subspace_census(gab, 1, 3).size() == 28);

  CHECK(gabidulin_subspace_census(adjoint_code(cst1), 1, 3).size() == 28);
}

TEST_CASE("census: guards on rank, ambient and budget") {
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  CHECK_THROWS_AS(gabidulin_subspace_census(code, 0), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_subspace_census(code, 4), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_subspace_census(code, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_subspace_census(code, 1, std::nullopt, 10),
                  std::invalid_argument);
}

TEST_CASE("cst k=3 over 2^1:4:1 contains both shifted gab copies") {
  const auto code = RankCode::parse_spec(f24(), "cst:k=3,T=1");
  REQUIRE(code.size() == 4096);
  const Field& f = f24();

  // first copy: a x^{s^2} + b x^{s^3}; second: a x^{s^3} + b x (s^4 = id)
  std::set<std::vector<Elem>> first, second;
  for (Elem a = 0; a < 16; ++a) {
    for (Elem b = 0; b < 16; ++b) {
      first.insert({0, 0, a, b});
      second.insert({b, 0, 0, a});
    }
  }
  for (const auto& w : first) CHECK(code.member(LinPoly(f, w)));
  for (const auto& w : second) CHECK(code.member(LinPoly(f, w)));

  // their intersection is exactly the top monomial line
  std::vector<std::vector<Elem>> meet;
  std::set_intersection(first.begin(), first.end(), second.begin(), second.end(),
                        std::back_inserter(meet));
  std::set<std::vector<Elem>> expected;
  for (Elem c = 0; c < 16; ++c) expected.insert({0, 0, 0, c});
  CHECK(std::set<std::vector<Elem>>(meet.begin(), meet.end()) == expected);

  // the census sees that line as an embedded 1-dimensional image
  const auto entries = gabidulin_subspace_census(code, 1, 4);
  bool found = false;
  for (const auto& e : entries) {
    if (e.words == monomial_line(f, 3)) found = true;
  }
  CHECK(found);
  CHECK(entries.size() >= 2);
}

TEST_CASE("puncture: one slot off cst k=3 over 2^1:4:1 collapses to 256 words") {
  const auto code = RankCode::parse_spec(f24(), "cst:k=3,T=1");
  const auto pc = puncture_code(code, 1);
  CHECK(pc.m == 3);
  CHECK(pc.size() == 256);
  CHECK(pc.claimed_distance == 1);  // generic floor; the measured value is higher

  const auto row = punctured_min_distance(pc);
  CHECK(row.distance == 2);
  CHECK(row.distribution == Dist{{2, 28800}, {3, 3840}});
  CHECK(row.pairs == 32640);
  CHECK(is_mrd(pc, row));

  const auto sec = punctured_min_distance_secant(pc);
  CHECK(sec.distance == row.distance);
  CHECK(sec.distribution == row.distribution);

  const auto m0 = pc.word_matrix(0);
  CHECK(m0.rows == 3);
  CHECK(m0.cols == 4);

  CHECK(truncated_sigma_set(f24(), 3).size() == 15);

  CHECK_THROWS_AS(puncture_code(code, 0), std::invalid_argument);
  CHECK_THROWS_AS(puncture_code(code, 4), std::invalid_argument);
}

TEST_CASE("puncture: partial collapse on cst k=2 over 3^1:3:1") {
  // fibre profile over the first two slots: 338 singletons, 26 words with
  // 14 preimages, one with 27, so 729 -> 365
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto pc = puncture_code(code, 1);
  CHECK(pc.m == 2);
  CHECK(pc.size() == 365);
  CHECK(pc.claimed_distance == 1);
}

TEST_CASE("truncated ranks: completion scan equals secant and dickson rank") {
  const auto code = RankCode::parse_spec(f24(), "cst:k=3,T=1");
  const auto pc = puncture_code(code, 1);
  const auto sigma3 = truncated_sigma_set(f24(), 3);
  for (std::size_t i = 0; i < pc.size(); i += 7) {
    const Elem* slots = &pc.words[i * pc.m];
    const auto by_completion = truncated_rank(f24(), slots, pc.m);
    const auto by_secant = truncated_secant_rank(f24(), slots, pc.m, sigma3);
    CHECK(by_completion == by_secant);
  }

  // full length: the secant rank of (w, w^s, ..., applied) matches dickson
  const auto cst33 = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto sigma_full = truncated_sigma_set(f33(), 3);
  for (std::size_t i = 0; i < cst33.size(); i += 13) {
    const auto w = cst33.word_at(i);
    const auto by_secant =
        truncated_secant_rank(f33(), w.coeffs().data(), 3, sigma_full);
    CHECK(by_secant == rank(w));
    CHECK(truncated_rank(f33(), w.coeffs().data(), 3) == rank(w));
  }
}

TEST_CASE("adjoint code: involution preserving the distance profile") {
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto adj = adjoint_code(code);
  CHECK(adj.size() == code.size());
  CHECK(adjoint_code(adj).words() == code.words());

  const auto res = min_distance(adj, DistanceMode::EXHAUSTIVE);
  CHECK(res.distribution == Dist{{2, 123201}, {3, 142155}});

  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const LinPoly w = random_poly(f33(), rng);
    CHECK(rank(adjoint(w)) == rank(w));
    CHECK(adjoint(adjoint(w)) == w);
  }
}

TEST_CASE("apply_equivalence: identity fixes, random maps preserve the profile") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  CHECK(apply_equivalence(gab, identity_equivalence(f23())).words() == gab.words());

  const auto base = min_distance(gab, DistanceMode::EXHAUSTIVE).distribution;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 12; ++i) {
    const auto e = random_map(f23(), rng, true);
    const auto moved = apply_equivalence(gab, e);
    CHECK(moved.size() == gab.size());
    CHECK(min_distance(moved, DistanceMode::EXHAUSTIVE).distribution == base);
  }

  const auto cst = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto cbase = min_distance(cst, DistanceMode::EXHAUSTIVE).distribution;
  for (int i = 0; i < 8; ++i) {
    const auto e = random_map(f33(), rng, false);
    const auto moved = apply_equivalence(cst, e);
    CHECK(moved.size() == cst.size());
    CHECK(min_distance(moved, DistanceMode::EXHAUSTIVE).distribution == cbase);
  }
}

TEST_CASE("apply_equivalence: rejects singular maps, reduces the field power") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  EquivalenceMap bad = identity_equivalence(f23());
  bad.f = LinPoly(f23(), {1, 1, 1});  // trace map, rank 1
  REQUIRE(rank(bad.f) == 1);
  CHECK_THROWS_AS(apply_equivalence(gab, bad), std::invalid_argument);

  // rho is an exponent modulo a=2 here: rho = 2 acts as the identity
  const Field f43(FieldSpec::parse("2^2:3:2"));
  const auto g43 = RankCode::parse_spec(f43, "gab:k=1");
  std::mt19937_64 rng(5);
  EquivalenceMap e = random_map(f43, rng, false);
  e.rho = 2;
  EquivalenceMap e0 = e;
  e0.rho = 0;
  CHECK(apply_equivalence(g43, e).words() == apply_equivalence(g43, e0).words());
  e.rho = 1;
  CHECK(min_distance(apply_equivalence(g43, e), DistanceMode::EXHAUSTIVE).distribution ==
        min_distance(g43, DistanceMode::EXHAUSTIVE).distribution);
}

TEST_CASE("compose_equivalences: star product matches sequential application") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto e1 = random_map(f23(), rng, false);
    const auto e2 = random_map(f23(), rng, false);
    const auto two_steps = apply_equivalence(apply_equivalence(gab, e1), e2);
    const auto one_step =
        apply_equivalence(gab, compose_equivalences(f23(), e1, e2));
    CHECK(two_steps.words() == one_step.words());
  }

  // composing with the identity changes nothing
  const auto e = random_map(f23(), rng, false);
  const auto id = identity_equivalence(f23());
  CHECK(apply_equivalence(gab, compose_equivalences(f23(), e, id)).words() ==
        apply_equivalence(gab, e).words());

  EquivalenceMap adj = identity_equivalence(f23());
  adj.adjoint_first = true;
  CHECK_THROWS_AS(compose_equivalences(f23(), adj, id), std::invalid_argument);
}

TEST_CASE("idealisers: two-word matrix codes over the prime field of five") {
  const Field f5(FieldSpec::parse("5^1:1:1"));
  const std::vector<Elem> dom{0, 1, 2, 3, 4};

  const Mat A = mat2(f5, {1, 2, 3, 4});
  const Mat B = mat2(f5, {3, 4, 3, 4});
  const std::vector<Mat> c1{A, B};

  const auto i1 = left_idealiser_mats(f5, c1, dom);
  REQUIRE(i1.elements.size() == 2);
  CHECK(i1.elements[0].data == std::vector<Elem>{0, 1, 0, 1});
  CHECK(i1.elements[1].data == std::vector<Elem>{1, 0, 0, 1});
  CHECK_FALSE(i1.is_field);

  // translate both words by the same matrix: the idealiser blows up
  const Mat D = mat2(f5, {0, 0, 2, 1});
  const std::vector<Mat> c2{mat_add(A, D, f5), mat_add(B, D, f5)};
  const auto i2 = left_idealiser_mats(f5, c2, dom);
  CHECK(i2.elements.size() == 25);
  std::vector<std::vector<Elem>> expected;
  for (Elem a = 0; a < 5; ++a) {
    for (Elem b = 0; b < 5; ++b) expected.push_back({1, a, 0, b});
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(i2.elements[i].data == expected[i]);
  }
  CHECK_FALSE(i2.is_field);
  CHECK(i1.elements.size() < i2.elements.size());

  CHECK(right_idealiser_mats(f5, c1, dom).elements.size() == 2);
  CHECK(right_idealiser_mats(f5, c2, dom).elements.size() == 4);
}

TEST_CASE("idealisers: scalar multiplications fill the left idealiser of gab") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  const auto il = left_idealiser(gab);
  std::vector<std::vector<Elem>> mult;
  for (Elem lam = 0; lam < 8; ++lam) {
    mult.push_back(matrix_rep(LinPoly::monomial(f23(), lam, 0)).data);
  }
  std::sort(mult.begin(), mult.end());
  REQUIRE(il.elements.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(il.elements[i].data == mult[i]);
  CHECK(il.is_field);
  CHECK(right_idealiser(gab).elements.size() == 8);

  const auto cst = RankCode::parse_spec(f23(), "cst:k=2,T=1");
  REQUIRE(cst.size() == 64);
  const auto cl = left_idealiser(cst);
  REQUIRE(cl.elements.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(cl.elements[i].data == mult[i]);
  CHECK(cl.is_field);
}

TEST_CASE("idealisers: ambient guard trips on 3^1:4:1") {
  const Field f34(FieldSpec::parse("3^1:4:1"));
  const auto code = RankCode::parse_spec(f34, "gab:k=1");
  CHECK_THROWS_AS(left_idealiser(code), std::invalid_argument);  // 3^16 candidates
}

TEST_CASE("inequivalence: census separates cst from oonl at equal profiles") {
  const auto cst = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto oonl = RankCode::parse_spec(f33(), "oonl:k=2,I=1");
  const auto rep = inequivalence_report(cst, oonl);
  CHECK(rep.size1 == rep.size2);
  CHECK(rep.dist1 == rep.dist2);
  REQUIRE(rep.affine1.has_value());
  REQUIRE(rep.affine2.has_value());
  CHECK_FALSE(*rep.affine1);
  CHECK_FALSE(*rep.affine2);
  REQUIRE(rep.census1.has_value());
  REQUIRE(rep.census2.has_value());
  CHECK(*rep.census1 == 28);
  CHECK(*rep.census2 == 1);
  CHECK(rep.verdict == Verdict::DISTINGUISHED);
  CHECK(rep.invariant == "gabidulin subspace census");
  CHECK(verdict_line(rep) == "DISTINGUISHED(gabidulin subspace census: 28 vs 1)");
}

TEST_CASE("inequivalence: affineness separates gab from cst with a small norm set") {
  const auto gab = RankCode::parse_spec(f33(), "gab:k=2");
  const auto cst = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto rep = inequivalence_report(gab, cst);
  CHECK(rep.dist1 == rep.dist2);  // identical distance distributions
  CHECK(rep.verdict == Verdict::DISTINGUISHED);
  CHECK(rep.invariant == "affineness");
  CHECK(rep.value1 == "affine");
  CHECK(rep.value2 == "not affine");
}

TEST_CASE("inequivalence: stays inconclusive when every invariant matches") {
  const auto gab = RankCode::parse_spec(f33(), "gab:k=2");
  const auto cst12 = RankCode::parse_spec(f33(), "cst:k=2,T=1,2");
  const auto rep = inequivalence_report(gab, cst12);
  CHECK(rep.verdict == Verdict::INCONCLUSIVE);
  CHECK(verdict_line(rep) == "INCONCLUSIVE");
  // census counts agree here and both codes are additive, so the census
  // cannot drive a verdict either way
  if (rep.census1 && rep.census2) CHECK(*rep.census1 == *rep.census2);
  CHECK(rep.flags1.additive);
  CHECK(rep.flags2.additive);

  const auto self = inequivalence_report(cst12, cst12);
  CHECK(self.verdict == Verdict::INCONCLUSIVE);

  const auto gab23 = RankCode::parse_spec(f23(), "gab:k=2");
  CHECK_THROWS_AS(inequivalence_report(gab23, cst12), std::invalid_argument);
}

TEST_CASE("analyze_code and report_json: schema, values, determinism") {
  const auto code = RankCode::parse_spec(f33(), "cst:k=2,T=1");
  const auto rep = analyze_code(code, DistanceMode::QUOTIENT);
  CHECK(rep.family == "c_sigma_t");
  CHECK(rep.params == "cst:k=2,T=1");
  CHECK(rep.size == 729);
  CHECK(rep.singleton == 729);
  CHECK(rep.mrd);
  CHECK(rep.dist.distance == 2);
  CHECK(rep.runtime > 0.0);

  const std::string text = report_json(rep);
  CHECK(text == report_json(rep));  // byte-identical on repeat
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("family") == "c_sigma_t");
  CHECK(j.at("params") == "cst:k=2,T=1");
  CHECK(j.at("size") == 729);
  CHECK(j.at("singleton_bound") == 729);
  CHECK(j.at("min_distance") == 2);
  CHECK(j.at("is_mrd") == true);
  CHECK(j.at("mode") == "quotient");
  CHECK(j.at("certified") == true);
  CHECK(j.at("seed") == 0);
  CHECK(j.at("distance_distribution").at("2") == 123201);
  CHECK(j.at("distance_distribution").at("3") == 142155);
  CHECK(j.at("flags").at("additive") == false);
  CHECK(j.at("flags").at("fq_closed") == true);
  CHECK(j.at("flags").at("fq_linear") == false);
  CHECK(j.at("flags").at("fqn_closed") == true);
  CHECK(j.at("flags").at("affine_witness").is_null());
  CHECK_FALSE(j.contains("runtime"));

  const auto timed = nlohmann::json::parse(report_json(rep, true));
  CHECK(timed.contains("runtime"));

  // sampled reports exist but cannot claim certification
  const auto srep = analyze_code(code, DistanceMode::SAMPLED, 11, 200);
  CHECK_FALSE(srep.dist.certified);
  CHECK_FALSE(srep.mrd);
  const auto sj = nlohmann::json::parse(report_json(srep));
  CHECK(sj.at("certified") == false);
  CHECK(sj.at("seed") == 11);
}

TEST_CASE("negative control: one corrupted word destroys certification") {
  const auto gab = RankCode::parse_spec(f23(), "gab:k=2");
  auto words = unflatten(gab.words(), 3);
  REQUIRE(words.size() == 64);

  // the all-ones coefficient vector is the trace map, the canonical rank-1
  // word, and it lies outside gab k=2 because its top slot is nonzero
  const LinPoly trace(f23(), {1, 1, 1});
  REQUIRE(rank(trace) == 1);
  REQUIRE_FALSE(gab.member(trace));

  std::vector<Elem> tainted = words[5];
  for (std::uint32_t t = 0; t < 3; ++t) {
    tainted[t] = f23().add(tainted[t], trace.coeff(t));
  }
  words.push_back(tainted);
  const auto bad = RankCode::explicit_code(f23(), std::move(words), 2);
  CHECK(bad.size() == 65);

  const auto res = min_distance(bad, DistanceMode::EXHAUSTIVE);
  CHECK(res.distance == 1);
  CHECK_FALSE(is_mrd(bad, res));
  CHECK_FALSE(is_mrd(bad));

  // a false claim alone also fails certification
  const auto overclaimed = RankCode::explicit_code(f23(), unflatten(gab.words(), 3), 3);
  CHECK_FALSE(is_mrd(overclaimed));
}

TEST_CASE("affine scan: budget overflow reports inconclusive") {
  // needs a non-additive code or the span shortcut answers regardless of budget
  const Field f53(FieldSpec::parse("5^1:3:1"));
  const auto code = RankCode::parse_spec(f53, "cst:k=2,T=1");  // 15625 words
  const auto aff = is_affine(code, 1000);
  CHECK_FALSE(aff.affine.has_value());
  CHECK_FALSE(aff.witness.has_value());

  // additive codes shortcut the scan regardless of budget
  const auto gab = RankCode::parse_spec(f24(), "gab:k=3");
  const auto gaff = is_affine(gab, 1000);
  REQUIRE(gaff.affine.has_value());
  CHECK(*gaff.affine);
}
