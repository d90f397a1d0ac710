#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "rmf/linpoly.hpp"

using namespace rmf;

namespace {

LinPoly random_poly(const Field& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(f.order() - 1));
  std::vector<Elem> c(f.n());
  for (auto& ci : c) ci = d(rng);
  return LinPoly(f, std::move(c));
}

// Oracle: rank via image size, n - log_q |kernel|.
std::uint32_t rank_by_image(const LinPoly& a) {
  const Field& f = a.field();
  std::set<Elem> image;
  for (Elem x = 0; x < f.order(); ++x) image.insert(evaluate(a, x));
  std::uint64_t size = image.size();
  std::uint32_t r = 0;
  while (size > 1) {
    size /= f.q();
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("evaluate basics") {
  const Field f(FieldSpec{2, 1, 3, 1});
  const LinPoly id = LinPoly::identity(f);
  for (Elem x = 0; x < 8; ++x) CHECK(evaluate(id, x) == x);

  // X^2 + X vanishes exactly on F_2
  const LinPoly a(f, {1, 1, 0});
  std::set<Elem> kernel;
  for (Elem x = 0; x < 8; ++x)
    if (evaluate(a, x) == 0) kernel.insert(x);
  CHECK(kernel == std::set<Elem>{0, 1});
}

TEST_CASE("evaluate is additive") {
  const Field f(FieldSpec{3, 1, 3, 1});
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::uint32_t> d(0, 26);
  for (int i = 0; i < 100; ++i) {
    const LinPoly a = random_poly(f, rng);
    const Elem x = d(rng), y = d(rng);
    CHECK(evaluate(a, f.add(x, y)) == f.add(evaluate(a, x), evaluate(a, y)));
    CHECK(evaluate(a, 0) == 0);
  }
}

TEST_CASE("compose matches pointwise evaluation") {
  const Field f(FieldSpec{2, 1, 3, 1});
  // X^2 composed with X^2 + X
  const LinPoly sq = LinPoly::monomial(f, 1, 1);
  const LinPoly ab(f, {1, 1, 0});
  const LinPoly c = compose(sq, ab);
  CHECK(c == LinPoly(f, {0, 1, 1}));  // X^4 + X^2, sigma-slots 1 and 2
  for (Elem x = 0; x < 8; ++x)
    CHECK(evaluate(c, x) == evaluate(sq, evaluate(ab, x)));
}

TEST_CASE("compose: identity, exponent addition, full-domain agreement") {
  for (const auto& spec : {FieldSpec{2, 1, 3, 1}, FieldSpec{5, 1, 3, 1},
                           FieldSpec{3, 1, 4, 3}}) {
    const Field f(spec);
    const LinPoly id = LinPoly::identity(f);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      const LinPoly a = random_poly(f, rng), b = random_poly(f, rng);
      CHECK(compose(a, id) == a);
      CHECK(compose(id, a) == a);
      const LinPoly c = compose(a, b);
      for (Elem x = 0; x < f.order(); ++x)
        CHECK(evaluate(c, x) == evaluate(a, evaluate(b, x)));
    }
    const LinPoly xs = LinPoly::monomial(f, 1, 1);
    CHECK(compose(xs, xs) == LinPoly::monomial(f, 1, 2 % f.n()));
  }
}

TEST_CASE("compose is associative") {
  const Field f(FieldSpec{3, 1, 3, 2});
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const LinPoly a = random_poly(f, rng), b = random_poly(f, rng),
                  c = random_poly(f, rng);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("adjoint formula, involution, trace pairing") {
  const Field f(FieldSpec{2, 1, 4, 1});
  const LinPoly a0 = LinPoly::monomial(f, 5, 0);
  CHECK(adjoint(a0) == a0);
  const LinPoly xs = LinPoly::monomial(f, 1, 1);
  CHECK(adjoint(xs) == LinPoly::monomial(f, 1, 3));  // X^{sigma^{n-1}}

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint32_t> d(0, 15);
  for (int i = 0; i < 100; ++i) {
    const LinPoly a = random_poly(f, rng);
    CHECK(adjoint(adjoint(a)) == a);
    const Elem x = d(rng), y = d(rng);
    CHECK(f.trace(f.mul(evaluate(a, x), y)) ==
          f.trace(f.mul(x, evaluate(adjoint(a), y))));
  }
}

TEST_CASE("adjoint preserves rank") {
  for (const auto& spec : {FieldSpec{2, 1, 3, 1}, FieldSpec{3, 1, 3, 1},
                           FieldSpec{2, 1, 4, 3}}) {
    const Field f(spec);
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
      const LinPoly a = random_poly(f, rng);
      CHECK(rank(adjoint(a)) == rank(a));
    }
  }
}

TEST_CASE("dickson matrix layout") {
  const Field f(FieldSpec{3, 1, 3, 1});
  const LinPoly id = LinPoly::identity(f);
  const Mat d = dickson_matrix(id);
  for (std::uint32_t r = 0; r < 3; ++r)
    for (std::uint32_t c = 0; c < 3; ++c) CHECK(d.at(r, c) == (r == c ? 1u : 0u));

  // row 1 of a_0 X + a_1 X^sigma is (0, a_0^sigma, a_1^sigma)
  const Elem a0 = 7, a1 = 11;
  LinPoly a(f);
  a.set_coeff(0, a0);
  a.set_coeff(1, a1);
  const Mat da = dickson_matrix(a);
  CHECK(da.at(0, 0) == a0);
  CHECK(da.at(0, 1) == a1);
  CHECK(da.at(0, 2) == 0);
  CHECK(da.at(1, 0) == 0);
  CHECK(da.at(1, 1) == f.sigma(a0));
  CHECK(da.at(1, 2) == f.sigma(a1));
}

TEST_CASE("rank examples and image oracle") {
  const Field f2(FieldSpec{2, 1, 3, 1});
  CHECK(rank(LinPoly(f2)) == 0);
  CHECK(rank(LinPoly::monomial(f2, 3, 0)) == 3);
  CHECK(rank(LinPoly(f2, {1, 1, 0})) == 2);  // X^2 + X
  CHECK_FALSE(is_invertible(LinPoly(f2, {1, 1, 0})));
  CHECK(is_invertible(LinPoly::identity(f2)));

  const Field f3(FieldSpec{3, 1, 3, 1});
  CHECK(rank(LinPoly(f3, {f3.neg(1), 1, 0})) == 2);  // X^3 - X, kernel F_3

  for (const auto& spec : {FieldSpec{2, 1, 3, 1}, FieldSpec{3, 1, 3, 1},
                           FieldSpec{5, 1, 3, 2}}) {
    const Field f(spec);
    std::mt19937_64 rng(15);
    for (int i = 0; i < 60; ++i) {
      const LinPoly a = random_poly(f, rng);
      CHECK(rank(a) == rank_by_image(a));
    }
  }
}

TEST_CASE("matrix_rep agrees with dickson rank") {
  const Field f(FieldSpec{2, 1, 3, 1});
  // identity map -> identity matrix
  const Mat m = matrix_rep(LinPoly::identity(f));
  for (std::uint32_t r = 0; r < 3; ++r)
    for (std::uint32_t c = 0; c < 3; ++c) CHECK(m.at(r, c) == (r == c ? 1u : 0u));

  for (const auto& spec : {FieldSpec{2, 1, 3, 1}, FieldSpec{3, 1, 3, 1},
                           FieldSpec{2, 1, 4, 1}}) {
    const Field fl(spec);
    std::mt19937_64 rng(16);
    for (int i = 0; i < 200; ++i) {
      const LinPoly a = random_poly(fl, rng);
      const Mat rep = matrix_rep(a);
      for (const Elem e : rep.data) CHECK(fl.in_subfield(e, 1));
      CHECK(mat_rank(rep, fl) == rank(a));
    }
  }
}

TEST_CASE("multiplication map matrix") {
  const Field f(FieldSpec{3, 1, 3, 1});
  for (Elem lam = 0; lam < 27; ++lam) {
    const Mat m = matrix_rep(LinPoly::monomial(f, lam, 0));
    CHECK((mat_rank(m, f) == 3) == (lam != 0));
  }
}

TEST_CASE("puncture_matrix") {
  const Field f(FieldSpec{2, 1, 3, 1});
  const Mat id = matrix_rep(LinPoly::identity(f));
  CHECK(mat_rank(puncture_matrix(id, 1), f) == 2);
  CHECK(puncture_matrix(id, 2).rows == 1);
  CHECK_THROWS(puncture_matrix(id, 0));
  CHECK_THROWS(puncture_matrix(id, 3));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const LinPoly a = random_poly(f, rng);
    const Mat m = matrix_rep(a);
    const std::uint32_t r = mat_rank(m, f);
    const std::uint32_t rp = mat_rank(puncture_matrix(m, 1), f);
    CHECK(rp + 1 >= r);
    CHECK(rp <= r);
  }
}

TEST_CASE("rank invariant under invertible composition") {
  const Field f(FieldSpec{3, 1, 3, 1});
  std::mt19937_64 rng(18);
  int done = 0;
  while (done < 40) {
    const LinPoly g = random_poly(f, rng), h = random_poly(f, rng),
                  a = random_poly(f, rng);
    if (!is_invertible(g) || !is_invertible(h)) continue;
    CHECK(rank(compose(g, compose(a, h))) == rank(a));
    ++done;
  }
}

TEST_CASE("serialization round-trip") {
  const Field f(FieldSpec{3, 1, 3, 1});
  const LinPoly a(f, {1, 0, 5});
  CHECK(a.str() == "1,0,5");
  CHECK(LinPoly::parse(f, "1,0,5") == a);
  CHECK(LinPoly::parse(f, "1") == LinPoly::identity(f));
  CHECK_THROWS(LinPoly::parse(f, "1,2,3,4"));
  CHECK(a.sigma_degree() == 2);
  CHECK_FALSE(LinPoly(f).sigma_degree().has_value());
}
