#include "rmf/linpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace rmf {

LinPoly::LinPoly(const Field& f, std::vector<Elem> coeffs)
    : field_(&f), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != f.n())
    throw std::invalid_argument("coefficient count must equal n");
  for (const Elem c : coeffs_) f.check(c);
}

LinPoly LinPoly::monomial(const Field& f, Elem c, std::uint32_t i) {
  if (i >= f.n()) throw std::invalid_argument("monomial degree out of range");
  LinPoly out(f);
  out.coeffs_[i] = c;
  f.check(c);
  return out;
}

bool LinPoly::is_zero() const {
  for (const Elem c : coeffs_)
    if (c) return false;
  return true;
}

std::optional<std::uint32_t> LinPoly::sigma_degree() const {
  for (std::uint32_t i = static_cast<std::uint32_t>(coeffs_.size()); i-- > 0;)
    if (coeffs_[i]) return i;
  return std::nullopt;
}

std::string LinPoly::str() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(coeffs_[i]);
  }
  return out;
}

LinPoly LinPoly::parse(const Field& f, std::string_view text) {
  std::vector<Elem> coeffs;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ','))
    coeffs.push_back(static_cast<Elem>(std::stoul(token)));
  if (coeffs.size() > f.n())
    throw std::invalid_argument("too many coefficients for n");
  coeffs.resize(f.n(), 0);
  return LinPoly(f, std::move(coeffs));
}

LinPoly add(const LinPoly& a, const LinPoly& b) {
  const Field& f = a.field();
  LinPoly out(f);
  for (std::uint32_t i = 0; i < f.n(); ++i)
    out.set_coeff(i, f.add(a.coeff(i), b.coeff(i)));
  return out;
}

LinPoly sub(const LinPoly& a, const LinPoly& b) {
  const Field& f = a.field();
  LinPoly out(f);
  for (std::uint32_t i = 0; i < f.n(); ++i)
    out.set_coeff(i, f.sub(a.coeff(i), b.coeff(i)));
  return out;
}

LinPoly scale(Elem c, const LinPoly& a) {
  const Field& f = a.field();
  LinPoly out(f);
  for (std::uint32_t i = 0; i < f.n(); ++i)
    out.set_coeff(i, f.mul(c, a.coeff(i)));
  return out;
}

Elem evaluate(const LinPoly& a, Elem x) {
  const Field& f = a.field();
  Elem acc = 0;
  Elem xs = x;  // sigma^i(x)
  for (std::uint32_t i = 0; i < f.n(); ++i) {
    if (a.coeff(i)) acc = f.add(acc, f.mul(a.coeff(i), xs));
    xs = f.sigma(xs);
  }
  return acc;
}

LinPoly compose(const LinPoly& a, const LinPoly& b) {
  const Field& f = a.field();
  const std::uint32_t n = f.n();
  LinPoly out(f);
  for (std::uint32_t i = 0; i < n; ++i) {
    const Elem ai = a.coeff(i);
    if (!ai) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      const Elem bj = b.coeff(j);
      if (!bj) continue;
      const std::uint32_t k = (i + j) % n;
      out.set_coeff(k, f.add(out.coeff(k), f.mul(ai, f.sigma(bj, i))));
    }
  }
  return out;
}

LinPoly adjoint(const LinPoly& a) {
  const Field& f = a.field();
  const std::uint32_t n = f.n();
  LinPoly out(f);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (n - i) % n;
    out.set_coeff(j, f.sigma(a.coeff(i), j));
  }
  return out;
}

Mat dickson_matrix(const LinPoly& a) {
  const Field& f = a.field();
  const std::uint32_t n = f.n();
  Mat d(n, n);
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c)
      d.at(r, c) = f.sigma(a.coeff((c + n - r) % n), r);
  return d;
}

std::uint32_t mat_rank(Mat m, const Field& f) {
  std::uint32_t rank = 0;
  for (std::uint32_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::uint32_t piv = rank;
    while (piv < m.rows && m.at(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != rank)
      for (std::uint32_t c = 0; c < m.cols; ++c)
        std::swap(m.at(piv, c), m.at(rank, c));
    const Elem inv = f.inv(m.at(rank, col));
    for (std::uint32_t r = rank + 1; r < m.rows; ++r) {
      const Elem factor = f.mul(m.at(r, col), inv);
      if (!factor) continue;
      for (std::uint32_t c = col; c < m.cols; ++c)
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

std::uint32_t rank(const LinPoly& a) {
  return mat_rank(dickson_matrix(a), a.field());
}

bool is_invertible(const LinPoly& a) { return rank(a) == a.field().n(); }

Mat matrix_rep(const LinPoly& a) {
  const Field& f = a.field();
  const std::uint32_t n = f.n();
  Mat m(n, n);
  std::vector<Elem> col(n);
  Elem bj = 1;
  for (std::uint32_t j = 0; j < n; ++j) {
    f.coords(evaluate(a, bj), col.data());
    for (std::uint32_t r = 0; r < n; ++r) m.at(r, j) = col[r];
    bj = f.mul(bj, f.generator());
  }
  return m;
}

Mat puncture_matrix(const Mat& m, std::uint32_t u) {
  if (u < 1 || u >= m.rows)
    throw std::invalid_argument("puncture amount must be in [1, rows-1]");
  Mat out(m.rows - u, m.cols);
  for (std::uint32_t r = 0; r < out.rows; ++r)
    for (std::uint32_t c = 0; c < out.cols; ++c) out.at(r, c) = m.at(r, c);
  return out;
}

Mat mat_mul(const Mat& x, const Mat& y, const Field& f) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  Mat out(x.rows, y.cols);
  for (std::uint32_t r = 0; r < x.rows; ++r)
    for (std::uint32_t k = 0; k < x.cols; ++k) {
      const Elem v = x.at(r, k);
      if (!v) continue;
      for (std::uint32_t c = 0; c < y.cols; ++c)
        out.at(r, c) = f.add(out.at(r, c), f.mul(v, y.at(k, c)));
    }
  return out;
}

Mat mat_add(const Mat& x, const Mat& y, const Field& f) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix shape mismatch");
  Mat out(x.rows, x.cols);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = f.add(x.data[i], y.data[i]);
  return out;
}

}  // namespace rmf
