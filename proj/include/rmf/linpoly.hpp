#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmf/field.hpp"

namespace rmf {

// sigma-linearized polynomial sum a_i X^{sigma^i}, exactly n coefficient
// slots.  Composition exponents reduce mod n since sigma^n = id on F_{q^n}.
class LinPoly {
 public:
  explicit LinPoly(const Field& f) : field_(&f), coeffs_(f.n(), 0) {}
  LinPoly(const Field& f, std::vector<Elem> coeffs);
  static LinPoly monomial(const Field& f, Elem c, std::uint32_t i);
  static LinPoly identity(const Field& f) { return monomial(f, 1, 0); }

  const Field& field() const { return *field_; }
  const std::vector<Elem>& coeffs() const { return coeffs_; }
  Elem coeff(std::uint32_t i) const { return coeffs_[i]; }
  void set_coeff(std::uint32_t i, Elem c) { coeffs_[i] = c; }

  bool is_zero() const;
  std::optional<std::uint32_t> sigma_degree() const;

  // Serialization: coefficient indices, lowest degree first, e.g. "1,0,5".
  std::string str() const;
  static LinPoly parse(const Field& f, std::string_view text);

  bool operator==(const LinPoly& o) const { return coeffs_ == o.coeffs_; }

 private:
  const Field* field_;
  std::vector<Elem> coeffs_;
};

LinPoly add(const LinPoly& a, const LinPoly& b);
LinPoly sub(const LinPoly& a, const LinPoly& b);
LinPoly scale(Elem c, const LinPoly& a);  // c * a(x)

Elem evaluate(const LinPoly& a, Elem x);
LinPoly compose(const LinPoly& a, const LinPoly& b);  // a(b(x))
LinPoly adjoint(const LinPoly& a);

// Dense matrix with entries in a Field; also used for F_q submatrices,
// whose entries are the F_q elements of the ambient field.
struct Mat {
  std::uint32_t rows = 0, cols = 0;
  std::vector<Elem> data;

  Mat() = default;
  Mat(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), data(std::size_t{r} * c, 0) {}
  Elem& at(std::uint32_t r, std::uint32_t c) { return data[std::size_t{r} * cols + c]; }
  Elem at(std::uint32_t r, std::uint32_t c) const { return data[std::size_t{r} * cols + c]; }
  bool operator==(const Mat&) const = default;
};

Mat dickson_matrix(const LinPoly& a);
std::uint32_t mat_rank(Mat m, const Field& f);  // Gaussian elimination
std::uint32_t rank(const LinPoly& a);
bool is_invertible(const LinPoly& a);

// n x n over F_q: column j holds the B-coordinates of a(g^j),
// B = (1, g, ..., g^{n-1}).
Mat matrix_rep(const LinPoly& a);
Mat puncture_matrix(const Mat& m, std::uint32_t u);  // drop last u rows

Mat mat_mul(const Mat& x, const Mat& y, const Field& f);
Mat mat_add(const Mat& x, const Mat& y, const Field& f);

}  // namespace rmf
