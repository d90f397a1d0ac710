#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmf/codes.hpp"
#include "rmf/field.hpp"
#include "rmf/linpoly.hpp"

namespace rmf {

// Homogeneous coordinates with the first nonzero entry scaled to 1, so
// equality of representatives is equality of points.
struct ProjPoint {
  std::vector<Elem> coords;

  bool operator==(const ProjPoint& o) const { return coords == o.coords; }
  bool operator!=(const ProjPoint& o) const { return coords != o.coords; }
  bool operator<(const ProjPoint& o) const { return coords < o.coords; }
};

// Throws on the zero vector.
ProjPoint normalize_point(const Field& f, std::vector<Elem> raw);

std::string point_str(const ProjPoint& p);
ProjPoint parse_point(const Field& f, std::string_view text);

enum class SetLabel { SIGMA, GAMMA, X_COMPONENT, J_SET, E_SET, CONE, GENERIC };

// Finite point set, sorted and deduplicated; all points share one dim.
struct PointSet {
  std::uint32_t dim = 0;
  SetLabel label = SetLabel::GENERIC;
  std::uint32_t component = 0;  // subfield label a for X_COMPONENT / J_SET
  std::vector<ProjPoint> points;

  std::size_t size() const { return points.size(); }
  bool contains(const ProjPoint& p) const;
};

PointSet make_point_set(std::uint32_t dim, SetLabel label, std::vector<ProjPoint> pts,
                        std::uint32_t component = 0);

// Newline-delimited export with a "dim=<m> field=<spec>" header.
std::string point_set_export(const Field& f, const PointSet& s);

// Subspace kept as a reduced row echelon basis; rank 0 = empty subspace.
class ProjSubspace {
 public:
  ProjSubspace(const Field& f, std::uint32_t dim) : field_(&f), dim_(dim) {}
  static ProjSubspace span(const Field& f, std::uint32_t dim,
                           const std::vector<std::vector<Elem>>& vecs);

  std::uint32_t rank() const { return static_cast<std::uint32_t>(basis_.size()); }
  std::uint32_t dim() const { return dim_; }
  const std::vector<std::vector<Elem>>& basis() const { return basis_; }
  bool contains(const ProjPoint& p) const;

 private:
  const Field* field_;
  std::uint32_t dim_;
  std::vector<std::vector<Elem>> basis_;
};

// All (Q^rank - 1)/(Q - 1) points of the subspace.
PointSet subspace_points(const Field& f, const ProjSubspace& s);

// Sigma_{n,n} = {(x, x^sigma, ..., x^{sigma^{n-1}})}, (q^n-1)/(q-1) points.
PointSet canonical_subgeometry(const Field& f);

// (X_0,...,X_{n-1}) -> (X_{n-1}^sigma, X_0^sigma, ..., X_{n-2}^sigma).
ProjPoint sigma_hat(const Field& f, const ProjPoint& p);

// Rank of the n x n matrix with rows P, P^{sigma_hat}, ..., P^{sigma_hat^{n-1}}.
std::uint32_t point_type(const Field& f, const ProjPoint& p);

// Brute force over subsets of A of size <= h+1 with span early exit.
bool secant_membership_brute(const Field& f, const ProjPoint& p, const PointSet& a,
                             std::uint32_t h);

// Dispatches to the point-type fast path when a.label == SIGMA.
bool secant_membership(const Field& f, const ProjPoint& p, const PointSet& a,
                       std::uint32_t h);

// Omega_h(A) as an explicit set; scans the ambient space unless h = 0.
PointSet secant_variety(const Field& f, const PointSet& a, std::uint32_t h);

struct ExteriorWitness {
  ProjPoint e1, e2, hit;
};

struct ExteriorResult {
  bool exterior = false;
  std::optional<ExteriorWitness> witness;
};

// Every point of every line joining two points of e (endpoints included)
// must avoid Omega_h(a). Witness is the first violation in sorted order.
ExteriorResult is_exterior_set(const Field& f, const PointSet& e, const PointSet& a,
                               std::uint32_t h);

// (order^{m-h-1} - 1)/(order - 1) for PG(m-1, order), 0 <= h <= m-1.
std::uint64_t exterior_bound(std::uint32_t m, std::uint32_t h, std::uint64_t order);

// Variant when <A> spans only a rank-t subspace.
std::uint64_t exterior_bound_in_span(std::uint32_t m, std::uint32_t h,
                                     std::uint64_t order, std::uint32_t t);

// Union of vertex, base, and all points on joining lines; vertex may be
// empty (cone = base). Throws if vertex and base overlap.
PointSet cone(const Field& f, const PointSet& vertex, const PointSet& base);

// Intersection <lstar, p> with lambda; needs rank lstar + rank lambda = dim
// and trivial intersection. Throws when p lies in lstar.
ProjPoint project(const Field& f, const ProjPoint& p, const ProjSubspace& lstar,
                  const ProjSubspace& lambda);

// True iff every vertex point has type >= n - rank + 1; empty vertex is
// vacuously an embedding.
bool is_embedding(const Field& f, const ProjSubspace& lstar);

// X_a = {(1, t, t^{sigma+1}, ..., t^{sigma^{n-k}+...+1}, 0, ..., 0) : N(t) = a}.
PointSet cf_sigma_set(const Field& f, std::uint32_t k, std::uint32_t a_label);

// J_a = {(1, 0, ..., 0, (-1)^{n-k} t, 0, ..., 0) : N(t) = a}.
PointSet j_set(const Field& f, std::uint32_t k, std::uint32_t a_label);

// Vertex A = e_{n-k+1} and B = e_0 of the line-star construction.
ProjPoint vertex_a(const Field& f, std::uint32_t k);
ProjPoint vertex_b(const Field& f);

// E = (X minus the X_a with a in T) plus the J_a with a in T; size q^n + 1.
PointSet dondur_exterior_set(const Field& f, std::uint32_t k,
                             const std::vector<std::uint32_t>& t_labels);

// Lambda* : X_0 = ... = X_{n-k+1} = 0 (rank k-2) and its complement Lambda.
ProjSubspace construction_vertex(const Field& f, std::uint32_t k);
ProjSubspace construction_base_span(const Field& f, std::uint32_t k);

// K(Lambda*, E); size (q^{nk} - 1)/(q^n - 1).
PointSet build_cone_construction(const Field& f, std::uint32_t k,
                                 const std::vector<std::uint32_t>& t_labels);

// All scalar multiples of all point representatives plus the zero word.
RankCode code_from_pointset(const Field& f, const PointSet& k_set,
                            std::uint32_t claimed_distance);

}  // namespace rmf
