#include "rmf/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rmf {

namespace {

Elem sign_elem(const Field& f, std::uint64_t exponent) {
  return (exponent % 2 == 0) ? 1 : f.neg(1);
}

// Geometric sum 1 + q^s + ... + q^{s(i-1)} mod Q-1.
std::uint64_t sigma_geom(const Field& f, std::uint32_t i) {
  const std::uint64_t mod = f.order() - 1;
  std::uint64_t step = 1;
  for (std::uint32_t j = 0; j < f.spec().s; ++j) step = step * f.q() % mod;
  std::uint64_t e = 0, pw = 1;
  for (std::uint32_t j = 0; j < i; ++j) {
    e = (e + pw) % mod;
    pw = pw * step % mod;
  }
  return e;
}

Elem label_to_elem(const Field& f, std::uint32_t label, bool allow_zero) {
  const auto sub = f.subfield_elements(1);
  if (label >= sub.size() || (!allow_zero && label == 0))
    throw std::invalid_argument("subfield label out of range");
  return sub[label];
}

// Unnormalized sigma_hat; scaling rows never changes span ranks.
void sigma_hat_raw(const Field& f, const std::vector<Elem>& in, std::vector<Elem>& out) {
  const std::uint32_t n = f.n();
  out.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) out[j] = f.sigma(in[(j + n - 1) % n], 1);
}

// Rank of the subset rows together with p, minus rank of the subset rows.
bool in_span(const Field& f, const std::vector<const ProjPoint*>& pts, const ProjPoint& p) {
  const std::uint32_t m = static_cast<std::uint32_t>(p.coords.size());
  Mat a(static_cast<std::uint32_t>(pts.size()), m);
  for (std::uint32_t r = 0; r < pts.size(); ++r)
    for (std::uint32_t c = 0; c < m; ++c) a.at(r, c) = pts[r]->coords[c];
  const std::uint32_t base = mat_rank(a, f);
  Mat b(static_cast<std::uint32_t>(pts.size()) + 1, m);
  b.data = a.data;
  b.data.insert(b.data.end(), p.coords.begin(), p.coords.end());
  return mat_rank(b, f) == base;
}

std::vector<ProjPoint> all_ambient_points(const Field& f, std::uint32_t m) {
  // canonical representatives: first nonzero coordinate equal to 1
  const std::uint64_t Q = f.order();
  std::vector<ProjPoint> out;
  std::vector<Elem> v(m, 0);
  for (std::uint32_t lead = m; lead-- > 0;) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    while (true) {
      out.push_back(ProjPoint{v});
      std::uint32_t i = 0;
      while (i < lead) {
        if (++v[i] < Q) break;
        v[i] = 0;
        ++i;
      }
      if (i == lead) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Visits every point of the line through a and b exactly once: b, then
// a + t b over all t.
template <typename Fn>
bool scan_line(const Field& f, const ProjPoint& a, const ProjPoint& b, Fn&& fn) {
  if (!fn(b)) return false;
  const std::uint32_t m = static_cast<std::uint32_t>(a.coords.size());
  std::vector<Elem> v(m);
  for (Elem t = 0; t < f.order(); ++t) {
    for (std::uint32_t i = 0; i < m; ++i)
      v[i] = f.add(a.coords[i], f.mul(t, b.coords[i]));
    if (!fn(normalize_point(f, v))) return false;
  }
  return true;
}

}  // namespace

ProjPoint normalize_point(const Field& f, std::vector<Elem> raw) {
  for (auto& c : raw) f.check(c);
  auto lead = std::find_if(raw.begin(), raw.end(), [](Elem c) { return c != 0; });
  if (lead == raw.end()) throw std::invalid_argument("zero vector is not a point");
  const Elem inv = f.inv(*lead);
  for (auto& c : raw) c = f.mul(inv, c);
  return ProjPoint{std::move(raw)};
}

std::string point_str(const ProjPoint& p) {
  std::string out;
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(p.coords[i]);
  }
  return out;
}

ProjPoint parse_point(const Field& f, std::string_view text) {
  std::vector<Elem> coords;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find(':', pos);
    const auto tok = text.substr(pos, next == std::string_view::npos ? text.size() - pos
                                                                     : next - pos);
    if (tok.empty()) throw std::invalid_argument("empty point coordinate");
    coords.push_back(static_cast<Elem>(std::stoul(std::string(tok))));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return normalize_point(f, std::move(coords));
}

bool PointSet::contains(const ProjPoint& p) const {
  return std::binary_search(points.begin(), points.end(), p);
}

PointSet make_point_set(std::uint32_t dim, SetLabel label, std::vector<ProjPoint> pts,
                        std::uint32_t component) {
  for (const auto& p : pts)
    if (p.coords.size() != dim) throw std::invalid_argument("mixed point dimensions");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return PointSet{dim, label, component, std::move(pts)};
}

std::string point_set_export(const Field& f, const PointSet& s) {
  std::string out = "dim=" + std::to_string(s.dim) + " field=" + f.spec().str() + "\n";
  for (const auto& p : s.points) {
    out += point_str(p);
    out += '\n';
  }
  return out;
}

ProjSubspace ProjSubspace::span(const Field& f, std::uint32_t dim,
                                const std::vector<std::vector<Elem>>& vecs) {
  ProjSubspace s(f, dim);
  std::vector<std::vector<Elem>> rows;
  for (const auto& v : vecs) {
    if (v.size() != dim) throw std::invalid_argument("span vector of wrong dimension");
    rows.push_back(v);
  }
  // reduced row echelon over the coordinate field
  std::uint32_t lead = 0;
  for (std::uint32_t col = 0; col < dim && lead < rows.size(); ++col) {
    std::uint32_t pivot = lead;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[lead], rows[pivot]);
    const Elem inv = f.inv(rows[lead][col]);
    for (auto& c : rows[lead]) c = f.mul(inv, c);
    for (std::uint32_t r = 0; r < rows.size(); ++r) {
      if (r == lead || rows[r][col] == 0) continue;
      const Elem factor = rows[r][col];
      for (std::uint32_t c = 0; c < dim; ++c)
        rows[r][c] = f.sub(rows[r][c], f.mul(factor, rows[lead][c]));
    }
    ++lead;
  }
  rows.resize(lead);
  s.basis_ = std::move(rows);
  return s;
}

bool ProjSubspace::contains(const ProjPoint& p) const {
  // reduce p against the echelon basis
  std::vector<Elem> v = p.coords;
  for (const auto& row : basis_) {
    const auto piv = std::find_if(row.begin(), row.end(), [](Elem c) { return c != 0; });
    const std::size_t col = static_cast<std::size_t>(piv - row.begin());
    if (v[col] == 0) continue;
    const Elem factor = v[col];
    for (std::size_t c = 0; c < v.size(); ++c)
      v[c] = field_->sub(v[c], field_->mul(factor, row[c]));
  }
  return std::all_of(v.begin(), v.end(), [](Elem c) { return c == 0; });
}

PointSet subspace_points(const Field& f, const ProjSubspace& s) {
  const std::uint32_t r = s.rank();
  std::vector<ProjPoint> pts;
  if (r > 0) {
    const std::uint64_t Q = f.order();
    std::vector<Elem> coeff(r, 0);
    std::vector<Elem> v(s.dim());
    // canonical coefficient vectors: first nonzero entry 1, basis independent
    for (std::uint32_t lead = r; lead-- > 0;) {
      std::fill(coeff.begin(), coeff.end(), 0);
      coeff[lead] = 1;
      while (true) {
        std::fill(v.begin(), v.end(), 0);
        for (std::uint32_t i = 0; i < r; ++i) {
          if (coeff[i] == 0) continue;
          for (std::uint32_t c = 0; c < s.dim(); ++c)
            v[c] = f.add(v[c], f.mul(coeff[i], s.basis()[i][c]));
        }
        pts.push_back(normalize_point(f, v));
        std::uint32_t i = 0;
        while (i < lead) {
          if (++coeff[i] < Q) break;
          coeff[i] = 0;
          ++i;
        }
        if (i == lead) break;
      }
    }
  }
  return make_point_set(s.dim(), SetLabel::GENERIC, std::move(pts));
}

PointSet canonical_subgeometry(const Field& f) {
  const std::uint32_t n = f.n();
  std::vector<ProjPoint> pts;
  std::vector<Elem> v(n);
  for (Elem x = 1; x < f.order(); ++x) {
    for (std::uint32_t i = 0; i < n; ++i) v[i] = f.sigma(x, i);
    pts.push_back(normalize_point(f, v));
  }
  return make_point_set(n, SetLabel::SIGMA, std::move(pts));
}

ProjPoint sigma_hat(const Field& f, const ProjPoint& p) {
  if (p.coords.size() != f.n()) throw std::invalid_argument("sigma_hat needs dim n");
  std::vector<Elem> out;
  sigma_hat_raw(f, p.coords, out);
  return normalize_point(f, std::move(out));
}

std::uint32_t point_type(const Field& f, const ProjPoint& p) {
  const std::uint32_t n = f.n();
  if (p.coords.size() != n) throw std::invalid_argument("point_type needs dim n");
  Mat m(n, n);
  std::vector<Elem> row = p.coords, next;
  for (std::uint32_t r = 0; r < n; ++r) {
    for (std::uint32_t c = 0; c < n; ++c) m.at(r, c) = row[c];
    sigma_hat_raw(f, row, next);
    row.swap(next);
  }
  return mat_rank(std::move(m), f);
}

bool secant_membership_brute(const Field& f, const ProjPoint& p, const PointSet& a,
                             std::uint32_t h) {
  const std::size_t n = a.points.size();
  const std::size_t cap = std::min<std::size_t>(std::size_t{h} + 1, n);
  auto next_combination = [n](std::vector<std::size_t>& idx) {
    const std::size_t t = idx.size();
    for (std::size_t i = t; i-- > 0;) {
      if (idx[i] != i + n - t) {
        ++idx[i];
        for (std::size_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  std::vector<const ProjPoint*> subset;
  // subsets of size t in lexicographic index order
  for (std::size_t t = 1; t <= cap; ++t) {
    std::vector<std::size_t> idx(t);
    for (std::size_t i = 0; i < t; ++i) idx[i] = i;
    do {
      subset.clear();
      for (const auto i : idx) subset.push_back(&a.points[i]);
      if (in_span(f, subset, p)) return true;
    } while (next_combination(idx));
  }
  return false;
}

bool secant_membership(const Field& f, const ProjPoint& p, const PointSet& a,
                       std::uint32_t h) {
  if (a.label == SetLabel::SIGMA) return point_type(f, p) <= h + 1;
  if (h == 0) return a.contains(p);
  return secant_membership_brute(f, p, a, h);
}

PointSet secant_variety(const Field& f, const PointSet& a, std::uint32_t h) {
  if (h == 0) return make_point_set(a.dim, SetLabel::GENERIC, a.points);
  std::vector<ProjPoint> pts;
  for (const auto& p : all_ambient_points(f, a.dim))
    if (secant_membership(f, p, a, h)) pts.push_back(p);
  return make_point_set(a.dim, SetLabel::GENERIC, std::move(pts));
}

ExteriorResult is_exterior_set(const Field& f, const PointSet& e, const PointSet& a,
                               std::uint32_t h) {
  if (e.dim != a.dim) throw std::invalid_argument("exterior check needs equal dims");
  const PointSet omega = secant_variety(f, a, h);
  for (std::size_t i = 0; i < e.points.size(); ++i)
    for (std::size_t j = i + 1; j < e.points.size(); ++j) {
      ExteriorResult bad;
      const bool clean = scan_line(f, e.points[i], e.points[j], [&](const ProjPoint& pt) {
        if (!omega.contains(pt)) return true;
        bad = ExteriorResult{false, ExteriorWitness{e.points[i], e.points[j], pt}};
        return false;
      });
      if (!clean) return bad;
    }
  return ExteriorResult{true, std::nullopt};
}

std::uint64_t exterior_bound(std::uint32_t m, std::uint32_t h, std::uint64_t order) {
  if (h >= m) throw std::invalid_argument("exterior_bound needs 0 <= h <= m-1");
  std::uint64_t num = 1;
  for (std::uint32_t i = 0; i < m - h - 1; ++i) num *= order;
  return (num - 1) / (order - 1);
}

std::uint64_t exterior_bound_in_span(std::uint32_t m, std::uint32_t h,
                                     std::uint64_t order, std::uint32_t t) {
  if (h >= m) throw std::invalid_argument("exterior_bound needs 0 <= h <= m-1");
  if (t == 0 || t > m) throw std::invalid_argument("span rank t out of range");
  if (h <= t - 1) return exterior_bound(m, h, order);
  std::uint64_t num = 1;
  for (std::uint32_t i = 0; i < m - t; ++i) num *= order;
  return (num - 1) / (order - 1);
}

PointSet cone(const Field& f, const PointSet& vertex, const PointSet& base) {
  if (vertex.size() == 0) return make_point_set(base.dim, SetLabel::CONE, base.points);
  if (vertex.dim != base.dim) throw std::invalid_argument("cone needs equal dims");
  for (const auto& m : vertex.points)
    if (base.contains(m)) throw std::invalid_argument("cone vertex meets base");
  std::set<ProjPoint> acc(vertex.points.begin(), vertex.points.end());
  acc.insert(base.points.begin(), base.points.end());
  for (const auto& m : vertex.points)
    for (const auto& b : base.points)
      scan_line(f, m, b, [&](const ProjPoint& pt) {
        acc.insert(pt);
        return true;
      });
  return make_point_set(base.dim, SetLabel::CONE,
                        std::vector<ProjPoint>(acc.begin(), acc.end()));
}

ProjPoint project(const Field& f, const ProjPoint& p, const ProjSubspace& lstar,
                  const ProjSubspace& lambda) {
  const std::uint32_t n = static_cast<std::uint32_t>(p.coords.size());
  const std::uint32_t r = lstar.rank();
  if (r + lambda.rank() != n)
    throw std::invalid_argument("projection needs rank lstar + rank lambda = dim");
  if (r == 0) return p;
  // solve [lstar basis | lambda basis] y = p over the coordinate field
  Mat m(n, n + 1);
  for (std::uint32_t c = 0; c < r; ++c)
    for (std::uint32_t i = 0; i < n; ++i) m.at(i, c) = lstar.basis()[c][i];
  for (std::uint32_t c = 0; c < lambda.rank(); ++c)
    for (std::uint32_t i = 0; i < n; ++i) m.at(i, r + c) = lambda.basis()[c][i];
  for (std::uint32_t i = 0; i < n; ++i) m.at(i, n) = p.coords[i];
  for (std::uint32_t col = 0; col < n; ++col) {
    std::uint32_t pivot = col;
    while (pivot < n && m.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::invalid_argument("lstar and lambda are not complementary");
    if (pivot != col)
      for (std::uint32_t c = col; c <= n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
    const Elem inv = f.inv(m.at(col, col));
    for (std::uint32_t c = col; c <= n; ++c) m.at(col, c) = f.mul(inv, m.at(col, c));
    for (std::uint32_t row = 0; row < n; ++row) {
      if (row == col || m.at(row, col) == 0) continue;
      const Elem factor = m.at(row, col);
      for (std::uint32_t c = col; c <= n; ++c)
        m.at(row, c) = f.sub(m.at(row, c), f.mul(factor, m.at(col, c)));
    }
  }
  std::vector<Elem> out(n, 0);
  bool nonzero = false;
  for (std::uint32_t c = 0; c < lambda.rank(); ++c) {
    const Elem y = m.at(r + c, n);
    if (y == 0) continue;
    nonzero = true;
    for (std::uint32_t i = 0; i < n; ++i)
      out[i] = f.add(out[i], f.mul(y, lambda.basis()[c][i]));
  }
  if (!nonzero) throw std::invalid_argument("point lies in the projection vertex");
  return normalize_point(f, std::move(out));
}

bool is_embedding(const Field& f, const ProjSubspace& lstar) {
  if (lstar.rank() == 0) return true;
  const std::uint32_t threshold = f.n() - lstar.rank() + 1;
  for (const auto& p : subspace_points(f, lstar).points)
    if (point_type(f, p) < threshold) return false;
  return true;
}

PointSet cf_sigma_set(const Field& f, std::uint32_t k, std::uint32_t a_label) {
  const std::uint32_t n = f.n();
  if (k < 2 || k > n - 1) throw std::invalid_argument("component needs 2 <= k <= n-1");
  const Elem a = label_to_elem(f, a_label, false);
  const std::uint32_t lead = n - k + 1;
  std::vector<ProjPoint> pts;
  std::vector<Elem> v(n, 0);
  for (const Elem t : f.norm_fiber(a, 1)) {
    std::fill(v.begin(), v.end(), 0);
    for (std::uint32_t i = 0; i <= lead; ++i) v[i] = f.pow(t, sigma_geom(f, i));
    pts.push_back(normalize_point(f, v));
  }
  return make_point_set(n, SetLabel::X_COMPONENT, std::move(pts), a_label);
}

PointSet j_set(const Field& f, std::uint32_t k, std::uint32_t a_label) {
  const std::uint32_t n = f.n();
  if (k < 2 || k > n - 1) throw std::invalid_argument("component needs 2 <= k <= n-1");
  const Elem a = label_to_elem(f, a_label, false);
  const Elem sgn = sign_elem(f, n - k);
  std::vector<ProjPoint> pts;
  std::vector<Elem> v(n, 0);
  for (const Elem t : f.norm_fiber(a, 1)) {
    std::fill(v.begin(), v.end(), 0);
    v[0] = 1;
    v[n - k + 1] = f.mul(sgn, t);
    pts.push_back(normalize_point(f, v));
  }
  return make_point_set(n, SetLabel::J_SET, std::move(pts), a_label);
}

ProjPoint vertex_a(const Field& f, std::uint32_t k) {
  std::vector<Elem> v(f.n(), 0);
  v[f.n() - k + 1] = 1;
  return ProjPoint{std::move(v)};
}

ProjPoint vertex_b(const Field& f) {
  std::vector<Elem> v(f.n(), 0);
  v[0] = 1;
  return ProjPoint{std::move(v)};
}

PointSet dondur_exterior_set(const Field& f, std::uint32_t k,
                             const std::vector<std::uint32_t>& t_labels) {
  std::vector<std::uint32_t> t = t_labels;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (t.empty() || t.front() != 1) throw std::invalid_argument("T must contain 1");
  for (const auto l : t) label_to_elem(f, l, false);
  std::vector<ProjPoint> pts{vertex_a(f, k), vertex_b(f)};
  for (std::uint32_t a = 1; a < f.q(); ++a) {
    const bool swap_in_j = std::binary_search(t.begin(), t.end(), a);
    const PointSet part = swap_in_j ? j_set(f, k, a) : cf_sigma_set(f, k, a);
    pts.insert(pts.end(), part.points.begin(), part.points.end());
  }
  return make_point_set(f.n(), SetLabel::E_SET, std::move(pts));
}

ProjSubspace construction_vertex(const Field& f, std::uint32_t k) {
  const std::uint32_t n = f.n();
  if (k < 2 || k > n - 1) throw std::invalid_argument("vertex needs 2 <= k <= n-1");
  std::vector<std::vector<Elem>> basis;
  for (std::uint32_t i = n - k + 2; i < n; ++i) {
    std::vector<Elem> e(n, 0);
    e[i] = 1;
    basis.push_back(std::move(e));
  }
  return ProjSubspace::span(f, n, basis);
}

ProjSubspace construction_base_span(const Field& f, std::uint32_t k) {
  const std::uint32_t n = f.n();
  if (k < 2 || k > n - 1) throw std::invalid_argument("base needs 2 <= k <= n-1");
  std::vector<std::vector<Elem>> basis;
  for (std::uint32_t i = 0; i <= n - k + 1; ++i) {
    std::vector<Elem> e(n, 0);
    e[i] = 1;
    basis.push_back(std::move(e));
  }
  return ProjSubspace::span(f, n, basis);
}

PointSet build_cone_construction(const Field& f, std::uint32_t k,
                                 const std::vector<std::uint32_t>& t_labels) {
  const PointSet base = dondur_exterior_set(f, k, t_labels);
  const PointSet vertex = subspace_points(f, construction_vertex(f, k));
  return cone(f, vertex, base);
}

RankCode code_from_pointset(const Field& f, const PointSet& k_set,
                            std::uint32_t claimed_distance) {
  if (k_set.dim != f.n()) throw std::invalid_argument("code needs dim n point set");
  std::vector<std::vector<Elem>> words;
  words.emplace_back(f.n(), 0);
  std::vector<Elem> w(f.n());
  for (const auto& p : k_set.points)
    for (Elem lam = 1; lam < f.order(); ++lam) {
      for (std::uint32_t i = 0; i < f.n(); ++i) w[i] = f.mul(lam, p.coords[i]);
      words.push_back(w);
    }
  return RankCode::explicit_code(f, std::move(words), claimed_distance);
}

}  // namespace rmf
