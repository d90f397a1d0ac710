#include "rmf/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace rmf {

namespace {

constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

// Enumeration order of RankCode::words(): the last slot is the most
// significant comparison key, so sorted order equals ascending packed
// base-Q value.
bool word_less(const Elem* a, const Elem* b, std::uint32_t n) {
  for (std::uint32_t i = n; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::size_t word_find(const std::vector<Elem>& flat, std::uint32_t n, const Elem* w) {
  std::size_t lo = 0, hi = flat.size() / n;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (word_less(&flat[mid * n], w, n)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < flat.size() / n && !word_less(w, &flat[lo * n], n)) return lo;
  return kNoIndex;
}

bool word_member(const std::vector<Elem>& flat, std::uint32_t n, const Elem* w) {
  return word_find(flat, n, w) != kNoIndex;
}

bool zero_word_present(const std::vector<Elem>& flat, std::uint32_t n) {
  if (flat.empty()) return false;
  for (std::uint32_t t = 0; t < n; ++t) {
    if (flat[t] != 0) return false;
  }
  return true;
}

// sigma-power lookup, tabulated when the field carries direct tables
struct SigTab {
  const Field* f;
  std::vector<std::vector<Elem>> tab;

  explicit SigTab(const Field& fld) : f(&fld) {
    if (f->has_direct_tables()) {
      const std::uint64_t q = f->order();
      tab.resize(f->n());
      for (std::uint32_t i = 0; i < f->n(); ++i) {
        tab[i].resize(q);
        for (std::uint64_t x = 0; x < q; ++x) {
          tab[i][x] = f->sigma(static_cast<Elem>(x), i);
        }
      }
    }
  }

  Elem at(Elem x, std::uint32_t i) const {
    return tab.empty() ? f->sigma(x, i) : tab[i][x];
  }
};

// rank of sum a_i X^{sigma^i} via its Dickson matrix, scratch holds n*n
std::uint32_t dickson_rank(const Field& f, const SigTab& sig, const Elem* w,
                           Elem* mat) {
  const std::uint32_t n = f.n();
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      mat[i * n + j] = sig.at(w[(j + n - i) % n], i);
    }
  }
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < n && r < n; ++c) {
    std::uint32_t piv = n;
    for (std::uint32_t rr = r; rr < n; ++rr) {
      if (mat[rr * n + c] != 0) {
        piv = rr;
        break;
      }
    }
    if (piv == n) continue;
    if (piv != r) {
      for (std::uint32_t cc = c; cc < n; ++cc) std::swap(mat[piv * n + cc], mat[r * n + cc]);
    }
    const Elem pv = mat[r * n + c];
    for (std::uint32_t rr = r + 1; rr < n; ++rr) {
      const Elem lead = mat[rr * n + c];
      if (lead == 0) continue;
      const Elem fct = f.div(lead, pv);
      mat[rr * n + c] = 0;
      for (std::uint32_t cc = c + 1; cc < n; ++cc) {
        mat[rr * n + cc] = f.sub(mat[rr * n + cc], f.mul(fct, mat[r * n + cc]));
      }
    }
    ++r;
  }
  return r;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, const char* what) {
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) throw std::overflow_error(what);
  }
  return static_cast<std::uint64_t>(acc);
}

// Q^n when it fits both the table budget and memory, else 0.
std::uint64_t rank_table_tuples(const Field& f) {
  if (!f.has_direct_tables()) return 0;
  unsigned __int128 acc = 1;
  for (std::uint32_t i = 0; i < f.n(); ++i) {
    acc *= f.order();
    if (acc > (1ull << 27)) return 0;
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint8_t> build_rank_table(const Field& f, const SigTab& sig,
                                           std::uint64_t tuples) {
  const std::uint32_t n = f.n();
  const std::uint64_t q = f.order();
  std::vector<std::uint8_t> tab(tuples);
  std::vector<Elem> slots(n, 0);
  std::vector<Elem> scratch(std::size_t{n} * n);
  for (std::uint64_t idx = 0; idx < tuples; ++idx) {
    tab[idx] = static_cast<std::uint8_t>(dickson_rank(f, sig, slots.data(), scratch.data()));
    for (std::uint32_t t = 0; t < n; ++t) {
      if (++slots[t] < q) break;
      slots[t] = 0;
    }
  }
  return tab;
}

// generator-orbit closure: lambda*C = C for every nonzero lambda
bool star_closed(const RankCode& code) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const auto& flat = code.words();
  const Elem g0 = f.generator();
  std::vector<Elem> buf(n);
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Elem* w = &flat[i * n];
    for (std::uint32_t t = 0; t < n; ++t) buf[t] = f.mul(g0, w[t]);
    if (!word_member(flat, n, buf.data())) return false;
  }
  return true;
}

std::size_t scaled_word_index(const Field& f, const std::vector<Elem>& flat,
                              std::uint32_t n, const Elem* w, Elem lambda,
                              std::vector<Elem>& buf) {
  for (std::uint32_t t = 0; t < n; ++t) buf[t] = f.mul(lambda, w[t]);
  return word_find(flat, n, buf.data());
}

LinPoly word_poly(const Field& f, const Elem* w) {
  return LinPoly(f, std::vector<Elem>(w, w + f.n()));
}

LinPoly apply_rho(const LinPoly& x, std::uint32_t rho) {
  const Field& f = x.field();
  if (rho == 0) return x;
  std::vector<Elem> cs = x.coeffs();
  for (Elem& c : cs) c = f.frob(c, rho);
  return LinPoly(f, std::move(cs));
}

// F_p span dimension of the word set; additivity shortcut for big codes
std::uint32_t fp_span_dim(const RankCode& code) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const std::uint32_t deg = f.ext_degree();
  const std::uint32_t p = f.p();
  const std::uint32_t len = n * deg;
  const auto& flat = code.words();
  std::vector<std::vector<std::uint8_t>> basis;  // echelon rows, lead index strictly grows
  std::vector<std::uint32_t> leads;
  std::vector<std::uint8_t> vec(len);
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Elem* w = &flat[i * n];
    for (std::uint32_t t = 0; t < n; ++t) {
      Elem e = w[t];
      for (std::uint32_t j = 0; j < deg; ++j) {
        vec[t * deg + j] = static_cast<std::uint8_t>(e % p);
        e /= p;
      }
    }
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::uint32_t lead = leads[b];
      const std::uint8_t coef = vec[lead];
      if (coef == 0) continue;
      const auto& row = basis[b];
      for (std::uint32_t j = lead; j < len; ++j) {
        vec[j] = static_cast<std::uint8_t>((vec[j] + (p - coef) * row[j]) % p);
      }
    }
    std::uint32_t lead = len;
    for (std::uint32_t j = 0; j < len; ++j) {
      if (vec[j] != 0) {
        lead = j;
        break;
      }
    }
    if (lead == len) continue;
    // normalize the lead to 1 so later reductions are single-pass
    const std::uint32_t inv = [&] {
      std::uint32_t v = vec[lead], r = 1;
      while (v * r % p != 1) ++r;
      return r;
    }();
    std::vector<std::uint8_t> row(len, 0);
    for (std::uint32_t j = lead; j < len; ++j) {
      row[j] = static_cast<std::uint8_t>(vec[j] * inv % p);
    }
    std::size_t pos = 0;
    while (pos < leads.size() && leads[pos] < lead) ++pos;
    basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(pos), std::move(row));
    leads.insert(leads.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    if (basis.size() == len) break;
  }
  return static_cast<std::uint32_t>(basis.size());
}

bool additive_by_span(const RankCode& code) {
  const Field& f = code.field();
  const std::uint32_t dim = fp_span_dim(code);
  unsigned __int128 want = 1;
  for (std::uint32_t i = 0; i < dim; ++i) want *= f.p();
  return want == static_cast<unsigned __int128>(code.size());
}

std::uint32_t detect_ambient(const RankCode& code) {
  const std::uint32_t n = code.field().n();
  const auto& flat = code.words();
  std::uint32_t top = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    for (std::uint32_t t = top; t < n; ++t) {
      if (flat[i * n + t] != 0) top = t;
    }
  }
  if (code.size() == 1 && zero_word_present(flat, n)) return 0;
  return top + 1;
}

std::string render_distribution(const std::map<std::uint32_t, std::uint64_t>& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& [r, c] : d) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(r) + ": " + std::to_string(c);
  }
  return out + "}";
}

std::vector<Elem> sorted_domain(std::vector<Elem> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool mat_data_less(const Mat& a, const Mat& b) { return a.data < b.data; }

IdealiserResult idealiser_impl(const Field& f, const std::vector<Mat>& code,
                               const std::vector<Elem>& domain_in,
                               std::uint64_t candidate_guard, bool left) {
  if (code.empty()) throw std::invalid_argument("idealiser needs a nonempty code");
  const std::uint32_t rows = code.front().rows;
  const std::uint32_t cols = code.front().cols;
  for (const Mat& m : code) {
    if (m.rows != rows || m.cols != cols) {
      throw std::invalid_argument("idealiser needs uniform code shape");
    }
  }
  const std::vector<Elem> domain = sorted_domain(domain_in);
  if (domain.empty()) throw std::invalid_argument("idealiser needs a nonempty entry domain");
  const std::uint32_t s = left ? rows : cols;
  const std::uint64_t cells = std::uint64_t{s} * s;
  unsigned __int128 cand = 1;
  for (std::uint64_t i = 0; i < cells; ++i) {
    cand *= domain.size();
    if (cand > candidate_guard) throw std::invalid_argument("idealiser ambient too large");
  }

  std::vector<std::vector<Elem>> keys;
  keys.reserve(code.size());
  for (const Mat& m : code) keys.push_back(m.data);
  std::sort(keys.begin(), keys.end());

  IdealiserResult out;
  out.rows = s;
  out.cols = s;
  // odometer with the last cell fastest: ascending row-major entry order
  std::vector<std::size_t> digits(cells, 0);
  Mat p(s, s);
  for (std::uint64_t step = 0; step < static_cast<std::uint64_t>(cand); ++step) {
    for (std::uint64_t c = 0; c < cells; ++c) p.data[c] = domain[digits[c]];
    bool ok = true;
    for (const Mat& m : code) {
      const Mat prod = left ? mat_mul(p, m, f) : mat_mul(m, p, f);
      if (!std::binary_search(keys.begin(), keys.end(), prod.data)) {
        ok = false;
        break;
      }
    }
    if (ok) out.elements.push_back(p);
    for (std::uint64_t c = cells; c-- > 0;) {
      if (++digits[c] < domain.size()) break;
      digits[c] = 0;
    }
  }
  std::sort(out.elements.begin(), out.elements.end(), mat_data_less);

  // field diagnostic: unital commutative ring with invertible nonzero part
  std::vector<std::vector<Elem>> ikeys;
  ikeys.reserve(out.elements.size());
  for (const Mat& m : out.elements) ikeys.push_back(m.data);
  Mat ident(s, s);
  for (std::uint32_t i = 0; i < s; ++i) ident.at(i, i) = 1;
  bool is_field = std::binary_search(ikeys.begin(), ikeys.end(), ident.data);
  const Mat zero(s, s);
  for (std::size_t i = 0; is_field && i < out.elements.size(); ++i) {
    const Mat& x = out.elements[i];
    if (!(x == zero) && mat_rank(x, f) != s) is_field = false;
    for (std::size_t j = 0; is_field && j < out.elements.size(); ++j) {
      const Mat& y = out.elements[j];
      const Mat xy = mat_mul(x, y, f);
      if (!std::binary_search(ikeys.begin(), ikeys.end(), xy.data)) is_field = false;
      if (!(xy == mat_mul(y, x, f))) is_field = false;
      if (!std::binary_search(ikeys.begin(), ikeys.end(), mat_add(x, y, f).data)) {
        is_field = false;
      }
    }
  }
  out.is_field = is_field && !out.elements.empty();
  return out;
}

std::vector<Mat> code_matrices(const RankCode& code) {
  std::vector<Mat> mats;
  mats.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    mats.push_back(matrix_rep(code.word_at(i)));
  }
  return mats;
}

}  // namespace

std::string distance_mode_name(DistanceMode m) {
  switch (m) {
    case DistanceMode::EXHAUSTIVE: return "exhaustive";
    case DistanceMode::QUOTIENT: return "quotient";
    case DistanceMode::SAMPLED: return "sampled";
  }
  return "unknown";
}

DistanceResult min_distance(const RankCode& code, DistanceMode mode,
                            std::uint64_t seed, std::uint64_t samples) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const std::uint64_t q = f.order();
  const std::size_t size = code.size();
  if (size < 2) throw std::invalid_argument("min_distance needs at least 2 words");
  const auto& flat = code.words();

  DistanceResult res;
  res.mode = mode;

  const SigTab sig(f);
  const std::uint64_t tuples = rank_table_tuples(f);
  std::uint64_t expected_queries = 0;
  switch (mode) {
    case DistanceMode::EXHAUSTIVE:
      expected_queries = std::uint64_t{size} * (size - 1) / 2;
      break;
    case DistanceMode::QUOTIENT:
      expected_queries = (std::uint64_t{size} / (q - 1) + 1) * size;
      break;
    case DistanceMode::SAMPLED:
      expected_queries = samples;
      break;
  }
  const bool use_tab = tuples != 0 && tuples / 8 <= expected_queries;
  std::vector<std::uint8_t> rank_tab;
  if (use_tab) rank_tab = build_rank_table(f, sig, tuples);

  std::vector<Elem> scratch(std::size_t{n} * n);
  std::vector<Elem> diff(n);
  const Elem* sub_tab = f.has_direct_tables() ? f.sub_table() : nullptr;
  std::vector<std::uint64_t> qpow(n, 1);
  for (std::uint32_t t = 1; t < n; ++t) qpow[t] = qpow[t - 1] * q;

  auto pair_rank = [&](const Elem* a, const Elem* b) -> std::uint32_t {
    if (use_tab) {
      std::uint64_t idx = 0;
      for (std::uint32_t t = 0; t < n; ++t) {
        idx += std::uint64_t{sub_tab[std::uint64_t{a[t]} * q + b[t]]} * qpow[t];
      }
      return rank_tab[idx];
    }
    for (std::uint32_t t = 0; t < n; ++t) diff[t] = f.sub(a[t], b[t]);
    return dickson_rank(f, sig, diff.data(), scratch.data());
  };

  std::uint64_t hist[64] = {};

  switch (mode) {
    case DistanceMode::EXHAUSTIVE: {
      for (std::size_t i = 0; i < size; ++i) {
        const Elem* a = &flat[i * n];
        for (std::size_t j = i + 1; j < size; ++j) {
          ++hist[pair_rank(a, &flat[j * n])];
        }
      }
      res.pairs = std::uint64_t{size} * (size - 1) / 2;
      res.certified = true;
      break;
    }
    case DistanceMode::QUOTIENT: {
      if (!star_closed(code)) {
        throw std::invalid_argument("quotient mode requires verified F_{q^n}-closure");
      }
      // orbit representatives by ascending scan; orbits of nonzero words
      // all have size Q-1 because lambda*w = w forces lambda = 1
      const bool has_zero = zero_word_present(flat, n);
      std::vector<std::uint8_t> claimed(size, 0);
      std::vector<std::size_t> reps;
      std::vector<Elem> buf(n);
      for (std::size_t i = 0; i < size; ++i) {
        if (claimed[i]) continue;
        const Elem* w = &flat[i * n];
        bool zero = true;
        for (std::uint32_t t = 0; t < n; ++t) {
          if (w[t] != 0) zero = false;
        }
        if (zero) continue;
        reps.push_back(i);
        Elem lam = f.generator();
        for (std::uint64_t e = 1; e + 1 < q; ++e) {
          const std::size_t idx = scaled_word_index(f, flat, n, w, lam, buf);
          if (idx == kNoIndex) throw std::logic_error("orbit left the code after closure check");
          claimed[idx] = 1;
          lam = f.mul(lam, f.generator());
        }
      }
      for (const std::size_t ri : reps) {
        const Elem* w = &flat[ri * n];
        for (std::size_t j = 0; j < size; ++j) {
          if (j == ri) continue;
          ++hist[pair_rank(w, &flat[j * n])];
        }
      }
      // ordered count: (Q-1) * [sum over reps of the row histogram, plus
      // the zero row contributing the word rank of every representative]
      std::uint64_t rep_rank_count[64] = {};
      if (has_zero) {
        for (const std::size_t ri : reps) {
          ++rep_rank_count[dickson_rank(f, sig, &flat[ri * n], scratch.data())];
        }
      }
      for (std::uint32_t r = 0; r < 64; ++r) {
        const std::uint64_t ordered = (q - 1) * (hist[r] + rep_rank_count[r]);
        if (ordered % 2 != 0) throw std::logic_error("quotient histogram must be even");
        hist[r] = ordered / 2;
      }
      res.pairs = reps.size() * (size - 1);
      res.certified = true;
      break;
    }
    case DistanceMode::SAMPLED: {
      std::mt19937_64 rng(seed);
      for (std::uint64_t s = 0; s < samples; ++s) {
        std::size_t i = rng() % size;
        std::size_t j = rng() % size;
        while (j == i) j = rng() % size;
        ++hist[pair_rank(&flat[i * n], &flat[j * n])];
      }
      res.pairs = samples;
      res.certified = false;
      break;
    }
  }

  for (std::uint32_t r = 0; r < 64; ++r) {
    if (hist[r] != 0) res.distribution[r] = hist[r];
  }
  if (res.distribution.empty() || res.distribution.begin()->first == 0) {
    throw std::logic_error("distinct words produced a rank-0 difference");
  }
  res.distance = res.distribution.begin()->first;
  if (res.certified) {
    std::uint64_t total = 0;
    for (const auto& [r, c] : res.distribution) total += c;
    if (total != std::uint64_t{size} * (size - 1) / 2) {
      throw std::logic_error("distance distribution does not cover all pairs");
    }
  }
  return res;
}

std::uint64_t singleton_bound(std::uint32_t m, std::uint32_t n, std::uint64_t q,
                              std::uint32_t d) {
  const std::uint32_t mn = std::min(m, n);
  const std::uint32_t mx = std::max(m, n);
  if (d < 1 || d > mn) throw std::invalid_argument("singleton_bound needs 1 <= d <= min(m,n)");
  return checked_pow(q, std::uint64_t{mx} * (mn - d + 1), "singleton bound exceeds 64 bits");
}

bool fqn_closed(const RankCode& code) {
  return zero_word_present(code.words(), code.field().n()) && star_closed(code);
}

bool is_mrd(const RankCode& code) {
  const DistanceResult d =
      min_distance(code, star_closed(code) ? DistanceMode::QUOTIENT : DistanceMode::EXHAUSTIVE);
  return is_mrd(code, d);
}

bool is_mrd(const RankCode& code, const DistanceResult& dist) {
  if (!dist.certified) {
    throw std::invalid_argument("sampled distance estimates cannot certify MRD");
  }
  const Field& f = code.field();
  return dist.distance == code.claimed_distance() &&
         code.size() == singleton_bound(f.n(), f.n(), f.q(), dist.distance);
}

Mat PuncturedCode::word_matrix(std::size_t i) const {
  const std::uint32_t n = field->n();
  Mat out(m, n);
  std::vector<Elem> row(n);
  for (std::uint32_t t = 0; t < m; ++t) {
    field->coords(words[i * m + t], row.data());
    for (std::uint32_t j = 0; j < n; ++j) out.at(t, j) = row[j];
  }
  return out;
}

PuncturedCode puncture_code(const RankCode& code, std::uint32_t u) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  if (u < 1 || u >= n) throw std::invalid_argument("puncture needs 1 <= u <= n-1");
  const std::uint32_t m = n - u;
  const auto& flat = code.words();

  std::vector<std::size_t> idx(code.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    return word_less(&flat[a * n], &flat[b * n], m);
  };
  std::sort(idx.begin(), idx.end(), less);

  PuncturedCode pc;
  pc.field = &f;
  pc.m = m;
  pc.claimed_distance = code.claimed_distance() > u ? code.claimed_distance() - u : 1;
  pc.words.reserve(idx.size() * m);
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    if (pos > 0 && !less(idx[pos - 1], idx[pos])) continue;
    const Elem* w = &flat[idx[pos] * n];
    pc.words.insert(pc.words.end(), w, w + m);
  }
  return pc;
}

std::uint32_t truncated_rank(const Field& f, const Elem* slots, std::uint32_t m) {
  const std::uint32_t n = f.n();
  if (m < 1 || m > n) throw std::invalid_argument("truncated rank needs 1 <= m <= n");
  bool zero = true;
  for (std::uint32_t t = 0; t < m && zero; ++t) zero = slots[t] == 0;
  if (zero) return 0;
  const std::uint64_t completions =
      checked_pow(f.order(), n - m, "completion scan size");
  if (completions > (std::uint64_t{1} << 22)) {
    throw std::invalid_argument("completion scan over the dropped slots is too large");
  }
  std::vector<Elem> cf(slots, slots + m);
  cf.resize(n, 0);
  std::uint32_t best = n;
  for (std::uint64_t c = 0; c < completions && best > 1; ++c) {
    if (c > 0) {
      for (std::uint32_t t = m; t < n; ++t) {
        if (++cf[t] < f.order()) break;
        cf[t] = 0;
      }
    }
    Mat d(n, n);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) d.at(i, j) = f.sigma(cf[(j + n - i) % n], i);
    }
    best = std::min(best, mat_rank(std::move(d), f));
  }
  return best;
}

PointSet truncated_sigma_set(const Field& f, std::uint32_t m) {
  if (m < 1 || m > f.n()) throw std::invalid_argument("sigma set needs 1 <= m <= n");
  std::vector<ProjPoint> pts;
  for (std::uint64_t x = 1; x < f.order(); ++x) {
    std::vector<Elem> raw(m);
    raw[0] = static_cast<Elem>(x);
    for (std::uint32_t i = 1; i < m; ++i) raw[i] = f.sigma(raw[i - 1]);
    pts.push_back(normalize_point(f, std::move(raw)));
  }
  return make_point_set(m, SetLabel::GENERIC, std::move(pts));
}

std::uint32_t truncated_secant_rank(const Field& f, const Elem* slots, std::uint32_t m,
                                    const PointSet& sigma_m) {
  bool zero = true;
  for (std::uint32_t t = 0; t < m; ++t) {
    if (slots[t] != 0) zero = false;
  }
  if (zero) return 0;
  const ProjPoint p = normalize_point(f, std::vector<Elem>(slots, slots + m));
  for (std::uint32_t h = 0; h < m; ++h) {
    if (secant_membership(f, p, sigma_m, h)) return h + 1;
  }
  return m;  // sigma_m spans the ambient space, unreachable for m <= n
}

DistanceResult punctured_min_distance(const PuncturedCode& pc) {
  const Field& f = *pc.field;
  const std::uint32_t m = pc.m;
  const std::size_t size = pc.size();
  if (size < 2) throw std::invalid_argument("min_distance needs at least 2 words");
  DistanceResult res;
  res.mode = DistanceMode::EXHAUSTIVE;
  res.certified = true;
  std::uint64_t hist[64] = {};
  std::map<std::vector<Elem>, std::uint32_t> memo;  // keyed by normalized point
  std::vector<Elem> diff(m);
  for (std::size_t i = 0; i < size; ++i) {
    const Elem* a = &pc.words[i * m];
    for (std::size_t j = i + 1; j < size; ++j) {
      const Elem* b = &pc.words[j * m];
      for (std::uint32_t t = 0; t < m; ++t) diff[t] = f.sub(a[t], b[t]);
      const ProjPoint p = normalize_point(f, diff);
      auto it = memo.find(p.coords);
      std::uint32_t r;
      if (it != memo.end()) {
        r = it->second;
      } else {
        r = truncated_rank(f, diff.data(), m);
        memo.emplace(p.coords, r);
      }
      ++hist[r];
    }
  }
  for (std::uint32_t r = 0; r < 64; ++r) {
    if (hist[r] != 0) res.distribution[r] = hist[r];
  }
  if (res.distribution.empty() || res.distribution.begin()->first == 0) {
    throw std::logic_error("distinct words produced a rank-0 difference");
  }
  res.distance = res.distribution.begin()->first;
  res.pairs = std::uint64_t{size} * (size - 1) / 2;
  return res;
}

DistanceResult punctured_min_distance_secant(const PuncturedCode& pc) {
  const Field& f = *pc.field;
  const std::uint32_t m = pc.m;
  const std::size_t size = pc.size();
  if (size < 2) throw std::invalid_argument("min_distance needs at least 2 words");
  const PointSet sigma_m = truncated_sigma_set(f, m);
  DistanceResult res;
  res.mode = DistanceMode::EXHAUSTIVE;
  res.certified = true;
  std::uint64_t hist[64] = {};
  std::map<std::vector<Elem>, std::uint32_t> memo;  // keyed by normalized point
  std::vector<Elem> diff(m);
  for (std::size_t i = 0; i < size; ++i) {
    const Elem* a = &pc.words[i * m];
    for (std::size_t j = i + 1; j < size; ++j) {
      const Elem* b = &pc.words[j * m];
      for (std::uint32_t t = 0; t < m; ++t) diff[t] = f.sub(a[t], b[t]);
      const ProjPoint p = normalize_point(f, diff);
      auto it = memo.find(p.coords);
      std::uint32_t r;
      if (it != memo.end()) {
        r = it->second;
      } else {
        r = truncated_secant_rank(f, diff.data(), m, sigma_m);
        memo.emplace(p.coords, r);
      }
      ++hist[r];
    }
  }
  for (std::uint32_t r = 0; r < 64; ++r) {
    if (hist[r] != 0) res.distribution[r] = hist[r];
  }
  res.distance = res.distribution.begin()->first;
  res.pairs = std::uint64_t{size} * (size - 1) / 2;
  return res;
}

bool is_mrd(const PuncturedCode& pc, const DistanceResult& dist) {
  if (!dist.certified) {
    throw std::invalid_argument("sampled distance estimates cannot certify MRD");
  }
  const Field& f = *pc.field;
  return pc.size() == singleton_bound(pc.m, f.n(), f.q(), dist.distance);
}

RankCode adjoint_code(const RankCode& code) {
  const Field& f = code.field();
  std::vector<std::vector<Elem>> words;
  words.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    words.push_back(adjoint(code.word_at(i)).coeffs());
  }
  return RankCode::explicit_code(f, std::move(words), code.claimed_distance());
}

EquivalenceMap identity_equivalence(const Field& f) {
  return {LinPoly::identity(f), LinPoly::identity(f), LinPoly(f), 0, false};
}

RankCode apply_equivalence(const RankCode& code, const EquivalenceMap& e) {
  const Field& f = code.field();
  if (!is_invertible(e.f) || !is_invertible(e.g)) {
    throw std::invalid_argument("equivalence map needs invertible f and g");
  }
  const std::uint32_t rho = e.rho % f.spec().a;
  std::vector<std::vector<Elem>> words;
  words.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    LinPoly w = code.word_at(i);
    if (e.adjoint_first) w = adjoint(w);
    w = apply_rho(w, rho);
    words.push_back(add(compose(e.f, compose(w, e.g)), e.h).coeffs());
  }
  return RankCode::explicit_code(f, std::move(words), code.claimed_distance());
}

EquivalenceMap compose_equivalences(const Field& f, const EquivalenceMap& e1,
                                    const EquivalenceMap& e2) {
  if (e1.adjoint_first || e2.adjoint_first) {
    throw std::invalid_argument("adjoint-first maps do not compose");
  }
  const std::uint32_t a = f.spec().a;
  const std::uint32_t rho2 = e2.rho % a;
  EquivalenceMap out{compose(e2.f, apply_rho(e1.f, rho2)),
                     compose(apply_rho(e1.g, rho2), e2.g),
                     add(compose(e2.f, compose(apply_rho(e1.h, rho2), e2.g)), e2.h),
                     (e1.rho + e2.rho) % a, false};
  return out;
}

IdealiserResult left_idealiser_mats(const Field& f, const std::vector<Mat>& code,
                                    const std::vector<Elem>& domain,
                                    std::uint64_t candidate_guard) {
  return idealiser_impl(f, code, domain, candidate_guard, true);
}

IdealiserResult right_idealiser_mats(const Field& f, const std::vector<Mat>& code,
                                     const std::vector<Elem>& domain,
                                     std::uint64_t candidate_guard) {
  return idealiser_impl(f, code, domain, candidate_guard, false);
}

IdealiserResult left_idealiser(const RankCode& code, std::uint64_t candidate_guard) {
  const Field& f = code.field();
  return idealiser_impl(f, code_matrices(code), f.subfield_elements(1), candidate_guard,
                        true);
}

IdealiserResult right_idealiser(const RankCode& code, std::uint64_t candidate_guard) {
  const Field& f = code.field();
  return idealiser_impl(f, code_matrices(code), f.subfield_elements(1), candidate_guard,
                        false);
}

std::vector<CensusEntry> gabidulin_subspace_census(const RankCode& code, std::uint32_t r,
                                                   std::optional<std::uint32_t> ambient,
                                                   std::uint64_t budget) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const std::uint64_t q = f.order();
  const auto& flat = code.words();
  const std::uint32_t K = ambient ? *ambient : detect_ambient(code);
  if (K > n) throw std::invalid_argument("census ambient exceeds the slot count");
  if (r < 1 || r > K) throw std::invalid_argument("census needs 1 <= r <= ambient degree");
  {
    unsigned __int128 cost = 1;
    for (std::uint32_t i = 0; i < K - r + 1; ++i) {
      cost *= q;
      if (cost > budget) throw std::invalid_argument("census budget exceeded");
    }
  }

  std::map<std::vector<Elem>, CensusEntry> found;
  const std::uint32_t span = K - r;

  std::vector<Elem> fc(n, 0);
  fc[0] = 1;
  // degree-exact odometers keep the scan order deterministic: lower
  // coefficients vary fastest
  auto bump = [&](std::vector<Elem>& cs, std::uint32_t lo, std::uint32_t hi) {
    for (std::uint32_t t = lo; t <= hi; ++t) {
      if (++cs[t] < q) return true;
      cs[t] = 0;
    }
    return false;
  };

  for (std::uint32_t t = 0; t <= span; ++t) {
    // exact degree t: slot t stays in 1..q-1, the bump overflowing it ends
    // the scan
    std::fill(fc.begin(), fc.end(), 0);
    fc[0] = 1;
    if (t > 0) fc[t] = 1;
    while (true) {
      const LinPoly fp(f, fc);
      if (!is_invertible(fp)) {
        if (t == 0) break;
        if (!bump(fc, 1, t)) break;
        continue;
      }
      const std::uint32_t gmax = span - t;
      for (std::uint32_t u = 0; u <= gmax; ++u) {
        std::vector<Elem> gc(n, 0);
        gc[u] = 1;
        while (true) {
          const LinPoly gp(f, gc);
          if (is_invertible(gp)) {
            // generating monomials first, then the full alpha scan
            bool ok = true;
            for (std::uint32_t i = 0; i < r && ok; ++i) {
              const LinPoly w = compose(fp, compose(LinPoly::monomial(f, 1, i), gp));
              ok = word_member(flat, n, w.coeffs().data());
            }
            if (ok) {
              // basis images f((c X^{sigma^i})(g(x))) indexed per slot value
              std::vector<std::vector<Elem>> img(r);
              for (std::uint32_t i = 0; i < r; ++i) {
                img[i].resize(q * n);
                for (std::uint64_t c = 0; c < q; ++c) {
                  const LinPoly w = compose(
                      fp, compose(LinPoly::monomial(f, static_cast<Elem>(c), i), gp));
                  std::copy(w.coeffs().begin(), w.coeffs().end(), img[i].begin() + c * n);
                }
              }
              std::vector<Elem> alpha(r, 0);
              std::vector<Elem> w(n);
              std::vector<std::vector<Elem>> members;
              std::uint64_t total = 1;
              for (std::uint32_t i = 0; i < r; ++i) total *= q;
              members.reserve(total);
              for (std::uint64_t step = 0; step < total && ok; ++step) {
                std::fill(w.begin(), w.end(), 0);
                for (std::uint32_t i = 0; i < r; ++i) {
                  const Elem* part = &img[i][std::uint64_t{alpha[i]} * n];
                  for (std::uint32_t tt = 0; tt < n; ++tt) w[tt] = f.add(w[tt], part[tt]);
                }
                ok = word_member(flat, n, w.data());
                if (ok) members.push_back(w);
                for (std::uint32_t i = 0; i < r; ++i) {
                  if (++alpha[i] < q) break;
                  alpha[i] = 0;
                }
              }
              if (ok) {
                std::sort(members.begin(), members.end(),
                          [&](const std::vector<Elem>& x, const std::vector<Elem>& y) {
                            return word_less(x.data(), y.data(), n);
                          });
                std::vector<Elem> key;
                key.reserve(members.size() * n);
                for (const auto& mw : members) key.insert(key.end(), mw.begin(), mw.end());
                if (!found.count(key)) {
                  found.emplace(std::move(key), CensusEntry{{}, fp, gp});
                }
              }
            }
          }
          if (!bump(gc, 0, u)) break;
        }
      }
      if (t == 0) break;
      if (!bump(fc, 1, t)) break;
    }
  }

  std::vector<CensusEntry> out;
  out.reserve(found.size());
  for (auto& [key, entry] : found) {
    entry.words = key;
    out.push_back(std::move(entry));
  }
  return out;
}

ClosureFlags closure_flags(const RankCode& code) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const std::size_t size = code.size();
  const auto& flat = code.words();
  ClosureFlags flags;
  std::vector<Elem> buf(n);

  // scalar closures: quick generator certificate, full lexicographic scan
  // only when a witness is owed
  const bool zero_in = zero_word_present(flat, n);
  const Elem fq_gen = f.pow(f.generator(), (f.order() - 1) / (f.q() - 1));
  auto scalar_scan = [&](const std::vector<Elem>& lambdas)
      -> std::optional<std::pair<Elem, LinPoly>> {
    for (const Elem lam : lambdas) {
      for (std::size_t i = 0; i < size; ++i) {
        const Elem* w = &flat[i * n];
        for (std::uint32_t t = 0; t < n; ++t) buf[t] = f.mul(lam, w[t]);
        if (!word_member(flat, n, buf.data())) return std::make_pair(lam, word_poly(f, w));
      }
    }
    return std::nullopt;
  };

  bool fq_quick = zero_in;
  if (fq_quick) {
    for (std::size_t i = 0; i < size && fq_quick; ++i) {
      fq_quick = scaled_word_index(f, flat, n, &flat[i * n], fq_gen, buf) != kNoIndex;
    }
  }
  if (fq_quick) {
    flags.fq_closed = true;
  } else {
    flags.fq_witness = scalar_scan(f.subfield_elements(1));
    flags.fq_closed = !flags.fq_witness.has_value();
  }

  if (zero_in && star_closed(code)) {
    flags.fqn_closed = true;
  } else {
    std::vector<Elem> all(f.order());
    for (std::uint64_t x = 0; x < f.order(); ++x) all[x] = static_cast<Elem>(x);
    flags.fqn_witness = scalar_scan(all);
    flags.fqn_closed = !flags.fqn_witness.has_value();
  }

  // additivity: full pairwise scan at desk scale, span dimension beyond it
  const std::uint64_t pair_cost = std::uint64_t{size} * size;
  if (pair_cost <= 20'000'000ull) {
    for (std::size_t i = 0; i < size && !flags.additive_witness; ++i) {
      const Elem* a = &flat[i * n];
      for (std::size_t j = i; j < size; ++j) {
        const Elem* b = &flat[j * n];
        for (std::uint32_t t = 0; t < n; ++t) buf[t] = f.add(a[t], b[t]);
        if (!word_member(flat, n, buf.data())) {
          flags.additive_witness = std::make_pair(word_poly(f, a), word_poly(f, b));
          break;
        }
      }
    }
    flags.additive = !flags.additive_witness.has_value();
  } else {
    flags.additive = additive_by_span(code);
    if (!flags.additive) {
      std::uint64_t checks = 0;
      for (std::size_t i = 0; i < size && !flags.additive_witness; ++i) {
        const Elem* a = &flat[i * n];
        for (std::size_t j = i; j < size; ++j) {
          if (++checks > 8'000'000ull) break;
          const Elem* b = &flat[j * n];
          for (std::uint32_t t = 0; t < n; ++t) buf[t] = f.add(a[t], b[t]);
          if (!word_member(flat, n, buf.data())) {
            flags.additive_witness = std::make_pair(word_poly(f, a), word_poly(f, b));
            break;
          }
        }
        if (checks > 8'000'000ull) break;
      }
    }
  }

  flags.fq_linear = flags.additive && flags.fq_closed;
  return flags;
}

AffineResult is_affine(const RankCode& code, std::uint64_t pair_budget) {
  const Field& f = code.field();
  const std::uint32_t n = f.n();
  const std::size_t size = code.size();
  const auto& flat = code.words();

  if (additive_by_span(code)) {
    // finite additive sets contain zero; C - 0 = C
    if (!zero_word_present(flat, n)) throw std::logic_error("additive code without zero");
    return {true, LinPoly(f)};
  }

  const unsigned __int128 worst =
      static_cast<unsigned __int128>(size) * size * size;
  if (worst > pair_budget) return {std::nullopt, std::nullopt};

  std::vector<Elem> buf(n);
  for (std::size_t c0 = 0; c0 < size; ++c0) {
    const Elem* cw = &flat[c0 * n];
    bool ok = true;
    for (std::size_t i = 0; i < size && ok; ++i) {
      const Elem* a = &flat[i * n];
      for (std::size_t j = i; j < size; ++j) {
        const Elem* b = &flat[j * n];
        // (a - c0) + (b - c0) must land back in C - c0
        for (std::uint32_t t = 0; t < n; ++t) {
          buf[t] = f.sub(f.add(a[t], b[t]), cw[t]);
        }
        if (!word_member(flat, n, buf.data())) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return {true, word_poly(f, cw)};
  }
  return {false, std::nullopt};
}

InequivalenceReport inequivalence_report(const RankCode& a, const RankCode& b,
                                         std::uint64_t census_budget,
                                         std::uint64_t affine_budget,
                                         std::uint64_t idealiser_guard) {
  if (!(a.field().spec() == b.field().spec())) {
    throw std::invalid_argument("inequivalence report needs a common field");
  }
  InequivalenceReport rep;
  rep.size1 = a.size();
  rep.size2 = b.size();

  auto auto_dist = [](const RankCode& c) {
    return min_distance(c, star_closed(c) ? DistanceMode::QUOTIENT
                                          : DistanceMode::EXHAUSTIVE);
  };
  rep.dist1 = auto_dist(a).distribution;
  rep.dist2 = auto_dist(b).distribution;

  rep.flags1 = closure_flags(a);
  rep.flags2 = closure_flags(b);

  const AffineResult af1 = is_affine(a, affine_budget);
  const AffineResult af2 = is_affine(b, affine_budget);
  rep.affine1 = af1.affine;
  rep.affine2 = af2.affine;

  const std::uint32_t K = std::max(detect_ambient(a), detect_ambient(b));
  if (K >= 2) {
    const std::uint32_t r = K >= 3 ? K - 2 : 1;
    try {
      rep.census1 = gabidulin_subspace_census(a, r, K, census_budget).size();
      rep.census2 = gabidulin_subspace_census(b, r, K, census_budget).size();
    } catch (const std::invalid_argument&) {
      rep.census1.reset();
      rep.census2.reset();
    }
  }

  try {
    rep.ideal_l1 = left_idealiser(a, idealiser_guard).elements.size();
    rep.ideal_l2 = left_idealiser(b, idealiser_guard).elements.size();
    rep.ideal_r1 = right_idealiser(a, idealiser_guard).elements.size();
    rep.ideal_r2 = right_idealiser(b, idealiser_guard).elements.size();
  } catch (const std::invalid_argument&) {
    rep.ideal_l1.reset();
    rep.ideal_l2.reset();
    rep.ideal_r1.reset();
    rep.ideal_r2.reset();
  }

  if (rep.size1 != rep.size2) {
    rep.verdict = Verdict::DISTINGUISHED;
    rep.invariant = "size";
    rep.value1 = std::to_string(rep.size1);
    rep.value2 = std::to_string(rep.size2);
  } else if (rep.dist1 != rep.dist2) {
    rep.verdict = Verdict::DISTINGUISHED;
    rep.invariant = "distance distribution";
    rep.value1 = render_distribution(rep.dist1);
    rep.value2 = render_distribution(rep.dist2);
  } else if (rep.affine1 && rep.affine2 && *rep.affine1 != *rep.affine2) {
    rep.verdict = Verdict::DISTINGUISHED;
    rep.invariant = "affineness";
    rep.value1 = *rep.affine1 ? "affine" : "not affine";
    rep.value2 = *rep.affine2 ? "affine" : "not affine";
  } else if (rep.census1 && rep.census2 && !rep.flags1.additive && !rep.flags2.additive &&
             *rep.census1 != *rep.census2) {
    // the count is invariant in the setting where both codes are
    // non-additive images; additive pairs stay inconclusive here
    rep.verdict = Verdict::DISTINGUISHED;
    rep.invariant = "gabidulin subspace census";
    rep.value1 = std::to_string(*rep.census1);
    rep.value2 = std::to_string(*rep.census2);
  } else {
    rep.verdict = Verdict::INCONCLUSIVE;
  }
  return rep;
}

std::string verdict_line(const InequivalenceReport& r) {
  if (r.verdict == Verdict::INCONCLUSIVE) return "INCONCLUSIVE";
  return "DISTINGUISHED(" + r.invariant + ": " + r.value1 + " vs " + r.value2 + ")";
}

CodeReport analyze_code(const RankCode& code, DistanceMode mode, std::uint64_t seed,
                        std::uint64_t samples, std::uint64_t affine_budget) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field& f = code.field();
  CodeReport rep;
  rep.family = family_name(code.family());
  rep.params = code.spec_string();
  rep.size = code.size();
  rep.dist = min_distance(code, mode, seed, samples);
  rep.singleton = singleton_bound(f.n(), f.n(), f.q(), rep.dist.distance);
  rep.mrd = rep.dist.certified && rep.size == rep.singleton &&
            rep.dist.distance == code.claimed_distance();
  rep.flags = closure_flags(code);
  rep.affine = is_affine(code, affine_budget);
  rep.seed = seed;
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string report_json(const CodeReport& r, bool include_runtime) {
  nlohmann::json j;
  j["family"] = r.family;
  j["params"] = r.params;
  j["size"] = r.size;
  j["singleton_bound"] = r.singleton;
  j["min_distance"] = r.dist.distance;
  j["is_mrd"] = r.mrd;
  j["mode"] = distance_mode_name(r.dist.mode);
  j["certified"] = r.dist.certified;
  nlohmann::json dd = nlohmann::json::object();
  for (const auto& [rank, count] : r.dist.distribution) {
    dd[std::to_string(rank)] = count;
  }
  j["distance_distribution"] = dd;
  nlohmann::json flags = nlohmann::json::object();
  flags["additive"] = r.flags.additive;
  flags["fq_closed"] = r.flags.fq_closed;
  flags["fq_linear"] = r.flags.fq_linear;
  flags["fqn_closed"] = r.flags.fqn_closed;
  if (r.affine.witness) {
    flags["affine_witness"] = r.affine.witness->str();
  } else {
    flags["affine_witness"] = nullptr;
  }
  j["flags"] = flags;
  j["seed"] = r.seed;
  if (include_runtime) j["runtime"] = r.runtime;
  return j.dump(2);
}

}  // namespace rmf
