#include "rmf/codes.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rmf {
namespace {

constexpr std::uint64_t kEnumerationCap = 1ull << 26;

std::uint64_t powu(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Elem sign_elem(const Field& f, std::uint64_t exponent) {
  return (exponent % 2 == 0) ? 1 : f.neg(1);
}

// Sorted labels -> subfield elements; positions index subfield_elements(1).
std::vector<Elem> labels_to_elems(const Field& f, const std::vector<std::uint32_t>& labels,
                                  bool allow_zero) {
  const auto sub = f.subfield_elements(1);
  std::vector<Elem> out;
  for (const auto l : labels) {
    if (l >= sub.size() || (!allow_zero && l == 0))
      throw std::invalid_argument("subfield label out of range");
    out.push_back(sub[l]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct WordSink {
  const Field& f;
  std::vector<Elem> flat;

  void emit(const std::vector<Elem>& w) {
    flat.insert(flat.end(), w.begin(), w.end());
  }

  // sort + dedup by coefficient tuple, low slot = least significant
  void finish(std::uint32_t n) {
    const std::size_t count = flat.size() / n;
    std::vector<std::uint32_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::uint32_t x, std::uint32_t y) {
      const Elem* a = flat.data() + std::size_t{x} * n;
      const Elem* b = flat.data() + std::size_t{y} * n;
      for (std::uint32_t i = n; i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i];
      }
      return false;
    };
    std::sort(idx.begin(), idx.end(), less);
    std::vector<Elem> out;
    out.reserve(flat.size());
    const Elem* prev = nullptr;
    for (const auto id : idx) {
      const Elem* w = flat.data() + std::size_t{id} * n;
      if (prev && std::equal(w, w + n, prev)) continue;
      out.insert(out.end(), w, w + n);
      prev = out.data() + out.size() - n;
    }
    flat = std::move(out);
  }
};

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::GABIDULIN: return "gabidulin";
    case Family::TWISTED: return "twisted";
    case Family::TROMBETTI_ZHOU: return "trombetti_zhou";
    case Family::OO_ADDITIVE: return "oo_additive";
    case Family::OO_NONLINEAR: return "oo_nonlinear";
    case Family::C_SIGMA_T: return "c_sigma_t";
    case Family::EXPLICIT: return "explicit";
  }
  return "unknown";
}

bool norm_in(const Field& f, Elem x, const std::vector<Elem>& set) {
  return std::binary_search(set.begin(), set.end(), f.norm(x));
}

RankCode RankCode::gabidulin(const Field& f, std::uint32_t k) {
  if (k < 1 || k > f.n()) throw std::invalid_argument("gabidulin needs 1 <= k <= n");
  RankCode c(f, Family::GABIDULIN);
  c.params_.k = k;
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::twisted(const Field& f, std::uint32_t k, Elem eta, std::uint32_t h) {
  if (k < 1 || k >= f.n()) throw std::invalid_argument("twisted needs 1 <= k < n");
  f.check(eta);
  // reject N(eta) = (-1)^{nk}, norm exponent sum_{i<n} q^{si} mod Q-1
  const std::uint64_t mod = f.order() - 1;
  const std::uint64_t step = powu(f.q(), f.spec().s) % mod;
  std::uint64_t e = 0, qs = 1;
  for (std::uint32_t i = 0; i < f.n(); ++i) {
    e = (e + qs) % mod;
    qs = qs * step % mod;
  }
  if (f.pow(eta, e) == sign_elem(f, std::uint64_t{f.n()} * k))
    throw std::invalid_argument("twisted norm condition violated");
  RankCode c(f, Family::TWISTED);
  c.params_.k = k;
  c.params_.eta = eta;
  c.params_.h = h;
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::trombetti_zhou(const Field& f, std::uint32_t k, Elem xi) {
  if (f.q() % 2 == 0) throw std::invalid_argument("trombetti_zhou needs q odd");
  if (f.n() % 2) throw std::invalid_argument("trombetti_zhou needs n even");
  if (k < 1 || k >= f.n()) throw std::invalid_argument("trombetti_zhou needs 1 <= k < n");
  f.check(xi);
  const Elem nx = f.norm(xi);
  if (nx == 0 || f.pow(nx, (f.q() - 1) / 2) == 1)
    throw std::invalid_argument("trombetti_zhou needs N(xi) a non-square in F_q*");
  RankCode c(f, Family::TROMBETTI_ZHOU);
  c.params_.k = k;
  c.params_.xi = xi;
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::oo_additive(const Field& f, std::uint32_t k, std::uint32_t q0,
                               Elem eta, std::uint32_t h) {
  if (k < 1 || k >= f.n()) throw std::invalid_argument("oo_additive needs 1 <= k < n");
  std::uint32_t u = 0;
  std::uint64_t v = 1;
  while (v < f.q()) {
    v *= q0;
    ++u;
  }
  if (q0 < 2 || v != f.q()) throw std::invalid_argument("q must be a power of q0");
  f.check(eta);
  // norm to F_{q0^s}: exponent sum_{i<un} q0^{si} mod Q-1
  const std::uint64_t mod = f.order() - 1;
  const std::uint64_t step = powu(q0, f.spec().s) % mod;
  std::uint64_t e = 0, q0s = 1;
  for (std::uint32_t i = 0; i < u * f.n(); ++i) {
    e = (e + q0s) % mod;
    q0s = q0s * step % mod;
  }
  if (f.pow(eta, e) == sign_elem(f, std::uint64_t{f.n()} * k * u))
    throw std::invalid_argument("oo_additive norm condition violated");
  RankCode c(f, Family::OO_ADDITIVE);
  c.params_.k = k;
  c.params_.q0 = q0;
  c.params_.eta = eta;
  c.params_.h = h;
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::oo_nonlinear(const Field& f, std::uint32_t k,
                                std::vector<std::uint32_t> i_labels) {
  if (k < 1 || k > f.n() - 1)
    throw std::invalid_argument("oo_nonlinear needs 1 <= k <= n-1");
  RankCode c(f, Family::OO_NONLINEAR);
  c.params_.k = k;
  std::sort(i_labels.begin(), i_labels.end());
  i_labels.erase(std::unique(i_labels.begin(), i_labels.end()), i_labels.end());
  c.params_.labels = i_labels;
  c.i_set_ = labels_to_elems(f, i_labels, true);
  const Elem sgn = sign_elem(f, std::uint64_t{f.n()} * (k + 1));
  for (const Elem v : c.i_set_) c.j_set_.push_back(f.mul(sgn, v));
  std::sort(c.j_set_.begin(), c.j_set_.end());
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::c_sigma_t(const Field& f, std::uint32_t k,
                             std::vector<std::uint32_t> t_labels) {
  if (k < 2 || k > f.n() - 1)
    throw std::invalid_argument("c_sigma_t needs 2 <= k <= n-1");
  std::sort(t_labels.begin(), t_labels.end());
  t_labels.erase(std::unique(t_labels.begin(), t_labels.end()), t_labels.end());
  if (t_labels.empty() || t_labels.front() == 0)
    throw std::invalid_argument("T must be a subset of F_q*");
  if (t_labels.front() != 1)
    throw std::invalid_argument("T must contain 1");
  RankCode c(f, Family::C_SIGMA_T);
  c.params_.k = k;
  c.params_.labels = t_labels;
  c.t_set_ = labels_to_elems(f, t_labels, false);
  // exponents e_i = (q^{si}-1)/(q^s-1) mod Q-1, as integer geometric sums
  const std::uint64_t mod = f.order() - 1;
  const std::uint64_t step = powu(f.q(), f.spec().s) % mod;
  std::uint64_t e = 0, qs = 1;
  for (std::uint32_t i = 0; i <= f.n() - k + 1; ++i) {
    c.ei_.push_back(e);
    e = (e + qs) % mod;
    qs = qs * step % mod;
  }
  c.claimed_distance_ = f.n() - k + 1;
  return c;
}

RankCode RankCode::explicit_code(const Field& f, std::vector<std::vector<Elem>> words,
                                 std::uint32_t claimed_distance) {
  RankCode c(f, Family::EXPLICIT);
  c.claimed_distance_ = claimed_distance;
  WordSink sink{f, {}};
  for (const auto& w : words) {
    if (w.size() != f.n())
      throw std::invalid_argument("explicit word has wrong slot count");
    for (const Elem e : w) f.check(e);
    sink.emit(w);
  }
  sink.finish(f.n());
  c.words_ = std::move(sink.flat);
  c.enumerated_ = true;
  return c;
}

std::uint64_t RankCode::expected_size() const {
  if (family_ == Family::EXPLICIT) return words_.size() / field_->n();
  return powu(field_->order(), params_.k);
}

void RankCode::enumerate() const {
  if (enumerated_) return;
  const Field& f = *field_;
  const std::uint32_t n = f.n();
  const std::uint32_t k = params_.k;
  const std::uint64_t Q = f.order();
  if (expected_size() > kEnumerationCap)
    throw std::invalid_argument("enumeration larger than hard cap 2^26");

  WordSink sink{f, {}};
  std::vector<Elem> w(n, 0);

  auto for_each_tuple = [&](std::uint32_t slots, auto&& body) {
    // iterates all Q^slots assignments into the first `slots` entries of a
    // scratch vector
    std::vector<Elem> t(slots, 0);
    while (true) {
      body(t);
      std::uint32_t i = 0;
      while (i < slots) {
        if (++t[i] < Q) break;
        t[i] = 0;
        ++i;
      }
      if (i == slots) break;
    }
  };

  switch (family_) {
    case Family::GABIDULIN: {
      for_each_tuple(k, [&](const std::vector<Elem>& t) {
        std::fill(w.begin(), w.end(), 0);
        std::copy(t.begin(), t.end(), w.begin());
        sink.emit(w);
      });
      break;
    }
    case Family::TWISTED: {
      const std::uint32_t r = (f.spec().a * params_.h) % f.ext_degree();
      for_each_tuple(k, [&](const std::vector<Elem>& t) {
        std::fill(w.begin(), w.end(), 0);
        std::copy(t.begin(), t.end(), w.begin());
        w[k] = f.mul(params_.eta, f.frob(t[0], r));
        sink.emit(w);
      });
      break;
    }
    case Family::TROMBETTI_ZHOU: {
      const auto half = f.subfield_elements(f.n() / 2);
      // slots: a_0 in F_{q^t}, a_1..a_{k-1} free, a_k in xi * F_{q^t}
      for (const Elem a0 : half)
        for (const Elem ak : half)
          for_each_tuple(k - 1, [&](const std::vector<Elem>& t) {
            std::fill(w.begin(), w.end(), 0);
            w[0] = a0;
            for (std::uint32_t i = 1; i < k; ++i) w[i] = t[i - 1];
            w[k] = f.mul(params_.xi, ak);
            sink.emit(w);
          });
      break;
    }
    case Family::OO_ADDITIVE: {
      std::uint32_t a0 = 0;
      std::uint64_t v = 1;
      while (v < params_.q0) {
        v *= f.p();
        ++a0;
      }
      const std::uint32_t r = (a0 * params_.h) % f.ext_degree();
      for_each_tuple(k, [&](const std::vector<Elem>& t) {
        std::fill(w.begin(), w.end(), 0);
        std::copy(t.begin(), t.end(), w.begin());
        w[k] = f.mul(params_.eta, f.frob(t[0], r));
        sink.emit(w);
      });
      break;
    }
    case Family::OO_NONLINEAR: {
      // branch 1: support 0..k-1 with N(a_0) in I
      for (Elem a0 = 0; a0 < Q; ++a0) {
        if (!std::binary_search(i_set_.begin(), i_set_.end(), f.norm(a0))) continue;
        for_each_tuple(k - 1, [&](const std::vector<Elem>& t) {
          std::fill(w.begin(), w.end(), 0);
          w[0] = a0;
          for (std::uint32_t i = 1; i < k; ++i) w[i] = t[i - 1];
          sink.emit(w);
        });
      }
      // branch 2: support 1..k with N(b_k) not in (-1)^{n(k+1)} I
      for (Elem bk = 0; bk < Q; ++bk) {
        if (std::binary_search(j_set_.begin(), j_set_.end(), f.norm(bk))) continue;
        for_each_tuple(k - 1, [&](const std::vector<Elem>& t) {
          std::fill(w.begin(), w.end(), 0);
          for (std::uint32_t i = 1; i < k; ++i) w[i] = t[i - 1];
          w[k] = bk;
          sink.emit(w);
        });
      }
      break;
    }
    case Family::C_SIGMA_T: {
      const std::uint32_t lead = n - k + 1;  // top slot of the leading part
      const Elem sgn = sign_elem(f, n - k);
      const std::uint32_t tails = k - 2;  // slots n-k+2 .. n-1
      auto with_tails = [&](const std::vector<Elem>& leading) {
        for_each_tuple(tails, [&](const std::vector<Elem>& t) {
          std::copy(leading.begin(), leading.end(), w.begin());
          std::fill(w.begin() + lead + 1, w.end(), 0);
          for (std::uint32_t i = 0; i < tails; ++i) w[lead + 1 + i] = t[i];
          sink.emit(w);
        });
      };
      std::vector<Elem> leading(lead + 1, 0);
      // branches (c) and (d): one free slot, zero elsewhere
      for (Elem a = 0; a < Q; ++a) {
        std::fill(leading.begin(), leading.end(), 0);
        leading[lead] = a;
        with_tails(leading);
        std::fill(leading.begin(), leading.end(), 0);
        leading[0] = a;
        with_tails(leading);
      }
      // branch (a): lambda * (1, t, t^{sigma+1}, ...), N(t) in F_q* minus T
      // branch (b): mu * (1, 0, ..., 0, (-1)^{n-k} u), N(u) in T
      for (Elem t = 1; t < Q; ++t) {
        const Elem nt = f.norm(t);
        const bool in_t = std::binary_search(t_set_.begin(), t_set_.end(), nt);
        if (!in_t) {
          std::vector<Elem> moment(lead + 1);
          for (std::uint32_t i = 0; i <= lead; ++i) moment[i] = f.pow(t, ei_[i]);
          for (Elem lam = 1; lam < Q; ++lam) {
            for (std::uint32_t i = 0; i <= lead; ++i)
              leading[i] = f.mul(lam, moment[i]);
            with_tails(leading);
          }
        } else {
          for (Elem mu = 1; mu < Q; ++mu) {
            std::fill(leading.begin(), leading.end(), 0);
            leading[0] = mu;
            leading[lead] = f.mul(sgn, f.mul(mu, t));
            with_tails(leading);
          }
        }
      }
      break;
    }
    case Family::EXPLICIT:
      return;  // filled at construction
  }

  sink.finish(n);
  words_ = std::move(sink.flat);
  enumerated_ = true;
  if (family_ != Family::EXPLICIT && words_.size() / n != expected_size())
    throw std::logic_error("enumerated size differs from q^{nk}");
}

const std::vector<Elem>& RankCode::words() const {
  enumerate();
  return words_;
}

LinPoly RankCode::word_at(std::size_t i) const {
  const std::uint32_t n = field_->n();
  const Elem* base = words().data() + i * n;
  return LinPoly(*field_, std::vector<Elem>(base, base + n));
}

bool RankCode::member(const LinPoly& w) const {
  const Field& f = *field_;
  const std::uint32_t n = f.n();
  const std::uint32_t k = params_.k;
  const auto& c = w.coeffs();
  switch (family_) {
    case Family::GABIDULIN: {
      for (std::uint32_t i = k; i < n; ++i)
        if (c[i]) return false;
      return true;
    }
    case Family::TWISTED: {
      for (std::uint32_t i = k + 1; i < n; ++i)
        if (c[i]) return false;
      const std::uint32_t r = (f.spec().a * params_.h) % f.ext_degree();
      return c[k] == f.mul(params_.eta, f.frob(c[0], r));
    }
    case Family::TROMBETTI_ZHOU: {
      for (std::uint32_t i = k + 1; i < n; ++i)
        if (c[i]) return false;
      const std::uint32_t t = f.n() / 2;
      return f.in_subfield(c[0], t) && f.in_subfield(f.div(c[k], params_.xi), t);
    }
    case Family::OO_ADDITIVE: {
      for (std::uint32_t i = k + 1; i < n; ++i)
        if (c[i]) return false;
      std::uint32_t a0 = 0;
      std::uint64_t v = 1;
      while (v < params_.q0) {
        v *= f.p();
        ++a0;
      }
      const std::uint32_t r = (a0 * params_.h) % f.ext_degree();
      return c[k] == f.mul(params_.eta, f.frob(c[0], r));
    }
    case Family::OO_NONLINEAR: {
      for (std::uint32_t i = k + 1; i < n; ++i)
        if (c[i]) return false;
      const bool b1 = c[k] == 0 &&
                      std::binary_search(i_set_.begin(), i_set_.end(), f.norm(c[0]));
      const bool b2 = c[0] == 0 &&
                      !std::binary_search(j_set_.begin(), j_set_.end(), f.norm(c[k]));
      return b1 || b2;
    }
    case Family::C_SIGMA_T: {
      const std::uint32_t lead = n - k + 1;
      bool mid_zero = true;
      for (std::uint32_t i = 1; i < lead; ++i)
        if (c[i]) mid_zero = false;
      if (mid_zero) {
        if (c[0] == 0 || c[lead] == 0) return true;  // branches (c), (d), zero
        const Elem sgn = sign_elem(f, n - k);
        const Elem u = f.mul(sgn, f.div(c[lead], c[0]));
        return std::binary_search(t_set_.begin(), t_set_.end(), f.norm(u));
      }
      // branch (a): all leading nonzero, ratios follow sigma, N(t) outside T
      for (std::uint32_t i = 0; i <= lead; ++i)
        if (c[i] == 0) return false;
      const Elem t = f.div(c[1], c[0]);
      Elem expect = t;
      for (std::uint32_t i = 2; i <= lead; ++i) {
        expect = f.sigma(expect);
        if (f.div(c[i], c[i - 1]) != expect) return false;
      }
      const Elem nt = f.norm(t);
      return nt != 0 && !std::binary_search(t_set_.begin(), t_set_.end(), nt);
    }
    case Family::EXPLICIT: {
      // binary search in the sorted flat array
      const auto& ws = words();
      const std::size_t count = ws.size() / n;
      std::size_t lo = 0, hi = count;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const Elem* cand = ws.data() + mid * n;
        int cmp = 0;
        for (std::uint32_t i = n; i-- > 0;) {
          if (cand[i] != c[i]) {
            cmp = cand[i] < c[i] ? -1 : 1;
            break;
          }
        }
        if (cmp == 0) return true;
        if (cmp < 0)
          lo = mid + 1;
        else
          hi = mid;
      }
      return false;
    }
  }
  return false;
}

std::string RankCode::spec_string() const {
  auto label_list = [&] {
    std::string out;
    for (std::size_t i = 0; i < params_.labels.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(params_.labels[i]);
    }
    return out;
  };
  switch (family_) {
    case Family::GABIDULIN: return "gab:k=" + std::to_string(params_.k);
    case Family::TWISTED:
      return "tw:k=" + std::to_string(params_.k) + ",eta=" + std::to_string(params_.eta) +
             ",h=" + std::to_string(params_.h);
    case Family::TROMBETTI_ZHOU:
      return "tz:k=" + std::to_string(params_.k) + ",xi=" + std::to_string(params_.xi);
    case Family::OO_ADDITIVE:
      return "ooadd:k=" + std::to_string(params_.k) + ",q0=" + std::to_string(params_.q0) +
             ",eta=" + std::to_string(params_.eta) + ",h=" + std::to_string(params_.h);
    case Family::OO_NONLINEAR: return "oonl:k=" + std::to_string(params_.k) + ",I=" + label_list();
    case Family::C_SIGMA_T: return "cst:k=" + std::to_string(params_.k) + ",T=" + label_list();
    case Family::EXPLICIT: return "explicit";
  }
  return "unknown";
}

RankCode RankCode::parse_spec(const Field& f, std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("code spec needs family:params");
  const std::string fam(spec.substr(0, colon));
  // key=value pairs; bare tokens extend the previous key's list (T=1,2)
  std::map<std::string, std::vector<std::string>> kv;
  std::string last_key;
  std::string token;
  std::string rest(spec.substr(colon + 1));
  rest += ',';
  for (const char ch : rest) {
    if (ch != ',') {
      token += ch;
      continue;
    }
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      if (last_key.empty() || token.empty())
        throw std::invalid_argument("bad code spec token '" + token + "'");
      kv[last_key].push_back(token);
    } else {
      last_key = token.substr(0, eq);
      const std::string val = token.substr(eq + 1);
      if (val.empty()) throw std::invalid_argument("empty value for " + last_key);
      kv[last_key].push_back(val);
    }
    token.clear();
  }
  auto get_one = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.size() != 1)
      throw std::invalid_argument("code spec needs " + key);
    return static_cast<std::uint32_t>(std::stoul(it->second[0]));
  };
  auto get_list = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("code spec needs " + key);
    std::vector<std::uint32_t> out;
    for (const auto& v : it->second)
      out.push_back(static_cast<std::uint32_t>(std::stoul(v)));
    return out;
  };
  if (fam == "gab") return gabidulin(f, get_one("k"));
  if (fam == "tw") return twisted(f, get_one("k"), get_one("eta"), get_one("h"));
  if (fam == "tz") return trombetti_zhou(f, get_one("k"), get_one("xi"));
  if (fam == "ooadd")
    return oo_additive(f, get_one("k"), get_one("q0"), get_one("eta"), get_one("h"));
  if (fam == "oonl") return oo_nonlinear(f, get_one("k"), get_list("I"));
  if (fam == "cst") return c_sigma_t(f, get_one("k"), get_list("T"));
  throw std::invalid_argument("unknown code family '" + fam + "'");
}

}  // namespace rmf
