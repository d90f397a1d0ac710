#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmf/codes.hpp"
#include "rmf/geometry.hpp"

namespace rmf {

enum class DistanceMode { EXHAUSTIVE, QUOTIENT, SAMPLED };

std::string distance_mode_name(DistanceMode m);

struct DistanceResult {
  std::uint32_t distance = 0;
  // rank -> unordered pair count (sampled mode: counts over the sample)
  std::map<std::uint32_t, std::uint64_t> distribution;
  DistanceMode mode = DistanceMode::EXHAUSTIVE;
  bool certified = false;
  std::uint64_t pairs = 0;
};

// Exhaustive walks all unordered pairs.  Quotient fixes one representative
// per F_{q^n}*-orbit as the first pair member and rescales the histogram;
// it first verifies multiplicative closure and throws without it.  Sampled
// draws `samples` pairs from mt19937_64(seed) and never certifies.
DistanceResult min_distance(const RankCode& code, DistanceMode mode,
                            std::uint64_t seed = 0, std::uint64_t samples = 10000);

// q^{max(m,n)*(min(m,n)-d+1)}.  Throws std::invalid_argument unless
// 1 <= d <= min(m,n), std::overflow_error past 2^64.
std::uint64_t singleton_bound(std::uint32_t m, std::uint32_t n, std::uint64_t q,
                              std::uint32_t d);

// Closure of the word set under every lambda in F_{q^n}; the generator
// orbit decides the nonzero scalars, the zero word is checked directly.
bool fqn_closed(const RankCode& code);

// Size meets the square Singleton bound at the measured distance and that
// distance matches the claim.  The one-argument form runs quotient mode
// when multiplicative closure holds, exhaustive otherwise.
bool is_mrd(const RankCode& code);
bool is_mrd(const RankCode& code, const DistanceResult& dist);

// Last u coefficient slots dropped, duplicates merged.  word_matrix lays a
// word out as the (n-u) x n array of slot coordinates; the code metric is
// truncated_rank, not the plain F_q rank of that array.
struct PuncturedCode {
  const Field* field = nullptr;
  std::uint32_t m = 0;
  std::uint32_t claimed_distance = 0;
  std::vector<Elem> words;  // flat, m per word, sorted, deduplicated

  std::size_t size() const { return m ? words.size() / m : 0; }
  Mat word_matrix(std::size_t i) const;
};

PuncturedCode puncture_code(const RankCode& code, std::uint32_t u);  // 1 <= u <= n-1

// Rank of one truncated word: the smallest rank among the full words whose
// first m slots match.  Every rank-h map splits into h terms c*Tr(vx) and
// each term truncates to a multiple of a Sigma_{m,n} point, so this equals
// 1 + min{h : point in Omega_h(Sigma_{m,n})}; at m = n the only completion
// is the word itself and the value is its Dickson rank.
std::uint32_t truncated_rank(const Field& f, const Elem* slots, std::uint32_t m);

// Sigma_{m,n} = {(x, x^sigma, ..., x^{sigma^{m-1}})} normalized; labeled
// GENERIC so secant queries take the brute-force path.
PointSet truncated_sigma_set(const Field& f, std::uint32_t m);

// 1 + min{h : <slots> in Omega_h(Sigma_{m,n})}, 0 for the zero tuple.
std::uint32_t truncated_secant_rank(const Field& f, const Elem* slots, std::uint32_t m,
                                    const PointSet& sigma_m);

// Independent routes to the punctured distance: a completion scan over the
// dropped slots, and line geometry against Sigma_{m,n}.
DistanceResult punctured_min_distance(const PuncturedCode& pc);
DistanceResult punctured_min_distance_secant(const PuncturedCode& pc);

// Rectangular bound at the measured distance.
bool is_mrd(const PuncturedCode& pc, const DistanceResult& dist);

RankCode adjoint_code(const RankCode& code);

struct EquivalenceMap {
  LinPoly f, g, h;
  std::uint32_t rho = 0;       // coefficients act through x -> x^{p^rho}, rho < a
  bool adjoint_first = false;  // transform C^t instead of C
};

EquivalenceMap identity_equivalence(const Field& f);

// C' = {f(alpha^rho(g(x))) + h : alpha in C}; f and g must be invertible.
RankCode apply_equivalence(const RankCode& code, const EquivalenceMap& e);

// Star product: applying the result equals applying e1 then e2.  Throws
// when either side carries the adjoint flag (the flag does not compose).
EquivalenceMap compose_equivalences(const Field& f, const EquivalenceMap& e1,
                                    const EquivalenceMap& e2);

struct IdealiserResult {
  std::uint32_t rows = 0, cols = 0;
  std::vector<Mat> elements;  // sorted by entry data
  bool is_field = false;      // unital, add/mul closed, commutative, nonzero invertible
};

// P ranges over every square matrix with entries from `domain`, invertible
// or not.  Left tests P*M, right tests M*P, membership elementwise.
IdealiserResult left_idealiser_mats(const Field& f, const std::vector<Mat>& code,
                                    const std::vector<Elem>& domain,
                                    std::uint64_t candidate_guard = 4'000'000);
IdealiserResult right_idealiser_mats(const Field& f, const std::vector<Mat>& code,
                                     const std::vector<Elem>& domain,
                                     std::uint64_t candidate_guard = 4'000'000);

// matrix_rep route: candidates are n x n with entries in F_q, so the guard
// covers q^{n^2} matrices.
IdealiserResult left_idealiser(const RankCode& code,
                               std::uint64_t candidate_guard = 4'000'000);
IdealiserResult right_idealiser(const RankCode& code,
                                std::uint64_t candidate_guard = 4'000'000);

struct CensusEntry {
  std::vector<Elem> words;  // flat, n per word, sorted: the canonical identity
  LinPoly f, g;             // first witness pair in scan order
};

// Enumerates pairs (f, g) with f_0 = 1, deg f = t <= K-r, deg g <= K-r-t,
// both invertible, and keeps W = {f(alpha(g(x))) : alpha of degree < r}
// whenever W lies inside the code.  K defaults to the largest occupied
// slot + 1 over the word list; `ambient` overrides it.  Requires r <= K
// and Q^{K-r+1} <= budget.
std::vector<CensusEntry> gabidulin_subspace_census(
    const RankCode& code, std::uint32_t r,
    std::optional<std::uint32_t> ambient = std::nullopt,
    std::uint64_t budget = 1'000'000);

struct ClosureFlags {
  bool additive = false;
  bool fq_closed = false;
  bool fqn_closed = false;
  bool fq_linear = false;  // additive and fq_closed
  // first failures in word order: (a, b) with a+b outside, (lambda, w)
  // with lambda*w outside
  std::optional<std::pair<LinPoly, LinPoly>> additive_witness;
  std::optional<std::pair<Elem, LinPoly>> fq_witness;
  std::optional<std::pair<Elem, LinPoly>> fqn_witness;
};

ClosureFlags closure_flags(const RankCode& code);

struct AffineResult {
  std::optional<bool> affine;      // empty when the scan exceeds its budget
  std::optional<LinPoly> witness;  // translating codeword when affine
};

// C is affine iff C - c0 is additive for some codeword c0; every c0 is
// tried.  The budget bounds |C|^3 worst-case pair checks.
AffineResult is_affine(const RankCode& code,
                       std::uint64_t pair_budget = 1'000'000'000ull);

enum class Verdict { DISTINGUISHED, INCONCLUSIVE };

struct InequivalenceReport {
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::string invariant;       // distinguishing invariant name
  std::string value1, value2;  // rendered values behind the verdict
  std::uint64_t size1 = 0, size2 = 0;
  std::map<std::uint32_t, std::uint64_t> dist1, dist2;
  std::optional<bool> affine1, affine2;
  std::optional<std::uint64_t> census1, census2;  // counts in the common ambient
  // informational only; closure and idealisers are not equivalence
  // invariants
  ClosureFlags flags1, flags2;
  std::optional<std::uint64_t> ideal_l1, ideal_l2, ideal_r1, ideal_r2;
};

// Compares genuine invariants (size, distance distribution, affineness,
// census counts) and never claims equivalence.  Census counts drive the
// verdict only when both codes are non-additive, the setting in which the
// count is known to be invariant.
InequivalenceReport inequivalence_report(const RankCode& a, const RankCode& b,
                                         std::uint64_t census_budget = 1'000'000,
                                         std::uint64_t affine_budget = 1'000'000'000ull,
                                         std::uint64_t idealiser_guard = 4'000'000);

std::string verdict_line(const InequivalenceReport& r);

struct CodeReport {
  std::string family;
  std::string params;
  std::uint64_t size = 0;
  std::uint64_t singleton = 0;  // bound at the measured distance
  bool mrd = false;
  DistanceResult dist;
  ClosureFlags flags;
  AffineResult affine;
  double runtime = 0.0;  // seconds; serialized only on request
  std::uint64_t seed = 0;
};

CodeReport analyze_code(const RankCode& code, DistanceMode mode,
                        std::uint64_t seed = 0, std::uint64_t samples = 10000,
                        std::uint64_t affine_budget = 1'000'000'000ull);

// Stable schema, alphabetical keys; distribution keys are decimal strings;
// witnesses are serialized polynomials.  runtime stays out unless asked
// for, keeping identical runs byte-identical.
std::string report_json(const CodeReport& r, bool include_runtime = false);

}  // namespace rmf
