#include "rmf/cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmf/analysis.hpp"
#include "rmf/codes.hpp"
#include "rmf/field.hpp"
#include "rmf/geometry.hpp"
#include "rmf/linpoly.hpp"

namespace rmf {
namespace {

using nlohmann::json;

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kInvalid = 2;
constexpr int kInconclusive = 3;

constexpr std::uint64_t kWordGuard = std::uint64_t{1} << 22;
constexpr std::uint64_t kLineGuard = std::uint64_t{1} << 26;

// Worker-count hint; every pipeline is sequential and no result depends on
// the value, it is validated and carried for interface stability only.
int resolve_threads(int flag) {
  if (flag > 0) return flag;
  const char* env = std::getenv("RMF_THREADS");
  if (env != nullptr) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
  bool to_file = false;
};

// Empty path selects stdout.
bool open_out(const std::string& path, OutStream& out) {
  if (path.empty()) return true;
  out.file.open(path);
  if (!out.file) {
    std::cerr << "cannot open output file: " << path << "\n";
    return false;
  }
  out.os = &out.file;
  out.to_file = true;
  return true;
}

bool within_guard(const RankCode& code, std::uint64_t guard) {
  if (code.expected_size() <= guard) return true;
  std::cerr << "enumeration guard exceeded: " << code.expected_size() << " words > "
            << guard << " (raise --guard to override)\n";
  return false;
}

std::string word_line(const Field& f, const Elem* w) {
  std::string line;
  for (std::uint32_t t = 0; t < f.n(); ++t) {
    if (t > 0) line += ',';
    line += std::to_string(w[t]);
  }
  return line;
}

// Lines of n comma-separated coefficients, blank lines skipped.
std::vector<std::vector<Elem>> load_word_file(const Field& f, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open code file: " + path);
  std::vector<std::vector<Elem>> words;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<Elem> w;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(cell, &pos);
      if (pos == 0 || v >= f.order()) {
        throw std::invalid_argument("bad coefficient on line " + std::to_string(lineno));
      }
      w.push_back(static_cast<Elem>(v));
    }
    if (w.size() != f.n()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + " has " +
                                  std::to_string(w.size()) + " slots, expected " +
                                  std::to_string(f.n()));
    }
    words.push_back(std::move(w));
  }
  if (words.empty()) throw std::invalid_argument("code file has no words: " + path);
  return words;
}

json distribution_json(const std::map<std::uint32_t, std::uint64_t>& dist) {
  json out = json::object();
  for (const auto& [r, c] : dist) out[std::to_string(r)] = c;
  return out;
}

std::string distribution_csv(const std::map<std::uint32_t, std::uint64_t>& dist) {
  std::string out = "rank,pairs\n";
  for (const auto& [r, c] : dist) {
    out += std::to_string(r) + "," + std::to_string(c) + "\n";
  }
  return out;
}

// First pair in word order whose difference has the target rank.
std::optional<std::pair<LinPoly, LinPoly>> distance_witness(const RankCode& code,
                                                            std::uint32_t target) {
  const std::size_t size = code.size();
  for (std::size_t i = 0; i < size; ++i) {
    const LinPoly a = code.word_at(i);
    for (std::size_t j = i + 1; j < size; ++j) {
      const LinPoly b = code.word_at(j);
      if (rank(sub(a, b)) == target) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

struct ConstructArgs {
  std::string field, code, out;
  std::uint64_t guard = kWordGuard;
};

int run_construct(const ConstructArgs& a) {
  const Field f(FieldSpec::parse(a.field));
  const RankCode code = RankCode::parse_spec(f, a.code);
  if (!within_guard(code, a.guard)) return kInvalid;
  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  const auto& flat = code.words();
  const std::uint32_t n = f.n();
  for (std::size_t i = 0; i < code.size(); ++i) {
    *out.os << word_line(f, &flat[i * n]) << "\n";
  }
  std::ostream& info = out.to_file ? std::cout : std::cerr;
  info << "size=" << code.size() << " claimed_distance=" << code.claimed_distance()
       << "\n";
  return kPass;
}

struct VerifyArgs {
  std::string field, code, code_file, mode = "exhaustive", out, format = "json";
  std::uint32_t claimed = 0;
  std::uint64_t guard = kWordGuard;
  std::uint64_t seed = 0;
  std::uint64_t samples = 10000;
  bool timing = false;
};

int run_verify(const VerifyArgs& a) {
  DistanceMode mode;
  if (a.mode == "exhaustive") {
    mode = DistanceMode::EXHAUSTIVE;
  } else if (a.mode == "quotient") {
    mode = DistanceMode::QUOTIENT;
  } else if (a.mode == "sampled") {
    std::cerr << "sampled estimates cannot certify; use exhaustive or quotient\n";
    return kInvalid;
  } else {
    std::cerr << "unknown mode: " << a.mode << "\n";
    return kInvalid;
  }
  const Field f(FieldSpec::parse(a.field));
  std::optional<RankCode> code;
  if (!a.code_file.empty()) {
    if (a.claimed == 0) {
      std::cerr << "--code-file needs --claimed\n";
      return kInvalid;
    }
    code = RankCode::explicit_code(f, load_word_file(f, a.code_file), a.claimed);
  } else if (!a.code.empty()) {
    code = RankCode::parse_spec(f, a.code);
  } else {
    std::cerr << "verify needs --code or --code-file\n";
    return kInvalid;
  }
  if (!within_guard(*code, a.guard)) return kInvalid;

  const CodeReport report = analyze_code(*code, mode, a.seed, a.samples);
  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  if (a.format == "csv") {
    *out.os << distribution_csv(report.dist.distribution);
  } else {
    *out.os << report_json(report, a.timing) << "\n";
  }
  if (report.mrd) return kPass;

  if (report.dist.distance != code->claimed_distance()) {
    std::cerr << "claimed distance " << code->claimed_distance() << ", measured "
              << report.dist.distance << "\n";
    if (const auto w = distance_witness(*code, report.dist.distance)) {
      std::cerr << "witness pair: " << w->first.str() << " / " << w->second.str()
                << "\n";
    }
  } else {
    std::cerr << "size " << report.size << " misses the Singleton bound "
              << report.singleton << "\n";
  }
  return kViolation;
}

struct GeometryArgs {
  std::string field, t_labels = "1", out;
  std::uint32_t k = 0;
  std::uint64_t guard = kLineGuard;
};

std::vector<std::uint32_t> parse_labels(const std::string& text) {
  std::vector<std::uint32_t> labels;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(cell, &pos);
    if (pos == 0) throw std::invalid_argument("bad label list: " + text);
    labels.push_back(static_cast<std::uint32_t>(v));
  }
  if (labels.empty()) throw std::invalid_argument("empty label list");
  return labels;
}

int run_geometry(const GeometryArgs& a) {
  const Field f(FieldSpec::parse(a.field));
  const std::uint32_t n = f.n();
  if (a.k < 2 || a.k >= n) {
    std::cerr << "geometry needs 2 <= k <= n-1\n";
    return kInvalid;
  }
  const auto labels = parse_labels(a.t_labels);
  const std::uint32_t h = n - a.k - 1;
  const std::uint64_t q = f.q();
  const std::uint64_t big_q = f.order();

  const auto lstar = construction_vertex(f, a.k);
  const auto lambda = construction_base_span(f, a.k);
  const auto sigma = canonical_subgeometry(f);

  std::vector<ProjPoint> projected;
  projected.reserve(sigma.size());
  for (const auto& p : sigma.points) projected.push_back(project(f, p, lstar, lambda));
  const auto gamma = make_point_set(n, SetLabel::GAMMA, std::move(projected));

  const auto e_set = dondur_exterior_set(f, a.k, labels);
  const auto cone_set = build_cone_construction(f, a.k, labels);

  const std::uint64_t pairs = cone_set.size() * (cone_set.size() - 1) / 2;
  if (pairs * (big_q + 1) > a.guard) {
    std::cerr << "line scan guard exceeded: " << pairs * (big_q + 1) << " > " << a.guard
              << " (raise --guard to override)\n";
    return kInvalid;
  }

  json checks = json::object();
  checks["vertex_embedding"] = is_embedding(f, lstar);
  checks["gamma_size"] = gamma.size() == (big_q - 1) / (q - 1);
  checks["base_size"] = e_set.size() == big_q + 1;
  checks["base_exterior"] = is_exterior_set(f, e_set, gamma, h).exterior;
  checks["cone_size"] = cone_set.size() == exterior_bound(n, h, big_q);
  checks["cone_exterior"] = is_exterior_set(f, cone_set, sigma, h).exterior;

  json doc;
  doc["T"] = labels;
  doc["checks"] = checks;
  doc["field"] = a.field;
  doc["k"] = a.k;
  doc["sizes"] = {{"base", e_set.size()}, {"cone", cone_set.size()},
                  {"gamma", gamma.size()}, {"sigma", sigma.size()}};
  bool all = true;
  for (const auto& [name, ok] : checks.items()) all = all && ok.get<bool>();
  doc["pass"] = all;

  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  *out.os << doc.dump(2) << "\n";
  return all ? kPass : kViolation;
}

struct CompareArgs {
  std::string field, code1, code2, out;
  std::uint64_t guard = kWordGuard;
};

int run_compare(const CompareArgs& a) {
  const Field f(FieldSpec::parse(a.field));
  const RankCode c1 = RankCode::parse_spec(f, a.code1);
  const RankCode c2 = RankCode::parse_spec(f, a.code2);
  if (!within_guard(c1, a.guard) || !within_guard(c2, a.guard)) return kInvalid;

  const InequivalenceReport rep = inequivalence_report(c1, c2);

  json doc;
  doc["affine1"] = rep.affine1.has_value() ? json(*rep.affine1) : json();
  doc["affine2"] = rep.affine2.has_value() ? json(*rep.affine2) : json();
  doc["census1"] = rep.census1.has_value() ? json(*rep.census1) : json();
  doc["census2"] = rep.census2.has_value() ? json(*rep.census2) : json();
  doc["code1"] = a.code1;
  doc["code2"] = a.code2;
  doc["distribution1"] = distribution_json(rep.dist1);
  doc["distribution2"] = distribution_json(rep.dist2);
  doc["field"] = a.field;
  doc["informational"] = {
      {"fq_closed1", rep.flags1.fq_closed},
      {"fq_closed2", rep.flags2.fq_closed},
      {"ideal_left1", rep.ideal_l1.has_value() ? json(*rep.ideal_l1) : json()},
      {"ideal_left2", rep.ideal_l2.has_value() ? json(*rep.ideal_l2) : json()},
      {"ideal_right1", rep.ideal_r1.has_value() ? json(*rep.ideal_r1) : json()},
      {"ideal_right2", rep.ideal_r2.has_value() ? json(*rep.ideal_r2) : json()},
  };
  doc["invariant"] = rep.invariant;
  doc["size1"] = rep.size1;
  doc["size2"] = rep.size2;
  doc["value1"] = rep.value1;
  doc["value2"] = rep.value2;
  doc["verdict"] = rep.verdict == Verdict::DISTINGUISHED ? "DISTINGUISHED" : "INCONCLUSIVE";

  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  *out.os << doc.dump(2) << "\n";
  std::cout << verdict_line(rep) << "\n";
  return rep.verdict == Verdict::DISTINGUISHED ? kPass : kInconclusive;
}

struct PunctureArgs {
  std::string field, code, out, format = "json";
  std::uint32_t u = 0;
  std::uint64_t guard = kWordGuard;
};

int run_puncture(const PunctureArgs& a) {
  const Field f(FieldSpec::parse(a.field));
  const RankCode code = RankCode::parse_spec(f, a.code);
  if (!within_guard(code, a.guard)) return kInvalid;
  const PuncturedCode pc = puncture_code(code, a.u);
  const DistanceResult dist = punctured_min_distance(pc);
  const bool mrd = is_mrd(pc, dist);

  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  if (a.format == "csv") {
    *out.os << distribution_csv(dist.distribution);
  } else {
    json doc;
    doc["claimed_distance"] = pc.claimed_distance;
    doc["cols"] = f.n();
    doc["distance"] = dist.distance;
    doc["distribution"] = distribution_json(dist.distribution);
    doc["is_mrd"] = mrd;
    doc["parent"] = code.spec_string();
    doc["rows"] = pc.m;
    doc["singleton_bound"] = singleton_bound(pc.m, f.n(), f.q(), dist.distance);
    doc["size"] = pc.size();
    doc["u"] = a.u;
    *out.os << doc.dump(2) << "\n";
  }
  return mrd ? kPass : kViolation;
}

struct IdealiserArgs {
  std::string field, code, out;
  std::uint64_t guard = kWordGuard;
  std::uint64_t scan_guard = 4'000'000;
};

int run_idealiser(const IdealiserArgs& a) {
  const Field f(FieldSpec::parse(a.field));
  const RankCode code = RankCode::parse_spec(f, a.code);
  if (!within_guard(code, a.guard)) return kInvalid;
  const IdealiserResult left = left_idealiser(code, a.scan_guard);
  const IdealiserResult right = right_idealiser(code, a.scan_guard);

  json doc;
  doc["code"] = code.spec_string();
  doc["field"] = a.field;
  doc["left"] = {{"is_field", left.is_field}, {"size", left.elements.size()}};
  doc["right"] = {{"is_field", right.is_field}, {"size", right.elements.size()}};

  OutStream out;
  if (!open_out(a.out, out)) return kInvalid;
  *out.os << doc.dump(2) << "\n";
  return kPass;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"rank-distance code workbench"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker-count hint; results never depend on it");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "enumerate a code, one word per line");
  construct->add_option("--field", ca.field, "field spec p^a:n:s")->required();
  construct->add_option("--code", ca.code, "code spec, e.g. cst:k=2,T=1")->required();
  construct->add_option("--guard", ca.guard, "max enumerated words");
  construct->add_option("--out", ca.out, "output file (default stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "measure distance and certify MRD");
  verify->add_option("--field", va.field, "field spec p^a:n:s")->required();
  verify->add_option("--code", va.code, "code spec");
  verify->add_option("--code-file", va.code_file, "explicit word list file");
  verify->add_option("--claimed", va.claimed, "claimed distance for --code-file");
  verify->add_option("--mode", va.mode, "exhaustive | quotient");
  verify->add_option("--guard", va.guard, "max enumerated words");
  verify->add_option("--seed", va.seed, "rng seed (reports carry it)");
  verify->add_option("--samples", va.samples, "sample count (sampled mode only)");
  verify->add_option("--out", va.out, "output file (default stdout)");
  verify->add_option("--format", va.format, "json | csv (csv: distribution only)");
  verify->add_flag("--timing", va.timing, "include runtime in the report");

  GeometryArgs ga;
  auto* geometry = app.add_subcommand("geometry", "run the cone construction checks");
  geometry->add_option("--field", ga.field, "field spec p^a:n:s")->required();
  geometry->add_option("--k", ga.k, "2 <= k <= n-1")->required();
  geometry->add_option("--T", ga.t_labels, "norm labels, e.g. 1,2");
  geometry->add_option("--guard", ga.guard, "max line-scan point visits");
  geometry->add_option("--out", ga.out, "output file (default stdout)");

  CompareArgs pa;
  auto* compare = app.add_subcommand("compare", "invariant-based inequivalence report");
  compare->add_option("--field", pa.field, "field spec p^a:n:s")->required();
  compare->add_option("--code1", pa.code1, "first code spec")->required();
  compare->add_option("--code2", pa.code2, "second code spec")->required();
  compare->add_option("--guard", pa.guard, "max enumerated words");
  compare->add_option("--out", pa.out, "output file (default stdout)");

  PunctureArgs pu;
  auto* puncture = app.add_subcommand("puncture", "drop trailing slots and re-measure");
  puncture->add_option("--field", pu.field, "field spec p^a:n:s")->required();
  puncture->add_option("--code", pu.code, "code spec")->required();
  puncture->add_option("--u", pu.u, "slots to drop, 1 <= u <= n-1")->required();
  puncture->add_option("--guard", pu.guard, "max enumerated words");
  puncture->add_option("--out", pu.out, "output file (default stdout)");
  puncture->add_option("--format", pu.format, "json | csv (csv: distribution only)");

  IdealiserArgs ia;
  auto* idealiser = app.add_subcommand("idealiser", "left and right idealiser survey");
  idealiser->add_option("--field", ia.field, "field spec p^a:n:s")->required();
  idealiser->add_option("--code", ia.code, "code spec")->required();
  idealiser->add_option("--guard", ia.guard, "max enumerated words");
  idealiser->add_option("--scan-guard", ia.scan_guard, "max idealiser candidates");
  idealiser->add_option("--out", ia.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInvalid;
  }
  resolve_threads(threads);

  try {
    if (construct->parsed()) return run_construct(ca);
    if (verify->parsed()) return run_verify(va);
    if (geometry->parsed()) return run_geometry(ga);
    if (compare->parsed()) return run_compare(pa);
    if (puncture->parsed()) return run_puncture(pu);
    if (idealiser->parsed()) return run_idealiser(ia);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace rmf
