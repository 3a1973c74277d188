#pragma once

// Constructive transitivity: builds an explicit program in the triangular
// group that maps one tuple of Calogero-Moser points to another.
//
// Pipeline on the concatenated source/target tuple:
//   1. make every X and every Y simple-spectrum (at most one move per matrix);
//   2. separate all X-spectra and all Y-spectra with shared random moves;
//   3. align: one Y += p(X) move puts each source Y on the target Y-spectrum
//      (fiber solve + interpolation over the disjoint X-spectra), then one
//      X += r(Y) move fixes the X-diagonals in Y-eigenframes.
// With g = steps 1-2 and g1 = step 3 the answer is g, g1, g^-1.
//
// Genericity is never assumed: every random draw is accepted only with a
// recorded resultant certificate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmt/cm_space.hpp"
#include "cmt/core.hpp"
#include "cmt/fiber.hpp"
#include "cmt/linalg.hpp"
#include "cmt/moves.hpp"
#include "cmt/polynomial.hpp"

namespace cmt {

struct GenericityBudget {
  std::uint64_t seed = 0;
  int max_retries = 64;
  double coeff_scale = 1.0;
  int t_samples = 8;
  double tol = 1e-6;  // certificate threshold and verification distance bound
  Tolerances tols{};
};

enum class Component { X, Y };

enum class CertKind { SimpleSpectrum, DisjointSpectra };

struct CertificateEntry {
  std::string description;
  double magnitude = 0.0;
  double threshold = 0.0;
  CertKind kind = CertKind::SimpleSpectrum;
  Component component = Component::X;
  std::size_t first = 0;   // index into the flattened source ++ target list
  std::size_t second = 0;  // only for DisjointSpectra
};

/// Resultant witnesses valid after the first `after_moves` moves of the program.
struct Certificate {
  std::string stage;
  std::size_t after_moves = 0;
  std::vector<CertificateEntry> entries;

  bool valid() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const CertificateEntry& e) { return e.magnitude > e.threshold; });
  }
};

struct StageReport {
  std::string name;
  std::size_t moves = 0;
  int retries = 0;
};

enum class SolveStatus { Success, VerificationFailed };

struct SolveReport {
  SolveStatus status = SolveStatus::Success;
  Program program;
  std::vector<StageReport> stages;
  std::vector<double> distances;
  double tol = 0.0;
  std::vector<Certificate> certificates;
};

namespace engine_detail {

inline const CMatrix& part(const CMPoint& p, Component c) { return c == Component::X ? p.x : p.y; }

inline const char* name(Component c) { return c == Component::X ? "X" : "Y"; }

inline MoveKind kind_modifying(Component c) {
  return c == Component::X ? MoveKind::AddPOfYToX : MoveKind::AddQOfXToY;
}

inline Component other(Component c) { return c == Component::X ? Component::Y : Component::X; }

// log(value / threshold) per elementary factor; positive iff certified.
inline double margin(double value, double threshold, std::size_t factors) {
  if (!(value > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(value / threshold) / static_cast<double>(std::max<std::size_t>(factors, 1));
}

inline CertificateEntry simple_entry(const std::vector<CMPoint>& pts, std::span<const std::size_t> ids,
                                     std::size_t i, Component c, const GenericityBudget& b) {
  const auto cert = is_simple_spectrum(part(pts[i], c), b.tol, b.tols.size_cap);
  return {std::string(name(c)) + "[" + std::to_string(ids[i]) + "] simple spectrum", cert.value, b.tol,
          CertKind::SimpleSpectrum, c, ids[i], ids[i]};
}

inline CertificateEntry disjoint_entry(const std::vector<CMPoint>& pts, std::span<const std::size_t> ids,
                                       std::size_t i, std::size_t j, Component c, const GenericityBudget& b) {
  const auto cert = spectra_disjoint(part(pts[i], c), part(pts[j], c), b.tol, b.tols.size_cap);
  return {std::string(name(c)) + "[" + std::to_string(ids[i]) + "] and " + name(c) + "[" + std::to_string(ids[j]) +
              "] disjoint spectra",
          cert.value, b.tol, CertKind::DisjointSpectra, c, ids[i], ids[j]};
}

inline double scale_of(const std::vector<CMPoint>& pts, Component c) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, part(p, c).norm_inf());
  return s;
}

inline std::size_t max_size(const std::vector<CMPoint>& pts) {
  std::size_t n = 1;
  for (const auto& p : pts) n = std::max(n, p.size());
  return n;
}

// Random polynomial sum a_k (v / var_scale)^k with |a_k| <= amplitude.
inline Poly random_poly(Rng& rng, std::size_t degree, double amplitude, double var_scale) {
  std::vector<cplx> c(degree + 1);
  double pow = 1.0;
  for (std::size_t k = 0; k <= degree; ++k) {
    c[k] = amplitude * rng.in_disk(1.0) / pow;
    pow *= var_scale;
  }
  return Poly(std::move(c));
}

// Conditions a candidate move on component c must satisfy, evaluated on the
// moved points. Returns (number failing, worst margin).
struct Evaluation {
  std::size_t failing = 0;
  double worst = std::numeric_limits<double>::infinity();
};

inline bool better(const Evaluation& a, const Evaluation& b) {
  return a.failing < b.failing || (a.failing == b.failing && a.worst > b.worst);
}

inline Evaluation evaluate(const std::vector<CMPoint>& pts, Component c, std::span<const std::size_t> simple_ids,
                           std::span<const std::pair<std::size_t, std::size_t>> disjoint_pairs,
                           const GenericityBudget& b) {
  Evaluation ev;
  for (const std::size_t i : simple_ids) {
    const auto& m = part(pts[i], c);
    const auto cert = is_simple_spectrum(m, b.tol, b.tols.size_cap);
    const std::size_t n = m.size();
    if (n >= 2) ev.worst = std::min(ev.worst, margin(cert.value, b.tol, n * (n - 1)));
    if (!cert.ok) ++ev.failing;
  }
  for (const auto& [i, j] : disjoint_pairs) {
    const auto& m = part(pts[i], c);
    const auto& n = part(pts[j], c);
    const auto cert = spectra_disjoint(m, n, b.tol, b.tols.size_cap);
    ev.worst = std::min(ev.worst, margin(cert.value, b.tol, m.size() * n.size()));
    if (!cert.ok) ++ev.failing;
  }
  return ev;
}

inline std::vector<CMPoint> apply_all(const Move& mv, const std::vector<CMPoint>& pts, double membership_tol) {
  std::vector<CMPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(apply_move(mv, p, membership_tol));
  return out;
}

struct Candidate {
  Move move;
  std::vector<CMPoint> points;
  Evaluation eval;
};

// One random polynomial on component c, best of t_samples values of t from
// the annulus 0.5 <= |t| <= 2.
inline std::optional<Candidate> draw_candidate(const std::vector<CMPoint>& pts, Component c, Rng& rng,
                                               std::span<const std::size_t> simple_ids,
                                               std::span<const std::pair<std::size_t, std::size_t>> disjoint_pairs,
                                               const GenericityBudget& b) {
  const Poly p = random_poly(rng, max_size(pts), b.coeff_scale * scale_of(pts, c), scale_of(pts, other(c)));
  std::optional<Candidate> best;
  for (int s = 0; s < std::max(1, b.t_samples); ++s) {
    const cplx t = rng.in_annulus(0.5, 2.0);
    Move mv{kind_modifying(c), t * p};
    std::vector<CMPoint> moved;
    try {
      moved = apply_all(mv, pts, b.tols.membership);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MembershipLost) throw;
      continue;
    }
    const auto ev = evaluate(moved, c, simple_ids, disjoint_pairs, b);
    if (!best || better(ev, best->eval)) best = Candidate{std::move(mv), std::move(moved), ev};
  }
  return best;
}

inline std::vector<std::size_t> identity_ids(std::size_t n) {
  std::vector<std::size_t> ids(n);
  for (std::size_t k = 0; k < n; ++k) ids[k] = k;
  return ids;
}

}  // namespace engine_detail

/// What one pipeline stage produced.
/// `ids` maps working positions to indices of the caller's flattened list.
struct StageOutcome {
  Program program;
  StageReport report;
  Certificate certificate;
};

/// Step 1 on a working list: certify every X one by one, then every Y. Each
/// accepted move keeps all previously certified matrices of that component
/// certified. Emits at most one move per matrix.
inline StageOutcome diagonalize_stage(std::vector<CMPoint>& pts, std::span<const std::size_t> ids, Rng& rng,
                                      const GenericityBudget& b) {
  using namespace engine_detail;
  StageOutcome out;
  out.report.name = "diagonalize";
  out.certificate.stage = "diagonalize";
  for (const Component c : {Component::X, Component::Y}) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (is_simple_spectrum(part(pts[i], c), b.tol, b.tols.size_cap).ok) continue;
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (j == i || is_simple_spectrum(part(pts[j], c), b.tol, b.tols.size_cap).ok) keep.push_back(j);
      bool done = false;
      for (int attempt = 0; attempt < b.max_retries && !done; ++attempt) {
        auto cand = draw_candidate(pts, c, rng, keep, {}, b);
        if (cand && cand->eval.failing == 0) {
          pts = std::move(cand->points);
          out.program.moves.push_back(std::move(cand->move));
          done = true;
        } else {
          ++out.report.retries;
        }
      }
      if (!done)
        throw Error(ErrorCode::GenericityExhausted, std::string("could not certify a simple spectrum for ") +
                                                        name(c) + "[" + std::to_string(ids[i]) + "]");
    }
  }
  for (const Component c : {Component::X, Component::Y})
    for (std::size_t i = 0; i < pts.size(); ++i) out.certificate.entries.push_back(simple_entry(pts, ids, i, c, b));
  out.report.moves = out.program.size();
  return out;
}

/// Step 2 on a working list of pairwise distinct points with certified
/// simple spectra: shared random moves, alternating kinds, until all X-spectra
/// and all Y-spectra are pairwise disjoint. A move is kept only if it keeps
/// every simple-spectrum certificate and reduces the number of colliding pairs.
inline StageOutcome separate_stage(std::vector<CMPoint>& pts, std::span<const std::size_t> ids, Rng& rng,
                                   const GenericityBudget& b) {
  using namespace engine_detail;
  StageOutcome out;
  out.report.name = "separate";
  out.certificate.stage = "separate";
  const auto all = identity_ids(pts.size());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) pairs.emplace_back(i, j);

  auto failing = [&](Component c) { return evaluate(pts, c, all, pairs, b).failing; };
  for (int round = 0; round < b.max_retries; ++round) {
    bool progressed = false;
    for (const Component c : {Component::X, Component::Y}) {
      const std::size_t before = failing(c);
      if (before == 0) continue;
      auto cand = draw_candidate(pts, c, rng, all, pairs, b);
      if (cand && cand->eval.failing < before && evaluate(cand->points, c, all, {}, b).failing == 0) {
        pts = std::move(cand->points);
        out.program.moves.push_back(std::move(cand->move));
        progressed = true;
      }
    }
    if (failing(Component::X) == 0 && failing(Component::Y) == 0) {
      for (const Component c : {Component::X, Component::Y}) {
        for (std::size_t i = 0; i < pts.size(); ++i) out.certificate.entries.push_back(simple_entry(pts, ids, i, c, b));
        for (const auto& [i, j] : pairs) out.certificate.entries.push_back(disjoint_entry(pts, ids, i, j, c, b));
      }
      out.report.moves = out.program.size();
      return out;
    }
    if (!progressed) ++out.report.retries;
  }
  throw Error(ErrorCode::GenericityExhausted, "could not separate the spectra within the retry budget");
}

/// A move X += t p(Y) after which X has a certified simple spectrum (the zero
/// move if it already has one).
inline std::pair<Move, Certificate> diagonalizing_move(const CMPoint& p, const GenericityBudget& b) {
  std::vector<CMPoint> pts{p};
  const std::size_t id = 0;
  Rng rng(mix_seed(b.seed, 11));
  if (is_simple_spectrum(p.x, b.tol, b.tols.size_cap).ok) {
    Certificate cert{"diagonalizing_move", 0, {engine_detail::simple_entry(pts, {&id, 1}, 0, Component::X, b)}};
    return {Move{MoveKind::AddPOfYToX, Poly{}}, cert};
  }
  // X phase only: reuse the stage with a copy whose Y is never touched.
  for (int attempt = 0; attempt < b.max_retries; ++attempt) {
    std::vector<std::size_t> keep{0};
    auto cand = engine_detail::draw_candidate(pts, Component::X, rng, keep, {}, b);
    if (cand && cand->eval.failing == 0) {
      Certificate cert{"diagonalizing_move", 1,
                       {engine_detail::simple_entry(cand->points, {&id, 1}, 0, Component::X, b)}};
      return {cand->move, cert};
    }
  }
  throw Error(ErrorCode::GenericityExhausted, "no diagonalizing move found within the retry budget");
}

inline Program make_all_diagonalizable(std::span<const CMPoint> points, const GenericityBudget& b) {
  std::vector<CMPoint> pts(points.begin(), points.end());
  Rng rng(mix_seed(b.seed, 1));
  return diagonalize_stage(pts, engine_detail::identity_ids(pts.size()), rng, b).program;
}

inline Program separate_spectra(std::span<const CMPoint> points, const GenericityBudget& b) {
  std::vector<CMPoint> pts(points.begin(), points.end());
  Rng rng(mix_seed(b.seed, 2));
  return separate_stage(pts, engine_detail::identity_ids(pts.size()), rng, b).program;
}

inline std::vector<cplx> fiber_solve(std::span<const cplx> x, std::span<const cplx> mu, const GenericityBudget& b) {
  return fiber_solve(x, mu, FiberOptions{mix_seed(b.seed, 3), std::max(1, b.max_retries), 1e-10});
}

/// Step 3. Requires certified simple, pairwise disjoint X-spectra on the
/// sources and the same for the Y-spectra of the targets.
inline Program align_tuples(std::span<const CMPoint> source, std::span<const CMPoint> target,
                            const GenericityBudget& b) {
  using engine_detail::part;
  if (source.size() != target.size()) throw Error(ErrorCode::SizeMismatch, "tuples differ in length");
  for (std::size_t i = 0; i < source.size(); ++i)
    if (source[i].size() != target[i].size()) throw Error(ErrorCode::SizeMismatch, "point sizes differ");
  auto require = [&](std::span<const CMPoint> pts, Component c) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!is_simple_spectrum(part(pts[i], c), b.tol, b.tols.size_cap).ok)
        throw Error(ErrorCode::PreconditionViolated, "align_tuples: missing simple-spectrum certificate");
      for (std::size_t j = 0; j < i; ++j)
        if (!spectra_disjoint(part(pts[i], c), part(pts[j], c), b.tol, b.tols.size_cap).ok)
          throw Error(ErrorCode::PreconditionViolated, "align_tuples: spectra are not pairwise disjoint");
    }
  };
  require(source, Component::X);
  require(target, Component::Y);
  Program prog;
  if (source.empty()) return prog;

  // (a) Y += p(X): move each source onto the fiber over (spectrum of X_i, spectrum of Y'_i).
  std::vector<CrtBlock> blocks;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const auto form = canonicalize(source[i], b.tols);
    const auto mu = eigen_decompose(target[i].y, b.tols).eigenvalues;
    std::vector<cplx> xs;
    for (const auto& pr : form.pairs) xs.push_back(pr.first);
    FiberOptions fo{mix_seed(b.seed, 100 + i), std::max(1, b.max_retries), 1e-10};
    const auto d = fiber_solve(xs, mu, fo);
    SpectrumTargets t;
    for (std::size_t k = 0; k < xs.size(); ++k) t.add(xs[k], d[k] - form.pairs[k].second);
    blocks.push_back({xs, interpolate(t, b.tols.spec)});
  }
  prog.moves.push_back({MoveKind::AddQOfXToY, crt_combine(blocks, b.tols.spec)});

  // (b) X += r(Y): in Y-eigenframes (transpose_swap), fix the X-diagonals.
  blocks.clear();
  for (std::size_t i = 0; i < source.size(); ++i) {
    const CMPoint mid = apply_move(prog.moves[0], source[i], b.tols.membership);
    const auto have = canonicalize(transpose_swap(mid), b.tols);
    const auto want = canonicalize(transpose_swap(target[i]), b.tols);
    SpectrumTargets t;
    std::vector<bool> used(have.pairs.size(), false);
    std::vector<cplx> mus;
    for (const auto& [mu, e_want] : want.pairs) {
      std::size_t pick = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < have.pairs.size(); ++k)
        if (!used[k] && std::abs(have.pairs[k].first - mu) < best) {
          best = std::abs(have.pairs[k].first - mu);
          pick = k;
        }
      used[pick] = true;
      t.add(mu, e_want - have.pairs[pick].second);
      mus.push_back(mu);
    }
    blocks.push_back({mus, interpolate(t, b.tols.spec)});
  }
  prog.moves.push_back({MoveKind::AddPOfYToX, crt_combine(blocks, b.tols.spec)});
  return prog;
}

struct VerificationResult {
  std::vector<double> distances;
  bool passed = true;
};

/// Applies the program to each source and compares with the matching target
/// through canonical forms. If either side lacks a simple X-spectrum, one
/// throwaway diagonalizing move is applied to both before comparing.
inline VerificationResult verify_solution(const Program& prog, std::span<const CMPoint> source,
                                          std::span<const CMPoint> target, double tol,
                                          const Tolerances& tols = kDefaultTolerances) {
  if (source.size() != target.size()) throw Error(ErrorCode::SizeMismatch, "tuples differ in length");
  VerificationResult res;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].size() != target[i].size()) throw Error(ErrorCode::SizeMismatch, "point sizes differ");
    CMPoint image = apply_program(prog, source[i], tols.membership);
    CMPoint want = target[i];
    double dist;
    try {
      dist = same_point(image, want, tol, tols).distance;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotSimpleSpectrum) throw;
      GenericityBudget b;
      b.tols = tols;
      b.seed = i;
      std::vector<CMPoint> both{image, want};
      Rng rng(mix_seed(b.seed, 7));
      const std::vector<std::size_t> keep{0, 1};
      std::optional<engine_detail::Candidate> cand;
      for (int a = 0; a < b.max_retries && !(cand && cand->eval.failing == 0); ++a)
        cand = engine_detail::draw_candidate(both, Component::X, rng, keep, {}, b);
      if (!cand || cand->eval.failing != 0) throw;
      dist = same_point(cand->points[0], cand->points[1], tol, tols).distance;
    }
    res.distances.push_back(dist);
    if (!(dist <= tol)) res.passed = false;
  }
  return res;
}

inline VerificationResult verify_solution(const Program& prog, const Configuration& source,
                                          const Configuration& target, double tol,
                                          const Tolerances& tols = kDefaultTolerances) {
  if (source.blocks.size() != target.blocks.size()) throw Error(ErrorCode::SizeMismatch, "block counts differ");
  std::vector<CMPoint> s, t;
  for (std::size_t k = 0; k < source.blocks.size(); ++k) {
    if (source.blocks[k].n != target.blocks[k].n ||
        source.blocks[k].points.size() != target.blocks[k].points.size())
      throw Error(ErrorCode::SizeMismatch, "block shapes differ");
    s.insert(s.end(), source.blocks[k].points.begin(), source.blocks[k].points.end());
    t.insert(t.end(), target.blocks[k].points.begin(), target.blocks[k].points.end());
  }
  return verify_solution(prog, s, t, tol, tols);
}

namespace engine_detail {

// Shared pipeline on flattened tuples; points of different sizes may mix.
inline SolveReport solve_flat(std::span<const CMPoint> source, std::span<const CMPoint> target,
                              const GenericityBudget& b) {
  if (source.size() != target.size()) throw Error(ErrorCode::SizeMismatch, "tuples differ in length");
  const std::size_t m = source.size();
  for (std::size_t i = 0; i < m; ++i)
    if (source[i].size() != target[i].size()) throw Error(ErrorCode::SizeMismatch, "point sizes differ");
  std::vector<CMPoint> pts(source.begin(), source.end());
  pts.insert(pts.end(), target.begin(), target.end());
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!verify_membership(pts[i], b.tols.membership).member)
      throw Error(ErrorCode::PreconditionViolated, "input point " + std::to_string(i) + " is not in C_n");

  SolveReport report;
  report.tol = b.tol;
  if (m == 0) return report;

  // Step 1 on all 2m points.
  Rng rng1(mix_seed(b.seed, 1));
  auto step1 = diagonalize_stage(pts, identity_ids(pts.size()), rng1, b);
  step1.certificate.after_moves = step1.program.size();

  // Distinctness within the source tuple and within the target tuple, and the
  // union of the 2m points (a target may coincide with a source).
  const double dup_tol = 10.0 * b.tols.canon;
  std::vector<CanonicalForm> forms;
  for (const auto& p : pts) forms.push_back(canonicalize(p, b.tols));
  auto same = [&](std::size_t i, std::size_t j) {
    return pts[i].size() == pts[j].size() && canonical_distance(forms[i], forms[j]) <= dup_tol;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (same(i, j)) throw Error(ErrorCode::DuplicatePoints, "source tuple repeats a point");
      if (same(m + i, m + j)) throw Error(ErrorCode::DuplicatePoints, "target tuple repeats a point");
    }
  std::vector<std::size_t> rep(pts.size());  // representative position in the union
  std::vector<std::size_t> union_ids;
  std::vector<CMPoint> uni;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rep[i] = uni.size();
    bool found = false;
    for (std::size_t u = 0; u < uni.size() && !found; ++u)
      if (same(i, union_ids[u])) {
        rep[i] = u;
        found = true;
      }
    if (!found) {
      union_ids.push_back(i);
      uni.push_back(pts[i]);
    }
  }

  // Step 2 on the union.
  Rng rng2(mix_seed(b.seed, 2));
  auto step2 = separate_stage(uni, union_ids, rng2, b);
  const Program g = compose(step1.program, step2.program);
  step2.certificate.after_moves = g.size();

  std::vector<CMPoint> src, tgt;
  for (std::size_t i = 0; i < m; ++i) {
    src.push_back(uni[rep[i]]);
    tgt.push_back(uni[rep[m + i]]);
  }
  GenericityBudget b3 = b;
  b3.seed = mix_seed(b.seed, 3);
  const Program g1 = align_tuples(src, tgt, b3);

  report.program = compose(compose(g, g1), invert(g));
  report.stages = {step1.report, step2.report, {"align", g1.size(), 0}, {"unwind", g.size(), 0}};
  report.certificates = {step1.certificate, step2.certificate};

  const auto ver = verify_solution(report.program, source, target, b.tol, b.tols);
  report.distances = ver.distances;
  report.status = ver.passed ? SolveStatus::Success : SolveStatus::VerificationFailed;
  return report;
}

}  // namespace engine_detail

inline SolveReport solve_transitivity(std::span<const CMPoint> source, std::span<const CMPoint> target,
                                      const GenericityBudget& b) {
  if (source.size() != target.size()) throw Error(ErrorCode::SizeMismatch, "tuples differ in length");
  for (const auto* list : {&source, &target})
    for (const auto& p : *list)
      if (p.size() != source.front().size())
        throw Error(ErrorCode::PreconditionViolated, "all points must lie in the same C_n");
  return engine_detail::solve_flat(source, target, b);
}

inline constexpr const char* kDiagonalSubvarietyMessage =
    "block sizes must be pairwise distinct: for equal sizes n_i = n_j the diagonal of C_n x C_n "
    "is invariant under the diagonal action, so no group element can separate it";

inline SolveReport solve_collective(const Configuration& source, const Configuration& target,
                                    const GenericityBudget& b) {
  if (source.blocks.size() != target.blocks.size()) throw Error(ErrorCode::SizeMismatch, "block counts differ");
  std::vector<CMPoint> s, t;
  for (std::size_t k = 0; k < source.blocks.size(); ++k) {
    const auto& sb = source.blocks[k];
    const auto& tb = target.blocks[k];
    if (sb.n != tb.n || sb.points.size() != tb.points.size())
      throw Error(ErrorCode::SizeMismatch, "block " + std::to_string(k) + " shapes differ");
    for (std::size_t j = 0; j < k; ++j)
      if (source.blocks[j].n == sb.n) throw Error(ErrorCode::DuplicateSpaceSizes, kDiagonalSubvarietyMessage);
    for (const auto* blk : {&sb, &tb})
      for (const auto& p : blk->points)
        if (p.size() != blk->n) throw Error(ErrorCode::SizeMismatch, "point size differs from its block size");
    s.insert(s.end(), sb.points.begin(), sb.points.end());
    t.insert(t.end(), tb.points.begin(), tb.points.end());
  }
  return engine_detail::solve_flat(s, t, b);
}

/// Recomputes every certificate from the program and the flattened
/// source ++ target list; returns false if any entry no longer holds.
inline bool revalidate_certificates(const SolveReport& report, std::span<const CMPoint> source,
                                    std::span<const CMPoint> target, const Tolerances& tols = kDefaultTolerances) {
  std::vector<CMPoint> pts(source.begin(), source.end());
  pts.insert(pts.end(), target.begin(), target.end());
  for (const auto& cert : report.certificates) {
    if (cert.after_moves > report.program.size()) return false;
    const Program prefix{{report.program.moves.begin(),
                          report.program.moves.begin() + static_cast<std::ptrdiff_t>(cert.after_moves)}};
    std::vector<CMPoint> moved;
    for (const auto& p : pts) moved.push_back(apply_program(prefix, p, tols.membership));
    for (const auto& e : cert.entries) {
      if (e.first >= moved.size() || e.second >= moved.size()) return false;
      const auto& a = engine_detail::part(moved[e.first], e.component);
      const auto cur = e.kind == CertKind::SimpleSpectrum
                           ? is_simple_spectrum(a, e.threshold, tols.size_cap)
                           : spectra_disjoint(a, engine_detail::part(moved[e.second], e.component), e.threshold,
                                              tols.size_cap);
      if (!cur.ok) return false;
    }
  }
  return true;
}

}  // namespace cmt
