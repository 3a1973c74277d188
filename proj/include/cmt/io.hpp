#pragma once

// JSON file formats: instances (configurations), programs and solve reports.
// Complex numbers are [re, im] arrays; every file carries format_version.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "cmt/cm_space.hpp"
#include "cmt/core.hpp"
#include "cmt/engine.hpp"
#include "cmt/moves.hpp"
#include "json.hpp"

namespace cmt::io {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    malformed("complex number must be a [re, im] array");
  const double re = j[0].get<double>(), im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) malformed("non-finite number");
  return {re, im};
}

inline json to_json(const Poly& p) {
  json arr = json::array();
  for (const cplx c : p.coeffs()) arr.push_back(to_json(c));
  return arr;
}

inline Poly poly_from_json(const json& j) {
  if (!j.is_array()) malformed("polynomial must be an array of coefficients");
  std::vector<cplx> c;
  for (const auto& e : j) c.push_back(complex_from_json(e));
  return Poly(std::move(c));
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) malformed("matrix must have n rows");
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) malformed("matrix rows must have n entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

inline std::size_t size_from_json(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0)
    malformed(std::string("missing or invalid positive integer '") + key + "'");
  return j[key].get<std::size_t>();
}

inline json to_json(const CMPoint& p) { return {{"n", p.size()}, {"X", to_json(p.x)}, {"Y", to_json(p.y)}}; }

inline CMPoint point_from_json(const json& j) {
  const std::size_t n = size_from_json(j, "n");
  if (!j.contains("X") || !j.contains("Y")) malformed("point needs X and Y");
  return {matrix_from_json(j["X"], n), matrix_from_json(j["Y"], n)};
}

inline json to_json(const Configuration& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks) {
    json pts = json::array();
    for (const auto& p : b.points) pts.push_back(to_json(p));
    blocks.push_back({{"n", b.n}, {"points", std::move(pts)}});
  }
  return {{"blocks", std::move(blocks)}};
}

inline Configuration configuration_from_json(const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) malformed("configuration needs blocks");
  Configuration c;
  for (const auto& bj : j["blocks"]) {
    Block b{size_from_json(bj, "n"), {}};
    if (!bj.contains("points") || !bj["points"].is_array()) malformed("block needs a points array");
    for (const auto& pj : bj["points"]) {
      b.points.push_back(point_from_json(pj));
      if (b.points.back().size() != b.n) malformed("point size differs from its block size");
    }
    c.blocks.push_back(std::move(b));
  }
  return c;
}

inline void require_version(const json& j) {
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_string())
    malformed("missing format_version");
  if (j["format_version"].get<std::string>() != kFormatVersion)
    malformed("unsupported format_version " + j["format_version"].get<std::string>());
}

inline json instance_to_json(const Configuration& c) {
  return {{"format_version", kFormatVersion}, {"configuration", to_json(c)}};
}

inline Configuration instance_from_json(const json& j) {
  require_version(j);
  if (!j.contains("configuration")) malformed("instance needs a configuration");
  return configuration_from_json(j["configuration"]);
}

inline json to_json(const Move& mv) { return {{"kind", std::string(kind_name(mv.kind))}, {"poly", to_json(mv.poly)}}; }

inline json program_to_json(const Program& prog) {
  json moves = json::array();
  for (const auto& mv : prog.moves) moves.push_back(to_json(mv));
  return {{"format_version", kFormatVersion}, {"moves", std::move(moves)}};
}

inline Program program_from_json(const json& j, int degree_cap = kDefaultTolerances.degree_cap) {
  require_version(j);
  if (!j.contains("moves") || !j["moves"].is_array()) malformed("program needs a moves array");
  Program prog;
  for (const auto& mj : j["moves"]) {
    if (!mj.is_object() || !mj.contains("kind") || !mj["kind"].is_string() || !mj.contains("poly"))
      malformed("move needs kind and poly");
    const auto kind = mj["kind"].get<std::string>();
    Move mv;
    if (kind == kind_name(MoveKind::AddPOfYToX))
      mv.kind = MoveKind::AddPOfYToX;
    else if (kind == kind_name(MoveKind::AddQOfXToY))
      mv.kind = MoveKind::AddQOfXToY;
    else
      malformed("unknown move kind '" + kind + "'");
    mv.poly = poly_from_json(mj["poly"]);
    prog.moves.push_back(std::move(mv));
  }
  try {
    check_degree_cap(prog, degree_cap);
  } catch (const Error& e) {
    malformed(e.what());
  }
  return prog;
}

inline json to_json(const CanonicalForm& f) {
  json pairs = json::array();
  for (const auto& [x, d] : f.pairs) pairs.push_back({{"x", to_json(x)}, {"d", to_json(d)}});
  return {{"n", f.n}, {"pairs", std::move(pairs)}};
}

inline json to_json(const Certificate& c) {
  json entries = json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"description", e.description},
                       {"kind", e.kind == CertKind::SimpleSpectrum ? "simple_spectrum" : "disjoint_spectra"},
                       {"component", e.component == Component::X ? "X" : "Y"},
                       {"points", e.kind == CertKind::SimpleSpectrum ? json::array({e.first})
                                                                     : json::array({e.first, e.second})},
                       {"magnitude", e.magnitude},
                       {"threshold", e.threshold}});
  return {{"stage", c.stage}, {"after_moves", c.after_moves}, {"entries", std::move(entries)}};
}

inline json report_to_json(const SolveReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"moves", s.moves}, {"retries", s.retries}});
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  double worst = 0.0;
  for (const double d : r.distances) worst = std::max(worst, d);
  return {{"format_version", kFormatVersion},
          {"status", r.status == SolveStatus::Success ? "success" : "verification_failed"},
          {"program_length", r.program.size()},
          {"stages", std::move(stages)},
          {"verification", {{"tol", r.tol}, {"max_distance", worst}, {"distances", r.distances}}},
          {"certificates", std::move(certs)}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << dump(j);
}

}  // namespace cmt::io
