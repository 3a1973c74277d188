#pragma once

// The `cmt` command-line tool. Kept in a header so the test suite can drive
// commands in-process.
//
// Exit codes: 0 ok, 1 verification or membership failure, 2 usage,
// 3 malformed input, 4 budget exhausted, 5 precondition violated.

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cmt/cmt.hpp"

namespace cmt::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kMalformed = 3,
  kBudgetExhausted = 4,
  kPrecondition = 5,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MembershipLost:
    case ErrorCode::VerificationFailed:
    case ErrorCode::NotSimpleSpectrum:
    case ErrorCode::WilsonFormViolation:
      return kFailure;
    case ErrorCode::SizeMismatch:
    case ErrorCode::InvalidArgument:
      return kUsage;
    case ErrorCode::MalformedInput:
    case ErrorCode::DegreeCap:
    case ErrorCode::SizeCap:
      return kMalformed;
    case ErrorCode::GenericityExhausted:
    case ErrorCode::NonConvergence:
    case ErrorCode::ConditioningFailure:
    case ErrorCode::DefectiveOrClustered:
      return kBudgetExhausted;
    case ErrorCode::DuplicateSpaceSizes:
    case ErrorCode::DuplicatePoints:
    case ErrorCode::PreconditionViolated:
      return kPrecondition;
    default:
      return kFailure;
  }
}

struct RunConfig {
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_retries = 64;
  int t_samples = 8;
  std::size_t size_cap = 16;
  std::string out;  // empty: stdout

  GenericityBudget budget() const {
    GenericityBudget b;
    b.seed = seed;
    b.tol = tol;
    b.max_retries = max_retries;
    b.t_samples = t_samples;
    b.tols.size_cap = size_cap;
    return b;
  }
};

namespace detail {

inline void add_run_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--seed", cfg.seed, "random seed")->envname("CMT_SEED");
  cmd.add_option("--tol", cfg.tol, "certificate threshold and verification distance bound")
      ->envname("CMT_TOL")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-retries", cfg.max_retries, "random draws per genericity step")
      ->envname("CMT_MAX_RETRIES")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--t-samples", cfg.t_samples, "values of t tried per random polynomial")
      ->envname("CMT_T_SAMPLES")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--size-cap", cfg.size_cap, "largest matrix size accepted")
      ->envname("CMT_SIZE_CAP")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", cfg.out, "output file (default: stdout)")->envname("CMT_OUT");
}

inline void emit(const io::json& j, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << io::dump(j);
  else
    io::write_file(path, j);
}

inline void check_caps(const Configuration& c, const RunConfig& cfg) {
  for (const auto& b : c.blocks)
    if (b.n > cfg.size_cap) throw Error(ErrorCode::SizeCap, "point size " + std::to_string(b.n) + " exceeds the cap");
}

inline Configuration read_instance(const std::string& path, const RunConfig& cfg) {
  auto c = io::instance_from_json(io::read_file(path));
  check_caps(c, cfg);
  return c;
}

inline int cmd_gen(const std::vector<std::size_t>& spaces, const std::vector<std::size_t>& points,
                   const RunConfig& cfg, std::ostream& out) {
  if (spaces.empty() || spaces.size() != points.size())
    throw Error(ErrorCode::InvalidArgument, "--spaces and --points need the same number of entries");
  Configuration c;
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    if (spaces[k] == 0 || spaces[k] > cfg.size_cap) throw Error(ErrorCode::InvalidArgument, "sizes must be in 1..size-cap");
    if (points[k] == 0) throw Error(ErrorCode::InvalidArgument, "point counts must be >= 1");
    Block b{spaces[k], {}};
    std::uint64_t salt = 0;
    while (b.points.size() < points[k]) {
      auto p = random_point(spaces[k], mix_seed(cfg.seed, 1'000'003ULL * k + salt++));
      bool fresh = verify_membership(p).member;
      for (const auto& q : b.points)
        if (same_point(p, q, 10.0 * kDefaultTolerances.canon).same) fresh = false;
      if (fresh) b.points.push_back(std::move(p));
    }
    c.blocks.push_back(std::move(b));
  }
  emit(io::instance_to_json(c), cfg.out, out);
  return kOk;
}

inline int cmd_check(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  const auto c = read_instance(path, cfg);
  bool all = true;
  for (std::size_t b = 0; b < c.blocks.size(); ++b)
    for (std::size_t i = 0; i < c.blocks[b].points.size(); ++i) {
      const auto m = verify_membership(c.blocks[b].points[i], kDefaultTolerances.membership);
      all = all && m.member;
      out << "block " << b << " (n=" << c.blocks[b].n << ") point " << i << ": residual " << m.residual << " "
          << (m.member ? "ok" : "NOT A MEMBER") << "\n";
    }
  return all ? kOk : kFailure;
}

inline int cmd_canon(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  const auto c = read_instance(path, cfg);
  io::json blocks = io::json::array();
  bool all = true;
  for (const auto& b : c.blocks) {
    io::json forms = io::json::array();
    for (const auto& p : b.points) {
      try {
        forms.push_back(io::to_json(canonicalize(p)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotSimpleSpectrum && e.code() != ErrorCode::WilsonFormViolation) throw;
        forms.push_back({{"n", b.n}, {"error", e.what()}});
        all = false;
      }
    }
    blocks.push_back({{"n", b.n}, {"canonical_forms", std::move(forms)}});
  }
  emit({{"format_version", io::kFormatVersion}, {"blocks", std::move(blocks)}}, cfg.out, out);
  return all ? kOk : kFailure;
}

inline int cmd_solve(const std::string& src_path, const std::string& tgt_path, const std::string& report_path,
                     const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto source = read_instance(src_path, cfg);
  const auto target = read_instance(tgt_path, cfg);
  const auto report = solve_collective(source, target, cfg.budget());
  emit(io::program_to_json(report.program), cfg.out, out);
  if (!report_path.empty()) io::write_file(report_path, io::report_to_json(report));
  if (report.status != SolveStatus::Success) {
    err << "verification failed: a distance exceeds " << cfg.tol << "\n";
    return kFailure;
  }
  return kOk;
}

inline int cmd_apply(const std::string& prog_path, const std::string& inst_path, const RunConfig& cfg,
                     std::ostream& out) {
  const auto prog = io::program_from_json(io::read_file(prog_path));
  const auto c = read_instance(inst_path, cfg);
  emit(io::instance_to_json(apply_to_configuration(prog, c)), cfg.out, out);
  return kOk;
}

inline int cmd_verify(const std::string& prog_path, const std::string& src_path, const std::string& tgt_path,
                      const RunConfig& cfg, std::ostream& out) {
  const auto prog = io::program_from_json(io::read_file(prog_path));
  const auto source = read_instance(src_path, cfg);
  const auto target = read_instance(tgt_path, cfg);
  const auto res = verify_solution(prog, source, target, cfg.tol);
  for (std::size_t i = 0; i < res.distances.size(); ++i) out << "point " << i << ": distance " << res.distances[i] << "\n";
  out << (res.passed ? "PASS" : "FAIL") << " (tol " << cfg.tol << ")\n";
  return res.passed ? kOk : kFailure;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Calogero-Moser transitivity toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::vector<std::size_t> spaces, counts;
  auto* gen = app.add_subcommand("gen", "generate a random configuration");
  gen->add_option("--spaces", spaces, "comma-separated sizes n_i")->delimiter(',')->required();
  gen->add_option("--points", counts, "comma-separated point counts m_i")->delimiter(',')->required();
  detail::add_run_options(*gen, cfg);

  std::string inst, prog, src, tgt, report;
  auto* check = app.add_subcommand("check", "verify membership of every point");
  check->add_option("instance", inst)->required();
  detail::add_run_options(*check, cfg);

  auto* canon = app.add_subcommand("canon", "print canonical forms");
  canon->add_option("instance", inst)->required();
  detail::add_run_options(*canon, cfg);

  auto* solve = app.add_subcommand("solve", "build a program mapping source to target");
  solve->add_option("source", src)->required();
  solve->add_option("target", tgt)->required();
  solve->add_option("--report", report, "write the solve report here")->envname("CMT_REPORT");
  detail::add_run_options(*solve, cfg);

  auto* apply = app.add_subcommand("apply", "apply a program to a configuration");
  apply->add_option("program", prog)->required();
  apply->add_option("instance", inst)->required();
  detail::add_run_options(*apply, cfg);

  auto* verify = app.add_subcommand("verify", "check a program against source and target");
  verify->add_option("program", prog)->required();
  verify->add_option("source", src)->required();
  verify->add_option("target", tgt)->required();
  detail::add_run_options(*verify, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen) return detail::cmd_gen(spaces, counts, cfg, out);
    if (*check) return detail::cmd_check(inst, cfg, out);
    if (*canon) return detail::cmd_canon(inst, cfg, out);
    if (*solve) return detail::cmd_solve(src, tgt, report, cfg, out, err);
    if (*apply) return detail::cmd_apply(prog, inst, cfg, out);
    if (*verify) return detail::cmd_verify(prog, src, tgt, cfg, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace cmt::cli
