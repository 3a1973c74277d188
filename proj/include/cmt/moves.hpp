#pragma once

// Elements of the triangular automorphism group, stored as words in the
// two generator families (X,Y) -> (X + p(Y), Y) and (X,Y) -> (X, Y + q(X)).

#include <string>
#include <string_view>
#include <vector>

#include "cmt/cm_space.hpp"
#include "cmt/core.hpp"
#include "cmt/polynomial.hpp"

namespace cmt {

enum class MoveKind {
  AddPOfYToX,  // X += p(Y)
  AddQOfXToY,  // Y += q(X)
};

inline constexpr std::string_view kind_name(MoveKind k) {
  return k == MoveKind::AddPOfYToX ? "X+=p(Y)" : "Y+=q(X)";
}

struct Move {
  MoveKind kind = MoveKind::AddPOfYToX;
  Poly poly;

  Move inverse() const { return {kind, -poly}; }
  friend bool operator==(const Move&, const Move&) = default;
};

struct Program {
  std::vector<Move> moves;  // applied left to right

  std::size_t size() const noexcept { return moves.size(); }
  bool empty() const noexcept { return moves.empty(); }
  friend bool operator==(const Program&, const Program&) = default;
};

/// Applies the generator without any membership check.
inline CMPoint apply_move_unchecked(const Move& mv, const CMPoint& p) {
  if (mv.poly.is_zero()) return p;
  if (mv.kind == MoveKind::AddPOfYToX) return {p.x + eval_matrix(mv.poly, p.y), p.y};
  return {p.x, p.y + eval_matrix(mv.poly, p.x)};
}

inline CMPoint apply_move(const Move& mv, const CMPoint& p, double membership_tol = kDefaultTolerances.membership) {
  CMPoint out = apply_move_unchecked(mv, p);
  const auto check = verify_membership(out, membership_tol);
  if (!check.member)
    throw Error(ErrorCode::MembershipLost, "membership residual " + std::to_string(check.residual) +
                                               " exceeds tolerance after " + std::string(kind_name(mv.kind)));
  return out;
}

inline CMPoint apply_program(const Program& prog, CMPoint p, double membership_tol = kDefaultTolerances.membership) {
  for (std::size_t k = 0; k < prog.moves.size(); ++k) {
    try {
      p = apply_move(prog.moves[k], p, membership_tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MembershipLost) throw;
      throw Error(ErrorCode::MembershipLost, "move " + std::to_string(k) + ": " + e.what());
    }
  }
  return p;
}

inline Configuration apply_to_configuration(const Program& prog, const Configuration& c,
                                            double membership_tol = kDefaultTolerances.membership) {
  Configuration out = c;
  for (std::size_t b = 0; b < out.blocks.size(); ++b)
    for (std::size_t i = 0; i < out.blocks[b].points.size(); ++i) {
      try {
        out.blocks[b].points[i] = apply_program(prog, out.blocks[b].points[i], membership_tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MembershipLost) throw;
        throw Error(ErrorCode::MembershipLost,
                    "block " + std::to_string(b) + " point " + std::to_string(i) + ", " + e.what());
      }
    }
  return out;
}

/// Reverses the word and negates every polynomial.
inline Program invert(const Program& prog) {
  Program inv;
  inv.moves.reserve(prog.size());
  for (auto it = prog.moves.rbegin(); it != prog.moves.rend(); ++it) inv.moves.push_back(it->inverse());
  return inv;
}

/// `first` then `then`, in application order.
inline Program compose(const Program& first, const Program& then) {
  Program out = first;
  out.moves.insert(out.moves.end(), then.moves.begin(), then.moves.end());
  return out;
}

inline void check_degree_cap(const Program& prog, int degree_cap = kDefaultTolerances.degree_cap) {
  for (std::size_t k = 0; k < prog.size(); ++k)
    if (prog.moves[k].poly.degree() > degree_cap)
      throw Error(ErrorCode::DegreeCap, "move " + std::to_string(k) + " has degree " +
                                            std::to_string(prog.moves[k].poly.degree()) + " above the cap " +
                                            std::to_string(degree_cap));
}

}  // namespace cmt
