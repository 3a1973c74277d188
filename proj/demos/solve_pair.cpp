// Builds two random pairs of points on C_3, solves for a program mapping one
// pair onto the other, and prints the program together with its verification.

#include <cstdio>

#include "cmt/cmt.hpp"

int main() {
  using namespace cmt;
  const std::vector<CMPoint> source{random_point(3, 1), random_point(3, 2)};
  const std::vector<CMPoint> target{random_point(3, 3), random_point(3, 4)};

  GenericityBudget budget;
  budget.seed = 2024;
  const SolveReport report = solve_transitivity(source, target, budget);

  for (const auto& stage : report.stages)
    std::printf("%-12s %zu moves, %d retries\n", stage.name.c_str(), stage.moves, stage.retries);
  for (std::size_t i = 0; i < report.distances.size(); ++i)
    std::printf("point %zu lands at distance %.3e from its target\n", i, report.distances[i]);

  std::fputs(io::dump(io::program_to_json(report.program)).c_str(), stdout);
  return report.status == SolveStatus::Success ? 0 : 1;
}
