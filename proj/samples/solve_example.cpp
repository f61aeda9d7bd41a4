// Solves a small instance in memory and prints the collapsed b-matching.

#include <iostream>

#include "bmatch/bmatch.hpp"

int main() {
  bmatch::BMatchInstance inst;
  inst.s = 3;
  inst.t = 2;
  inst.alpha = {1, 2, 1};
  inst.beta = {2, 2};
  inst.weights = bmatch::Matrix::from_rows({{4, 1}, {3, 3}, {0, 5}});

  const auto result = bmatch::solve_b_matching(inst);
  for (const auto& e : result.matching.edges) {
    std::cout << "a" << e.i << " - b" << e.j << " x" << e.multiplicity << "\n";
  }
  std::cout << "weight " << result.matching.total_weight << "\n";

  const auto check = bmatch::verify_b_matching(inst, result.matching, 1e-9);
  std::cout << (check ? "valid b-matching" : "invalid: " + check.violation) << "\n";
  return check ? 0 : 1;
}
