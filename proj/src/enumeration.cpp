#include "blpp/enumeration.hpp"

#include <algorithm>

namespace blpp::reference {

namespace {

void enumerate(const BrownianField& field, int level, int lo, int n, int ib, double acc,
               std::vector<int>& jumps, double& best,
               std::vector<std::vector<int>>* argmaxes, double tie_tol) {
  if (level == n) {
    const double total = acc + field.at(n, ib) - field.at(n, lo);
    if (argmaxes) {
      if (total > best + tie_tol) {
        best = total;
        argmaxes->clear();
        argmaxes->push_back(jumps);
      } else if (total >= best - tie_tol) {
        best = std::max(best, total);
        argmaxes->push_back(jumps);
      }
    } else if (total > best) {
      best = total;
    }
    return;
  }
  for (int s = lo; s <= ib; ++s) {
    jumps.push_back(s);
    enumerate(field, level + 1, s, n, ib, acc + field.at(level, s) - field.at(level, lo), jumps,
              best, argmaxes, tie_tol);
    jumps.pop_back();
  }
}

}  // namespace

double last_passage(const BrownianField& field, int m, int ia, int n, int ib) {
  if (n < m || ib < ia) throw std::invalid_argument("reference::last_passage: bad endpoints");
  if (m == n) return field.at(m, ib) - field.at(m, ia);
  double best = kNegInf;
  std::vector<int> jumps;
  enumerate(field, m, ia, n, ib, 0.0, jumps, best, nullptr, 0.0);
  return best;
}

std::vector<std::vector<int>> optimal_jump_tuples(const BrownianField& field, int m, int ia,
                                                  int n, int ib, double tie_tol) {
  double best = kNegInf;
  std::vector<int> jumps;
  std::vector<std::vector<int>> argmaxes;
  enumerate(field, m, ia, n, ib, 0.0, jumps, best, &argmaxes, tie_tol);
  // A second pass drops tuples that fell out of the final tolerance band.
  std::vector<std::vector<int>> kept;
  for (const auto& tuple : argmaxes) {
    double w = 0.0;
    int lo = ia;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
      w += field.at(m + static_cast<int>(k), tuple[k]) - field.at(m + static_cast<int>(k), lo);
      lo = tuple[k];
    }
    w += field.at(n, ib) - field.at(n, lo);
    if (w >= best - tie_tol) kept.push_back(tuple);
  }
  return kept;
}

double point_to_level(const BrownianField& field, int level, const ValueRow& phi, int n, int ib) {
  double best = kNegInf;
  for (int z = 0; z <= ib; ++z) {
    if (phi(z) == kNegInf) continue;
    const double value = phi(z) + last_passage(field, level, z, n, ib);
    best = std::max(best, value);
  }
  return best;
}

}  // namespace blpp::reference
