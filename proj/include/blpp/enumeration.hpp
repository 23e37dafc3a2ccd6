#pragma once

#include <vector>

#include "blpp/field.hpp"

namespace blpp::reference {

// Exhaustive maximization over all nondecreasing jump tuples. Exponential in
// the level count; intended as the independent cross-check for small grids,
// deliberately sharing no code with the running-max recursions.
double last_passage(const BrownianField& field, int m, int ia, int n, int ib);

// All jump tuples (s_m .. s_{n-1}) whose weight is within tie_tol of the
// optimum.
std::vector<std::vector<int>> optimal_jump_tuples(const BrownianField& field, int m, int ia,
                                                  int n, int ib, double tie_tol = 1e-12);

// max over z <= ib of phi(z) + L_{(level, z), (n, ib)} by enumeration.
double point_to_level(const BrownianField& field, int level, const ValueRow& phi, int n, int ib);

}  // namespace blpp::reference
