#pragma once

#include <string>

#include "blpp/field.hpp"
#include "blpp/grid.hpp"

namespace blpp {

enum class Side { Left, Right };

// Last-passage values from one origin: v(k - origin.level, i) is the best
// weight collectable by an up-right path from the origin to (k, t_i).
// Entries left of the origin time are -inf.
struct ForwardProfile {
  GridPoint origin;
  int top_level = 0;
  LevelMatrix v;

  double at(int level, int index) const { return v(level - origin.level, index); }
  auto row(int level) const { return v.row(level - origin.level); }
};

// v_m(i) = B_m(i) - B_m(a); one running-max scan per level above:
// v_k(i) = B_k(i) + max_{a <= r <= i} (v_{k-1}(r) - B_k(r)).
ForwardProfile forward_profile(const BrownianField& field, GridPoint origin, int top_level);

double last_passage_time(const BrownianField& field, GridPoint x, GridPoint y);

// Backtracked maximizer path from x to y; Side picks the leftmost or
// rightmost argmax at every level, which brackets all optimal paths.
UpRightPath point_geodesic(const BrownianField& field, GridPoint x, GridPoint y, Side side);

double path_weight(const BrownianField& field, const UpRightPath& path);

// Point-to-level value max_z { phi(z) + L_{(level,z),(n,t)} }; phi entries
// may be -inf. The returned profile row n holds the value for every target
// time on that level.
LevelMatrix initial_condition_profile(const BrownianField& field, int level, const ValueRow& phi,
                                      int top_level);
double solve_initial_condition(const BrownianField& field, int level, const ValueRow& phi, int n,
                               int target_index);

void export_profile_csv(const ForwardProfile& profile, const FieldSpec& spec,
                        const std::string& path);
void export_path_csv(const UpRightPath& path, const FieldSpec& spec, const std::string& file);

}  // namespace blpp
