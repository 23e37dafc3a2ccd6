#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blpp/busemann.hpp"
#include "blpp/field.hpp"
#include "blpp/lpp.hpp"

namespace blpp {

// Per-level objective g_n(i) = B_n(i) + w_{n+1}(i) and its leftmost /
// rightmost maximizer maps over right half-windows [i, target]. A geodesic
// to the reverse-profile target follows tau level by level, so the maps
// encode the whole geodesic fan for one direction at once.
struct ArgmaxMaps {
  Target target;
  int eta_sign = 0;  // -1 / +1 surrogate tag, 0 for the plain direction
  int base_level = 0;
  LevelMatrix g;           // rows base_level .. K-1
  IndexMatrix tau_left, tau_right;

  int tauL(int level, int index) const { return tau_left(level - base_level, index); }
  int tauR(int level, int index) const { return tau_right(level - base_level, index); }
  double g_at(int level, int index) const { return g(level - base_level, index); }

  bool same_direction(const ArgmaxMaps& other) const {
    return target == other.target && eta_sign == other.eta_sign;
  }
};

// One right-to-left scan: leftmost map keeps the first maximum on ties,
// rightmost keeps the last. Both are nondecreasing with tau(i) >= i.
void scan_argmax(const Eigen::Ref<const ValueRow>& g, Eigen::Ref<Eigen::ArrayXi> tau_left,
                 Eigen::Ref<Eigen::ArrayXi> tau_right);

ArgmaxMaps argmax_maps(const BrownianField& field, const ReverseProfile& w, int eta_sign = 0);

struct SemiGeodesic {
  GridPoint origin;
  Side side = Side::Left;
  Target target;
  int eta_sign = 0;
  UpRightPath path;  // traced from origin level up to the truncation level
};

// Iterate s_n = tau_side(n, s_{n-1}) from the origin up to stop_level. At
// finite horizon this is exactly the point-to-target geodesic, so weights
// and reverse-profile values agree by construction.
SemiGeodesic busemann_geodesic(const ArgmaxMaps& maps, GridPoint origin, Side side,
                               int stop_level = -1);

// Raw jump indices s_{m-1}..s_{stop} of the traced geodesic.
std::vector<int> trace_jump_indices(const ArgmaxMaps& maps, GridPoint origin, Side side,
                                    int stop_level);

int default_truncation_level(const Target& target, int base_level);

// First grid point after which the two jump sequences agree forever.
std::optional<GridPoint> coalescence_point(const SemiGeodesic& a, const SemiGeodesic& b);

// s_N / N slope estimate; 0 for degenerate vertical runs.
double direction_estimate(const SemiGeodesic& geo, const FieldSpec& spec);

void export_geodesic_fan_svg(const std::vector<SemiGeodesic>& fan, const FieldSpec& spec,
                             const std::string& path);

}  // namespace blpp
