#pragma once

#include <vector>

#include "instfuse/mat.hpp"
#include "instfuse/scenario.hpp"

namespace instfuse::routing {

struct RoutingConfig {
  // Pairwise-IoU threshold: an instance whose best partner IoU is below
  // lambda has nothing to fuse with and stays on the single branch.
  double lambda = 0.1;
};

struct RoutedSets {
  std::vector<sim::Instance> single;
  std::vector<sim::Instance> coop;
};

/// Pairwise BEV IoU of all instance boxes; diagonal forced to 0. OpenMP
/// parallel across rows when enabled at build time.
Mat build_iou_matrix(const std::vector<sim::Instance>& table);

/// Serial reference for build_iou_matrix; results are bit-identical.
Mat build_iou_matrix_serial(const std::vector<sim::Instance>& table);

/// Split the concatenated instance table: an instance goes to single when its
/// max off-diagonal IoU is strictly below lambda, else to coop. Relative
/// order within each branch follows the input table.
RoutedSets route(const std::vector<sim::Instance>& table,
                 const RoutingConfig& cfg);

}  // namespace instfuse::routing
