//
// Copyright 2026 The FedMon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FEDMON_IFOREST_H_
#define FEDMON_IFOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace fedmon {

inline constexpr double kEulerGamma = 0.5772156649015329;

// Average path length of an unsuccessful BST search over n points:
// 2 (ln(n - 1) + gamma) - 2 (n - 1) / n for n > 2, 1 for n == 2, 0 below.
double AveragePathLength(int64_t n);

// 2^(-mean_path / c(psi)); 0.5 when c(psi) == 0.
double IsolationScore(double mean_path_length, int64_t psi);

struct IsolationNode {
  int32_t split_dim = -1;  // -1 marks a leaf
  double split_value = 0.0;
  int32_t left = -1;   // points with value < split_value
  int32_t right = -1;  // points with value >= split_value
  int32_t size = 0;    // training points that reached this node
  int32_t depth = 0;
};

struct IsolationTree {
  std::vector<IsolationNode> nodes;  // nodes[0] is the root
  int32_t Height() const;
};

struct IForest {
  std::vector<IsolationTree> trees;
  int64_t psi = 0;         // subsample size actually used
  int64_t n_training = 0;
  int dim = 0;
  int height_limit = 0;    // ceil(log2 psi)
};

// Each tree draws psi points without replacement (psi clamped to n) and
// splits on a uniformly chosen dimension among those with non-zero range at
// a uniform value in [min, max), until the node holds one point or reaches
// the height limit.
absl::StatusOr<IForest> IForestFit(std::span<const std::vector<double>> points,
                                   int n_trees, int64_t psi, uint64_t seed);

// Path length of z in one tree, with c(size) added at the terminal leaf.
double PathLength(const IsolationTree& tree, std::span<const double> z);

absl::StatusOr<double> IForestScore(const IForest& forest,
                                    std::span<const double> z);

}  // namespace fedmon

#endif  // FEDMON_IFOREST_H_
