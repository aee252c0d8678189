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

#include "fedmon/iforest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "fedmon/random.h"

namespace fedmon {

double AveragePathLength(int64_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const auto x = static_cast<double>(n);
  return 2.0 * (std::log(x - 1.0) + kEulerGamma) - 2.0 * (x - 1.0) / x;
}

double IsolationScore(double mean_path_length, int64_t psi) {
  const double c = AveragePathLength(psi);
  if (c <= 0.0) return 0.5;
  return std::exp2(-mean_path_length / c);
}

int32_t IsolationTree::Height() const {
  int32_t h = 0;
  for (const IsolationNode& n : nodes) h = std::max(h, n.depth);
  return h;
}

namespace {

void Grow(std::span<const std::vector<double>> points, std::vector<size_t>& idx,
          size_t lo, size_t hi, int32_t depth, int height_limit, int dim,
          RandomStream& rng, IsolationTree& tree) {
  const auto node_id = static_cast<int32_t>(tree.nodes.size());
  tree.nodes.push_back(IsolationNode{});
  tree.nodes[node_id].size = static_cast<int32_t>(hi - lo);
  tree.nodes[node_id].depth = depth;
  if (hi - lo <= 1 || depth >= height_limit) return;

  std::vector<int> splittable;
  std::vector<double> mins(dim), maxs(dim);
  for (int d = 0; d < dim; ++d) {
    double mn = points[idx[lo]][d], mx = mn;
    for (size_t i = lo + 1; i < hi; ++i) {
      mn = std::min(mn, points[idx[i]][d]);
      mx = std::max(mx, points[idx[i]][d]);
    }
    mins[d] = mn;
    maxs[d] = mx;
    if (mx > mn) splittable.push_back(d);
  }
  if (splittable.empty()) return;

  const int d = splittable[rng.UniformInt(splittable.size())];
  double split = mins[d] + rng.Uniform() * (maxs[d] - mins[d]);
  // Keep both sides non-empty: the minimum always goes left.
  if (split <= mins[d]) split = std::nextafter(mins[d], maxs[d]);
  const auto mid_it = std::partition(
      idx.begin() + static_cast<std::ptrdiff_t>(lo),
      idx.begin() + static_cast<std::ptrdiff_t>(hi),
      [&](size_t i) { return points[i][d] < split; });
  const auto mid = static_cast<size_t>(mid_it - idx.begin());

  tree.nodes[node_id].split_dim = d;
  tree.nodes[node_id].split_value = split;
  tree.nodes[node_id].left = static_cast<int32_t>(tree.nodes.size());
  Grow(points, idx, lo, mid, depth + 1, height_limit, dim, rng, tree);
  tree.nodes[node_id].right = static_cast<int32_t>(tree.nodes.size());
  Grow(points, idx, mid, hi, depth + 1, height_limit, dim, rng, tree);
}

}  // namespace

absl::StatusOr<IForest> IForestFit(std::span<const std::vector<double>> points,
                                   int n_trees, int64_t psi, uint64_t seed) {
  if (points.empty()) {
    return absl::InvalidArgumentError("isolation forest needs at least one point");
  }
  if (n_trees <= 0 || psi <= 0) {
    return absl::InvalidArgumentError("n_trees and psi must be positive");
  }
  const int dim = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) {
      return absl::InvalidArgumentError("points differ in dimension");
    }
    for (double v : p) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("non-finite coordinate in training set");
      }
    }
  }

  IForest forest;
  forest.n_training = static_cast<int64_t>(points.size());
  forest.psi = std::min<int64_t>(psi, forest.n_training);
  forest.dim = dim;
  forest.height_limit =
      forest.psi <= 1
          ? 0
          : static_cast<int>(std::ceil(std::log2(static_cast<double>(forest.psi))));
  forest.trees.reserve(n_trees);

  RandomStream rng(seed);
  std::vector<size_t> all(points.size());
  for (int t = 0; t < n_trees; ++t) {
    std::iota(all.begin(), all.end(), size_t{0});
    // Partial Fisher-Yates: the first psi entries become the subsample.
    for (int64_t i = 0; i < forest.psi; ++i) {
      const auto j = static_cast<size_t>(i) +
                     rng.UniformInt(all.size() - static_cast<size_t>(i));
      std::swap(all[static_cast<size_t>(i)], all[j]);
    }
    std::vector<size_t> idx(all.begin(), all.begin() + forest.psi);
    IsolationTree tree;
    Grow(points, idx, 0, idx.size(), 0, forest.height_limit, dim, rng, tree);
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

double PathLength(const IsolationTree& tree, std::span<const double> z) {
  int32_t id = 0;
  while (tree.nodes[id].split_dim >= 0) {
    const IsolationNode& n = tree.nodes[id];
    id = z[n.split_dim] < n.split_value ? n.left : n.right;
  }
  const IsolationNode& leaf = tree.nodes[id];
  return static_cast<double>(leaf.depth) + AveragePathLength(leaf.size);
}

absl::StatusOr<double> IForestScore(const IForest& forest,
                                    std::span<const double> z) {
  if (forest.trees.empty()) return absl::FailedPreconditionError("empty forest");
  if (static_cast<int>(z.size()) != forest.dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "point has dimension ", z.size(), ", forest expects ", forest.dim));
  }
  double total = 0.0;
  for (const IsolationTree& tree : forest.trees) total += PathLength(tree, z);
  return IsolationScore(total / static_cast<double>(forest.trees.size()),
                        forest.psi);
}

}  // namespace fedmon
