// Copyright 2026 The sybilscope Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYBILSCOPE_CLUSTER_HPP_
#define SYBILSCOPE_CLUSTER_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sybilscope/ingest.hpp"

namespace sybil {

struct ClusterParams {
  double eps = 0.405;
  size_t min_pts = 3;

  // Throws std::invalid_argument unless 0 <= eps <= 1 and min_pts >= 1.
  void validate() const;

  friend bool operator==(const ClusterParams&, const ClusterParams&) = default;
};

// Grid-searched defaults reported for the Hop airdrop data, keyed by
// lowercase chain name. Used only when a run does not set eps/min_pts.
const ClusterParams* default_cluster_params(const std::string& chain);

// Dense symmetric distance matrix with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(size_t n) : n_(n), values_(n * n, 0.0) {}

  // Fills the upper triangle from `dist(i, j)` for i < j and mirrors it.
  static DistanceMatrix from_function(size_t n, const std::function<double(size_t, size_t)>& dist);

  size_t size() const { return n_; }
  double operator()(size_t i, size_t j) const { return values_[i * n_ + j]; }
  void set(size_t i, size_t j, double d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }

 private:
  size_t n_ = 0;
  std::vector<double> values_;
};

inline constexpr int kNoise = -1;

// Index-level DBSCAN result over the rows of a DistanceMatrix.
struct Labeling {
  std::vector<int> label;  // cluster index or kNoise
  std::vector<char> core;
  size_t cluster_count = 0;
};

// Sequential DBSCAN. A point is core when at least min_pts points
// (itself included) lie within distance <= eps. Points are scanned in
// `scan_order`; clusters are numbered in creation order and a border point
// joins the first cluster whose expansion reaches it.
Labeling dbscan_indices(const DistanceMatrix& dist, const ClusterParams& params,
                        std::span<const size_t> scan_order);

struct Clustering {
  std::vector<std::vector<AccountId>> clusters;  // members sorted
  std::vector<AccountId> noise;                  // sorted
  ClusterParams params;
};

// Row i of `dist` belongs to accounts[i]. Accounts are scanned in sorted
// order, so the result does not depend on the input permutation.
Clustering dbscan(std::span<const AccountId> accounts, const DistanceMatrix& dist,
                  const ClusterParams& params);

// Mean silhouette over clustered points; noise is ignored and points of
// singleton clusters score 0. Throws std::domain_error("silhouette
// undefined") with fewer than two clusters.
double silhouette(std::span<const int> labels, const DistanceMatrix& dist);
double silhouette(const Clustering& c, std::span<const AccountId> accounts,
                  const DistanceMatrix& dist);

// Grid search maximizing silhouette. Ties go to the smaller eps, then the
// smaller min_pts. Throws std::runtime_error("no admissible parameters")
// when no grid point yields two clusters.
ClusterParams tune_params(std::span<const AccountId> accounts, const DistanceMatrix& dist,
                          std::span<const double> eps_grid, std::span<const size_t> min_pts_grid);

}  // namespace sybil

#endif  // SYBILSCOPE_CLUSTER_HPP_
