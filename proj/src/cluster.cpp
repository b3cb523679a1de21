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

#include "sybilscope/cluster.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace sybil {

void ClusterParams::validate() const {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
  if (min_pts < 1) throw std::invalid_argument("min_pts must be at least 1");
}

const ClusterParams* default_cluster_params(const std::string& chain) {
  static const std::map<std::string, ClusterParams> kDefaults = {
      {"arbitrum", {0.405, 3}},
      {"gnosis", {0.550, 3}},
      {"ethereum", {0.285, 3}},
  };
  auto it = kDefaults.find(chain);
  return it == kDefaults.end() ? nullptr : &it->second;
}

DistanceMatrix DistanceMatrix::from_function(size_t n,
                                             const std::function<double(size_t, size_t)>& dist) {
  DistanceMatrix m(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) m.set(i, j, dist(i, j));
  }
  return m;
}

Labeling dbscan_indices(const DistanceMatrix& dist, const ClusterParams& params,
                        std::span<const size_t> scan_order) {
  params.validate();
  const size_t n = dist.size();
  Labeling out;
  out.label.assign(n, kNoise);
  out.core.assign(n, 0);

  // Neighbor lists follow scan order so expansion order is deterministic.
  std::vector<std::vector<size_t>> neighbors(n);
  for (size_t p : scan_order) {
    for (size_t q : scan_order) {
      if (dist(p, q) <= params.eps) neighbors[p].push_back(q);
    }
    out.core[p] = neighbors[p].size() >= params.min_pts;
  }

  std::vector<char> visited(n, 0);
  std::vector<size_t> queue;
  for (size_t p : scan_order) {
    if (visited[p]) continue;
    visited[p] = 1;
    if (!out.core[p]) continue;  // stays noise unless a cluster claims it
    const int c = static_cast<int>(out.cluster_count++);
    out.label[p] = c;
    queue.assign(neighbors[p].begin(), neighbors[p].end());
    for (size_t i = 0; i < queue.size(); ++i) {
      const size_t q = queue[i];
      if (out.label[q] == kNoise) out.label[q] = c;
      if (visited[q]) continue;
      visited[q] = 1;
      if (out.core[q]) queue.insert(queue.end(), neighbors[q].begin(), neighbors[q].end());
    }
  }
  return out;
}

Clustering dbscan(std::span<const AccountId> accounts, const DistanceMatrix& dist,
                  const ClusterParams& params) {
  if (accounts.size() != dist.size()) {
    throw std::invalid_argument("distance matrix does not match account list");
  }
  std::vector<size_t> order(accounts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return accounts[a] < accounts[b]; });

  Labeling lab = dbscan_indices(dist, params, order);
  Clustering out;
  out.params = params;
  out.clusters.resize(lab.cluster_count);
  for (size_t i : order) {
    if (lab.label[i] == kNoise) {
      out.noise.push_back(accounts[i]);
    } else {
      out.clusters[static_cast<size_t>(lab.label[i])].push_back(accounts[i]);
    }
  }
  return out;
}

double silhouette(std::span<const int> labels, const DistanceMatrix& dist) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  if (k < 2) throw std::domain_error("silhouette undefined");

  std::vector<size_t> sizes(static_cast<size_t>(k), 0);
  for (int l : labels) {
    if (l != kNoise) ++sizes[static_cast<size_t>(l)];
  }
  size_t nonempty = std::count_if(sizes.begin(), sizes.end(), [](size_t s) { return s > 0; });
  if (nonempty < 2) throw std::domain_error("silhouette undefined");

  double total = 0.0;
  size_t counted = 0;
  std::vector<double> sums(static_cast<size_t>(k));
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) continue;
    ++counted;
    const auto own = static_cast<size_t>(labels[i]);
    if (sizes[own] == 1) continue;  // scores 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (size_t j = 0; j < labels.size(); ++j) {
      if (j == i || labels[j] == kNoise) continue;
      sums[static_cast<size_t>(labels[j])] += dist(i, j);
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < sums.size(); ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(counted);
}

double silhouette(const Clustering& c, std::span<const AccountId> accounts,
                  const DistanceMatrix& dist) {
  std::map<std::string_view, int> label_of;
  for (size_t k = 0; k < c.clusters.size(); ++k) {
    for (const auto& a : c.clusters[k]) label_of[a] = static_cast<int>(k);
  }
  std::vector<int> labels(accounts.size(), kNoise);
  for (size_t i = 0; i < accounts.size(); ++i) {
    if (auto it = label_of.find(accounts[i]); it != label_of.end()) labels[i] = it->second;
  }
  return silhouette(labels, dist);
}

ClusterParams tune_params(std::span<const AccountId> accounts, const DistanceMatrix& dist,
                          std::span<const double> eps_grid, std::span<const size_t> min_pts_grid) {
  if (eps_grid.empty() || min_pts_grid.empty()) throw std::invalid_argument("empty parameter grid");
  std::vector<double> eps_sorted(eps_grid.begin(), eps_grid.end());
  std::vector<size_t> pts_sorted(min_pts_grid.begin(), min_pts_grid.end());
  std::sort(eps_sorted.begin(), eps_sorted.end());
  std::sort(pts_sorted.begin(), pts_sorted.end());

  std::vector<size_t> order(accounts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return accounts[a] < accounts[b]; });

  double best_score = -std::numeric_limits<double>::infinity();
  std::optional<ClusterParams> best;
  for (double eps : eps_sorted) {
    for (size_t min_pts : pts_sorted) {
      ClusterParams p{eps, min_pts};
      Labeling lab = dbscan_indices(dist, p, order);
      if (lab.cluster_count < 2) continue;
      const double score = silhouette(lab.label, dist);
      if (!best || score > best_score) {
        best_score = score;
        best = p;
      }
    }
  }
  if (!best) throw std::runtime_error("no admissible parameters");
  return *best;
}

}  // namespace sybil
