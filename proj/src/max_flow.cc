/*
 * Copyright 2026 The freshkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "freshkit/max_flow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "freshkit/error.h"

namespace freshkit {

MaxFlowGraph::MaxFlowGraph(int num_nodes)
    : num_nodes_(num_nodes), adjacency_(num_nodes + 2) {
  if (num_nodes < 0) throw Error(ErrorCode::kInvalidArgument, "negative node count");
}

void MaxFlowGraph::AddEdge(int from, int to, double capacity,
                           double reverse_capacity) {
  const int total = num_nodes_ + 2;
  if (from < 0 || from >= total || to < 0 || to >= total) {
    throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
  }
  if (!(capacity >= 0.0) || !(reverse_capacity >= 0.0) || !std::isfinite(capacity) ||
      !std::isfinite(reverse_capacity)) {
    throw Error(ErrorCode::kInvalidArgument, "capacities must be finite and >= 0");
  }
  adjacency_[from].push_back(static_cast<int>(to_.size()));
  to_.push_back(to);
  residual_.push_back(capacity);
  adjacency_[to].push_back(static_cast<int>(to_.size()));
  to_.push_back(from);
  residual_.push_back(reverse_capacity);
}

bool MaxFlowGraph::BuildLevels() {
  level_.assign(adjacency_.size(), -1);
  std::queue<int> queue;
  level_[source()] = 0;
  queue.push(source());
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int e : adjacency_[v]) {
      if (residual_[e] > 0.0 && level_[to_[e]] < 0) {
        level_[to_[e]] = level_[v] + 1;
        queue.push(to_[e]);
      }
    }
  }
  return level_[sink()] >= 0;
}

double MaxFlowGraph::Solve() {
  double flow = 0.0;
  std::vector<size_t> next(adjacency_.size());
  std::vector<int> path;
  while (BuildLevels()) {
    std::fill(next.begin(), next.end(), 0);
    while (true) {
      // Walk an admissible path from the source, retreating from dead ends.
      path.clear();
      int v = source();
      while (v != sink()) {
        auto& cursor = next[v];
        while (cursor < adjacency_[v].size()) {
          const int e = adjacency_[v][cursor];
          if (residual_[e] > 0.0 && level_[to_[e]] == level_[v] + 1) break;
          ++cursor;
        }
        if (cursor < adjacency_[v].size()) {
          const int e = adjacency_[v][cursor];
          path.push_back(e);
          v = to_[e];
          continue;
        }
        level_[v] = -1;  // dead end for this phase
        if (path.empty()) break;
        const int back = path.back();
        path.pop_back();
        v = to_[back ^ 1];
        ++next[v];
      }
      if (v != sink()) break;

      double bottleneck = std::numeric_limits<double>::infinity();
      for (int e : path) bottleneck = std::min(bottleneck, residual_[e]);
      for (int e : path) {
        // Saturated edges end at exactly zero.
        residual_[e] = residual_[e] == bottleneck ? 0.0 : residual_[e] - bottleneck;
        residual_[e ^ 1] += bottleneck;
      }
      flow += bottleneck;
    }
  }
  MarkSourceSide();
  return flow;
}

void MaxFlowGraph::MarkSourceSide() {
  source_side_.assign(adjacency_.size(), false);
  std::queue<int> queue;
  source_side_[source()] = true;
  queue.push(source());
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int e : adjacency_[v]) {
      if (residual_[e] > 0.0 && !source_side_[to_[e]]) {
        source_side_[to_[e]] = true;
        queue.push(to_[e]);
      }
    }
  }
}

}  // namespace freshkit
