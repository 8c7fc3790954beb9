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

#ifndef FRESHKIT_MAX_FLOW_H_
#define FRESHKIT_MAX_FLOW_H_

#include <vector>

namespace freshkit {

// Exact s-t max-flow (Dinic) on a directed graph with non-negative real
// capacities. After Solve(), the source side of the minimum cut is the set
// of nodes reachable from the source in the residual graph.
class MaxFlowGraph {
 public:
  // Nodes 0 .. num_nodes-1 are user nodes; source and sink are extra.
  explicit MaxFlowGraph(int num_nodes);

  int source() const { return num_nodes_; }
  int sink() const { return num_nodes_ + 1; }

  // Adds from->to with `capacity` and to->from with `reverse_capacity`.
  void AddEdge(int from, int to, double capacity, double reverse_capacity = 0.0);

  double Solve();
  bool OnSourceSide(int node) const { return source_side_[node]; }

 private:
  bool BuildLevels();
  void MarkSourceSide();

  int num_nodes_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> to_;
  std::vector<double> residual_;
  std::vector<int> level_;
  std::vector<bool> source_side_;
};

}  // namespace freshkit

#endif  // FRESHKIT_MAX_FLOW_H_
