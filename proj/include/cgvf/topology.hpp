#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cgvf/errors.hpp"

namespace cgvf {

/// One undirected communication link. The (head, tail) order fixes the
/// orientation used by the incidence matrix; the Laplacian does not
/// depend on it.
struct Edge {
  int head = 0;
  int tail = 0;
};

/// Undirected communication graph over robots 1..N.
///
/// Immutable after construction; safe to share across threads.
class CommGraph {
 public:
  /// Builds a graph from an explicit edge list. Vertices are 1-based.
  /// Rejects self-loops, duplicate undirected edges, and endpoints
  /// outside [1, N].
  CommGraph(int vertex_count, std::vector<Edge> edges);

  /// Cycle graph C_n with edges (1,2), (2,3), ..., (n-1,n), (n,1).
  /// For n == 2 the closing edge would duplicate (1,2), so the result
  /// is a single edge.
  static CommGraph cycle(int n);

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Neighbors of vertex i (1-based), ascending.
  const std::vector<int>& neighbors(int i) const;

  /// N x |E| incidence matrix: column k holds +1 at the head of edge k
  /// and -1 at its tail.
  Eigen::MatrixXd incidence() const;

  /// L = D D^T; equals degree matrix minus adjacency.
  Eigen::MatrixXd laplacian() const;

  /// Breadth-first reachability from vertex 1. A single vertex counts
  /// as connected.
  bool is_connected() const;

  /// Edge index and orientation sign for the ordered pair (i, j):
  /// sign = +1 if i is the head of the connecting edge, -1 if the tail.
  /// Returns {-1, 0} if (i, j) is not an edge.
  std::pair<int, double> edge_between(int i, int j) const;

  /// Incident edge of vertex i toward neighbor j, aligned with
  /// neighbors(i): sign = +1 when i is the head of the edge.
  struct IncidentEdge {
    int neighbor = 0;
    int edge = 0;
    double sign = 0.0;
  };
  const std::vector<IncidentEdge>& incident(int i) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<IncidentEdge>> incident_;
};

}  // namespace cgvf
