#include "cgvf/topology.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

namespace cgvf {

CommGraph::CommGraph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  if (n_ < 1) {
    throw InvalidArgument("graph needs at least one vertex, got " +
                          std::to_string(n_));
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.head < 1 || e.head > n_ || e.tail < 1 || e.tail > n_) {
      throw InvalidArgument("edge (" + std::to_string(e.head) + "," +
                            std::to_string(e.tail) + ") outside [1," +
                            std::to_string(n_) + "]");
    }
    if (e.head == e.tail) {
      throw InvalidArgument("self-loop at vertex " + std::to_string(e.head));
    }
    auto key = std::minmax(e.head, e.tail);
    if (!seen.insert(key).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(e.head) + "," +
                            std::to_string(e.tail) + ")");
    }
  }
  adjacency_.assign(static_cast<size_t>(n_) + 1, {});
  for (const Edge& e : edges_) {
    adjacency_[e.head].push_back(e.tail);
    adjacency_[e.tail].push_back(e.head);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  incident_.assign(static_cast<size_t>(n_) + 1, {});
  for (int k = 0; k < edge_count(); ++k) {
    incident_[edges_[static_cast<size_t>(k)].head].push_back(
        {edges_[static_cast<size_t>(k)].tail, k, 1.0});
    incident_[edges_[static_cast<size_t>(k)].tail].push_back(
        {edges_[static_cast<size_t>(k)].head, k, -1.0});
  }
  for (auto& inc : incident_) {
    std::sort(inc.begin(), inc.end(),
              [](const IncidentEdge& a, const IncidentEdge& b) {
                return a.neighbor < b.neighbor;
              });
  }
}

CommGraph CommGraph::cycle(int n) {
  if (n < 2) {
    throw InvalidArgument("cycle graph needs n >= 2, got " + std::to_string(n));
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n));
  for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
  if (n > 2) edges.push_back({n, 1});
  return CommGraph(n, std::move(edges));
}

const std::vector<int>& CommGraph::neighbors(int i) const {
  if (i < 1 || i > n_) {
    throw InvalidArgument("vertex " + std::to_string(i) + " outside [1," +
                          std::to_string(n_) + "]");
  }
  return adjacency_[i];
}

Eigen::MatrixXd CommGraph::incidence() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, edge_count());
  for (int k = 0; k < edge_count(); ++k) {
    d(edges_[k].head - 1, k) = 1.0;
    d(edges_[k].tail - 1, k) = -1.0;
  }
  return d;
}

Eigen::MatrixXd CommGraph::laplacian() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    l(e.head - 1, e.head - 1) += 1.0;
    l(e.tail - 1, e.tail - 1) += 1.0;
    l(e.head - 1, e.tail - 1) -= 1.0;
    l(e.tail - 1, e.head - 1) -= 1.0;
  }
  return l;
}

bool CommGraph::is_connected() const {
  std::vector<char> visited(static_cast<size_t>(n_) + 1, 0);
  std::queue<int> frontier;
  frontier.push(1);
  visited[1] = 1;
  int count = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int u : adjacency_[v]) {
      if (!visited[u]) {
        visited[u] = 1;
        ++count;
        frontier.push(u);
      }
    }
  }
  return count == n_;
}

std::pair<int, double> CommGraph::edge_between(int i, int j) const {
  if (i < 1 || i > n_) return {-1, 0.0};
  for (const IncidentEdge& inc : incident_[static_cast<size_t>(i)]) {
    if (inc.neighbor == j) return {inc.edge, inc.sign};
  }
  return {-1, 0.0};
}

const std::vector<CommGraph::IncidentEdge>& CommGraph::incident(int i) const {
  if (i < 1 || i > n_) {
    throw InvalidArgument("vertex " + std::to_string(i) + " outside [1," +
                          std::to_string(n_) + "]");
  }
  return incident_[static_cast<size_t>(i)];
}

}  // namespace cgvf
