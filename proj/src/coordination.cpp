#include "cgvf/coordination.hpp"

#include <cmath>
#include <string>

namespace cgvf {

Eigen::VectorXd deltas_from_reference(const CommGraph& graph,
                                      const Eigen::VectorXd& w_star) {
  if (w_star.size() != graph.vertex_count()) {
    throw InvalidArgument("reference configuration has " +
                          std::to_string(w_star.size()) + " entries, expected " +
                          std::to_string(graph.vertex_count()));
  }
  Eigen::VectorXd d(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edges()[static_cast<size_t>(e)];
    d[e] = w_star[edge.head - 1] - w_star[edge.tail - 1];
  }
  return d;
}

void validate_delta_feasibility(const CommGraph& graph, const Eigen::VectorXd& deltas,
                                double tol) {
  if (deltas.size() != graph.edge_count()) {
    throw InvalidArgument("delta vector size mismatch");
  }
  // Assign potentials by BFS over a spanning tree; any non-tree edge whose
  // delta disagrees with the potential difference closes an infeasible cycle.
  const int n = graph.vertex_count();
  std::vector<double> potential(static_cast<size_t>(n) + 1, 0.0);
  std::vector<char> visited(static_cast<size_t>(n) + 1, 0);
  for (int root = 1; root <= n; ++root) {
    if (visited[root]) continue;
    visited[root] = 1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : graph.neighbors(v)) {
        if (visited[u]) continue;
        auto [e, sign] = graph.edge_between(v, u);
        // potentials satisfy pot[head] - pot[tail] = delta_e
        potential[u] = potential[v] - sign * deltas[e];
        visited[u] = 1;
        stack.push_back(u);
      }
    }
  }
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edges()[static_cast<size_t>(e)];
    const double implied = potential[edge.head] - potential[edge.tail];
    if (std::abs(implied - deltas[e]) > tol) {
      throw InvalidArgument(
          "infeasible parametric differences: cycle through edge (" +
          std::to_string(edge.head) + "," + std::to_string(edge.tail) +
          ") has signed delta sum " + std::to_string(deltas[e] - implied));
    }
  }
}

Eigen::VectorXd coordination_error(const CommGraph& graph, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& deltas) {
  if (w.size() != graph.vertex_count() || deltas.size() != graph.edge_count()) {
    throw InvalidArgument("coordination_error size mismatch");
  }
  Eigen::VectorXd err(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.edges()[static_cast<size_t>(e)];
    err[e] = w[edge.head - 1] - w[edge.tail - 1] - deltas[e];
  }
  return err;
}

MailboxSet::MailboxSet(const CommGraph& graph, int param_count) : k_(param_count) {
  boxes_.resize(static_cast<size_t>(graph.vertex_count()));
  for (int i = 1; i <= graph.vertex_count(); ++i) {
    boxes_[static_cast<size_t>(i - 1)].resize(graph.neighbors(i).size());
  }
}

void MailboxSet::deliver_all(double t, const CommGraph& graph,
                             const Eigen::MatrixXd& w_all,
                             const Eigen::MatrixXd& w_dot_all, double p_loss,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 1; i <= graph.vertex_count(); ++i) {
    const auto& nbrs = graph.neighbors(i);
    for (size_t idx = 0; idx < nbrs.size(); ++idx) {
      const int j = nbrs[idx];
      if (p_loss > 0.0 && uni(rng) < p_loss) continue;
      Entry& e = boxes_[static_cast<size_t>(i - 1)][idx];
      e.w = w_all.col(j - 1);
      e.w_dot = w_dot_all.col(j - 1);
      e.stamp = t;
      e.valid = true;
    }
  }
}

double consensus(const CommGraph& graph, int robot, int param, double own_w,
                 const MailboxSet& mail, const Eigen::VectorXd& deltas) {
  const auto& inc = graph.incident(robot);
  double c = 0.0;
  for (size_t idx = 0; idx < inc.size(); ++idx) {
    const MailboxSet::Entry& e = mail.entry(robot, static_cast<int>(idx));
    if (!e.valid) {
      throw Error("robot " + std::to_string(robot) + " has no value from neighbor " +
                  std::to_string(inc[idx].neighbor) + " before first exchange");
    }
    const double delta_ij = inc[idx].sign * deltas[inc[idx].edge];
    c -= own_w - e.w[param] - delta_ij;
  }
  return c;
}

}  // namespace cgvf
