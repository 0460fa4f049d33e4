#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <vector>

#include "cgvf/topology.hpp"

namespace cgvf {

/// Desired parametric differences and consensus gains. Deltas are stored
/// per edge in the edge's (head, tail) orientation; the antisymmetric
/// counterpart Delta[j,i] = -Delta[i,j] is implicit.
struct CoordinationSpec {
  std::vector<Eigen::VectorXd> deltas;  // one |E|-vector per parameter
  double kc1 = 0.0;
  double kc2 = 0.0;
  std::optional<std::pair<double, double>> desired_speeds;  // surfaces

  int param_count() const { return static_cast<int>(deltas.size()); }
};

/// Delta* = D^T w*: per-edge difference of the reference configuration.
/// Cycle sums vanish by construction.
Eigen::VectorXd deltas_from_reference(const CommGraph& graph,
                                      const Eigen::VectorXd& w_star);

/// Verifies that per-edge deltas are realizable: around every independent
/// cycle of the graph the signed delta sum must vanish (within tol).
/// Throws InvalidArgument naming an offending cycle otherwise.
void validate_delta_feasibility(const CommGraph& graph,
                                const Eigen::VectorXd& deltas, double tol = 1e-9);

/// Per-edge coordination errors w_head - w_tail - Delta; the D^T w-tilde
/// block of the composite error.
Eigen::VectorXd coordination_error(const CommGraph& graph, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& deltas);

/// Latest values received from the neighbors of every robot, with receipt
/// timestamps. Entry order matches CommGraph::neighbors(i).
class MailboxSet {
 public:
  struct Entry {
    Eigen::VectorXd w;      // neighbor virtual coordinates (k values)
    Eigen::VectorXd w_dot;  // neighbor parametric rates (k values)
    double stamp = 0.0;
    bool valid = false;
  };

  MailboxSet() = default;
  MailboxSet(const CommGraph& graph, int param_count);

  /// Delivers robot j's (w, w_dot) to every neighbor, each delivery
  /// independently dropped with probability p_loss.
  void deliver_all(double t, const CommGraph& graph, const Eigen::MatrixXd& w_all,
                   const Eigen::MatrixXd& w_dot_all, double p_loss, std::mt19937_64& rng);

  const Entry& entry(int robot, int neighbor_index) const {
    return boxes_[static_cast<size_t>(robot - 1)][static_cast<size_t>(neighbor_index)];
  }
  int param_count() const { return k_; }

 private:
  int k_ = 0;
  std::vector<std::vector<Entry>> boxes_;  // [robot-1][neighbor index]
};

/// Consensus coordination function for one robot and one parameter:
///   c_i = -sum_{j in N_i} (w_i - w_j - Delta[i,j])
/// using the mailbox's held neighbor values. Throws if a neighbor value
/// has never been received.
double consensus(const CommGraph& graph, int robot, int param, double own_w,
                 const MailboxSet& mail, const Eigen::VectorXd& deltas);

}  // namespace cgvf
