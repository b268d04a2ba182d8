#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trex/errors.hpp"

namespace trex {

enum class FamilyKind {
  path,
  cycle,
  complete,
  star,
  hypercube,
  barbell,
  lollipop,
  necklace,
  rook,
};

FamilyKind family_from_string(const std::string& name);
const char* family_name(FamilyKind kind) noexcept;

/// Undirected weighted graph stored as a dense symmetric matrix.
/// Diagonal entries are self-loop weights.  All vertex indices in the
/// public interface are 1-based.
class WeightedGraph {
 public:
  explicit WeightedGraph(Eigen::MatrixXd weights,
                         std::vector<std::string> labels = {});

  int order() const noexcept { return static_cast<int>(w_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return w_; }
  Eigen::VectorXd loops() const { return w_.diagonal(); }
  double weight(int j, int k) const;  // 1-based
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  void check_vertex(int v) const;  // 1-based

 private:
  Eigen::MatrixXd w_;
  std::vector<std::string> labels_;
};

/// Unit-weight adjacency structure of the named family.
/// Size parameter: vertex count, except hypercube (size = d, order 2^d)
/// and rook (size = m^2, order m^2).
WeightedGraph generate(FamilyKind kind, int size);

/// New degree-1 vertex appended after the existing ones, joined to v.
WeightedGraph attach_pendant(const WeightedGraph& g, int v, double w);

/// Diagonal entry at v incremented by B.
WeightedGraph add_loop(const WeightedGraph& g, int v, double B);

/// Equitable-partition quotient as a weighted (Jacobi) path.
/// Supported: complete (3x3), even cycle, barbell (order size+4).
WeightedGraph quotient(FamilyKind kind, int size);

/// Endpoints used by the stock experiments (e.g. path ends, hypercube
/// antipodes, barbell clique vertices off the path).  1-based.
std::pair<int, int> family_endpoints(FamilyKind kind, int size);

std::string graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const std::string& text);

}  // namespace trex
