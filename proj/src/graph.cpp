#include "trex/graph.hpp"

#include <cmath>
#include <json.hpp>

namespace trex {

namespace {

bool is_perfect_square(int n, int& root) {
  if (n < 0) return false;
  root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return root * root == n;
}

Eigen::MatrixXd zeros(int n) { return Eigen::MatrixXd::Zero(n, n); }

void set_edge(Eigen::MatrixXd& w, int j, int k, double val) {
  w(j, k) = val;
  w(k, j) = val;
}

}  // namespace

FamilyKind family_from_string(const std::string& name) {
  if (name == "path") return FamilyKind::path;
  if (name == "cycle") return FamilyKind::cycle;
  if (name == "complete") return FamilyKind::complete;
  if (name == "star") return FamilyKind::star;
  if (name == "hypercube") return FamilyKind::hypercube;
  if (name == "barbell") return FamilyKind::barbell;
  if (name == "lollipop") return FamilyKind::lollipop;
  if (name == "necklace") return FamilyKind::necklace;
  if (name == "rook") return FamilyKind::rook;
  fail(errc::unsupported_kind, "unknown family '" + name + "'");
}

const char* family_name(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::path: return "path";
    case FamilyKind::cycle: return "cycle";
    case FamilyKind::complete: return "complete";
    case FamilyKind::star: return "star";
    case FamilyKind::hypercube: return "hypercube";
    case FamilyKind::barbell: return "barbell";
    case FamilyKind::lollipop: return "lollipop";
    case FamilyKind::necklace: return "necklace";
    case FamilyKind::rook: return "rook";
  }
  return "?";
}

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights, std::vector<std::string> labels)
    : w_(std::move(weights)), labels_(std::move(labels)) {
  if (w_.rows() < 1 || w_.rows() != w_.cols())
    fail(errc::invalid_parameters, "weight matrix must be square with order >= 1");
  const double scale = std::max(1.0, w_.cwiseAbs().maxCoeff());
  if ((w_ - w_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(errc::not_symmetric, "weight matrix is not symmetric");
  w_ = ((w_ + w_.transpose()) / 2.0).eval();
  if (!labels_.empty() && static_cast<int>(labels_.size()) != order())
    fail(errc::invalid_parameters, "label count does not match order");
}

double WeightedGraph::weight(int j, int k) const {
  check_vertex(j);
  check_vertex(k);
  return w_(j - 1, k - 1);
}

void WeightedGraph::check_vertex(int v) const {
  if (v < 1 || v > order())
    fail(errc::invalid_vertex, "vertex " + std::to_string(v) + " not in 1.." + std::to_string(order()));
}

WeightedGraph generate(FamilyKind kind, int size) {
  switch (kind) {
    case FamilyKind::path: {
      if (size < 1) fail(errc::unsupported_size, "path needs size >= 1");
      Eigen::MatrixXd w = zeros(size);
      for (int i = 0; i + 1 < size; ++i) set_edge(w, i, i + 1, 1.0);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::cycle: {
      if (size < 3) fail(errc::unsupported_size, "cycle needs size >= 3");
      Eigen::MatrixXd w = zeros(size);
      for (int i = 0; i < size; ++i) set_edge(w, i, (i + 1) % size, 1.0);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::complete: {
      if (size < 1) fail(errc::unsupported_size, "complete needs size >= 1");
      Eigen::MatrixXd w = Eigen::MatrixXd::Ones(size, size) - Eigen::MatrixXd::Identity(size, size);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::star: {
      if (size < 2) fail(errc::unsupported_size, "star needs size >= 2");
      Eigen::MatrixXd w = zeros(size);
      for (int i = 1; i < size; ++i) set_edge(w, 0, i, 1.0);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::hypercube: {
      if (size < 1 || size > 20) fail(errc::unsupported_size, "hypercube needs 1 <= d <= 20");
      const int n = 1 << size;
      Eigen::MatrixXd w = zeros(n);
      for (int v = 0; v < n; ++v)
        for (int k = 0; k < size; ++k) set_edge(w, v, v ^ (1 << k), 1.0);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::barbell: {
      // two K_size joined by P_size with leaf identification: order 3*size-2.
      if (size < 3) fail(errc::unsupported_size, "barbell needs size >= 3");
      const int n = 3 * size - 2;
      Eigen::MatrixXd w = zeros(n);
      auto add_clique = [&](int first) {
        for (int i = 0; i < size; ++i)
          for (int j = i + 1; j < size; ++j) set_edge(w, first + i, first + j, 1.0);
      };
      add_clique(0);                 // vertices 0 .. size-1; path leaf = size-1
      add_clique(2 * size - 2);      // vertices 2size-2 .. 3size-3; path leaf = 2size-2
      int prev = size - 1;
      for (int i = 0; i < size - 2; ++i) {  // path interior
        set_edge(w, prev, size + i, 1.0);
        prev = size + i;
      }
      set_edge(w, prev, 2 * size - 2, 1.0);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::lollipop: {
      // K_size with a P_size tail sharing clique vertex 1: order 2*size-1.
      if (size < 2) fail(errc::unsupported_size, "lollipop needs size >= 2");
      const int n = 2 * size - 1;
      Eigen::MatrixXd w = zeros(n);
      for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j) set_edge(w, i, j, 1.0);
      int prev = 0;
      for (int i = 0; i < size - 1; ++i) {
        set_edge(w, prev, size + i, 1.0);
        prev = size + i;
      }
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::necklace: {
      // chain of size/3 triangles joined at single vertices: order 2*(size/3)+1.
      if (size < 3 || size % 3 != 0) fail(errc::unsupported_size, "necklace needs size divisible by 3");
      const int k = size / 3;
      const int n = 2 * k + 1;
      Eigen::MatrixXd w = zeros(n);
      for (int t = 0; t < k; ++t) {
        const int u = 2 * t, mid = 2 * t + 1, v = 2 * t + 2;
        set_edge(w, u, mid, 1.0);
        set_edge(w, mid, v, 1.0);
        set_edge(w, u, v, 1.0);
      }
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::rook: {
      int m = 0;
      if (!is_perfect_square(size, m) || m < 2)
        fail(errc::unsupported_size, "rook needs size = m^2 with m >= 2");
      Eigen::MatrixXd w = zeros(size);
      auto id = [m](int i, int j) { return i * m + j; };
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          for (int j2 = j + 1; j2 < m; ++j2) set_edge(w, id(i, j), id(i, j2), 1.0);
          for (int i2 = i + 1; i2 < m; ++i2) set_edge(w, id(i, j), id(i2, j), 1.0);
        }
      return WeightedGraph(std::move(w));
    }
  }
  fail(errc::unsupported_kind, "unhandled family");
}

WeightedGraph attach_pendant(const WeightedGraph& g, int v, double w) {
  g.check_vertex(v);
  if (!(w > 0.0)) fail(errc::invalid_weight, "pendant weight must be positive");
  const int n = g.order();
  Eigen::MatrixXd m = zeros(n + 1);
  m.topLeftCorner(n, n) = g.matrix();
  m(n, v - 1) = w;
  m(v - 1, n) = w;
  return WeightedGraph(std::move(m));
}

WeightedGraph add_loop(const WeightedGraph& g, int v, double B) {
  g.check_vertex(v);
  Eigen::MatrixXd m = g.matrix();
  m(v - 1, v - 1) += B;
  return WeightedGraph(std::move(m));
}

WeightedGraph quotient(FamilyKind kind, int size) {
  switch (kind) {
    case FamilyKind::complete: {
      if (size < 3) fail(errc::unsupported_size, "complete quotient needs size >= 3");
      const double s = std::sqrt(static_cast<double>(size - 2));
      Eigen::MatrixXd w = zeros(3);
      set_edge(w, 0, 1, s);
      set_edge(w, 1, 2, s);
      w(1, 1) = size - 3.0;
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::cycle: {
      if (size < 4 || size % 2 != 0) fail(errc::unsupported_size, "cycle quotient needs even size >= 4");
      const int m = size / 2;
      Eigen::MatrixXd w = zeros(m + 1);
      for (int i = 0; i + 1 <= m; ++i) set_edge(w, i, i + 1, 1.0);
      const double r2 = std::sqrt(2.0);
      set_edge(w, 0, 1, r2);
      set_edge(w, m - 1, m, r2);
      return WeightedGraph(std::move(w));
    }
    case FamilyKind::barbell: {
      if (size < 3) fail(errc::unsupported_size, "barbell quotient needs size >= 3");
      const int n = size + 4;
      const double s = std::sqrt(static_cast<double>(size - 2));
      Eigen::MatrixXd w = zeros(n);
      set_edge(w, 0, 1, s);
      w(1, 1) = size - 3.0;
      set_edge(w, 1, 2, s);
      for (int i = 2; i + 1 <= size + 1; ++i) set_edge(w, i, i + 1, 1.0);
      set_edge(w, n - 3, n - 2, s);
      w(n - 2, n - 2) = size - 3.0;
      set_edge(w, n - 2, n - 1, s);
      return WeightedGraph(std::move(w));
    }
    default:
      fail(errc::unsupported_kind, std::string("no quotient for family ") + family_name(kind));
  }
}

std::pair<int, int> family_endpoints(FamilyKind kind, int size) {
  switch (kind) {
    case FamilyKind::path: return {1, size};
    case FamilyKind::cycle: return {1, size / 2 + 1};
    case FamilyKind::complete: return {1, size};
    case FamilyKind::star: return {2, size};
    case FamilyKind::hypercube: return {1, 1 << size};
    case FamilyKind::barbell: return {1, 3 * size - 2};
    case FamilyKind::lollipop: return {2 * size - 1, 2};
    case FamilyKind::necklace: return {1, 2 * (size / 3) + 1};
    case FamilyKind::rook: return {1, size};
  }
  fail(errc::unsupported_kind, "unhandled family");
}

std::string graph_to_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["order"] = g.order();
  nlohmann::json edges = nlohmann::json::array();
  const auto& w = g.matrix();
  for (int a = 0; a < g.order(); ++a)
    for (int b = a + 1; b < g.order(); ++b)
      if (w(a, b) != 0.0) edges.push_back({a + 1, b + 1, w(a, b)});
  j["edges"] = std::move(edges);
  std::vector<double> loops(g.order());
  for (int a = 0; a < g.order(); ++a) loops[a] = w(a, a);
  j["loops"] = loops;
  if (!g.labels().empty()) j["labels"] = g.labels();
  return j.dump();
}

WeightedGraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int n = j.at("order").get<int>();
  if (n < 1) fail(errc::invalid_parameters, "order must be >= 1");
  Eigen::MatrixXd w = zeros(n);
  for (const auto& e : j.at("edges")) {
    const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a < 1 || a > n || b < 1 || b > n) fail(errc::invalid_vertex, "edge endpoint out of range");
    set_edge(w, a - 1, b - 1, e.at(2).get<double>());
  }
  if (j.contains("loops")) {
    const auto loops = j.at("loops").get<std::vector<double>>();
    if (static_cast<int>(loops.size()) != n) fail(errc::invalid_parameters, "loops length mismatch");
    for (int a = 0; a < n; ++a) w(a, a) = loops[a];
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return WeightedGraph(std::move(w), std::move(labels));
}

}  // namespace trex
