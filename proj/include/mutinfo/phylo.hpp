#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "mutinfo/seqinfo.hpp"

namespace mutinfo {

enum class TreeMethod { upgma, nj };

inline TreeMethod parse_tree_method(std::string_view text) {
  if (text == "upgma") return TreeMethod::upgma;
  if (text == "nj") return TreeMethod::nj;
  throw Error(ErrorCode::parse_error, "tree method must be \"upgma\" or \"nj\", got \"" + std::string(text) + "\"");
}

/// Tree stored as a node array. Leaves come first, in input-label order; the
/// root is the last node. UPGMA trees are rooted and binary; NJ trees are
/// unrooted, drawn from a trifurcating root.
struct PhyloTree {
  struct Node {
    std::string label;  // empty for internal nodes
    int parent = -1;
    double branch = 0.0;  // length of the edge to the parent
    std::vector<int> children;
    double height = 0.0;  // UPGMA only
  };
  std::vector<Node> nodes;
  bool rooted = true;

  int root() const { return static_cast<int>(nodes.size()) - 1; }
  std::size_t leaf_count() const {
    return std::size_t(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.children.empty(); }));
  }

  /// Sorted leaf labels below `node`.
  std::vector<std::string> clade(int node) const {
    std::vector<std::string> out;
    std::vector<int> stack{node};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (nodes[v].children.empty()) out.push_back(nodes[v].label);
      for (int c : nodes[v].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Sum of branch lengths on the path between two leaves.
  double path_length(int a, int b) const {
    std::vector<double> up(nodes.size(), -1.0);
    double acc = 0.0;
    for (int v = a; v != -1; v = nodes[v].parent) {
      up[v] = acc;
      acc += nodes[v].branch;
    }
    acc = 0.0;
    for (int v = b; v != -1; v = nodes[v].parent) {
      if (up[v] >= 0.0) return acc + up[v];
      acc += nodes[v].branch;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  std::string newick(int precision = 6) const {
    std::string out;
    write(root(), precision, out);
    out += ';';
    return out;
  }

 private:
  static std::string format_length(double x, int precision) {
    if (std::abs(x) < 0.5 * std::pow(10.0, -precision)) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, x);
    return buf;
  }

  void write(int v, int precision, std::string& out) const {
    const Node& n = nodes[v];
    if (!n.children.empty()) {
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ',';
        write(n.children[i], precision, out);
      }
      out += ')';
    } else {
      out += n.label;
    }
    if (n.parent != -1) out += ':' + format_length(n.branch, precision);
  }
};

namespace detail {

inline void check_tree_input(const GeneticMatrix& m) {
  if (m.size() < 2) throw Error(ErrorCode::invalid_argument, "a tree needs at least two leaves");
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (!m.at(i, j))
        throw Error(ErrorCode::missing_distance,
                    "no distance between '" + m.labels[i] + "' and '" + m.labels[j] + "' (degenerate entropy)");
}

// Ties go to the pair whose smallest leaf labels sort first.
inline std::pair<std::string, std::string> label_key(const PhyloTree& t, int a, int b) {
  std::string x = t.clade(a).front(), y = t.clade(b).front();
  if (y < x) std::swap(x, y);
  return {std::move(x), std::move(y)};
}

}  // namespace detail

inline PhyloTree build_upgma(const GeneticMatrix& m) {
  detail::check_tree_input(m);
  const std::size_t n = m.size();
  PhyloTree tree;
  tree.rooted = true;
  for (std::size_t i = 0; i < n; ++i) tree.nodes.push_back({m.labels[i], -1, 0.0, {}, 0.0});

  std::vector<int> active(n);
  std::vector<std::size_t> sizes(n, 1);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = int(i);
    for (std::size_t j = 0; j < n; ++j) d[i][j] = *m.at(i, j);
  }

  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::string, std::string> best_key;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double v = d[i][j];
        auto key = detail::label_key(tree, active[i], active[j]);
        if (v < best - 1e-12 || (std::abs(v - best) <= 1e-12 && key < best_key)) {
          best = v;
          bi = i;
          bj = j;
          best_key = key;
        }
      }
    const double h = best / 2.0;
    const int a = active[bi], b = active[bj];
    const int u = int(tree.nodes.size());
    tree.nodes.push_back({"", -1, 0.0, {a, b}, h});
    for (int c : {a, b}) {
      tree.nodes[c].parent = u;
      tree.nodes[c].branch = h - tree.nodes[c].height;
    }
    // size-weighted average distance to the merged cluster
    std::vector<double> merged(active.size());
    for (std::size_t k = 0; k < active.size(); ++k)
      merged[k] = (double(sizes[bi]) * d[bi][k] + double(sizes[bj]) * d[bj][k]) / double(sizes[bi] + sizes[bj]);
    for (std::size_t k = 0; k < active.size(); ++k) {
      d[bi][k] = merged[k];
      d[k][bi] = merged[k];
    }
    d[bi][bi] = 0.0;
    sizes[bi] += sizes[bj];
    active[bi] = u;
    active.erase(active.begin() + std::ptrdiff_t(bj));
    sizes.erase(sizes.begin() + std::ptrdiff_t(bj));
    d.erase(d.begin() + std::ptrdiff_t(bj));
    for (auto& row : d) row.erase(row.begin() + std::ptrdiff_t(bj));
  }
  return tree;
}

/// Saitou-Nei neighbor joining. Two leaves give a single edge, drawn as a
/// root with two children splitting the distance.
inline PhyloTree build_nj(const GeneticMatrix& m) {
  detail::check_tree_input(m);
  const std::size_t n = m.size();
  PhyloTree tree;
  tree.rooted = false;
  for (std::size_t i = 0; i < n; ++i) tree.nodes.push_back({m.labels[i], -1, 0.0, {}, 0.0});

  std::vector<int> active(n);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = int(i);
    for (std::size_t j = 0; j < n; ++j) d[i][j] = *m.at(i, j);
  }

  auto attach = [&](int parent, int child, double length) {
    tree.nodes[child].parent = parent;
    tree.nodes[child].branch = std::max(0.0, length);
    tree.nodes[parent].children.push_back(child);
  };

  while (active.size() > 3) {
    const std::size_t r = active.size();
    std::vector<double> total(r, 0.0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) total[i] += d[i][k];
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::string, std::string> best_key;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) {
        const double q = double(r - 2) * d[i][j] - total[i] - total[j];
        auto key = detail::label_key(tree, active[i], active[j]);
        if (q < best - 1e-12 || (std::abs(q - best) <= 1e-12 && key < best_key)) {
          best = q;
          bi = i;
          bj = j;
          best_key = key;
        }
      }
    const double li = 0.5 * d[bi][bj] + (total[bi] - total[bj]) / (2.0 * double(r - 2));
    const double lj = d[bi][bj] - li;
    const int u = int(tree.nodes.size());
    tree.nodes.push_back({"", -1, 0.0, {}, 0.0});
    attach(u, active[bi], li);
    attach(u, active[bj], lj);

    std::vector<double> merged(r);
    for (std::size_t k = 0; k < r; ++k) merged[k] = 0.5 * (d[bi][k] + d[bj][k] - d[bi][bj]);
    for (std::size_t k = 0; k < r; ++k) {
      d[bi][k] = merged[k];
      d[k][bi] = merged[k];
    }
    d[bi][bi] = 0.0;
    active[bi] = u;
    active.erase(active.begin() + std::ptrdiff_t(bj));
    d.erase(d.begin() + std::ptrdiff_t(bj));
    for (auto& row : d) row.erase(row.begin() + std::ptrdiff_t(bj));
  }

  const int root = int(tree.nodes.size());
  tree.nodes.push_back({"", -1, 0.0, {}, 0.0});
  if (active.size() == 2) {
    attach(root, active[0], d[0][1] / 2.0);
    attach(root, active[1], d[0][1] / 2.0);
  } else {
    attach(root, active[0], 0.5 * (d[0][1] + d[0][2] - d[1][2]));
    attach(root, active[1], 0.5 * (d[0][1] + d[1][2] - d[0][2]));
    attach(root, active[2], 0.5 * (d[0][2] + d[1][2] - d[0][1]));
  }
  return tree;
}

inline PhyloTree build_tree(const GeneticMatrix& m, TreeMethod method = TreeMethod::upgma) {
  return method == TreeMethod::upgma ? build_upgma(m) : build_nj(m);
}

}  // namespace mutinfo
