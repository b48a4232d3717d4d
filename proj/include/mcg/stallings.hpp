#pragma once

// Stallings subgroup graphs: folded, core, based graphs labelled by the
// generators of a free group. The base loops spell exactly the elements of
// the subgroup.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mcg/coset_table.hpp"
#include "mcg/error.hpp"
#include "mcg/words.hpp"

namespace mcg {

struct GraphInvariants {
  std::optional<long long> index;  // nullopt: infinite index
  long long rank = 0;
  int generator_count = 0;

  friend bool operator==(const GraphInvariants&, const GraphInvariants&) = default;
};

class SubgroupGraph {
 public:
  static constexpr int kNone = -1;

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int vertex_count() const noexcept { return static_cast<int>(adj_.size()); }
  static constexpr int base() noexcept { return 0; }

  int target(int v, Letter x) const {
    return adj_[static_cast<std::size_t>(v)][CosetTable::column(x)];
  }

  // Geometric (unoriented) edges.
  long long edge_count() const {
    long long e = 0;
    for (const auto& row : adj_) {
      for (std::size_t col = 0; col < row.size(); col += 2) e += row[col] != kNone;
    }
    return e;
  }

  bool is_full_cover() const {
    for (const auto& row : adj_) {
      for (int t : row) {
        if (t == kNone) return false;
      }
    }
    return true;
  }

  // Number of generators the graph was built from (metadata, not structure).
  int generator_count() const noexcept { return generator_count_; }

  // Free basis read off the breadth-first spanning tree: one word per
  // non-tree edge u -g-> v, namely path(u) g path(v)^-1, ordered by (u, g).
  const std::vector<Word>& basis() const noexcept { return basis_; }

  // Path in the spanning tree from the base vertex to v.
  const Word& tree_path(int v) const { return tree_paths_[static_cast<std::size_t>(v)]; }

  // Basis symbol carried by the oriented edge (v, x): 0 for tree edges,
  // otherwise +i / -i for the i-th basis element traversed forwards/backwards.
  int edge_symbol(int v, Letter x) const {
    if (x > 0) return symbols_[static_cast<std::size_t>(v)][static_cast<std::size_t>(x - 1)];
    const int u = target(v, x);
    return -symbols_[static_cast<std::size_t>(u)][static_cast<std::size_t>(-x - 1)];
  }

  // Structural equality of canonical forms, which coincides with equality of
  // the subgroups.
  friend bool operator==(const SubgroupGraph& a, const SubgroupGraph& b) {
    return a.alphabet_ == b.alphabet_ && a.adj_ == b.adj_;
  }

  // Takes any deterministic based graph, trims it to its core and numbers the
  // vertices canonically.
  static SubgroupGraph from_folded(Alphabet alphabet, std::vector<std::vector<int>> adj,
                                   int base, int generator_count) {
    SubgroupGraph g(alphabet);
    g.generator_count_ = generator_count;
    g.adj_ = canonical(prune(std::move(adj), base), base);
    g.compute_basis();
    return g;
  }

 private:
  explicit SubgroupGraph(Alphabet alphabet) : alphabet_(alphabet) {}

  static std::vector<std::vector<int>> prune(std::vector<std::vector<int>> adj, int base) {
    const std::size_t n = adj.size();
    std::vector<int> degree(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      for (int t : adj[v]) degree[v] += t != kNone;
    }
    std::vector<int> stack;
    for (std::size_t v = 0; v < n; ++v) {
      if (static_cast<int>(v) != base && degree[v] == 1) stack.push_back(static_cast<int>(v));
    }
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (degree[static_cast<std::size_t>(v)] != 1) continue;
      for (std::size_t col = 0; col < adj[static_cast<std::size_t>(v)].size(); ++col) {
        const int u = adj[static_cast<std::size_t>(v)][col];
        if (u == kNone) continue;
        adj[static_cast<std::size_t>(v)][col] = kNone;
        adj[static_cast<std::size_t>(u)][col ^ 1U] = kNone;
        degree[static_cast<std::size_t>(v)] = 0;
        if (--degree[static_cast<std::size_t>(u)] == 1 && u != base) stack.push_back(u);
      }
    }
    return adj;
  }

  // Breadth-first renumbering from the base, columns in order a, A, b, B, ...
  // Vertices not reachable from the base are dropped.
  static std::vector<std::vector<int>> canonical(const std::vector<std::vector<int>>& adj,
                                                 int base) {
    std::vector<int> renumber(adj.size(), kNone);
    std::vector<int> order{base};
    renumber[static_cast<std::size_t>(base)] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (int t : adj[static_cast<std::size_t>(order[i])]) {
        if (t != kNone && renumber[static_cast<std::size_t>(t)] == kNone) {
          renumber[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
          order.push_back(t);
        }
      }
    }
    std::vector<std::vector<int>> out;
    out.reserve(order.size());
    for (int old : order) {
      std::vector<int> row = adj[static_cast<std::size_t>(old)];
      for (int& t : row) {
        if (t != kNone) t = renumber[static_cast<std::size_t>(t)];
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  void compute_basis() {
    const std::size_t n = adj_.size();
    const int rank = alphabet_.rank();
    std::vector<int> parent(n, kNone);
    std::vector<Letter> parent_letter(n, 0);
    tree_paths_.assign(n, Word(alphabet_));
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::vector<int> order{0};
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int u = order[i];
      for (std::size_t col = 0; col < adj_[static_cast<std::size_t>(u)].size(); ++col) {
        const int v = adj_[static_cast<std::size_t>(u)][col];
        if (v == kNone || seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        parent[static_cast<std::size_t>(v)] = u;
        parent_letter[static_cast<std::size_t>(v)] = CosetTable::letter_of_column(col);
        tree_paths_[static_cast<std::size_t>(v)] =
            multiply(tree_paths_[static_cast<std::size_t>(u)],
                     Word::generator(alphabet_, CosetTable::letter_of_column(col)));
        order.push_back(v);
      }
    }
    symbols_.assign(n, std::vector<int>(static_cast<std::size_t>(rank), 0));
    basis_.clear();
    for (std::size_t u = 0; u < n; ++u) {
      for (Letter g = 1; g <= rank; ++g) {
        const int v = adj_[u][CosetTable::column(g)];
        if (v == kNone) continue;
        const bool tree_forward = parent[static_cast<std::size_t>(v)] == static_cast<int>(u) &&
                                  parent_letter[static_cast<std::size_t>(v)] == g;
        const bool tree_backward = parent[u] == v && parent_letter[u] == -g;
        if (tree_forward || tree_backward) continue;
        basis_.push_back(multiply({tree_paths_[u], Word::generator(alphabet_, g),
                                   invert(tree_paths_[static_cast<std::size_t>(v)])}));
        symbols_[u][static_cast<std::size_t>(g - 1)] = static_cast<int>(basis_.size());
      }
    }
  }

  Alphabet alphabet_;
  int generator_count_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<Word> basis_;
  std::vector<Word> tree_paths_;
  std::vector<std::vector<int>> symbols_;  // [vertex][generator - 1]
};

namespace detail {

// Folding with a union-find over vertices. Identifications are queued and
// drained to a fixpoint, so the result does not depend on the order in which
// edges arrive.
class Folder {
 public:
  explicit Folder(Alphabet alphabet)
      : alphabet_(alphabet), width_(2 * static_cast<std::size_t>(alphabet.rank())) {}

  int add_vertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    adj_.emplace_back(width_, SubgroupGraph::kNone);
    return parent_.back();
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }

  void add_edge(int u, Letter x, int v) {
    attach(find(u), x, find(v));
    drain();
  }

  // Adds a closed path at `at` spelling w.
  void add_loop(int at, const Word& w) {
    if (w.empty()) return;
    int u = at;
    for (std::size_t i = 0; i + 1 < w.length(); ++i) {
      const int v = add_vertex();
      add_edge(u, w[i], v);
      u = v;
    }
    add_edge(u, w[w.length() - 1], at);
  }

  SubgroupGraph finish(int base, int generator_count) {
    const int root = find(base);
    std::vector<std::vector<int>> adj(adj_.size(), std::vector<int>(width_, SubgroupGraph::kNone));
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (find(static_cast<int>(v)) != static_cast<int>(v)) continue;
      for (std::size_t col = 0; col < width_; ++col) {
        const int t = adj_[v][col];
        if (t != SubgroupGraph::kNone) adj[v][col] = find(t);
      }
    }
    return SubgroupGraph::from_folded(alphabet_, std::move(adj), root, generator_count);
  }

 private:
  void attach(int u, Letter x, int v) {
    int& fwd = adj_[static_cast<std::size_t>(u)][CosetTable::column(x)];
    if (fwd == SubgroupGraph::kNone) {
      fwd = v;
    } else if (find(fwd) != v) {
      pending_.emplace_back(find(fwd), v);
    }
    int& back = adj_[static_cast<std::size_t>(v)][CosetTable::column(-x)];
    if (back == SubgroupGraph::kNone) {
      back = u;
    } else if (find(back) != u) {
      pending_.emplace_back(find(back), u);
    }
  }

  void drain() {
    while (!pending_.empty()) {
      auto [p, q] = pending_.back();
      pending_.pop_back();
      p = find(p);
      q = find(q);
      if (p == q) continue;
      if (q < p) std::swap(p, q);
      parent_[static_cast<std::size_t>(q)] = p;
      for (std::size_t col = 0; col < width_; ++col) {
        const int t = adj_[static_cast<std::size_t>(q)][col];
        if (t == SubgroupGraph::kNone) continue;
        adj_[static_cast<std::size_t>(q)][col] = SubgroupGraph::kNone;
        attach(p, CosetTable::letter_of_column(col), find(t));
      }
    }
  }

  Alphabet alphabet_;
  std::size_t width_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> pending_;
};

}  // namespace detail

inline SubgroupGraph build(Alphabet alphabet, const std::vector<Word>& generators) {
  detail::Folder folder(alphabet);
  const int base = folder.add_vertex();
  for (const Word& w : generators) {
    require_same_alphabet(alphabet, w.alphabet());
    folder.add_loop(base, w);
  }
  return folder.finish(base, static_cast<int>(generators.size()));
}

// The full coset graph of a complete table; already folded and core.
inline SubgroupGraph from_coset_table(const CosetTable& t) {
  return SubgroupGraph::from_folded(t.alphabet(), t.rows(), 0,
                                    static_cast<int>(t.subgroup_generators().size()));
}

inline bool member(const SubgroupGraph& g, const Word& w) {
  require_same_alphabet(g.alphabet(), w.alphabet());
  int v = SubgroupGraph::base();
  for (Letter x : w.letters()) {
    v = g.target(v, x);
    if (v == SubgroupGraph::kNone) return false;
  }
  return v == SubgroupGraph::base();
}

inline GraphInvariants invariants(const SubgroupGraph& g) {
  GraphInvariants inv;
  if (g.is_full_cover()) inv.index = g.vertex_count();
  inv.rank = g.edge_count() - g.vertex_count() + 1;
  inv.generator_count = g.generator_count();
  return inv;
}

inline const std::vector<Word>& basis(const SubgroupGraph& g) { return g.basis(); }

// w as a word in the basis symbols (alphabet of rank = rank of the subgroup),
// or nullopt if w is not in the subgroup. For the trivial subgroup the
// identity is returned over a rank-1 placeholder alphabet.
inline std::optional<Word> express(const SubgroupGraph& g, const Word& w) {
  require_same_alphabet(g.alphabet(), w.alphabet());
  const int rank = static_cast<int>(g.basis().size());
  const Alphabet basis_alphabet(rank > 0 ? rank : 1);
  std::vector<Letter> symbols;
  int v = SubgroupGraph::base();
  for (Letter x : w.letters()) {
    const int next = g.target(v, x);
    if (next == SubgroupGraph::kNone) return std::nullopt;
    if (const int s = g.edge_symbol(v, x); s != 0) symbols.push_back(s);
    v = next;
  }
  if (v != SubgroupGraph::base()) return std::nullopt;
  return Word::reduce(basis_alphabet, symbols);
}

// The inclusion of the subgroup into the ambient free group, as a map from the
// basis alphabet. Expanding express(g, w) along it gives back w.
inline FreeHom inclusion(const SubgroupGraph& g) {
  if (g.basis().empty()) throw Error("trivial subgroup has no basis alphabet");
  return FreeHom(Alphabet(static_cast<int>(g.basis().size())), g.alphabet(), g.basis());
}

inline SubgroupGraph intersect(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  require_same_alphabet(g1.alphabet(), g2.alphabet());
  const std::size_t width = 2 * static_cast<std::size_t>(g1.alphabet().rank());
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs{{0, 0}};
  index[{0, 0}] = 0;
  std::vector<std::vector<int>> adj;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    adj.emplace_back(width, SubgroupGraph::kNone);
    const auto [u1, u2] = pairs[i];
    for (std::size_t col = 0; col < width; ++col) {
      const Letter x = CosetTable::letter_of_column(col);
      const int v1 = g1.target(u1, x);
      const int v2 = g2.target(u2, x);
      if (v1 == SubgroupGraph::kNone || v2 == SubgroupGraph::kNone) continue;
      auto [it, inserted] = index.try_emplace({v1, v2}, static_cast<int>(pairs.size()));
      if (inserted) pairs.emplace_back(v1, v2);
      adj[i][col] = it->second;
    }
  }
  return SubgroupGraph::from_folded(g1.alphabet(), std::move(adj), 0, 0);
}

// True iff the subgroup of `small` lies inside the subgroup of `big`.
inline bool contains_subgroup(const SubgroupGraph& big, const SubgroupGraph& small) {
  require_same_alphabet(big.alphabet(), small.alphabet());
  for (const Word& w : small.basis()) {
    if (!member(big, w)) return false;
  }
  return true;
}

inline bool same_subgroup(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  return contains_subgroup(g1, g2) && contains_subgroup(g2, g1);
}

inline CosetTable coset_table(const SubgroupGraph& g) {
  if (!g.is_full_cover()) throw InfiniteIndex("subgroup has infinite index");
  std::vector<std::vector<int>> rows;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<int> row;
    for (std::size_t col = 0; col < 2 * static_cast<std::size_t>(g.alphabet().rank()); ++col) {
      row.push_back(g.target(v, CosetTable::letter_of_column(col)));
    }
    rows.push_back(std::move(row));
  }
  return CosetTable(g.alphabet(), std::move(rows), g.basis());
}

}  // namespace mcg
