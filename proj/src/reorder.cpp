#include "abcd/reorder.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>

#include "abcd/errors.hpp"

namespace abcd {

BipartiteGraph::BipartiteGraph(Index m, Index n, std::vector<std::vector<Index>> adjacency)
    : m_(m), n_(n), adj_(std::move(adjacency)) {
  if (static_cast<Index>(adj_.size()) != m + n) throw DimensionError("adjacency size != m + n");
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  for (Index u = 0; u < m + n; ++u) {
    for (Index v : neighbors(u)) {
      if (v < 0 || v >= m + n) throw StructureError("neighbor id out of range");
      if (kind(u) == kind(v)) {
        throw StructureError("edge " + std::to_string(u) + "-" + std::to_string(v) +
                             " joins two nodes of the same kind");
      }
      const auto back = neighbors(v);
      if (!std::binary_search(back.begin(), back.end(), u)) {
        throw StructureError("adjacency is not symmetric");
      }
    }
  }
}

BipartiteGraph build_bipartite(const SparseMatrix& a) {
  const Index m = a.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(m + a.cols()));
  for (const auto& e : a.entries()) {
    adj[static_cast<std::size_t>(e.row)].push_back(m + e.col);
    adj[static_cast<std::size_t>(m + e.col)].push_back(e.row);
  }
  return BipartiteGraph(m, a.cols(), std::move(adj));
}

Index LevelStructure::components() const {
  Index c = 0;
  for (const auto& l : levels) c = std::max(c, l.component + 1);
  return c;
}

std::vector<Index> LevelStructure::sizes() const {
  std::vector<Index> s;
  s.reserve(levels.size());
  for (const auto& l : levels) s.push_back(static_cast<Index>(l.nodes.size()));
  return s;
}

std::vector<Index> LevelStructure::labeling() const {
  std::vector<Index> out;
  for (const auto& l : levels) out.insert(out.end(), l.nodes.begin(), l.nodes.end());
  return out;
}

LevelStructure cuthill_mckee(const BipartiteGraph& g) {
  const Index total = g.nodes();
  LevelStructure out;
  out.rows = g.rows();
  out.cols = g.cols();
  out.component_of.assign(static_cast<std::size_t>(total), -1);

  // Connected components, discovered in increasing order of their smallest id.
  std::vector<std::vector<Index>> components;
  std::vector<Index> isolated;
  std::vector<bool> seen(static_cast<std::size_t>(total), false);
  for (Index s = 0; s < total; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    if (g.degree(s) == 0) {
      seen[static_cast<std::size_t>(s)] = true;
      isolated.push_back(s);
      continue;
    }
    std::vector<Index> members;
    std::deque<Index> queue{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      members.push_back(u);
      for (Index v : g.neighbors(u)) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          queue.push_back(v);
        }
      }
    }
    components.push_back(std::move(members));
  }
  for (Index s : isolated) components.push_back({s});

  auto before = [&g](Index a, Index b) {
    const Index da = g.degree(a);
    const Index db = g.degree(b);
    return da != db ? da < db : a < b;
  };

  std::vector<bool> labeled(static_cast<std::size_t>(total), false);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    const Index start = *std::min_element(members.begin(), members.end(), before);
    const auto component = static_cast<Index>(c);

    std::vector<Index> current{start};
    labeled[static_cast<std::size_t>(start)] = true;
    while (!current.empty()) {
      std::vector<Index> next;
      for (Index u : current) {
        std::vector<Index> fresh;
        for (Index v : g.neighbors(u)) {
          if (!labeled[static_cast<std::size_t>(v)]) fresh.push_back(v);
        }
        std::sort(fresh.begin(), fresh.end(), before);
        for (Index v : fresh) labeled[static_cast<std::size_t>(v)] = true;
        next.insert(next.end(), fresh.begin(), fresh.end());
      }
      for (Index u : current) out.component_of[static_cast<std::size_t>(u)] = component;
      out.levels.push_back({g.kind(current.front()), component, std::move(current)});
      current = std::move(next);
    }
  }
  return out;
}

bool levels_alternate(const LevelStructure& levels) {
  const Index m = levels.rows;
  for (std::size_t i = 0; i < levels.levels.size(); ++i) {
    const auto& level = levels.levels[i];
    if (level.nodes.empty()) return false;
    for (Index u : level.nodes) {
      const auto kind = u < m ? NodeKind::kRow : NodeKind::kColumn;
      if (kind != level.kind) return false;
    }
    if (i > 0) {
      const auto& prev = levels.levels[i - 1];
      if (prev.component == level.component && prev.kind == level.kind) return false;
    }
  }
  return true;
}

bool levels_cover(const LevelStructure& levels) {
  const Index total = levels.rows + levels.cols;
  std::vector<int> hits(static_cast<std::size_t>(total), 0);
  Index row_nodes = 0;
  Index col_nodes = 0;
  for (const auto& level : levels.levels) {
    for (Index u : level.nodes) {
      if (u < 0 || u >= total) return false;
      ++hits[static_cast<std::size_t>(u)];
    }
    (level.kind == NodeKind::kRow ? row_nodes : col_nodes) += static_cast<Index>(level.nodes.size());
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }) &&
         row_nodes == levels.rows && col_nodes == levels.cols;
}

RowColumnOrdering derive_permutations(const LevelStructure& levels, Index m, Index n) {
  if (levels.rows != m || levels.cols != n || !levels_cover(levels)) {
    throw StructureError("level structure does not cover every row and column exactly once");
  }
  std::vector<Index> row_order;
  std::vector<Index> col_order;
  BlockPartition blocks;
  blocks.structure = BlockStructure::kBidiagonal;
  blocks.row_offsets.push_back(0);
  // Column block 0 (the leading block) is open.
  blocks.col_offsets.push_back(0);
  for (const auto& level : levels.levels) {
    if (level.kind == NodeKind::kRow) {
      row_order.insert(row_order.end(), level.nodes.begin(), level.nodes.end());
      blocks.row_offsets.push_back(static_cast<Index>(row_order.size()));
      // The diagonal column block of the row block just closed opens here.
      blocks.col_offsets.push_back(static_cast<Index>(col_order.size()));
    } else {
      for (Index u : level.nodes) col_order.push_back(u - m);
    }
  }
  blocks.col_offsets.push_back(static_cast<Index>(col_order.size()));
  return {Permutation::from_order(row_order), Permutation::from_order(col_order), std::move(blocks)};
}

SparseMatrix build_augmented_adjacency(const SparseMatrix& a) {
  const Index m = a.rows();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(m + 2 * a.nonzeros()));
  for (Index i = 0; i < m; ++i) t.push_back({i, i, 1.0});
  for (const auto& e : a.entries()) {
    t.push_back({e.row, m + e.col, e.value});
    t.push_back({m + e.col, e.row, e.value});
  }
  return SparseMatrix(m + a.cols(), m + a.cols(), std::move(t));
}

SymmetricOrdering reorder_augmented(const SparseMatrix& h, Index m) {
  if (h.rows() != h.cols()) throw DimensionError("reorder_augmented: matrix is not square");
  if (m < 0 || m > h.rows()) throw DimensionError("reorder_augmented: invalid row-node count");
  if (!(h == h.transpose())) throw StructureError("reorder_augmented: matrix is not symmetric");

  const Index total = h.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(total));
  for (const auto& e : h.entries()) {
    if (e.row != e.col) adj[static_cast<std::size_t>(e.row)].push_back(e.col);
  }
  const BipartiteGraph graph(m, total - m, std::move(adj));

  SymmetricOrdering out;
  out.levels = cuthill_mckee(graph);
  const auto order = out.levels.labeling();
  out.perm = Permutation::from_order(order);
  out.reordered = permute(h, out.perm, out.perm);

  out.blocks.structure = BlockStructure::kTridiagonal;
  out.blocks.row_offsets.push_back(0);
  for (const auto& level : out.levels.levels) {
    out.blocks.row_offsets.push_back(out.blocks.row_offsets.back() + static_cast<Index>(level.nodes.size()));
    out.blocks.diagonal_kinds.push_back(level.kind);
  }
  out.blocks.col_offsets = out.blocks.row_offsets;

  if (!is_block_tridiagonal(out.reordered, out.blocks)) {
    throw StructureError("reordered augmented matrix is not block tridiagonal with I/O diagonal blocks");
  }
  return out;
}

Index block_of(std::span<const Index> offsets, Index i) {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), i);
  return static_cast<Index>(it - offsets.begin()) - 1;
}

bool is_block_bidiagonal(const SparseMatrix& a, const BlockPartition& blocks) {
  if (blocks.structure != BlockStructure::kBidiagonal) return false;
  if (blocks.row_offsets.empty() || blocks.row_offsets.back() != a.rows()) return false;
  if (blocks.col_offsets.size() != blocks.row_offsets.size() + 1 || blocks.col_offsets.back() != a.cols()) {
    return false;
  }
  for (const auto& e : a.entries()) {
    const Index rb = block_of(blocks.row_offsets, e.row);
    const Index cb = block_of(blocks.col_offsets, e.col);
    if (cb != rb && cb != rb + 1) return false;
  }
  return true;
}

bool is_block_tridiagonal(const SparseMatrix& a, const BlockPartition& blocks) {
  if (blocks.structure != BlockStructure::kTridiagonal) return false;
  if (blocks.row_offsets != blocks.col_offsets || blocks.row_offsets.empty() ||
      blocks.row_offsets.back() != a.rows() || a.rows() != a.cols() ||
      static_cast<Index>(blocks.diagonal_kinds.size()) != blocks.row_blocks()) {
    return false;
  }
  Index identity_entries = 0;
  for (const auto& e : a.entries()) {
    const Index rb = block_of(blocks.row_offsets, e.row);
    const Index cb = block_of(blocks.col_offsets, e.col);
    if (std::abs(rb - cb) > 1) return false;
    if (rb == cb) {
      // E_kk is I for a row level and O for a column level.
      if (blocks.diagonal_kinds[static_cast<std::size_t>(rb)] != NodeKind::kRow) return false;
      if (e.row != e.col || e.value != 1.0) return false;
      ++identity_entries;
    }
  }
  Index expected = 0;
  for (Index k = 0; k < blocks.row_blocks(); ++k) {
    if (blocks.diagonal_kinds[static_cast<std::size_t>(k)] == NodeKind::kRow) {
      expected += blocks.row_offsets[k + 1] - blocks.row_offsets[k];
    }
  }
  return identity_entries == expected;
}

}  // namespace abcd
