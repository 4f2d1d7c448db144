#pragma once

#include <cstdint>
#include <vector>

#include "gepd/filtration.hpp"

namespace gepd {

/// One point of a diagram together with the simplices that produced it.
///
/// dim 0: creator is a vertex id, destroyer the negative edge that merges it
///        away; birth <= death.
/// dim 1: creator is the ascending-positive edge closing the loop, destroyer
///        the upper edge of the loop's minimum vertex whose cone triangle
///        kills it in the descending pass; death <= birth.
struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  std::uint32_t creator = 0;
  std::uint32_t destroyer = 0;

  double persistence() const { return death > birth ? death - birth : birth - death; }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

/// Stable diagram order: by birth, then death, then creator id.
bool diagram_order(const PersistencePair& a, const PersistencePair& b);

struct PersistenceDiagram {
  std::vector<PersistencePair> dim0;
  std::vector<PersistencePair> dim1;
  bool include_zero_persistence = true;

  void sort();
  std::size_t size() const { return dim0.size() + dim1.size(); }
  /// Copy without points whose |death - birth| <= epsilon.
  PersistenceDiagram without_zero_persistence(double epsilon = 0.0) const;
};

enum class EdgeRole : std::uint8_t { negative_ascending, positive_ascending };

/// Edge-wise view of a diagram: every edge carries exactly one pair.
struct EdgePairingMap {
  struct Entry {
    EdgeRole role = EdgeRole::negative_ascending;
    PersistencePair pair;
  };
  std::vector<Entry> entries;  // indexed by edge id

  std::size_t positive_count() const;
};

/// Operation counters for the union-find engines.
struct UnionFindStats {
  std::uint64_t finds = 0;
  std::uint64_t unions = 0;
  std::uint64_t relaxations = 0;

  UnionFindStats& operator+=(const UnionFindStats& o) {
    finds += o.finds;
    unions += o.unions;
    relaxations += o.relaxations;
    return *this;
  }
};

/// Disjoint sets over [0, size) where each element carries an integer key and
/// find() returns the minimum-key element of its set. Path halving.
class UnionFind {
 public:
  UnionFind(std::vector<std::uint64_t> keys, UnionFindStats* stats = nullptr);

  std::uint32_t find(std::uint32_t x);
  /// Joins the sets rooted at distinct roots a and b; returns the absorbed
  /// (larger-key) root.
  std::uint32_t link(std::uint32_t a, std::uint32_t b);
  std::uint64_t key(std::uint32_t x) const { return keys_[x]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> keys_;
  UnionFindStats* stats_;
};

/// Ordinary 0D diagram by one ascending union-find sweep. An edge is relaxed
/// when its later endpoint is reached, in edge_order_asc. The essential
/// class of each component is left out.
std::vector<PersistencePair> pd0_union_find(const FilteredGraph& fg, UnionFindStats* stats = nullptr);

/// Extended 1D points whose death is f(center): the center's upper edges are
/// split into clones carrying f(center), then the vertices after the center
/// are swept upward; each merge of two clone-rooted sets records a point
/// (edge ascending value, f(center)).
std::vector<PersistencePair> union_find_step(const FilteredGraph& fg, VertexId center,
                                             UnionFindStats* stats = nullptr);

/// All extended 1D points: union_find_step over every vertex, concatenated
/// in vertex_order. With threads > 1 the centers run concurrently and are
/// merged in the same order.
std::vector<PersistencePair> epd1_decomposed(const FilteredGraph& fg, unsigned threads = 1,
                                             UnionFindStats* stats = nullptr);

/// pd0_union_find + epd1_decomposed, sorted.
PersistenceDiagram epd_union_find(const FilteredGraph& fg, unsigned threads = 1, UnionFindStats* stats = nullptr);

struct ReductionStats {
  std::uint64_t columns = 0;
  std::uint64_t column_additions = 0;
};

/// Reference engine: GF(2) reduction of the boundary matrix of the extended
/// filtration (ascending simplices, then a cone vertex and the cones over
/// simplices in descending order). Keeps the vertex-edge ascending pairs and
/// the ascending-edge / cone-triangle pairs; sorted.
PersistenceDiagram epd_matrix_reduction(const FilteredGraph& fg, ReductionStats* stats = nullptr);

/// Assigns every edge its pair. Throws InvariantViolation when an edge is
/// claimed twice or not at all.
EdgePairingMap edge_pairings(const FilteredGraph& fg, const PersistenceDiagram& diagram);
EdgePairingMap edge_pairings(const FilteredGraph& fg);

}  // namespace gepd
