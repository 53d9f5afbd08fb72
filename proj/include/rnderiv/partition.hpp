#pragma once

#include <cstddef>
#include <vector>

#include "rnderiv/interval_set.hpp"

namespace rnderiv {

// Finite measurable partition of [0,1). Cells are disjoint interval sets
// covering the unit interval exactly, kept in canonical order by leftmost
// endpoint. Cells produced by splitting are contiguous; common refinements
// may carry non-contiguous cells.
class Partition {
  public:
    // Defaults to the trivial partition {[0,1)}, the minimum of the lattice.
    Partition() : cells_{IntervalSet::unit()} {}

    static Partition trivial();
    // Validates cover, disjointness and non-emptiness; sorts canonically.
    static Partition from_cells(std::vector<IntervalSet> cells);
    // Uniform grid at k/base^level; handy in tests.
    static Partition grid(unsigned long base, unsigned long level);

    std::size_t size() const { return cells_.size(); }
    const std::vector<IntervalSet>& cells() const { return cells_; }
    const IntervalSet& cell(std::size_t i) const { return cells_.at(i); }

    // Replaces cell `index` by its intersections with [0, point) and
    // [point, 1). The point must be strictly inside one of the cell's pieces.
    Partition split_cell(std::size_t index, const Rat& point) const;

    bool operator==(const Partition& other) const { return cells_ == other.cells_; }

  private:
    struct raw_tag {};
    explicit Partition(raw_tag) {}
    std::vector<IntervalSet> cells_;
};

// Coarsest partition refining both (all nonempty pairwise intersections).
Partition common_refinement(const Partition& i, const Partition& j);

// True iff every cell of `fine` is contained in some cell of `coarse`.
bool is_refinement(const Partition& coarse, const Partition& fine);

} // namespace rnderiv
