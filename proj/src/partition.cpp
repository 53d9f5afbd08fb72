#include "rnderiv/partition.hpp"

#include <algorithm>
#include <map>

namespace rnderiv {

namespace {

void sort_cells(std::vector<IntervalSet>& cells) {
    std::sort(cells.begin(), cells.end(),
              [](const IntervalSet& a, const IntervalSet& b) { return a.leftmost() < b.leftmost(); });
}

} // namespace

Partition Partition::trivial() {
    Partition p{raw_tag{}};
    p.cells_.push_back(IntervalSet::unit());
    return p;
}

Partition Partition::from_cells(std::vector<IntervalSet> cells) {
    Rat total(0);
    std::vector<Interval> pieces;
    for (const IntervalSet& c : cells) {
        if (c.empty()) fail(ErrorCode::invalid_argument, "partition contains an empty cell");
        total += c.length();
        pieces.insert(pieces.end(), c.pieces().begin(), c.pieces().end());
    }
    // Length one plus exact cover implies pairwise disjointness.
    if (total != 1 || !(IntervalSet::from_pieces(pieces) == IntervalSet::unit()))
        fail(ErrorCode::invalid_argument, "cells do not partition [0,1)");
    Partition p{raw_tag{}};
    p.cells_ = std::move(cells);
    sort_cells(p.cells_);
    return p;
}

Partition Partition::grid(unsigned long base, unsigned long level) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), base, level);
    std::vector<IntervalSet> cells;
    for (Int k = 0; k < scale; ++k)
        cells.push_back(IntervalSet::interval(make_rat(k, scale), make_rat(k + 1, scale)));
    return from_cells(std::move(cells));
}

Partition Partition::split_cell(std::size_t index, const Rat& point) const {
    if (index >= cells_.size()) fail(ErrorCode::invalid_argument, "cell index out of range");
    const IntervalSet& cell = cells_[index];
    if (!cell.strictly_inside(point))
        fail(ErrorCode::point_not_interior,
             "split point " + rat_str(point) + " is not interior to the cell");
    IntervalSet left = cell.intersect(IntervalSet::interval(Rat(0), point));
    IntervalSet right = cell.intersect(IntervalSet::interval(point, Rat(1)));
    Partition out{raw_tag{}};
    out.cells_ = cells_;
    out.cells_[index] = std::move(left);
    out.cells_.push_back(std::move(right));
    sort_cells(out.cells_);
    return out;
}

Partition common_refinement(const Partition& i, const Partition& j) {
    // Sweep the sorted piece lists once; group overlap pieces by cell pair.
    struct Tagged {
        Rat lo;
        Rat hi;
        std::size_t cell;
    };
    auto collect = [](const Partition& p) {
        std::vector<Tagged> out;
        for (std::size_t c = 0; c < p.size(); ++c)
            for (const Interval& piece : p.cell(c).pieces()) out.push_back({piece.lo, piece.hi, c});
        std::sort(out.begin(), out.end(),
                  [](const Tagged& x, const Tagged& y) { return x.lo < y.lo; });
        return out;
    };
    std::vector<Tagged> pa = collect(i), pb = collect(j);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Interval>> groups;
    std::size_t a = 0, b = 0;
    while (a < pa.size() && b < pb.size()) {
        Rat lo = std::max(pa[a].lo, pb[b].lo);
        Rat hi = std::min(pa[a].hi, pb[b].hi);
        if (lo < hi) groups[{pa[a].cell, pb[b].cell}].push_back({std::move(lo), std::move(hi)});
        if (pa[a].hi < pb[b].hi)
            ++a;
        else
            ++b;
    }
    std::vector<IntervalSet> cells;
    cells.reserve(groups.size());
    for (auto& [key, pieces] : groups) cells.push_back(IntervalSet::from_pieces(std::move(pieces)));
    return Partition::from_cells(std::move(cells));
}

bool is_refinement(const Partition& coarse, const Partition& fine) {
    for (const IntervalSet& f : fine.cells()) {
        bool inside = false;
        for (const IntervalSet& c : coarse.cells()) {
            if (f.subset_of(c)) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

} // namespace rnderiv
