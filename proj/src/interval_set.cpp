#include "rnderiv/interval_set.hpp"

#include <algorithm>

namespace rnderiv {

IntervalSet IntervalSet::interval(const Rat& lo, const Rat& hi) {
    if (lo > hi || lo < 0 || hi > 1)
        fail(ErrorCode::invalid_argument,
             "interval [" + rat_str(lo) + ", " + rat_str(hi) + ") not within [0,1)");
    IntervalSet s;
    if (lo < hi) s.pieces_.push_back({lo, hi});
    return s;
}

IntervalSet IntervalSet::from_pieces(std::vector<Interval> pieces) {
    std::erase_if(pieces, [](const Interval& p) { return p.lo >= p.hi; });
    for (const Interval& p : pieces)
        if (p.lo < 0 || p.hi > 1)
            fail(ErrorCode::invalid_argument, "interval piece escapes [0,1)");
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalSet s;
    for (Interval& p : pieces) {
        if (!s.pieces_.empty() && p.lo <= s.pieces_.back().hi) {
            if (p.hi > s.pieces_.back().hi) s.pieces_.back().hi = p.hi;
        } else {
            s.pieces_.push_back(std::move(p));
        }
    }
    return s;
}

bool IntervalSet::is_canonical(const std::vector<Interval>& pieces) {
    for (size_t i = 0; i < pieces.size(); ++i) {
        const Interval& p = pieces[i];
        if (!(p.lo >= 0 && p.lo < p.hi && p.hi <= 1)) return false;
        if (i > 0 && !(pieces[i - 1].hi < p.lo)) return false;
    }
    return true;
}

Rat IntervalSet::length() const {
    Rat total(0);
    for (const Interval& p : pieces_) total += p.hi - p.lo;
    return total;
}

const Rat& IntervalSet::leftmost() const {
    if (pieces_.empty()) fail(ErrorCode::internal, "leftmost of empty set");
    return pieces_.front().lo;
}

bool IntervalSet::contains(const Rat& x) const {
    for (const Interval& p : pieces_) {
        if (x < p.lo) return false;
        if (x < p.hi) return true;
    }
    return false;
}

bool IntervalSet::strictly_inside(const Rat& x) const {
    for (const Interval& p : pieces_) {
        if (x <= p.lo) return false;
        if (x < p.hi) return true;
    }
    return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    IntervalSet out;
    size_t i = 0, j = 0;
    while (i < pieces_.size() && j < other.pieces_.size()) {
        const Interval& a = pieces_[i];
        const Interval& b = other.pieces_[j];
        Rat lo = std::max(a.lo, b.lo);
        Rat hi = std::min(a.hi, b.hi);
        if (lo < hi) out.pieces_.push_back({lo, hi});
        if (a.hi < b.hi)
            ++i;
        else
            ++j;
    }
    return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = pieces_;
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return from_pieces(std::move(all));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
    return intersect(other) == *this;
}

} // namespace rnderiv
