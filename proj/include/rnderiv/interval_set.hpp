#pragma once

#include <vector>

#include "rnderiv/rational.hpp"

namespace rnderiv {

// Half-open interval [lo, hi) inside the unit interval.
struct Interval {
    Rat lo;
    Rat hi;
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// Canonical finite union of disjoint half-open subintervals of [0,1):
// pieces sorted, nonempty, with strict gaps between them (touching pieces are
// merged). The canonical form is unique per set, so equality is structural.
class IntervalSet {
  public:
    IntervalSet() = default; // empty set

    // Single interval; lo == hi yields the empty set.
    static IntervalSet interval(const Rat& lo, const Rat& hi);
    static IntervalSet unit() { return interval(Rat(0), Rat(1)); }

    // Normalizes arbitrary pieces (sorts, merges overlap and touching ends).
    static IntervalSet from_pieces(std::vector<Interval> pieces);

    // True when the raw list is already in canonical form.
    static bool is_canonical(const std::vector<Interval>& pieces);

    const std::vector<Interval>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    Rat length() const;
    const Rat& leftmost() const; // requires non-empty

    bool contains(const Rat& x) const;
    // lo < x < hi for some piece; these are the legal split points.
    bool strictly_inside(const Rat& x) const;

    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet unite(const IntervalSet& other) const;
    bool subset_of(const IntervalSet& other) const;

    bool operator==(const IntervalSet& other) const { return pieces_ == other.pieces_; }

  private:
    std::vector<Interval> pieces_;
};

} // namespace rnderiv
