#pragma once

#include <functional>
#include <vector>

#include "rnderiv/measure.hpp"
#include "rnderiv/partition.hpp"

namespace rnderiv {

// Measurable step function over a finite partition: one rational value per
// cell. Functions produced by f_pi and conditional expectations are
// nonnegative; arbitrary values are allowed so the convex-combination
// machinery can work with signed test families.
class SimpleFunction {
  public:
    // Defaults to the zero function on the trivial partition.
    SimpleFunction() : values_{Rat(0)} {}
    SimpleFunction(Partition partition, std::vector<Rat> values);

    static SimpleFunction constant(const Rat& value);

    const Partition& partition() const { return partition_; }
    const std::vector<Rat>& values() const { return values_; }
    const Rat& value(std::size_t i) const { return values_.at(i); }

    Rat max_abs() const;
    // Union of cells with value >= k.
    IntervalSet superlevel_set(const Rat& k) const;

  private:
    Partition partition_;
    std::vector<Rat> values_;
};

// Locates the cell containing a point in O(log pieces).
class CellLocator {
  public:
    explicit CellLocator(const Partition& p);
    std::size_t locate(const Rat& x) const;

  private:
    struct Entry {
        Rat lo;
        Rat hi;
        std::size_t cell;
    };
    std::vector<Entry> entries_;
};

// Invokes fn(lo, hi, cell_a, cell_b) for every maximal piece on which cell
// `cell_a` of `a` and cell `cell_b` of `b` overlap.
void for_each_overlap(const Partition& a, const Partition& b,
                      const std::function<void(const Rat&, const Rat&, std::size_t, std::size_t)>& fn);

// The partition density: value nu(A)/base(A) on cells with base(A) > 0, and
// zero on base-null cells.
SimpleFunction f_pi(const MeasureSpec& nu, const MeasureSpec& base, const Partition& pi,
                    const Rat& cantor_tol = default_cantor_tolerance());

Rat integrate(const SimpleFunction& phi, const MeasureSpec& m,
              const Rat& cantor_tol = default_cantor_tolerance());

// Integral of phi over a single cell of its own partition.
Rat integrate_on_cell(const SimpleFunction& phi, std::size_t cell, const MeasureSpec& m,
                      const Rat& cantor_tol = default_cantor_tolerance());

// sum over cells with gamma(A) > 0 of exp(-nu(A)/gamma(A)) * gamma(A),
// evaluated in double precision from exact masses, in canonical cell order.
// Requires nu(A) <= gamma(A) on every cell.
double exp_functional(const MeasureSpec& nu, const MeasureSpec& gamma, const Partition& pi,
                      const Rat& cantor_tol = default_cantor_tolerance());

// Cell-wise average over the coarse partition; zero on m-null cells.
// Requires f's partition to refine `coarse`.
SimpleFunction conditional_expectation(const SimpleFunction& f, const Partition& coarse,
                                       const MeasureSpec& m,
                                       const Rat& cantor_tol = default_cantor_tolerance());

Rat l2_inner(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
             const Rat& cantor_tol = default_cantor_tolerance());
Rat l1_distance(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
                const Rat& cantor_tol = default_cantor_tolerance());

// Equality m-almost everywhere: equal values on every overlap of positive mass.
bool equal_ae(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
              const Rat& cantor_tol = default_cantor_tolerance());

// Linear combination sum_k coeffs[k] * fs[k] on the common refinement.
SimpleFunction linear_combination(const std::vector<SimpleFunction>& fs,
                                  const std::vector<Rat>& coeffs);

} // namespace rnderiv
