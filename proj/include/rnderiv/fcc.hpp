#pragma once

#include <vector>

#include "rnderiv/simple_function.hpp"

namespace rnderiv {

// Convex combination over a family of functions: positive weights on strictly
// increasing indices, summing exactly to one.
struct ConvexWeights {
    std::vector<std::size_t> indices;
    std::vector<Rat> weights;

    void validate() const;
};

// Exact Gram matrix G[j][k] = l2_inner(f_j, f_k, m).
std::vector<std::vector<Rat>> gram(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                                   const Rat& cantor_tol = default_cantor_tolerance());

struct FccOptions {
    double tolerance = 1e-10; // Frank-Wolfe duality gap target
    long max_iterations = 500000;
};

struct MinNormResult {
    ConvexWeights weights; // exact simplex point after snapping
    Rat norm_sq;           // w^T G w with the exact snapped weights
    double duality_gap;    // w^T G w - min_j (G w)_j at termination
    long iterations = 0;
};

// Near-minimal-norm point of the convex hull of fs in L2(m), by Frank-Wolfe
// with away steps on the exact Gram matrix (double-precision iterates,
// exactly renormalized rational weights on output).
MinNormResult min_norm_hull(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                            const FccOptions& options = {},
                            const Rat& cantor_tol = default_cantor_tolerance());

// Same solve on a precomputed Gram restricted to indices [from, G.size()).
MinNormResult min_norm_tail(const std::vector<std::vector<Rat>>& G, std::size_t from,
                            const FccOptions& options);

struct FccElement {
    SimpleFunction g;
    ConvexWeights weights; // indices >= n for the n-th element
    Rat norm_sq;
    double duality_gap;
};

// Forward convex combination g_n = near-min-norm element of co(f_k : k >= n).
std::vector<FccElement> fcc_sequence(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                                     const FccOptions& options = {},
                                     const Rat& cantor_tol = default_cantor_tolerance());

// Rewrites an outer combination of combinations in terms of the base family;
// exercises the closure of forward convex combinations under composition.
ConvexWeights compose_weights(const std::vector<ConvexWeights>& inner, const ConvexWeights& outer);

} // namespace rnderiv
