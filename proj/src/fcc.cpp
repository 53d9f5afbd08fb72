#include "rnderiv/fcc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rnderiv {

void ConvexWeights::validate() const {
    if (indices.size() != weights.size())
        fail(ErrorCode::invalid_argument, "weight/index length mismatch");
    Rat total(0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0 && indices[i] <= indices[i - 1])
            fail(ErrorCode::invalid_argument, "weight indices must strictly increase");
        if (weights[i] < 0) fail(ErrorCode::invalid_argument, "negative convex weight");
        total += weights[i];
    }
    if (total != 1) fail(ErrorCode::invalid_argument, "convex weights must sum to one");
}

std::vector<std::vector<Rat>> gram(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                                   const Rat& cantor_tol) {
    const std::size_t n = fs.size();
    std::vector<std::vector<Rat>> G(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
            Rat v = l2_inner(fs[j], fs[k], m, cantor_tol);
            G[j][k] = v;
            G[k][j] = std::move(v);
        }
    return G;
}

namespace {

MinNormResult solve_min_norm(const std::vector<std::vector<Rat>>& G, std::size_t from,
                             const FccOptions& opt) {
    const std::size_t n = G.size() - from;
    if (n == 0) fail(ErrorCode::invalid_argument, "min-norm point of an empty family");

    std::vector<std::vector<double>> Gd(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) Gd[j][k] = rat_to_double(G[from + j][from + k]);

    // start from the vertex of least norm (first on ties)
    std::size_t start = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (Gd[j][j] < Gd[start][start]) start = j;
    std::vector<double> w(n, 0.0);
    w[start] = 1.0;

    std::vector<double> Gw(n);
    auto refresh = [&]() {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0;
            for (std::size_t k = 0; k < n; ++k) acc += Gd[j][k] * w[k];
            Gw[j] = acc;
        }
    };
    refresh();

    double gap = 0.0;
    long it = 0;
    for (; it < opt.max_iterations; ++it) {
        double quad = 0;
        for (std::size_t j = 0; j < n; ++j) quad += w[j] * Gw[j];
        // Frank-Wolfe vertex and away vertex.
        std::size_t s = 0, a = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (Gw[j] < Gw[s]) s = j;
            if (w[j] > 0 && (a == n || Gw[j] > Gw[a])) a = j;
        }
        gap = quad - Gw[s];
        if (gap <= opt.tolerance) break;

        double fw_improve = quad - Gw[s];
        double away_improve = (a < n) ? Gw[a] - quad : -1.0;
        bool away = away_improve > fw_improve && n > 1;

        if (!away) {
            // w <- (1 - t) w + t e_s ; exact line search, t in [0, 1]
            double d_gd = 0; // (e_s - w)^T G (e_s - w)
            d_gd = Gd[s][s] - 2 * Gw[s] + quad;
            double t = d_gd > 0 ? std::clamp((quad - Gw[s]) / d_gd, 0.0, 1.0) : 1.0;
            if (t <= 0) break;
            for (std::size_t j = 0; j < n; ++j) w[j] *= (1 - t);
            w[s] += t;
        } else {
            // w <- w + t (w - e_a), capped so w_a stays nonnegative
            double d_gd = quad - 2 * Gw[a] + Gd[a][a]; // (w - e_a)^T G (w - e_a)
            double t_max = w[a] < 1.0 ? w[a] / (1.0 - w[a]) : 0.0;
            double t = d_gd > 0 ? std::clamp((Gw[a] - quad) / d_gd, 0.0, t_max) : t_max;
            if (t <= 0) break;
            for (std::size_t j = 0; j < n; ++j) w[j] *= (1 + t);
            w[a] -= t;
            if (w[a] < 0) w[a] = 0;
        }
        refresh();
    }
    if (gap > opt.tolerance)
        fail(ErrorCode::iteration_budget,
             "Frank-Wolfe gap " + std::to_string(gap) + " above tolerance after " +
                 std::to_string(it) + " iterations");

    // Snap to an exact simplex point: doubles convert exactly; renormalize.
    MinNormResult res;
    Rat total(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (w[j] <= 0) continue;
        total += rat_from_double(w[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (w[j] <= 0) continue;
        res.weights.indices.push_back(from + j);
        res.weights.weights.push_back(rat_from_double(w[j]) / total);
    }
    res.weights.validate();

    res.norm_sq = Rat(0);
    for (std::size_t p = 0; p < res.weights.indices.size(); ++p)
        for (std::size_t q = 0; q < res.weights.indices.size(); ++q)
            res.norm_sq += res.weights.weights[p] * res.weights.weights[q] *
                           G[res.weights.indices[p]][res.weights.indices[q]];
    res.duality_gap = gap;
    res.iterations = it;
    return res;
}

} // namespace

MinNormResult min_norm_hull(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                            const FccOptions& options, const Rat& cantor_tol) {
    if (fs.empty()) fail(ErrorCode::invalid_argument, "min-norm point of an empty family");
    return solve_min_norm(gram(fs, m, cantor_tol), 0, options);
}

MinNormResult min_norm_tail(const std::vector<std::vector<Rat>>& G, std::size_t from,
                            const FccOptions& options) {
    if (from >= G.size()) fail(ErrorCode::invalid_argument, "tail start beyond family size");
    return solve_min_norm(G, from, options);
}

std::vector<FccElement> fcc_sequence(const std::vector<SimpleFunction>& fs, const MeasureSpec& m,
                                     const FccOptions& options, const Rat& cantor_tol) {
    if (fs.empty()) fail(ErrorCode::invalid_argument, "fcc of an empty family");
    std::vector<std::vector<Rat>> G = gram(fs, m, cantor_tol);
    std::vector<FccElement> out;
    out.reserve(fs.size());
    for (std::size_t n = 0; n < fs.size(); ++n) {
        MinNormResult r = min_norm_tail(G, n, options);
        std::vector<SimpleFunction> support;
        for (std::size_t idx : r.weights.indices) support.push_back(fs[idx]);
        SimpleFunction g = linear_combination(support, r.weights.weights);
        out.push_back({std::move(g), std::move(r.weights), std::move(r.norm_sq), r.duality_gap});
    }
    return out;
}

ConvexWeights compose_weights(const std::vector<ConvexWeights>& inner, const ConvexWeights& outer) {
    outer.validate();
    std::map<std::size_t, Rat> acc;
    for (std::size_t p = 0; p < outer.indices.size(); ++p) {
        const ConvexWeights& g = inner.at(outer.indices[p]);
        g.validate();
        for (std::size_t q = 0; q < g.indices.size(); ++q)
            acc[g.indices[q]] += outer.weights[p] * g.weights[q];
    }
    ConvexWeights result;
    for (auto& [idx, wt] : acc) {
        if (wt == 0) continue;
        result.indices.push_back(idx);
        result.weights.push_back(std::move(wt));
    }
    result.validate();
    return result;
}

} // namespace rnderiv
