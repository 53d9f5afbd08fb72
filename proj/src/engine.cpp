#include "rnderiv/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>

namespace rnderiv {

void EngineConfig::validate() const {
    if (max_rounds < 1) fail(ErrorCode::invalid_argument, "max_rounds must be >= 1");
    if (!(gain_tolerance > 0)) fail(ErrorCode::invalid_argument, "gain_tolerance must be > 0");
    if (candidate_margin < 0) fail(ErrorCode::invalid_argument, "candidate_margin must be >= 0");
    if (!(cantor_tolerance > 0)) fail(ErrorCode::invalid_argument, "cantor_tolerance must be > 0");
    if (checkpoint_stride < 0) fail(ErrorCode::invalid_argument, "checkpoint_stride must be >= 0");
}

namespace {

double cell_contrib(const Rat& nu, const Rat& gamma) {
    if (!(gamma > 0)) return 0.0;
    Rat h = nu / gamma;
    if (h < 0) h = 0;
    if (h > 1) h = 1;
    return std::exp(-rat_to_double(h)) * rat_to_double(gamma);
}

struct Cell {
    IntervalSet set;
    Rat nu;
    Rat gamma;
    Rat h; // nu/gamma clamped to [0,1], 0 on gamma-null cells
    bool inexact = false;
    double leftmost_d = 0.0;
    double screen_nu = 0.0; // double-CDF masses, basis for candidate screening
    double screen_gamma = 0.0;
    double contrib = 0.0; // exp(-h) * gamma from exact masses

    // candidate cache
    bool has_best = false;
    double best_gain = 0.0;
    Rat best_point;
    int eval_depth = -1;
    bool saturated = false;
};

// First grid level (k/base^level) with a point strictly inside (lo, hi), or
// -1 when none exists up to max_level. Starts from a double estimate and
// corrects exactly.
int first_interior_level(const Rat& lo, const Rat& hi, unsigned long base, int max_level) {
    auto has_point = [&](int level) {
        Int k = scaled_floor(lo, base, static_cast<unsigned long>(level)) + 1;
        Rat pt = base == 2 ? dyadic(k, static_cast<unsigned long>(level))
                           : triadic(k, static_cast<unsigned long>(level));
        return pt < hi;
    };
    double width = rat_to_double(hi - lo);
    int guess = width > 0 ? std::max(0, static_cast<int>(-std::log2(width) / std::log2(double(base))) - 1)
                          : max_level;
    guess = std::min(guess, max_level);
    while (guess > 0 && has_point(guess - 1)) --guess;
    while (guess <= max_level && !has_point(guess)) ++guess;
    return guess <= max_level ? guess : -1;
}

class EngineState {
  public:
    EngineState(const MeasureSpec& nu, const MeasureSpec& gamma, const Partition& pi,
                const EngineConfig& cfg, bool check_domination)
        : nu_(nu), gamma_(gamma), cfg_(cfg) {
        cfg_.validate();
        cantor_ = gamma_.has_cantor();
        structural_ = gamma_.structural_points();
        for (const IntervalSet& set : pi.cells()) {
            MassResult n = nu_.mass(set, MassMode::bounded, cfg_.cantor_tolerance);
            MassResult g = gamma_.mass(set, MassMode::bounded, cfg_.cantor_tolerance);
            if (check_domination && n.value > g.value + n.error_bound + g.error_bound)
                fail(ErrorCode::base_domination,
                     "cell with nu mass " + rat_str(n.value) + " above base mass " +
                         rat_str(g.value));
            cells_.push_back(make_cell(set, n.value, g.value, !(n.exact && g.exact)));
        }
        rebuild_order();
    }

    struct RoundResult {
        int applied = 0;
        double gain = 0.0;
        Rat l1_increment;
        bool exhausted = false; // no improving split and candidate sets are complete
        std::optional<RejectedCandidate> best_rejected;
    };

    RoundResult step(int round, EngineConfig::SplitMode mode) {
        const int depth = std::max(0, cfg_.depth_for_round(round));
        bool all_saturated = true;
        for (Cell& c : cells_) {
            if (!c.saturated && c.eval_depth < depth) evaluate(c, depth);
            all_saturated = all_saturated && c.saturated;
        }

        // Scan in canonical order so gain ties resolve to the leftmost cell.
        std::vector<std::size_t> improving;
        std::size_t best_idx = cells_.size();
        for (std::uint32_t i : order_) {
            const Cell& c = cells_[i];
            if (!c.has_best) continue;
            if (c.best_gain > cfg_.gain_tolerance) improving.push_back(i);
            if (best_idx == cells_.size() || c.best_gain > cells_[best_idx].best_gain)
                best_idx = i;
        }

        RoundResult res;
        res.l1_increment = Rat(0);
        if (improving.empty()) {
            // Deeper grid levels may still unlock candidates in later rounds.
            res.exhausted = all_saturated;
            if (res.exhausted && best_idx < cells_.size())
                res.best_rejected = rejected_record(round, cells_[best_idx]);
            return res;
        }
        std::vector<std::size_t> to_split;
        if (mode == EngineConfig::SplitMode::best_only) {
            std::size_t best_improving = improving.front();
            for (std::size_t i : improving)
                if (cells_[i].best_gain > cells_[best_improving].best_gain) best_improving = i;
            to_split.push_back(best_improving);
        } else {
            to_split = improving;
        }

        for (std::size_t i : to_split) {
            Cell& parent = cells_[i];
            auto [left, right] = split(parent, parent.best_point);
            res.gain += left.contrib + right.contrib - parent.contrib;
            res.l1_increment += rat_abs(left.h - parent.h) * left.gamma +
                                rat_abs(right.h - parent.h) * right.gamma;
            parent = std::move(left); // keeps the parent's leftmost position
            cells_.push_back(std::move(right));
            ++res.applied;
        }
        rebuild_order();
        return res;
    }

    double functional() const {
        double acc = 0.0;
        for (std::uint32_t i : order_) acc += cells_[i].contrib;
        return acc;
    }

    std::size_t size() const { return cells_.size(); }

    void export_masses(std::vector<Rat>& nu_out, std::vector<Rat>& gamma_out) const {
        nu_out.clear();
        gamma_out.clear();
        for (std::uint32_t i : order_) {
            nu_out.push_back(cells_[i].nu);
            gamma_out.push_back(cells_[i].gamma);
        }
    }

    Partition partition() const {
        std::vector<IntervalSet> sets;
        sets.reserve(cells_.size());
        for (std::uint32_t i : order_) sets.push_back(cells_[i].set);
        return Partition::from_cells(std::move(sets));
    }

    SimpleFunction f_gamma_fn(const Partition& pi) const {
        std::vector<Rat> values;
        values.reserve(cells_.size());
        for (std::uint32_t i : order_) values.push_back(cells_[i].h);
        return SimpleFunction(pi, std::move(values));
    }

    SimpleFunction f_mu_fn(const Partition& pi) const {
        std::vector<Rat> values;
        values.reserve(cells_.size());
        for (std::uint32_t i : order_) {
            const Cell& c = cells_[i];
            Rat mu = c.gamma - c.nu;
            if (mu > 0) {
                Rat v = c.nu / mu;
                if (c.inexact && v < 0) v = 0;
                values.push_back(v);
            } else {
                values.push_back(Rat(0));
            }
        }
        return SimpleFunction(pi, std::move(values));
    }

  private:
    Cell make_cell(IntervalSet set, Rat nu, Rat gamma, bool inexact) {
        Cell c;
        c.nu = std::move(nu);
        c.gamma = std::move(gamma);
        c.inexact = inexact;
        if (inexact) {
            if (c.nu < 0) c.nu = 0;
            if (c.nu > c.gamma) c.nu = c.gamma;
        }
        c.h = c.gamma > 0 ? Rat(c.nu / c.gamma) : Rat(0);
        if (c.h > 1) c.h = 1;
        c.contrib = cell_contrib(c.nu, c.gamma);
        c.leftmost_d = rat_to_double(set.leftmost());
        c.screen_nu = rat_to_double(c.nu);
        c.screen_gamma = rat_to_double(c.gamma);
        c.set = std::move(set);
        return c;
    }

    // Cells live in a stable pool; only this index vector is kept sorted.
    void rebuild_order() {
        order_.resize(cells_.size());
        for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (cells_[a].leftmost_d != cells_[b].leftmost_d)
                return cells_[a].leftmost_d < cells_[b].leftmost_d;
            return cells_[a].set.leftmost() < cells_[b].set.leftmost();
        });
    }

    struct CdfEntry {
        Rat value;
        bool exact;
    };

    const CdfEntry& cdf_cached(const MeasureSpec& m, std::map<Rat, CdfEntry>& cache, const Rat& x) {
        auto it = cache.find(x);
        if (it == cache.end()) {
            MassResult r = m.cdf(x, MassMode::bounded, cfg_.cantor_tolerance);
            it = cache.emplace(x, CdfEntry{std::move(r.value), r.exact}).first;
        }
        return it->second;
    }

    // Splits a cell at an interior point; exact child masses derive from the
    // parent so additivity holds cell-by-cell.
    std::pair<Cell, Cell> split(const Cell& parent, const Rat& point) {
        IntervalSet left_set = parent.set.intersect(IntervalSet::interval(Rat(0), point));
        IntervalSet right_set = parent.set.intersect(IntervalSet::interval(point, Rat(1)));
        Rat left_nu(0), left_gamma(0);
        bool inexact = parent.inexact;
        for (const Interval& p : left_set.pieces()) {
            const CdfEntry& hi_nu = cdf_cached(nu_, nu_cache_, p.hi);
            const CdfEntry& lo_nu = cdf_cached(nu_, nu_cache_, p.lo);
            const CdfEntry& hi_ga = cdf_cached(gamma_, gamma_cache_, p.hi);
            const CdfEntry& lo_ga = cdf_cached(gamma_, gamma_cache_, p.lo);
            left_nu += hi_nu.value - lo_nu.value;
            left_gamma += hi_ga.value - lo_ga.value;
            inexact = inexact || !(hi_nu.exact && lo_nu.exact && hi_ga.exact && lo_ga.exact);
        }
        if (inexact) {
            if (left_nu < 0) left_nu = 0;
            if (left_nu > parent.nu) left_nu = parent.nu;
            if (left_gamma < 0) left_gamma = 0;
            if (left_gamma > parent.gamma) left_gamma = parent.gamma;
            if (left_nu > left_gamma) left_nu = left_gamma;
        }
        Rat right_nu = parent.nu - left_nu;
        Rat right_gamma = parent.gamma - left_gamma;
        Cell left = make_cell(std::move(left_set), std::move(left_nu), std::move(left_gamma), inexact);
        Cell right =
            make_cell(std::move(right_set), std::move(right_nu), std::move(right_gamma), inexact);
        return {std::move(left), std::move(right)};
    }

    static double screen_contrib(double nu, double gamma) {
        if (!(gamma > 0)) return 0.0;
        double h = nu / gamma;
        if (h < 0) h = 0;
        if (h > 1) h = 1;
        return std::exp(-h) * gamma;
    }

    // Candidate gains for one cell at the scheduled depth: structural points
    // plus capped dyadic (and triadic, under a Cantor component) grids.
    void evaluate(Cell& c, int depth) {
        c.eval_depth = depth;
        c.has_best = false;
        c.best_gain = 0.0;
        bool saturated = true;

        std::vector<Rat> candidates;
        {
            auto lo_it = std::lower_bound(structural_.begin(), structural_.end(),
                                          c.set.pieces().front().lo);
            for (auto it = lo_it; it != structural_.end(); ++it) {
                if (*it >= c.set.pieces().back().hi) break;
                if (c.set.strictly_inside(*it)) candidates.push_back(*it);
            }
        }
        for (const Interval& p : c.set.pieces()) {
            int l0 = first_interior_level(p.lo, p.hi, 2, depth);
            if (l0 >= 0) {
                int top = std::min(l0 + cfg_.candidate_margin, depth);
                if (l0 + cfg_.candidate_margin > depth) saturated = false;
                append_grid_points(p.lo, p.hi, 2, static_cast<unsigned long>(top), candidates);
            } else {
                saturated = false;
            }
            if (cantor_) {
                int t0 = first_interior_level(p.lo, p.hi, 3, depth);
                if (t0 >= 0) {
                    int top = std::min(t0 + cfg_.candidate_margin, depth);
                    if (t0 + cfg_.candidate_margin > depth) saturated = false;
                    append_grid_points(p.lo, p.hi, 3, static_cast<unsigned long>(top), candidates);
                } else {
                    saturated = false;
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        c.saturated = saturated;
        if (candidates.empty()) return;

        // prefix sums of screened masses across pieces
        const auto& pieces = c.set.pieces();
        std::vector<double> pre_nu(pieces.size() + 1, 0.0), pre_ga(pieces.size() + 1, 0.0);
        std::vector<double> cdf_lo_nu(pieces.size()), cdf_lo_ga(pieces.size());
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            double lo_d = rat_to_double(pieces[i].lo);
            double hi_d = rat_to_double(pieces[i].hi);
            cdf_lo_nu[i] = nu_.cdf_d(lo_d);
            cdf_lo_ga[i] = gamma_.cdf_d(lo_d);
            pre_nu[i + 1] = pre_nu[i] + (nu_.cdf_d(hi_d) - cdf_lo_nu[i]);
            pre_ga[i + 1] = pre_ga[i] + (gamma_.cdf_d(hi_d) - cdf_lo_ga[i]);
        }
        const double parent_contrib = screen_contrib(c.screen_nu, c.screen_gamma);

        std::size_t piece_idx = 0;
        for (const Rat& x : candidates) {
            while (piece_idx + 1 < pieces.size() && !(x < pieces[piece_idx].hi)) ++piece_idx;
            double xd = rat_to_double(x);
            double left_nu = pre_nu[piece_idx] + (nu_.cdf_d(xd) - cdf_lo_nu[piece_idx]);
            double left_ga = pre_ga[piece_idx] + (gamma_.cdf_d(xd) - cdf_lo_ga[piece_idx]);
            left_nu = std::clamp(left_nu, 0.0, c.screen_nu);
            left_ga = std::clamp(left_ga, 0.0, c.screen_gamma);
            double gain = screen_contrib(left_nu, left_ga) +
                          screen_contrib(c.screen_nu - left_nu, c.screen_gamma - left_ga) -
                          parent_contrib;
            if (!c.has_best || gain > c.best_gain) {
                c.has_best = true;
                c.best_gain = gain;
                c.best_point = x;
            }
        }
    }

    RejectedCandidate rejected_record(int round, const Cell& c) {
        RejectedCandidate r;
        r.round = round;
        r.point = c.best_point;
        r.parent_nu = c.nu;
        r.parent_gamma = c.gamma;
        auto [left, right] = split(c, c.best_point);
        r.left_nu = left.nu;
        r.left_gamma = left.gamma;
        r.right_nu = right.nu;
        r.right_gamma = right.gamma;
        r.gain = left.contrib + right.contrib - c.contrib;
        return r;
    }

    MeasureSpec nu_;
    MeasureSpec gamma_;
    EngineConfig cfg_;
    bool cantor_ = false;
    std::vector<Rat> structural_;
    std::vector<Cell> cells_;
    std::vector<std::uint32_t> order_;
    std::map<Rat, CdfEntry> nu_cache_;
    std::map<Rat, CdfEntry> gamma_cache_;
};

} // namespace

std::pair<Partition, double> refine_round(const MeasureSpec& nu, const MeasureSpec& gamma,
                                          const Partition& pi, const EngineConfig& config,
                                          int round) {
    EngineState state(nu, gamma, pi, config, /*check_domination=*/true);
    auto res = state.step(round, config.split_mode);
    return {state.partition(), res.gain};
}

EngineOutput run(const MeasureSpec& nu, const MeasureSpec& mu, const EngineConfig& config,
                 const SimpleFunction* reference_density) {
    config.validate();
    MeasureSpec gamma = MeasureSpec::sum({mu, nu});
    EngineState state(nu, gamma, Partition::trivial(), config, /*check_domination=*/false);

    EngineOutput out;
    out.terminated_by = Termination::round_limit;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    auto snapshot = [&](int round) {
        Partition pi = state.partition();
        out.checkpoints.push_back({round, state.f_gamma_fn(pi), state.f_mu_fn(pi)});
    };
    auto reference_error = [&]() {
        if (!reference_density) return;
        Partition pi = state.partition();
        out.reference_l1.push_back(rat_to_double(
            l1_distance(state.f_mu_fn(pi), *reference_density, mu, config.cantor_tolerance)));
    };

    out.trace.rows.push_back({0, state.size(), state.functional(), Rat(0), elapsed()});
    if (config.checkpoint_stride > 0) snapshot(0);
    reference_error();

    int round = 1;
    for (; round <= config.max_rounds; ++round) {
        auto res = state.step(round, config.split_mode);
        if (res.best_rejected) out.trace.rejected.push_back(*res.best_rejected);
        if (res.applied == 0) {
            if (res.exhausted) {
                out.terminated_by = Termination::gain_below_tolerance;
                break;
            }
            continue; // candidate family still growing with the depth schedule
        }
        out.trace.rows.push_back(
            {round, state.size(), state.functional(), res.l1_increment, elapsed()});
        if (config.checkpoint_stride > 0 && round % config.checkpoint_stride == 0) snapshot(round);
        reference_error();
    }
    out.trace.terminated_by = out.terminated_by;

    Partition final_pi = state.partition();
    SimpleFunction fg = state.f_gamma_fn(final_pi);
    SimpleFunction fm = state.f_mu_fn(final_pi);
    const int final_round = out.trace.rows.back().round;
    if (out.checkpoints.empty() || out.checkpoints.back().round != final_round)
        out.checkpoints.push_back({final_round, fg, fm});
    state.export_masses(out.cell_nu, out.cell_gamma);
    out.final_partition = std::move(final_pi);
    out.f_gamma = std::move(fg);
    out.f_mu = std::move(fm);
    return out;
}

TraceReport verify_trace(const RefinementTrace& trace, double gain_tolerance) {
    TraceReport report;
    report.rounds = trace.rows.empty() ? 0 : trace.rows.size() - 1;
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        double drop = trace.rows[i - 1].a - trace.rows[i].a;
        report.max_decrease = std::max(report.max_decrease, drop);
        if (drop > 1e-12)
            fail(ErrorCode::monotonicity,
                 "functional decreased by " + std::to_string(drop) + " at round " +
                     std::to_string(trace.rows[i].round));
        if (trace.rows[i].cells <= trace.rows[i - 1].cells)
            fail(ErrorCode::monotonicity,
                 "cell count did not increase at round " + std::to_string(trace.rows[i].round));
    }
    for (const RejectedCandidate& r : trace.rejected) {
        ++report.rejected_checked;
        if (r.left_gamma > 0 && r.right_gamma > 0 &&
            r.left_nu * r.right_gamma == r.right_nu * r.left_gamma) {
            ++report.equality_candidates;
            // Jensen: equal child ratios force a zero gain.
            if (std::abs(r.gain) > gain_tolerance + 1e-15)
                fail(ErrorCode::monotonicity,
                     "zero-gain split with equal ratios reported gain " + std::to_string(r.gain));
        }
    }
    return report;
}

} // namespace rnderiv
