#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rnderiv/measure.hpp"
#include "rnderiv/partition.hpp"
#include "rnderiv/simple_function.hpp"

namespace rnderiv {

struct EngineConfig {
    enum class SplitMode { best_only, all_improving };

    int max_rounds = 40;
    double gain_tolerance = 1e-12;
    SplitMode split_mode = SplitMode::best_only;
    // Candidate depth schedule: depth(round) = round + depth_offset, unless an
    // explicit schedule is installed.
    int depth_offset = 0;
    std::function<int(int)> depth_schedule;
    // Grid candidates per cell span the first interior level up to this many
    // levels deeper (capped by the schedule). Keeps rounds polynomial; the
    // schedule still makes the family asymptotically dense as cells shrink.
    int candidate_margin = 1;
    Rat cantor_tolerance = default_cantor_tolerance();
    // 0 keeps only the final snapshot; s > 0 snapshots every s rounds.
    int checkpoint_stride = 0;

    int depth_for_round(int round) const {
        return depth_schedule ? depth_schedule(round) : round + depth_offset;
    }
    void validate() const;
};

enum class Termination { gain_below_tolerance, round_limit };

struct TraceRow {
    int round = 0; // row 0 records the initial partition
    std::size_t cells = 0;
    double a = 0.0;       // exponential functional value
    Rat l1_increment;     // L1(gamma) distance to the previous round's density
    double seconds = 0.0; // cumulative wall time
};

// Best candidate that fell below the gain tolerance in its round, with exact
// masses, so trace audits can re-check the Jensen equality case.
struct RejectedCandidate {
    int round = 0;
    Rat point;
    Rat parent_nu, parent_gamma;
    Rat left_nu, left_gamma;
    Rat right_nu, right_gamma;
    double gain = 0.0;
};

struct RefinementTrace {
    std::vector<TraceRow> rows;
    std::vector<RejectedCandidate> rejected;
    Termination terminated_by = Termination::round_limit;
};

struct Checkpoint {
    int round = 0;
    SimpleFunction f_gamma;
    SimpleFunction f_mu;
};

struct EngineOutput {
    Partition final_partition;
    SimpleFunction f_gamma;
    SimpleFunction f_mu;
    // Exact cached masses of the final cells, aligned with final_partition.
    std::vector<Rat> cell_nu;
    std::vector<Rat> cell_gamma;
    RefinementTrace trace;
    Termination terminated_by = Termination::round_limit;
    std::vector<Checkpoint> checkpoints;
    // Per round, L1(mu) distance of f_mu to the reference density, when one
    // was supplied.
    std::vector<double> reference_l1;
};

// One refinement pass over an explicit partition: evaluates candidate gains
// for every cell at the scheduled depth and applies the best split (or the
// best improving split of every cell in all_improving mode). Deterministic;
// ties resolve to the leftmost cell and smallest point.
std::pair<Partition, double> refine_round(const MeasureSpec& nu, const MeasureSpec& gamma,
                                          const Partition& pi, const EngineConfig& config,
                                          int round = 1);

// Full pipeline of the partition-selection rule: gamma is formed structurally
// as mu + nu, rounds run until the gain drops below tolerance or the round
// budget is spent.
EngineOutput run(const MeasureSpec& nu, const MeasureSpec& mu, const EngineConfig& config,
                 const SimpleFunction* reference_density = nullptr);

struct TraceReport {
    std::size_t rounds = 0;
    std::size_t rejected_checked = 0;
    std::size_t equality_candidates = 0; // rejected splits with exactly equal ratios
    double max_decrease = 0.0;           // worst observed a_n drop (should be ~0)
};

// Audits a trace: the functional must be nondecreasing within 1e-12 slack and
// cell counts strictly increasing; recorded rejected candidates whose child
// ratios are exactly equal must show gain below tolerance. Throws
// ErrorCode::monotonicity on violation.
TraceReport verify_trace(const RefinementTrace& trace, double gain_tolerance = 1e-12);

} // namespace rnderiv
