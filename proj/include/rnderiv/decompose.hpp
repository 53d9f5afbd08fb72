#pragma once

#include <optional>

#include "rnderiv/engine.hpp"

namespace rnderiv {

// Value of the map x -> x/(1-x); infinite exactly at x = 1.
struct ExtendedRat {
    bool infinite = false;
    Rat value; // meaningful when finite

    bool operator==(const ExtendedRat& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

// psi(x) = x/(1-x) on [0,1), psi(1) = infinity; strictly increasing, maps the
// gamma-density of nu to the mu-density of the absolutely continuous part.
ExtendedRat psi(const Rat& x);

struct DecomposeConfig {
    EngineConfig engine;
    // Cells with h = nu/gamma >= 1 - singular_threshold are flagged as
    // carrying singular mass. At finite resolution no cell reaches h = 1
    // unless mu vanishes exactly, so the threshold stands in for {g = inf}.
    Rat singular_threshold = make_rat(1, 1000000); // 1e-6
};

struct Decomposition {
    SimpleFunction density;   // approximation of d(nu^a)/d(mu) on the final partition
    Rat singular_mass;        // estimate of nu^s([0,1))
    IntervalSet singular_cells;
    Rat residual;             // |nu(total) - integral(density, mu) - singular_mass|
    EngineOutput engine;
};

// Runs the refinement engine on (nu, gamma = mu + nu) and post-processes the
// final partition: mu-null cells carry their full nu-mass as singular;
// threshold-flagged cells are zeroed in the density and routed to the
// singular estimate as well.
Decomposition decompose(const MeasureSpec& nu, const MeasureSpec& mu,
                        const DecomposeConfig& config,
                        const SimpleFunction* reference_density = nullptr);

// The density field of decompose (f_{pi_N}(mu) away from flagged cells).
SimpleFunction derivative(const MeasureSpec& nu, const MeasureSpec& mu,
                          const DecomposeConfig& config);

} // namespace rnderiv
