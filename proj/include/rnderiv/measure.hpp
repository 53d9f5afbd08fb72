#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rnderiv/interval_set.hpp"
#include "rnderiv/poly.hpp"
#include "rnderiv/rational.hpp"

namespace rnderiv {

// Result of a set-function evaluation. Atoms and densities are always exact;
// Cantor components are exact on triadic endpoints and otherwise carry an
// error bound controlled by the configured tolerance.
struct MassResult {
    Rat value;
    bool exact = true;
    Rat error_bound; // zero iff exact
};

enum class MassMode {
    bounded, // Cantor masses off the triadic grid get a bounded approximation
    exact,   // reject non-triadic endpoints when a Cantor component is present
};

inline const Rat& default_cantor_tolerance() {
    static const Rat tol = make_rat(1, 1000000000000000L); // 1e-15
    return tol;
}

// Finite positive Borel measure on [0,1) built from atoms, piecewise
// polynomial densities, scaled Cantor measures, sums and scalings. Immutable;
// copies share the underlying tree.
class MeasureSpec {
  public:
    enum class Kind { atoms, density, cantor, sum, scale };

    MeasureSpec() : MeasureSpec(zero()) {}

    static MeasureSpec atoms(std::vector<std::pair<Rat, Rat>> locations_and_weights);
    // breakpoints = 0 = b_0 < ... < b_k = 1; one polynomial per piece,
    // nonnegative on the closed piece (verified exactly).
    static MeasureSpec density(std::vector<Rat> breakpoints, std::vector<Poly> coefficients);
    static MeasureSpec cantor(Rat total_weight);
    static MeasureSpec sum(std::vector<MeasureSpec> parts);
    static MeasureSpec scale(Rat factor, MeasureSpec inner);

    static MeasureSpec lebesgue() { return density({Rat(0), Rat(1)}, {Poly{Rat(1)}}); }
    static MeasureSpec zero() { return atoms({}); }

    Kind kind() const;
    const std::vector<std::pair<Rat, Rat>>& atom_entries() const;
    const std::vector<Rat>& density_breakpoints() const;
    const std::vector<Poly>& density_coefficients() const;
    const Rat& cantor_weight() const;
    const std::vector<MeasureSpec>& children() const;
    const Rat& scale_factor() const;

    bool has_cantor() const;
    const Rat& total() const;

    // m([0, x)) for x in [0, 1].
    MassResult cdf(const Rat& x, MassMode mode = MassMode::bounded,
                   const Rat& cantor_tol = default_cantor_tolerance()) const;
    // Fast double-precision mirror used for candidate screening.
    double cdf_d(double x) const;

    MassResult mass(const IntervalSet& s, MassMode mode = MassMode::bounded,
                    const Rat& cantor_tol = default_cantor_tolerance()) const;

    // All atom locations (any weight) and interior density breakpoints in the
    // tree, sorted and deduplicated.
    std::vector<Rat> structural_points() const;

    // Structural points strictly inside `within`, plus dyadic points of level
    // <= depth and, when a Cantor component exists, triadic points of level
    // <= depth. Sorted, deduplicated.
    std::vector<Rat> candidate_points(const IntervalSet& within, int depth) const;

  private:
    struct Node;
    explicit MeasureSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

inline Rat total_mass(const MeasureSpec& m) { return m.total(); }

inline MassResult mass(const MeasureSpec& m, const IntervalSet& s,
                       MassMode mode = MassMode::bounded,
                       const Rat& cantor_tol = default_cantor_tolerance()) {
    return m.mass(s, mode, cantor_tol);
}

inline std::vector<Rat> candidate_points(const MeasureSpec& m, const IntervalSet& within,
                                         int depth) {
    return m.candidate_points(within, depth);
}

// Grid points k/base^level strictly inside (lo, hi), appended to out.
void append_grid_points(const Rat& lo, const Rat& hi, unsigned long base, unsigned long level,
                        std::vector<Rat>& out);

} // namespace rnderiv
