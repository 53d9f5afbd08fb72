#include "rnderiv/decompose.hpp"

namespace rnderiv {

ExtendedRat psi(const Rat& x) {
    if (x < 0 || x > 1)
        fail(ErrorCode::domain, "psi defined on [0,1], got " + rat_str(x));
    if (x == 1) return {true, Rat(0)};
    return {false, x / (Rat(1) - x)};
}

Decomposition decompose(const MeasureSpec& nu, const MeasureSpec& mu,
                        const DecomposeConfig& config, const SimpleFunction* reference_density) {
    if (config.singular_threshold <= 0 || config.singular_threshold >= 1)
        fail(ErrorCode::invalid_argument, "singular threshold must lie in (0,1)");
    Decomposition out{SimpleFunction::constant(Rat(0)), Rat(0), IntervalSet(), Rat(0),
                      run(nu, mu, config.engine, reference_density)};
    const EngineOutput& eng = out.engine;
    const Partition& pi = eng.final_partition;
    const Rat flag_at = Rat(1) - config.singular_threshold;

    std::vector<Rat> density(pi.size(), Rat(0));
    Rat singular(0);
    std::vector<Interval> singular_pieces;
    Rat ac_integral(0);
    for (std::size_t i = 0; i < pi.size(); ++i) {
        const Rat& h = eng.f_gamma.value(i);
        const Rat& fm = eng.f_mu.value(i); // nu/mu on mu-positive cells, else 0
        const Rat& nu_cell = eng.cell_nu[i];
        const Rat mu_cell = eng.cell_gamma[i] - nu_cell;
        if ((mu_cell == 0 && nu_cell > 0) || h >= flag_at) {
            singular += nu_cell;
            const auto& pieces = pi.cell(i).pieces();
            singular_pieces.insert(singular_pieces.end(), pieces.begin(), pieces.end());
        } else if (mu_cell > 0) {
            density[i] = fm;
            ac_integral += fm * mu_cell;
        }
    }
    IntervalSet singular_cells = IntervalSet::from_pieces(std::move(singular_pieces));
    out.density = SimpleFunction(pi, std::move(density));
    out.singular_mass = std::move(singular);
    out.singular_cells = std::move(singular_cells);
    out.residual = rat_abs(nu.total() - ac_integral - out.singular_mass);
    return out;
}

SimpleFunction derivative(const MeasureSpec& nu, const MeasureSpec& mu,
                          const DecomposeConfig& config) {
    return decompose(nu, mu, config).density;
}

} // namespace rnderiv
