#include "rnderiv/simple_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rnderiv {

SimpleFunction::SimpleFunction(Partition partition, std::vector<Rat> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
    if (values_.size() != partition_.size())
        fail(ErrorCode::invalid_argument, "one value per partition cell required");
}

SimpleFunction SimpleFunction::constant(const Rat& value) {
    return SimpleFunction(Partition::trivial(), {value});
}

Rat SimpleFunction::max_abs() const {
    Rat m(0);
    for (const Rat& v : values_) m = std::max(m, rat_abs(v));
    return m;
}

IntervalSet SimpleFunction::superlevel_set(const Rat& k) const {
    IntervalSet out;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] >= k) out = out.unite(partition_.cell(i));
    return out;
}

CellLocator::CellLocator(const Partition& p) {
    for (std::size_t c = 0; c < p.size(); ++c)
        for (const Interval& piece : p.cell(c).pieces()) entries_.push_back({piece.lo, piece.hi, c});
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.lo < b.lo; });
}

std::size_t CellLocator::locate(const Rat& x) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), x,
                               [](const Rat& v, const Entry& e) { return v < e.lo; });
    if (it == entries_.begin()) fail(ErrorCode::internal, "point below partition range");
    --it;
    if (!(x < it->hi)) fail(ErrorCode::internal, "point not covered by partition");
    return it->cell;
}

void for_each_overlap(const Partition& a, const Partition& b,
                      const std::function<void(const Rat&, const Rat&, std::size_t, std::size_t)>& fn) {
    struct Tagged {
        Rat lo;
        Rat hi;
        std::size_t cell;
    };
    auto collect = [](const Partition& p) {
        std::vector<Tagged> out;
        for (std::size_t c = 0; c < p.size(); ++c)
            for (const Interval& piece : p.cell(c).pieces()) out.push_back({piece.lo, piece.hi, c});
        std::sort(out.begin(), out.end(), [](const Tagged& x, const Tagged& y) { return x.lo < y.lo; });
        return out;
    };
    std::vector<Tagged> pa = collect(a), pb = collect(b);
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        const Rat& lo = std::max(pa[i].lo, pb[j].lo);
        const Rat& hi = std::min(pa[i].hi, pb[j].hi);
        if (lo < hi) fn(lo, hi, pa[i].cell, pb[j].cell);
        if (pa[i].hi < pb[j].hi)
            ++i;
        else
            ++j;
    }
}

SimpleFunction f_pi(const MeasureSpec& nu, const MeasureSpec& base, const Partition& pi,
                    const Rat& cantor_tol) {
    std::vector<Rat> values;
    values.reserve(pi.size());
    for (const IntervalSet& cell : pi.cells()) {
        MassResult b = base.mass(cell, MassMode::bounded, cantor_tol);
        if (b.value > 0) {
            MassResult n = nu.mass(cell, MassMode::bounded, cantor_tol);
            // bounded Cantor masses may wobble outside [0, base] by their
            // error bound; the ratio is clamped where that is provable noise
            if (n.value < 0) n.value = 0;
            if (!(n.exact && b.exact) && n.value > b.value &&
                n.value - b.value <= n.error_bound + b.error_bound)
                n.value = b.value;
            values.push_back(n.value / b.value);
        } else {
            values.push_back(Rat(0));
        }
    }
    return SimpleFunction(pi, std::move(values));
}

Rat integrate(const SimpleFunction& phi, const MeasureSpec& m, const Rat& cantor_tol) {
    Rat acc(0);
    for (std::size_t i = 0; i < phi.partition().size(); ++i)
        acc += phi.value(i) * m.mass(phi.partition().cell(i), MassMode::bounded, cantor_tol).value;
    return acc;
}

Rat integrate_on_cell(const SimpleFunction& phi, std::size_t cell, const MeasureSpec& m,
                      const Rat& cantor_tol) {
    return phi.value(cell) * m.mass(phi.partition().cell(cell), MassMode::bounded, cantor_tol).value;
}

double exp_functional(const MeasureSpec& nu, const MeasureSpec& gamma, const Partition& pi,
                      const Rat& cantor_tol) {
    double acc = 0.0;
    for (const IntervalSet& cell : pi.cells()) {
        MassResult g = gamma.mass(cell, MassMode::bounded, cantor_tol);
        if (g.value <= 0) continue;
        MassResult n = nu.mass(cell, MassMode::bounded, cantor_tol);
        if (n.value > g.value + n.error_bound + g.error_bound)
            fail(ErrorCode::base_domination, "cell has nu mass " + rat_str(n.value) +
                                                 " above base mass " + rat_str(g.value));
        Rat h = n.value < 0 ? Rat(0) : Rat(n.value / g.value);
        if (h > 1) h = 1; // bracket noise on bounded Cantor masses only
        acc += std::exp(-rat_to_double(h)) * rat_to_double(g.value);
    }
    return acc;
}

SimpleFunction conditional_expectation(const SimpleFunction& f, const Partition& coarse,
                                       const MeasureSpec& m, const Rat& cantor_tol) {
    if (!is_refinement(coarse, f.partition()))
        fail(ErrorCode::not_a_refinement, "function partition does not refine the coarse one");
    std::vector<Rat> integrals(coarse.size(), Rat(0));
    for_each_overlap(f.partition(), coarse,
                     [&](const Rat& lo, const Rat& hi, std::size_t cf, std::size_t cc) {
                         Rat piece = m.mass(IntervalSet::interval(lo, hi), MassMode::bounded,
                                            cantor_tol)
                                         .value;
                         integrals[cc] += f.value(cf) * piece;
                     });
    std::vector<Rat> values(coarse.size(), Rat(0));
    for (std::size_t c = 0; c < coarse.size(); ++c) {
        Rat mb = m.mass(coarse.cell(c), MassMode::bounded, cantor_tol).value;
        if (mb > 0) values[c] = integrals[c] / mb;
    }
    return SimpleFunction(coarse, std::move(values));
}

Rat l2_inner(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
             const Rat& cantor_tol) {
    Rat acc(0);
    for_each_overlap(f.partition(), g.partition(),
                     [&](const Rat& lo, const Rat& hi, std::size_t cf, std::size_t cg) {
                         Rat piece = m.mass(IntervalSet::interval(lo, hi), MassMode::bounded,
                                            cantor_tol)
                                         .value;
                         if (piece != 0) acc += f.value(cf) * g.value(cg) * piece;
                     });
    return acc;
}

Rat l1_distance(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
                const Rat& cantor_tol) {
    Rat acc(0);
    for_each_overlap(f.partition(), g.partition(),
                     [&](const Rat& lo, const Rat& hi, std::size_t cf, std::size_t cg) {
                         Rat piece = m.mass(IntervalSet::interval(lo, hi), MassMode::bounded,
                                            cantor_tol)
                                         .value;
                         if (piece != 0) acc += rat_abs(f.value(cf) - g.value(cg)) * piece;
                     });
    return acc;
}

bool equal_ae(const SimpleFunction& f, const SimpleFunction& g, const MeasureSpec& m,
              const Rat& cantor_tol) {
    bool equal = true;
    for_each_overlap(f.partition(), g.partition(),
                     [&](const Rat& lo, const Rat& hi, std::size_t cf, std::size_t cg) {
                         if (!equal || f.value(cf) == g.value(cg)) return;
                         Rat piece = m.mass(IntervalSet::interval(lo, hi), MassMode::bounded,
                                            cantor_tol)
                                         .value;
                         if (piece > 0) equal = false;
                     });
    return equal;
}

SimpleFunction linear_combination(const std::vector<SimpleFunction>& fs,
                                  const std::vector<Rat>& coeffs) {
    if (fs.empty() || fs.size() != coeffs.size())
        fail(ErrorCode::invalid_argument, "linear combination needs matching functions and coefficients");
    Partition joint = fs.front().partition();
    for (std::size_t k = 1; k < fs.size(); ++k)
        joint = common_refinement(joint, fs[k].partition());
    std::vector<Rat> values(joint.size(), Rat(0));
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (coeffs[k] == 0) continue;
        CellLocator loc(fs[k].partition());
        for (std::size_t c = 0; c < joint.size(); ++c)
            values[c] += coeffs[k] * fs[k].value(loc.locate(joint.cell(c).leftmost()));
    }
    return SimpleFunction(std::move(joint), std::move(values));
}

} // namespace rnderiv
