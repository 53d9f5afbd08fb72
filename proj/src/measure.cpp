#include "rnderiv/measure.hpp"

#include <algorithm>
#include <set>

namespace rnderiv {

struct MeasureSpec::Node {
    Kind kind;

    std::vector<std::pair<Rat, Rat>> atoms; // sorted by location
    std::vector<Rat> breaks;
    std::vector<Poly> coeffs;
    Rat cantor_weight;
    std::vector<MeasureSpec> children; // sum parts, or the single scale inner
    Rat scale_factor;

    Rat total;
    bool has_cantor = false;

    // double mirrors for screening
    std::vector<std::pair<double, double>> atoms_d;
    std::vector<double> breaks_d;
    std::vector<std::vector<double>> coeffs_d;
    double cantor_weight_d = 0.0;
    double scale_factor_d = 0.0;
};

namespace {

bool is_triadic(const Rat& x) {
    Int d = x.get_den();
    while (mpz_divisible_ui_p(d.get_mpz_t(), 3)) mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), 3);
    return d == 1;
}

// C(x) for the standard Cantor function, by triadic descent. Exact whenever
// the descent terminates (triadic points and middle-third plateaus); else the
// midpoint of the remaining dyadic bracket, with bound <= tol.
MassResult cantor_cdf(const Rat& x, MassMode mode, const Rat& tol) {
    if (x <= 0) return {Rat(0), true, Rat(0)};
    if (x >= 1) return {Rat(1), true, Rat(0)};
    if (mode == MassMode::exact && !is_triadic(x))
        fail(ErrorCode::non_triadic_endpoint,
             "exact Cantor mass requested at non-triadic endpoint " + rat_str(x));

    // Work on the integer pair (p, q) with y = p/q; the accumulated value is
    // bits/2^steps. Keeps the descent free of per-step rational reductions.
    Int p = x.get_num(), q = x.get_den();
    Int bits(0), three_p;
    unsigned long steps = 0;
    // bounded mode stops once the bracket 2^-(steps+1) drops below tol
    unsigned long max_steps = ~0ul;
    if (mode == MassMode::bounded) {
        Int inv;
        mpz_cdiv_q(inv.get_mpz_t(), tol.get_den().get_mpz_t(), tol.get_num().get_mpz_t());
        max_steps = mpz_sizeinbase(inv.get_mpz_t(), 2);
    }
    while (true) {
        if (p == 0) return {make_rat(bits, Int(1) << steps), true, Rat(0)};
        if (p == q) return {make_rat(bits + 1, Int(1) << steps), true, Rat(0)};
        three_p = p * 3;
        if (three_p >= q && three_p <= q * 2) // plateau [1/3, 2/3] -> 1/2
            return {make_rat(bits * 2 + 1, Int(2) << steps), true, Rat(0)};
        if (steps + 1 >= max_steps) break;
        bits <<= 1;
        ++steps;
        if (three_p < q) {
            p = three_p;
        } else {
            bits += 1;
            p = three_p - q * 2;
        }
    }
    // midpoint of [bits, bits+1] / 2^steps with half-bracket error bound
    return {make_rat(bits * 2 + 1, Int(2) << steps), false, make_rat(Int(1), Int(2) << steps)};
}

double cantor_cdf_d(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double acc = 0.0, width = 1.0;
    for (int i = 0; i < 46; ++i) {
        if (x >= 1.0 / 3.0 && x <= 2.0 / 3.0) return acc + width / 2;
        if (x < 1.0 / 3.0) {
            width /= 2;
            x *= 3;
        } else {
            acc += width / 2;
            width /= 2;
            x = x * 3 - 2;
        }
        if (x <= 0) return acc;
        if (x >= 1) return acc + width;
    }
    return acc + width / 2;
}

void accumulate(MassResult& into, const MassResult& part) {
    into.value += part.value;
    if (!part.exact) {
        into.exact = false;
        into.error_bound += part.error_bound;
    }
}

} // namespace

MeasureSpec MeasureSpec::atoms(std::vector<std::pair<Rat, Rat>> locations_and_weights) {
    std::sort(locations_and_weights.begin(), locations_and_weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto node = std::make_shared<Node>();
    node->kind = Kind::atoms;
    node->total = 0;
    for (size_t i = 0; i < locations_and_weights.size(); ++i) {
        const auto& [loc, wt] = locations_and_weights[i];
        if (loc < 0 || loc >= 1)
            fail(ErrorCode::invalid_argument, "atom location " + rat_str(loc) + " outside [0,1)");
        if (wt < 0)
            fail(ErrorCode::invalid_argument, "atom weight " + rat_str(wt) + " is negative");
        if (i > 0 && loc == locations_and_weights[i - 1].first)
            fail(ErrorCode::invalid_argument, "duplicate atom location " + rat_str(loc));
        node->total += wt;
        node->atoms_d.emplace_back(rat_to_double(loc), rat_to_double(wt));
    }
    node->atoms = std::move(locations_and_weights);
    return MeasureSpec(std::move(node));
}

MeasureSpec MeasureSpec::density(std::vector<Rat> breakpoints, std::vector<Poly> coefficients) {
    if (breakpoints.size() < 2 || breakpoints.front() != 0 || breakpoints.back() != 1)
        fail(ErrorCode::invalid_argument, "density breakpoints must run from 0 to 1");
    for (size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            fail(ErrorCode::invalid_argument, "density breakpoints not strictly increasing");
    if (coefficients.size() != breakpoints.size() - 1)
        fail(ErrorCode::invalid_argument, "density needs one coefficient list per piece");
    auto node = std::make_shared<Node>();
    node->kind = Kind::density;
    node->total = 0;
    for (size_t i = 0; i < coefficients.size(); ++i) {
        if (!poly_nonnegative_on(coefficients[i], breakpoints[i], breakpoints[i + 1]))
            fail(ErrorCode::invalid_argument,
                 "density polynomial on piece " + std::to_string(i) + " takes negative values");
        node->total += poly_integral(coefficients[i], breakpoints[i], breakpoints[i + 1]);
        std::vector<double> cd;
        for (const Rat& c : coefficients[i]) cd.push_back(rat_to_double(c));
        node->coeffs_d.push_back(std::move(cd));
    }
    for (const Rat& b : breakpoints) node->breaks_d.push_back(rat_to_double(b));
    node->breaks = std::move(breakpoints);
    node->coeffs = std::move(coefficients);
    return MeasureSpec(std::move(node));
}

MeasureSpec MeasureSpec::cantor(Rat total_weight) {
    if (total_weight < 0) fail(ErrorCode::invalid_argument, "cantor weight is negative");
    auto node = std::make_shared<Node>();
    node->kind = Kind::cantor;
    node->total = total_weight;
    node->has_cantor = total_weight > 0;
    node->cantor_weight_d = rat_to_double(total_weight);
    node->cantor_weight = std::move(total_weight);
    return MeasureSpec(std::move(node));
}

MeasureSpec MeasureSpec::sum(std::vector<MeasureSpec> parts) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::sum;
    node->total = 0;
    for (const MeasureSpec& p : parts) {
        node->total += p.total();
        node->has_cantor = node->has_cantor || p.has_cantor();
    }
    node->children = std::move(parts);
    return MeasureSpec(std::move(node));
}

MeasureSpec MeasureSpec::scale(Rat factor, MeasureSpec inner) {
    if (factor < 0) fail(ErrorCode::invalid_argument, "scale factor is negative");
    auto node = std::make_shared<Node>();
    node->kind = Kind::scale;
    node->total = factor * inner.total();
    node->has_cantor = factor > 0 && inner.has_cantor();
    node->scale_factor_d = rat_to_double(factor);
    node->scale_factor = std::move(factor);
    node->children.push_back(std::move(inner));
    return MeasureSpec(std::move(node));
}

MeasureSpec::Kind MeasureSpec::kind() const { return node_->kind; }
const std::vector<std::pair<Rat, Rat>>& MeasureSpec::atom_entries() const { return node_->atoms; }
const std::vector<Rat>& MeasureSpec::density_breakpoints() const { return node_->breaks; }
const std::vector<Poly>& MeasureSpec::density_coefficients() const { return node_->coeffs; }
const Rat& MeasureSpec::cantor_weight() const { return node_->cantor_weight; }
const std::vector<MeasureSpec>& MeasureSpec::children() const { return node_->children; }
const Rat& MeasureSpec::scale_factor() const { return node_->scale_factor; }
bool MeasureSpec::has_cantor() const { return node_->has_cantor; }
const Rat& MeasureSpec::total() const { return node_->total; }

MassResult MeasureSpec::cdf(const Rat& x, MassMode mode, const Rat& cantor_tol) const {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::atoms: {
        MassResult r{Rat(0), true, Rat(0)};
        for (const auto& [loc, wt] : n.atoms) {
            if (loc >= x) break; // [0, x) excludes the right endpoint
            r.value += wt;
        }
        return r;
    }
    case Kind::density: {
        MassResult r{Rat(0), true, Rat(0)};
        for (size_t i = 0; i + 1 < n.breaks.size(); ++i) {
            if (x <= n.breaks[i]) break;
            const Rat& hi = x < n.breaks[i + 1] ? x : n.breaks[i + 1];
            r.value += poly_integral(n.coeffs[i], n.breaks[i], hi);
        }
        return r;
    }
    case Kind::cantor: {
        if (n.cantor_weight == 0) return {Rat(0), true, Rat(0)};
        MassResult c = cantor_cdf(x, mode, cantor_tol);
        c.value *= n.cantor_weight;
        c.error_bound *= n.cantor_weight;
        return c;
    }
    case Kind::sum: {
        MassResult r{Rat(0), true, Rat(0)};
        for (const MeasureSpec& child : n.children)
            accumulate(r, child.cdf(x, mode, cantor_tol));
        return r;
    }
    case Kind::scale: {
        MassResult r = n.children.front().cdf(x, mode, cantor_tol);
        r.value *= n.scale_factor;
        r.error_bound *= n.scale_factor;
        return r;
    }
    }
    fail(ErrorCode::internal, "unreachable measure kind");
}

double MeasureSpec::cdf_d(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::atoms: {
        double acc = 0;
        for (const auto& [loc, wt] : n.atoms_d) {
            if (loc >= x) break;
            acc += wt;
        }
        return acc;
    }
    case Kind::density: {
        double acc = 0;
        for (size_t i = 0; i + 1 < n.breaks_d.size(); ++i) {
            if (x <= n.breaks_d[i]) break;
            double hi = std::min(x, n.breaks_d[i + 1]);
            // antiderivative difference in doubles
            const std::vector<double>& c = n.coeffs_d[i];
            double fa = 0, fb = 0, pa = n.breaks_d[i], pb = hi;
            double xa = pa, xb = pb;
            for (size_t j = 0; j < c.size(); ++j) {
                fa += c[j] / double(j + 1) * xa;
                fb += c[j] / double(j + 1) * xb;
                xa *= pa;
                xb *= pb;
            }
            acc += fb - fa;
        }
        return acc;
    }
    case Kind::cantor:
        return n.cantor_weight_d == 0 ? 0.0 : n.cantor_weight_d * cantor_cdf_d(x);
    case Kind::sum: {
        double acc = 0;
        for (const MeasureSpec& child : n.children) acc += child.cdf_d(x);
        return acc;
    }
    case Kind::scale:
        return n.scale_factor_d * n.children.front().cdf_d(x);
    }
    return 0.0;
}

MassResult MeasureSpec::mass(const IntervalSet& s, MassMode mode, const Rat& cantor_tol) const {
    if (!IntervalSet::is_canonical(s.pieces()))
        fail(ErrorCode::invalid_argument, "mass of a non-canonical interval set");
    MassResult r{Rat(0), true, Rat(0)};
    for (const Interval& p : s.pieces()) {
        MassResult hi = cdf(p.hi, mode, cantor_tol);
        MassResult lo = cdf(p.lo, mode, cantor_tol);
        MassResult piece{hi.value - lo.value, hi.exact && lo.exact,
                         hi.error_bound + lo.error_bound};
        if (!piece.exact && piece.value < 0) piece.value = 0; // bracket noise only
        accumulate(r, piece);
    }
    return r;
}

std::vector<Rat> MeasureSpec::structural_points() const {
    std::set<Rat> pts;
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::atoms:
        for (const auto& [loc, wt] : n.atoms) pts.insert(loc);
        break;
    case Kind::density:
        for (size_t i = 1; i + 1 < n.breaks.size(); ++i) pts.insert(n.breaks[i]);
        break;
    case Kind::cantor:
        break;
    case Kind::sum:
    case Kind::scale:
        for (const MeasureSpec& child : n.children)
            for (Rat& p : child.structural_points()) pts.insert(std::move(p));
        break;
    }
    return {pts.begin(), pts.end()};
}

void append_grid_points(const Rat& lo, const Rat& hi, unsigned long base, unsigned long level,
                        std::vector<Rat>& out) {
    Int k = scaled_floor(lo, base, level) + 1;
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), base, level);
    for (; true; ++k) {
        Rat pt = make_rat(k, scale);
        if (!(pt < hi)) break;
        if (pt > lo) out.push_back(pt);
    }
}

std::vector<Rat> MeasureSpec::candidate_points(const IntervalSet& within, int depth) const {
    if (depth < 0) fail(ErrorCode::invalid_argument, "candidate depth must be >= 0");
    std::set<Rat> pts;
    for (const Rat& p : structural_points())
        if (within.strictly_inside(p)) pts.insert(p);
    for (const Interval& piece : within.pieces()) {
        std::vector<Rat> grid;
        append_grid_points(piece.lo, piece.hi, 2, static_cast<unsigned long>(depth), grid);
        if (has_cantor())
            append_grid_points(piece.lo, piece.hi, 3, static_cast<unsigned long>(depth), grid);
        for (Rat& g : grid) pts.insert(std::move(g));
    }
    return {pts.begin(), pts.end()};
}

} // namespace rnderiv
