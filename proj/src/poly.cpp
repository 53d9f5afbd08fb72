#include "rnderiv/poly.hpp"

#include <algorithm>

namespace rnderiv {

namespace {

Poly trimmed(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; } // -1 for zero poly

// Remainder of a by b (b nonzero, both trimmed).
Poly poly_rem(Poly a, const Poly& b) {
    while (degree(a) >= degree(b)) {
        Rat factor = a.back() / b.back();
        int shift = degree(a) - degree(b);
        for (int i = 0; i <= degree(b); ++i) a[i + shift] -= factor * b[i];
        a = trimmed(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b) {
    a = trimmed(std::move(a));
    b = trimmed(std::move(b));
    while (!b.empty()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (Rat& c : a) c /= lead;
    }
    return a;
}

Poly poly_div_exact(const Poly& a, const Poly& b) {
    Poly rem = trimmed(a);
    Poly quo(rem.size(), Rat(0));
    while (degree(rem) >= degree(b)) {
        Rat factor = rem.back() / b.back();
        int shift = degree(rem) - degree(b);
        quo[shift] = factor;
        for (int i = 0; i <= degree(b); ++i) rem[i + shift] -= factor * b[i];
        rem = trimmed(std::move(rem));
        if (rem.empty()) break;
    }
    return trimmed(std::move(quo));
}

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(trimmed(p));
    Poly d = trimmed(poly_derivative(p));
    if (!d.empty()) chain.push_back(d);
    while (chain.back().size() > 1) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (Rat& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<Poly>& chain, const Rat& x) {
    int variations = 0, last = 0;
    for (const Poly& q : chain) {
        Rat v = poly_eval(q, x);
        int s = sgn(v);
        if (s != 0) {
            if (last != 0 && s != last) ++variations;
            last = s;
        }
    }
    return variations;
}

// Number of distinct roots in (lo, hi]; requires p(lo) != 0.
int roots_in(const std::vector<Poly>& chain, const Rat& lo, const Rat& hi) {
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

// A point in (lo, hi) that is not a root of q.
Rat off_root_point(const Poly& q, const Rat& lo, const Rat& hi) {
    for (long k = 1;; ++k) {
        Rat t = lo + (hi - lo) * make_rat(k, 2 * k + 1);
        if (poly_eval(q, t) != 0) return t;
    }
}

// Isolating intervals (l, r) with exactly one root each, q(l) != 0, q(r) != 0.
void isolate_roots(const Poly& q, const std::vector<Poly>& chain, const Rat& lo, const Rat& hi,
                   int count, std::vector<std::pair<Rat, Rat>>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.emplace_back(lo, hi);
        return;
    }
    Rat mid = off_root_point(q, lo, hi);
    int left = roots_in(chain, lo, mid);
    isolate_roots(q, chain, lo, mid, left, out);
    isolate_roots(q, chain, mid, hi, count - left, out);
}

} // namespace

Rat poly_eval(const Poly& p, const Rat& x) {
    Rat acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double poly_eval_d(const Poly& p, double x) {
    double acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + rat_to_double(*it);
    return acc;
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
    return d;
}

Rat poly_integral(const Poly& p, const Rat& a, const Rat& b) {
    Rat fa(0), fb(0);
    for (size_t i = 0; i < p.size(); ++i) {
        Rat c = p[i] / Rat(static_cast<long>(i + 1));
        fa = fa + c * pow_rat(a, static_cast<unsigned long>(i + 1));
        fb = fb + c * pow_rat(b, static_cast<unsigned long>(i + 1));
    }
    return fb - fa;
}

bool poly_is_zero(const Poly& p) {
    return std::all_of(p.begin(), p.end(), [](const Rat& c) { return c == 0; });
}

bool poly_nonnegative_on(const Poly& p, const Rat& a, const Rat& b) {
    Poly t = trimmed(p);
    if (t.empty()) return true;
    if (poly_eval(t, a) < 0 || poly_eval(t, b) < 0) return false;
    if (t.size() == 1) return t[0] >= 0;

    // Square-free part carries the root set with multiplicity one.
    Poly q = poly_div_exact(t, poly_gcd(t, poly_derivative(t)));
    // Shave endpoint roots so the Sturm count below applies to (a, b).
    while (poly_eval(q, a) == 0) q = poly_div_exact(q, Poly{-a, Rat(1)});
    while (poly_eval(q, b) == 0) q = poly_div_exact(q, Poly{-b, Rat(1)});
    // roots only at the endpoints: the sign inside is settled by one sample
    if (q.size() <= 1) return !(poly_eval(t, (a + b) / 2) < 0);

    std::vector<Poly> chain = sturm_chain(q);
    int count = roots_in(chain, a, b);
    std::vector<std::pair<Rat, Rat>> boxes;
    isolate_roots(q, chain, a, b, count, boxes);

    // Sign of p is constant on each gap between consecutive roots. Box
    // endpoints sample every gap except when there are no interior roots at
    // all, where one interior sample settles the sign (the endpoints may be
    // roots themselves, e.g. -x^2 (x-1)^2 on [0,1]).
    if (boxes.empty()) return !(poly_eval(t, (a + b) / 2) < 0);
    for (const auto& [l, r] : boxes) {
        if (poly_eval(t, l) < 0 || poly_eval(t, r) < 0) return false;
    }
    return true;
}

} // namespace rnderiv
