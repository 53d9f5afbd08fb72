#pragma once

#include <vector>

#include "rnderiv/rational.hpp"

namespace rnderiv {

// Dense polynomial with rational coefficients, ascending powers.
using Poly = std::vector<Rat>;

Rat poly_eval(const Poly& p, const Rat& x);
double poly_eval_d(const Poly& p, double x);
Poly poly_derivative(const Poly& p);

// Exact integral over [a, b] via the antiderivative.
Rat poly_integral(const Poly& p, const Rat& a, const Rat& b);

bool poly_is_zero(const Poly& p);

// Exact check that p >= 0 on all of [a, b]. Decided by Sturm root isolation
// of the square-free part plus sign samples between consecutive roots.
bool poly_nonnegative_on(const Poly& p, const Rat& a, const Rat& b);

} // namespace rnderiv
