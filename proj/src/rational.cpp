#include "rnderiv/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace rnderiv {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rat parse_rat(const std::string& text) {
    const auto bad = [&]() -> Rat {
        fail(ErrorCode::invalid_argument, "cannot parse rational '" + text + "'");
    };

    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) return bad();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_integer_token(num) || !is_integer_token(den)) return bad();
        return make_rat(Int(num, 10), Int(den, 10));
    }

    // decimal / scientific: mantissa [.digits] [e|E exp]
    std::string mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        std::string es = s.substr(e + 1);
        if (!is_integer_token(es)) return bad();
        exp10 = std::strtol(es.c_str(), nullptr, 10);
    }
    std::string digits = mant;
    if (auto dot = mant.find('.'); dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (!is_integer_token(digits)) return bad();

    Rat r{Int(digits, 10)};
    Int p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 >= 0)
        r *= Rat(p10);
    else
        r /= Rat(p10);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_to_double(const Rat& r) {
    const mpz_srcptr num = mpq_numref(r.get_mpq_t());
    const mpz_srcptr den = mpq_denref(r.get_mpq_t());
    // Operands up to 53 bits convert exactly; one IEEE division then rounds
    // to nearest.
    if (mpz_sizeinbase(num, 2) <= 53 && mpz_sizeinbase(den, 2) <= 53)
        return mpz_get_d(num) / mpz_get_d(den);
    double d = mpq_get_d(r.get_mpq_t()); // truncated toward zero
    if (!std::isfinite(d)) return d;
    // Nudge to the true nearest among d and its neighbours.
    double cands[3] = {d, std::nextafter(d, HUGE_VAL), std::nextafter(d, -HUGE_VAL)};
    double best = d;
    Rat best_err = rat_abs(r - rat_from_double(d));
    for (int i = 1; i < 3; ++i) {
        Rat err = rat_abs(r - rat_from_double(cands[i]));
        if (err < best_err) {
            best_err = err;
            best = cands[i];
        }
    }
    return best;
}

Rat rat_from_double(double x) {
    Rat r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

} // namespace rnderiv
