#include "dioman/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "dioman/errors.hpp"

namespace dioman {

RationalPoint::RationalPoint(std::vector<Int> p_, Int q_) : p(std::move(p_)), q(q_) {
    if (q < 1) throw DomainError("RationalPoint: q must be >= 1");
}

Rat rat_of(Int n, Int d) {
    if (d == 0) throw DomainError("rat_of: zero denominator");
    Rat r(static_cast<long>(n), static_cast<long>(d));
    r.canonicalize();
    return r;
}

Rat rat_pow(const Rat& x, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long ue = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    if (inv && x == 0) throw DomainError("rat_pow: 0 to a negative power");
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), ue);
    mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), ue);
    r.canonicalize();  // sign normalization only; num/den were coprime
    if (inv) r = 1 / r;
    return r;
}

BigInt rat_floor(const Rat& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

BigInt rat_ceil(const Rat& x) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

BigInt rat_round_half_even(const Rat& x) {
    BigInt f = rat_floor(x);
    Rat frac = x - Rat(f);
    int c = cmp(frac, Rat(1, 2));
    if (c < 0) return f;
    if (c > 0) return f + 1;
    // tie: pick the even neighbour
    return mpz_even_p(f.get_mpz_t()) ? f : f + 1;
}

Rat rat_dist_to_nearest(const Rat& x) {
    Rat frac = x - Rat(rat_floor(x));
    Rat other = 1 - frac;
    return frac < other ? frac : other;
}

double to_double(const Rat& x) {
    // mpq_get_d truncates; rounding num/den separately prints nicer values
    // for small fractions (2/5 -> 0.4, not 0.3999...7) at the same accuracy
    return x.get_num().get_d() / x.get_den().get_d();
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("rat_from_double: non-finite value");
    Rat r(x);  // mpq_set_d is exact
    r.canonicalize();
    return r;
}

std::optional<Rat> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        if (a.empty() || b.empty()) return std::nullopt;
        try {
            // explicit base 10: the default parser treats leading zeros as octal
            Rat r{BigInt(a, 10), BigInt(b, 10)};
            if (r.get_den() == 0) return std::nullopt;
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
    // [sign] digits [. digits] [e [sign] digits]
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    std::string int_part, frac_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part += s[i++];
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            eneg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) return std::nullopt;
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            if (v > 100000) return std::nullopt;
            ++i;
        }
        exp10 = eneg ? -v : v;
    }
    if (i != s.size()) return std::nullopt;
    if (int_part.empty() && frac_part.empty()) return std::nullopt;

    BigInt digits(int_part.empty() ? std::string("0") + frac_part
                                   : (frac_part.empty() ? int_part : int_part + frac_part),
                  10);
    long shift = exp10 - static_cast<long>(frac_part.size());
    Rat r(digits);
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    if (shift >= 0)
        r *= Rat(p10);
    else
        r /= Rat(p10);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

std::string format_rat(const Rat& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Int to_int_checked(const BigInt& x) {
    if (!x.fits_slong_p()) throw DomainError("integer too large for Int");
    return static_cast<Int>(x.get_si());
}

}  // namespace dioman
