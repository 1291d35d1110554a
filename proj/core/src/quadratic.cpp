#include "dioman/quadratic.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "dioman/errors.hpp"

namespace dioman {

namespace {

// Largest s with s*s <= n.
long isqrt_long(long n) {
    if (n < 0) throw DomainError("isqrt of negative");
    long s = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

void require_compatible(long D1, long D2) {
    if (D1 != 0 && D2 != 0 && D1 != D2)
        throw DomainError("QuadExt: incompatible extensions sqrt(" + std::to_string(D1) +
                          ") and sqrt(" + std::to_string(D2) + ")");
}

}  // namespace

QuadExt::QuadExt(Rat a, Rat b, long D) : a_(std::move(a)), b_(std::move(b)), D_(D) {
    if (D < 0) throw DomainError("QuadExt: negative radicand");
    if (b_ == 0 || D_ == 0) {
        b_ = 0;
        D_ = 0;
        return;
    }
    long s = isqrt_long(D_);
    if (s * s == D_) {  // fold perfect squares into the rational part
        a_ += b_ * Rat(s);
        b_ = 0;
        D_ = 0;
    }
}

QuadExt QuadExt::golden() { return QuadExt(Rat(-1, 2), Rat(1, 2), 5); }
QuadExt QuadExt::sqrt2_minus_1() { return QuadExt(Rat(-1), Rat(1), 2); }
QuadExt QuadExt::sqrt_of(long N) { return QuadExt(Rat(0), Rat(1), N); }

const Rat& QuadExt::rational_value() const {
    if (!is_rational()) throw DomainError("QuadExt: not a rational value");
    return a_;
}

int QuadExt::sign() const {
    if (D_ == 0) return sgn(a_);
    int sa = sgn(a_), sb = sgn(b_);
    if (sa == 0) return sb;
    if (sb == 0) return sa;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against b^2 * D; equality is impossible
    // because sqrt(D) is irrational here
    Rat lhs = a_ * a_;
    Rat rhs = b_ * b_ * Rat(D_);
    return lhs > rhs ? sa : sb;
}

QuadExt QuadExt::operator-() const {
    QuadExt r;
    r.a_ = -a_;
    r.b_ = -b_;
    r.D_ = D_;
    return r;
}

QuadExt QuadExt::operator+(const QuadExt& o) const {
    require_compatible(D_, o.D_);
    QuadExt r;
    r.a_ = a_ + o.a_;
    r.b_ = b_ + o.b_;
    r.D_ = D_ != 0 ? D_ : o.D_;
    if (r.b_ == 0) r.D_ = 0;
    return r;
}

QuadExt QuadExt::operator-(const QuadExt& o) const { return *this + (-o); }

QuadExt QuadExt::operator*(const QuadExt& o) const {
    require_compatible(D_, o.D_);
    long D = D_ != 0 ? D_ : o.D_;
    QuadExt r;
    r.a_ = a_ * o.a_ + b_ * o.b_ * Rat(D);
    r.b_ = a_ * o.b_ + b_ * o.a_;
    r.D_ = D;
    if (r.b_ == 0) r.D_ = 0;
    return r;
}

QuadExt QuadExt::pow_ui(unsigned long e) const {
    QuadExt acc(Rat(1));
    QuadExt base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

double QuadExt::to_double() const {
    double v = a_.get_d();
    if (D_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(D_));
    return v;
}

BigInt QuadExt::floor() const {
    if (D_ == 0) return rat_floor(a_);
    long double g = static_cast<long double>(a_.get_d()) +
                    static_cast<long double>(b_.get_d()) * sqrtl(static_cast<long double>(D_));
    BigInt n(static_cast<long>(floorl(g)));
    // correct the double guess exactly; at most a couple of steps
    while (cmp(Rat(n)) < 0) --n;
    while (cmp(Rat(n + 1)) >= 0) ++n;
    return n;
}

BigInt QuadExt::nearest_int() const {
    BigInt f = floor();
    QuadExt frac = *this - QuadExt(Rat(f));
    int c = frac.cmp(Rat(1, 2));
    if (c < 0) return f;
    if (c > 0) return f + 1;
    return mpz_even_p(f.get_mpz_t()) ? f : f + 1;
}

QuadExt QuadExt::dist_to_nearest() const {
    BigInt f = floor();
    QuadExt frac = *this - QuadExt(Rat(f));
    QuadExt other = QuadExt(Rat(1)) - frac;
    return frac.cmp(other) <= 0 ? frac : other;
}

Rat QuadExt::approx(unsigned bits) const {
    if (D_ == 0) return a_;
    // sqrt(D) in [s/2^k, (s+1)/2^k] with s = floor(sqrt(D * 4^k));
    // widen k so that |b| * 2^-k <= 2^-bits
    double logb = std::log2(std::max(1.0, std::fabs(b_.get_d())));
    unsigned k = bits + static_cast<unsigned>(logb) + 2;
    BigInt scaled = BigInt(D_) << (2 * k);
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    Rat root(s, BigInt(1) << k);
    root.canonicalize();
    return a_ + b_ * root;
}

std::string QuadExt::str() const {
    if (D_ == 0) return format_rat(a_);
    std::ostringstream os;
    os << format_rat(a_) << "+" << format_rat(b_) << "*sqrt(" << D_ << ")";
    return os.str();
}

int cmp_abs_vs_rat_power(const QuadExt& x, const Rat& c, Int q, const Rat& tau) {
    if (q < 1) throw DomainError("cmp_abs_vs_rat_power: q must be >= 1");
    if (sgn(c) <= 0) throw DomainError("cmp_abs_vs_rat_power: coefficient must be positive");
    if (x.is_zero()) return -1;  // 0 < c q^-tau always

    // double prefilter
    double lx = std::fabs(x.to_double());
    double rhs = c.get_d() * std::pow(static_cast<double>(q), -tau.get_d());
    double scale = std::max(lx, rhs);
    if (scale > 0 && std::fabs(lx - rhs) > 1e-9 * scale) return lx < rhs ? -1 : 1;

    // exact: |x|^b * q^a  vs  c^b  with tau = a/b
    const BigInt& bden = tau.get_den();
    if (!bden.fits_ulong_p() || bden.get_ui() > 4096)
        throw DomainError("tau denominator too large for exact boundary decision");
    unsigned long b = bden.get_ui();
    if (!tau.get_num().fits_slong_p())
        throw DomainError("tau numerator too large for exact boundary decision");
    long a = tau.get_num().get_si();

    QuadExt lhs = x.abs().pow_ui(b) * QuadExt(rat_pow(Rat(static_cast<long>(q)), a));
    return lhs.cmp(rat_pow(c, static_cast<long>(b)));
}

namespace {
std::atomic<unsigned> g_max_precision_bits{256};
}

void set_max_precision_bits(unsigned bits) {
    g_max_precision_bits.store(std::max(64u, bits));
}

unsigned max_precision_bits() { return g_max_precision_bits.load(); }

int cmp_cross(const QuadExt& x, const QuadExt& y) {
    if (x.D() == 0 || y.D() == 0 || x.D() == y.D()) return (x - y).sign();
    const unsigned cap = max_precision_bits();
    for (unsigned bits = 64; bits <= cap; bits *= 2) {
        Rat rx = x.approx(bits), ry = y.approx(bits);
        Rat gap = Rat(2) / (BigInt(1) << bits);
        if (rx - ry > gap) return 1;
        if (ry - rx > gap) return -1;
    }
    return 0;
}

QuadExt parse_exact_scalar(const std::string& spec) {
    if (spec == "golden") return QuadExt::golden();
    if (spec == "sqrt2") return QuadExt::sqrt2_minus_1();
    auto r = parse_rational(spec);
    if (!r) throw DomainError("cannot parse scalar spec '" + spec + "'");
    return QuadExt(*r);
}

std::vector<QuadExt> parse_exact_vector(const std::string& spec) {
    std::vector<QuadExt> out;
    std::string cur;
    std::istringstream is(spec);
    while (std::getline(is, cur, ',')) out.push_back(parse_exact_scalar(cur));
    if (out.empty()) throw DomainError("empty vector spec");
    return out;
}

}  // namespace dioman
