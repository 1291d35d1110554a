#include "dioman/manifold.hpp"

#include <cmath>
#include <sstream>

#include "dioman/errors.hpp"

namespace dioman {

BoxDomain::BoxDomain(std::vector<Rat> lo, std::vector<Rat> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) throw DomainError("BoxDomain: dimension mismatch");
    for (size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw DomainError("BoxDomain: need lower < upper");
}

BoxDomain BoxDomain::unit(int d) {
    return BoxDomain(std::vector<Rat>(d, Rat(0)), std::vector<Rat>(d, Rat(1)));
}

BoxDomain BoxDomain::symmetric(const Rat& half, int d) {
    return BoxDomain(std::vector<Rat>(d, -half), std::vector<Rat>(d, half));
}

bool BoxDomain::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim()) throw DomainError("BoxDomain: dimension mismatch");
    for (int i = 0; i < dim(); ++i)
        if (!(lower[i].get_d() < x[i] && x[i] < upper[i].get_d())) return false;
    return true;
}

bool BoxDomain::contains(const std::vector<QuadExt>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw DomainError("BoxDomain: dimension mismatch");
    for (int i = 0; i < dim(); ++i)
        if (!(x[i].cmp(lower[i]) > 0 && x[i].cmp(upper[i]) < 0)) return false;
    return true;
}

bool BoxDomain::contains_rational(std::span<const Int> p, Int q) const {
    if (static_cast<int>(p.size()) < dim()) throw DomainError("BoxDomain: dimension mismatch");
    if (q < 1) throw DomainError("BoxDomain: q must be >= 1");
    for (int i = 0; i < dim(); ++i) {
        Rat x = rat_of(p[i], q);
        if (!(lower[i] < x && x < upper[i])) return false;
    }
    return true;
}

double BoxDomain::inradius(std::span<const double> x) const {
    if (!contains(x)) throw DomainError("inradius: point outside the box");
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) {
        r = std::min(r, x[i] - lower[i].get_d());
        r = std::min(r, upper[i].get_d() - x[i]);
    }
    return r;
}

QuadExt BoxDomain::inradius(const std::vector<QuadExt>& x) const {
    if (!contains(x)) throw DomainError("inradius: point outside the box");
    QuadExt r;
    bool first = true;
    for (int i = 0; i < dim(); ++i) {
        QuadExt a = x[i] - QuadExt(lower[i]);
        QuadExt b = QuadExt(upper[i]) - x[i];
        QuadExt side = a.cmp(b) <= 0 ? a : b;
        if (first || side.cmp(r) < 0) r = side;
        first = false;
    }
    return r;
}

namespace {

std::vector<QuadExt> rational_point_coords(std::span<const Int> p, Int q, int d) {
    std::vector<QuadExt> x;
    x.reserve(d);
    for (int i = 0; i < d; ++i) x.emplace_back(rat_of(p[i], q));
    return x;
}

// default rational-point evaluation via the exact path
void attach_rational_eval(ManifoldChart& chart) {
    auto f_exact = chart.f_exact;
    int d = chart.d;
    chart.f_rational = [f_exact, d](std::span<const Int> p, Int q) {
        return f_exact(rational_point_coords(p, q, d));
    };
}

}  // namespace

ManifoldChart make_plane(std::vector<QuadExt> beta, int d, BoxDomain domain) {
    if (beta.empty()) throw DomainError("make_plane: empty beta");
    if (d < 1) throw DomainError("make_plane: d must be >= 1");
    if (domain.dim() != d) throw DomainError("make_plane: domain dimension mismatch");
    ManifoldChart c;
    c.d = d;
    c.m = static_cast<int>(beta.size());
    c.domain = std::move(domain);
    c.D_bound = Rat(0);
    c.C_bound = Rat(0);
    c.exact = true;
    c.verified = true;
    std::vector<double> beta_d;
    for (const auto& b : beta) beta_d.push_back(b.to_double());
    int m = c.m;
    c.f = [beta_d](std::span<const double>) { return beta_d; };
    c.grad = [m, d](std::span<const double>) {
        return std::vector<std::vector<double>>(m, std::vector<double>(d, 0.0));
    };
    c.f_exact = [beta](const std::vector<QuadExt>&) { return beta; };
    c.grad_exact = [m, d](const std::vector<QuadExt>&) {
        return std::vector<std::vector<QuadExt>>(m, std::vector<QuadExt>(d));
    };
    attach_rational_eval(c);
    std::ostringstream os;
    os << "plane:";
    for (size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << beta[i].str();
    c.spec = os.str();
    return c;
}

ManifoldChart make_parabola(BoxDomain domain) {
    if (domain.dim() != 1) throw DomainError("make_parabola: domain must be 1-dimensional");
    ManifoldChart c;
    c.d = 1;
    c.m = 1;
    Rat edge = std::max(abs(domain.lower[0]), abs(domain.upper[0]));
    c.domain = std::move(domain);
    c.D_bound = 2 * edge;
    c.C_bound = Rat(2);
    c.exact = true;
    c.verified = true;
    c.f = [](std::span<const double> a) { return std::vector<double>{a[0] * a[0]}; };
    c.grad = [](std::span<const double> a) {
        return std::vector<std::vector<double>>{{2 * a[0]}};
    };
    c.f_exact = [](const std::vector<QuadExt>& a) {
        return std::vector<QuadExt>{a[0] * a[0]};
    };
    c.grad_exact = [](const std::vector<QuadExt>& a) {
        return std::vector<std::vector<QuadExt>>{{QuadExt(Rat(2)) * a[0]}};
    };
    attach_rational_eval(c);
    c.spec = "parabola";
    return c;
}

ManifoldChart make_veronese(int n, BoxDomain domain) {
    if (n < 2) throw DomainError("make_veronese: n must be >= 2");
    if (domain.dim() != 1) throw DomainError("make_veronese: domain must be 1-dimensional");
    if (sgn(domain.lower[0]) < 0 || domain.upper[0] > 1)
        throw DomainError("make_veronese: domain must lie inside (0,1)");
    ManifoldChart c;
    c.d = 1;
    c.m = n - 1;
    const Rat hi = domain.upper[0];
    c.domain = std::move(domain);
    // sup over U of (j+1) a^j and j(j+1) a^(j-1), attained towards the upper edge
    Rat D(0), C(0);
    for (int j = 1; j <= c.m; ++j) {
        D = std::max(D, Rat(Rat(j + 1) * rat_pow(hi, j)));
        C = std::max(C, Rat(Rat(j) * Rat(j + 1) * rat_pow(hi, j - 1)));
    }
    c.D_bound = D;
    c.C_bound = C;
    c.exact = true;
    c.verified = true;
    int m = c.m;
    c.f = [m](std::span<const double> a) {
        std::vector<double> v(m);
        double acc = a[0];
        for (int j = 1; j <= m; ++j) {
            acc *= a[0];
            v[j - 1] = acc;  // a^(j+1)
        }
        return v;
    };
    c.grad = [m](std::span<const double> a) {
        std::vector<std::vector<double>> jac(m, std::vector<double>(1));
        double acc = 1;
        for (int j = 1; j <= m; ++j) {
            acc *= a[0];  // a^j
            jac[j - 1][0] = (j + 1) * acc;
        }
        return jac;
    };
    c.f_exact = [m](const std::vector<QuadExt>& a) {
        std::vector<QuadExt> v;
        QuadExt acc = a[0];
        for (int j = 1; j <= m; ++j) {
            acc = acc * a[0];
            v.push_back(acc);
        }
        return v;
    };
    c.grad_exact = [m](const std::vector<QuadExt>& a) {
        std::vector<std::vector<QuadExt>> jac;
        QuadExt acc(Rat(1));
        for (int j = 1; j <= m; ++j) {
            acc = acc * a[0];
            jac.push_back({QuadExt(Rat(j + 1)) * acc});
        }
        return jac;
    };
    attach_rational_eval(c);
    c.spec = "veronese:" + std::to_string(n);
    return c;
}

ManifoldChart make_sphere() {
    return make_sphere(BoxDomain::symmetric(Rat(1, 2), 2));
}

ManifoldChart make_sphere(BoxDomain domain) {
    if (domain.dim() != 2) throw DomainError("make_sphere: domain must be 2-dimensional");
    // the closure must avoid the equator so that D and C stay finite
    Rat r2(0);
    Rat amax(0);
    for (int i = 0; i < 2; ++i) {
        Rat edge = std::max(abs(domain.lower[i]), abs(domain.upper[i]));
        amax = std::max(amax, edge);
        r2 += edge * edge;
    }
    if (!(r2 < 1))
        throw DomainError("make_sphere: box closure must stay inside the unit disc");
    ManifoldChart c;
    c.d = 2;
    c.m = 1;
    c.domain = std::move(domain);
    // D = amax / sqrt(1-r2), C = 1/sqrt(1-r2) + amax^2/(1-r2)^(3/2);
    // stored as rational upper bounds with a 2^-40 relative inflation
    double w = 1.0 - r2.get_d();
    double Dd = amax.get_d() / std::sqrt(w);
    double Cd = 1.0 / std::sqrt(w) + amax.get_d() * amax.get_d() / std::pow(w, 1.5);
    const double inflate = 1.0 + std::ldexp(1.0, -40);
    c.D_bound = rat_from_double(Dd * inflate);
    c.C_bound = rat_from_double(Cd * inflate);
    c.exact = false;
    c.verified = true;
    c.f = [](std::span<const double> a) {
        return std::vector<double>{std::sqrt(1.0 - a[0] * a[0] - a[1] * a[1])};
    };
    c.grad = [](std::span<const double> a) {
        double w0 = std::sqrt(1.0 - a[0] * a[0] - a[1] * a[1]);
        return std::vector<std::vector<double>>{{-a[0] / w0, -a[1] / w0}};
    };
    // f(p/q) = sqrt(q^2 - p1^2 - p2^2) / q exactly
    c.f_rational = [](std::span<const Int> p, Int q) {
        long N = static_cast<long>(q) * q - static_cast<long>(p[0]) * p[0] -
                 static_cast<long>(p[1]) * p[1];
        if (N < 0) throw DomainError("sphere: rational point outside the unit disc");
        return std::vector<QuadExt>{QuadExt(Rat(0), Rat(1, static_cast<long>(q)), N)};
    };
    c.spec = "sphere";
    return c;
}

ManifoldChart make_custom(int d, int m, BoxDomain domain,
                          std::function<std::vector<double>(std::span<const double>)> f,
                          std::function<std::vector<std::vector<double>>(std::span<const double>)> grad,
                          double D, double C) {
    if (d < 1 || m < 1) throw DomainError("make_custom: need d >= 1 and m >= 1");
    if (domain.dim() != d) throw DomainError("make_custom: domain dimension mismatch");
    ManifoldChart c;
    c.d = d;
    c.m = m;
    c.domain = std::move(domain);
    c.f = std::move(f);
    c.grad = std::move(grad);
    c.exact = false;
    if (D >= 0 && C >= 0) {
        c.D_bound = rat_from_double(D);
        c.C_bound = rat_from_double(C);
        c.verified = true;
    } else {
        // grid estimate with 10% inflation; C via finite differences of grad
        c.verified = false;
        const int per_axis = std::max(2, static_cast<int>(std::floor(std::pow(1e4, 1.0 / d))));
        std::vector<double> lo(d), hi(d), step(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = c.domain.lower[i].get_d();
            hi[i] = c.domain.upper[i].get_d();
            step[i] = (hi[i] - lo[i]) / (per_axis + 1);
        }
        double Dmax = 0, Cmax = 0;
        std::vector<double> x(d);
        std::vector<int> idx(d, 1);
        bool done = false;
        while (!done) {
            for (int i = 0; i < d; ++i) x[i] = lo[i] + idx[i] * step[i];
            auto J = c.grad(x);
            for (const auto& row : J)
                for (double v : row) Dmax = std::max(Dmax, std::fabs(v));
            for (int k = 0; k < d; ++k) {
                double h = step[k] * 0.5;
                auto xk = x;
                xk[k] += h;
                if (!c.domain.contains(xk)) continue;
                auto Jk = c.grad(xk);
                for (int j = 0; j < m; ++j)
                    for (int i = 0; i < d; ++i)
                        Cmax = std::max(Cmax, std::fabs(Jk[j][i] - J[j][i]) / h);
            }
            int axis = 0;
            while (axis < d && ++idx[axis] > per_axis) idx[axis++] = 1;
            done = axis == d;
        }
        c.D_bound = rat_from_double(Dmax * 1.1);
        c.C_bound = rat_from_double(Cmax * 1.1);
    }
    c.spec = "custom";
    return c;
}

ManifoldChart parse_chart(const std::string& spec) {
    if (spec.rfind("plane:", 0) == 0)
        return make_plane(parse_exact_vector(spec.substr(6)), 1, BoxDomain::unit(1));
    if (spec == "parabola") return make_parabola(BoxDomain::unit(1));
    if (spec.rfind("veronese:", 0) == 0) {
        int n = std::stoi(spec.substr(9));
        return make_veronese(n, BoxDomain::unit(1));
    }
    if (spec == "sphere") return make_sphere();
    throw DomainError("chart spec: unknown form '" + spec + "'");
}

ManifoldChart parse_chart(const std::string& spec, const BoxDomain& domain) {
    if (spec.rfind("plane:", 0) == 0)
        return make_plane(parse_exact_vector(spec.substr(6)), domain.dim(), domain);
    if (spec == "parabola") return make_parabola(domain);
    if (spec.rfind("veronese:", 0) == 0) return make_veronese(std::stoi(spec.substr(9)), domain);
    if (spec == "sphere") return make_sphere(domain);
    throw DomainError("chart spec: unknown form '" + spec + "'");
}

std::vector<double> eval_g(const ManifoldChart& chart, std::span<const double> alpha) {
    if (!chart.domain.contains(alpha)) throw DomainError("eval_g: alpha outside U");
    auto fv = chart.f(alpha);
    auto J = chart.grad(alpha);
    std::vector<double> g(chart.m);
    for (int j = 0; j < chart.m; ++j) {
        double acc = fv[j];
        for (int i = 0; i < chart.d; ++i) acc -= alpha[i] * J[j][i];
        g[j] = acc;
    }
    return g;
}

std::vector<QuadExt> eval_g_exact(const ManifoldChart& chart, const std::vector<QuadExt>& alpha) {
    if (!chart.exact) throw DomainError("eval_g_exact: chart has no exact evaluation");
    if (!chart.domain.contains(alpha)) throw DomainError("eval_g: alpha outside U");
    auto fv = chart.f_exact(alpha);
    auto J = chart.grad_exact(alpha);
    std::vector<QuadExt> g;
    g.reserve(chart.m);
    for (int j = 0; j < chart.m; ++j) {
        QuadExt acc = fv[j];
        for (int i = 0; i < chart.d; ++i) acc = acc - alpha[i] * J[j][i];
        g.push_back(acc);
    }
    return g;
}

double taylor_remainder_bound(const ManifoldChart& chart, std::span<const double> alpha,
                              const RationalPoint& pq) {
    if (!chart.domain.contains(alpha)) throw DomainError("taylor bound: alpha outside U");
    if (!chart.domain.contains_rational(std::span<const Int>(pq.p.data(), pq.p.size()), pq.q))
        throw DomainError("taylor bound: p/q outside U");
    double maxdiff = 0;
    for (int i = 0; i < chart.d; ++i)
        maxdiff = std::max(maxdiff,
                           std::fabs(alpha[i] - static_cast<double>(pq.p[i]) / pq.q));
    return chart.C() * chart.d * chart.d / 2.0 * maxdiff * maxdiff;
}

QuadExt taylor_remainder_bound_exact(const ManifoldChart& chart,
                                     const std::vector<QuadExt>& alpha,
                                     const RationalPoint& pq) {
    if (!chart.domain.contains(alpha)) throw DomainError("taylor bound: alpha outside U");
    if (!chart.domain.contains_rational(std::span<const Int>(pq.p.data(), pq.p.size()), pq.q))
        throw DomainError("taylor bound: p/q outside U");
    QuadExt maxdiff;
    for (int i = 0; i < chart.d; ++i) {
        QuadExt diff = (alpha[i] - QuadExt(rat_of(pq.p[i], pq.q))).abs();
        if (diff.cmp(maxdiff) > 0) maxdiff = diff;
    }
    Rat coef = chart.C_bound * chart.d * chart.d / 2;
    return QuadExt(coef) * maxdiff * maxdiff;
}

}  // namespace dioman
