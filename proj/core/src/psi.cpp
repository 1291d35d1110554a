#include "dioman/psi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dioman/errors.hpp"

namespace dioman {

ApproxFunction ApproxFunction::power_law(Rat c, Rat tau) {
    if (sgn(c) <= 0) throw DomainError("psi: coefficient must be positive");
    if (sgn(tau) < 0) throw DomainError("psi: exponent must be nonnegative");
    ApproxFunction f;
    f.kind_ = PsiKind::PowerLaw;
    f.c_ = std::move(c);
    f.tau_ = std::move(tau);
    f.monotone_ = true;  // structural for tau >= 0
    f.normalized_ = f.c_ <= 1;
    return f;
}

ApproxFunction ApproxFunction::tabulated(std::vector<std::pair<Int, Rat>> table) {
    if (table.empty()) throw DomainError("psi: empty table");
    ApproxFunction f;
    f.kind_ = PsiKind::Tabulated;
    f.table_ = std::move(table);
    f.monotone_ = true;
    f.normalized_ = true;
    Int prev_q = 0;
    const Rat* prev_v = nullptr;
    for (const auto& [q, v] : f.table_) {
        if (q < 1) throw DomainError("psi table: q must be >= 1");
        if (q <= prev_q) throw DomainError("psi table: q values must be strictly increasing");
        if (sgn(v) <= 0) throw DomainError("psi table: values must be positive");
        if (prev_v && v > *prev_v) f.monotone_ = false;  // ascent
        if (v > 1) f.normalized_ = false;
        prev_q = q;
        prev_v = &v;
    }
    return f;
}

ApproxFunction ApproxFunction::parse(const std::string& spec) {
    if (spec.rfind("pow:", 0) == 0) {
        auto rest = spec.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw DomainError("psi spec: expected pow:<c>:<tau>");
        auto c = parse_rational(rest.substr(0, colon));
        auto tau = parse_rational(rest.substr(colon + 1));
        if (!c || !tau) throw DomainError("psi spec: cannot parse '" + spec + "'");
        return power_law(*c, *tau);
    }
    if (spec.rfind("table:", 0) == 0) {
        std::ifstream in(spec.substr(6));
        if (!in) throw DomainError("psi table: cannot open '" + spec.substr(6) + "'");
        std::string line;
        if (!std::getline(in, line)) throw DomainError("psi table: empty file");
        if (line != "q,psi" && line != "q,psi\r")
            throw DomainError("psi table: expected header 'q,psi'");
        std::vector<std::pair<Int, Rat>> rows;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto comma = line.find(',');
            if (comma == std::string::npos) throw DomainError("psi table: bad row '" + line + "'");
            auto q = parse_rational(line.substr(0, comma));
            auto v = parse_rational(line.substr(comma + 1));
            if (!q || !v || q->get_den() != 1)
                throw DomainError("psi table: bad row '" + line + "'");
            rows.emplace_back(to_int_checked(q->get_num()), *v);
        }
        return tabulated(std::move(rows));
    }
    throw DomainError("psi spec: unknown form '" + spec + "'");
}

const Rat& ApproxFunction::coeff() const {
    if (kind_ != PsiKind::PowerLaw) throw DomainError("psi: not a power law");
    return c_;
}

const Rat& ApproxFunction::tau() const {
    if (kind_ != PsiKind::PowerLaw) throw DomainError("psi: not a power law");
    return tau_;
}

void ApproxFunction::require_monotone() const {
    if (!monotone_) throw MonotonicityError("psi table has an ascent");
}

ApproxFunction ApproxFunction::normalized_copy() const {
    ApproxFunction f = *this;
    if (kind_ == PsiKind::PowerLaw) {
        if (!(c_ <= 1)) f.clamp_ = true;
        f.normalized_ = true;
    } else {
        for (auto& [q, v] : f.table_)
            if (v > 1) v = 1;
        f.normalized_ = true;
    }
    return f;
}

// Tables extend as right-continuous steps: psi(q) is the entry at the
// largest tabulated q' <= q. Outside [first, last] there is no certified
// value and we refuse.
const Rat& ApproxFunction::table_value(Int q) const {
    auto it = std::upper_bound(table_.begin(), table_.end(), q,
                               [](Int x, const auto& row) { return x < row.first; });
    if (it == table_.begin())
        throw DomainError("psi table: q below first entry");
    if (q > table_.back().first)
        throw DomainError("psi table: q beyond last entry");
    return std::prev(it)->second;
}

double ApproxFunction::eval(Int q) const {
    if (q < 1) throw DomainError("psi: q must be >= 1");
    if (kind_ == PsiKind::Tabulated) return table_value(q).get_d();
    double v = c_.get_d() * std::pow(static_cast<double>(q), -tau_.get_d());
    return clamp_ ? std::min(1.0, v) : v;
}

bool ApproxFunction::has_exact_value(Int q) const {
    if (q < 1) return false;
    if (kind_ == PsiKind::Tabulated)
        return q >= table_.front().first && q <= table_.back().first;
    // power law value is rational iff q^(1/b) is an integer, tau = a/b
    if (tau_.get_den() == 1) return true;
    BigInt root;
    int exactp = mpz_root(root.get_mpz_t(), BigInt(static_cast<long>(q)).get_mpz_t(),
                          tau_.get_den().get_ui());
    return exactp != 0;
}

Rat ApproxFunction::exact_value(Int q) const {
    if (!has_exact_value(q)) throw DomainError("psi: no exact value at this q");
    if (kind_ == PsiKind::Tabulated) return table_value(q);
    BigInt root;
    mpz_root(root.get_mpz_t(), BigInt(static_cast<long>(q)).get_mpz_t(), tau_.get_den().get_ui());
    if (!tau_.get_num().fits_slong_p()) throw DomainError("psi: tau numerator too large");
    Rat v = c_ * rat_pow(Rat(root), -tau_.get_num().get_si());
    if (clamp_ && v > 1) v = 1;
    return v;
}

int ApproxFunction::cmp_abs_vs_scaled(const QuadExt& x, const Rat& scale, Int q) const {
    if (sgn(scale) <= 0) throw DomainError("psi comparison: scale must be positive");
    if (kind_ == PsiKind::Tabulated) {
        Rat rhs = scale * table_value(q);
        return x.abs().cmp(rhs);
    }
    if (clamp_) {
        // psi(q) = min(1, c q^-tau): the clamp is active iff c^b >= q^a
        bool clamped;
        if (!tau_.get_num().fits_slong_p() || !tau_.get_den().fits_ulong_p())
            throw DomainError("psi: tau too large for exact comparison");
        {
            Rat lhs = rat_pow(c_, static_cast<long>(tau_.get_den().get_ui()));
            Rat rhs = rat_pow(Rat(static_cast<long>(q)),
                              tau_.get_num().get_si());
            clamped = lhs >= rhs;
        }
        if (clamped) return x.abs().cmp(scale);
    }
    return cmp_abs_vs_rat_power(x, scale * c_, q, tau_);
}

std::pair<Rat, Rat> ApproxFunction::power_at(Int q) const {
    if (q < 1) throw DomainError("psi: q must be >= 1");
    if (kind_ == PsiKind::Tabulated) return {table_value(q), Rat(0)};
    if (clamp_) {
        // clamp active iff c q^-tau >= 1 iff c^b >= q^a
        if (!tau_.get_num().fits_slong_p() || !tau_.get_den().fits_ulong_p())
            throw DomainError("psi: tau too large for exact comparison");
        Rat lhs = rat_pow(c_, static_cast<long>(tau_.get_den().get_ui()));
        Rat rhs = rat_pow(Rat(static_cast<long>(q)), tau_.get_num().get_si());
        if (lhs >= rhs) return {Rat(1), Rat(0)};
    }
    return {c_, tau_};
}

Int ApproxFunction::domain_max() const {
    if (kind_ == PsiKind::Tabulated) return table_.back().first;
    return std::numeric_limits<Int>::max();
}

std::string ApproxFunction::spec_string() const {
    if (kind_ == PsiKind::PowerLaw) {
        std::string s = "pow:" + format_rat(c_) + ":" + format_rat(tau_);
        if (clamp_) s += " (clamped to <=1)";
        return s;
    }
    std::ostringstream os;
    os << "table[" << table_.size() << " rows, q<=" << table_.back().first << "]";
    return os.str();
}

}  // namespace dioman
