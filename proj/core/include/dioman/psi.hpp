#pragma once

// Approximating functions psi: N -> (0, inf), monotone non-increasing.
//
// Two kinds: a power law c * q^(-tau) with rational c > 0 and tau >= 0, or a
// finite table of (q, psi(q)) pairs with exact rational values. A power law
// is structurally monotone; a table carries a monotonicity certificate
// computed at construction. Non-monotone tables are still constructible (the
// order estimators accept them) but every solver entry point calls
// require_monotone() first.

#include <string>
#include <utility>
#include <vector>

#include "dioman/quadratic.hpp"
#include "dioman/rational.hpp"

namespace dioman {

enum class PsiKind { PowerLaw, Tabulated };

class ApproxFunction {
  public:
    ApproxFunction() : c_(1), tau_(0) {}  // the constant function 1

    static ApproxFunction power_law(Rat c, Rat tau);
    static ApproxFunction tabulated(std::vector<std::pair<Int, Rat>> table);

    // "pow:<c>:<tau>" (e.g. "pow:1:0.5" is q^(-1/2)) or "table:<path>"
    // where the file is CSV with header "q,psi".
    static ApproxFunction parse(const std::string& spec);

    PsiKind kind() const { return kind_; }
    const Rat& coeff() const;  // PowerLaw only
    const Rat& tau() const;    // PowerLaw only
    const std::vector<std::pair<Int, Rat>>& table() const { return table_; }

    bool monotone() const { return monotone_; }
    void require_monotone() const;  // throws MonotonicityError

    // true when psi(q) <= 1 for every q in the domain
    bool normalized() const { return normalized_; }
    // min(1, psi): power laws clamp at evaluation, tables clamp entries
    ApproxFunction normalized_copy() const;

    double eval(Int q) const;

    // Exact value when one exists: any tabulated entry, or a power law whose
    // value at q is rational (integer tau, or q a perfect power).
    bool has_exact_value(Int q) const;
    Rat exact_value(Int q) const;

    // Exact three-way comparison |x| vs scale * psi(q), scale rational > 0.
    // This is the single primitive behind every strict inequality involving
    // psi; it is exact for both kinds.
    int cmp_abs_vs_scaled(const QuadExt& x, const Rat& scale, Int q) const;

    // The pair (c', tau') with psi(q) = c' * q^(-tau') at this particular q:
    // power laws resolve the normalization clamp, tables return (value, 0).
    // Every psi comparison at a fixed q reduces to this exact handle.
    std::pair<Rat, Rat> power_at(Int q) const;

    // Largest q the function is defined for (tables; power laws unbounded).
    Int domain_max() const;

    std::string spec_string() const;

  private:
    PsiKind kind_ = PsiKind::PowerLaw;
    Rat c_, tau_;
    std::vector<std::pair<Int, Rat>> table_;
    bool monotone_ = true;
    bool normalized_ = true;
    bool clamp_ = false;  // power law with c > 1, normalized copy

    const Rat& table_value(Int q) const;  // exact lookup, throws off-table
};

}  // namespace dioman
