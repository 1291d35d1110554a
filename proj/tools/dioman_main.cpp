// dioman: Dirichlet-type rational approximation on manifolds, near-point
// enumeration, limsup covers and box-counting dimension experiments.
//
// Every subcommand writes one deterministic CSV artifact (stdout, or --out)
// plus a flat key=value manifest (<out>.manifest) sufficient to re-run it.
// Exit codes: 0 success, 1 invalid config/input, 2 theorem-hypothesis
// violation or exhausted search budget, 3 internal certification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dioman/csv.hpp"
#include "dioman/dirichlet.hpp"
#include "dioman/errors.hpp"
#include "dioman/exponents.hpp"
#include "dioman/limsup.hpp"
#include "dioman/manifold.hpp"
#include "dioman/parallel.hpp"
#include "dioman/psi.hpp"
#include "dioman/rational_points.hpp"
#include "dioman/sampling.hpp"
#include "dioman/version.hpp"

using namespace dioman;

namespace {

struct Common {
    int threads = hardware_threads();
    unsigned precision_bits = 256;
    unsigned long long seed = 20177;
    std::string out;
    std::string domain;  // "lo,hi[,lo,hi...]"
    std::string config;  // handled before parsing; listed here for --help
};

// every option takes the last occurrence, so values injected from a config
// file are overridden by explicit flags
CLI::App* new_sub(CLI::App& app, const std::string& name, const std::string& desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return sub;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--threads", c.threads, "worker threads (deterministic output)")
        ->capture_default_str();
    sub->add_option("--precision-bits", c.precision_bits,
                    "certified-interval precision ceiling")
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for reproducible sampling")
        ->capture_default_str();
    sub->add_option("--out", c.out, "CSV output path (default: stdout)");
    sub->add_option("--domain", c.domain, "box override: lo,hi per axis");
    sub->add_option("--config", c.config,
                    "flat key=value config file; explicit flags override");
}

// pull --config out of the raw arguments and splice the file's key=value
// pairs in right after the subcommand name (explicit flags come later and
// win under the take-last policy). Manifest bookkeeping keys are skipped so
// a manifest can be replayed directly.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty()) return args;
    if (args.empty() || args[0].rfind("-", 0) == 0)
        throw DomainError("--config requires a subcommand");
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    static const std::vector<std::string> skip{"subcommand", "version", "wall_ms",
                                               "alpha_substituted", "undecided"};
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
        if (value.empty()) continue;
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

std::optional<BoxDomain> parse_domain(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    std::vector<Rat> vals;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto r = parse_rational(tok);
        if (!r) throw DomainError("domain: cannot parse '" + tok + "'");
        vals.push_back(*r);
    }
    if (vals.empty() || vals.size() % 2 != 0)
        throw DomainError("domain: expected lo,hi pairs");
    std::vector<Rat> lo, hi;
    for (size_t i = 0; i < vals.size(); i += 2) {
        lo.push_back(vals[i]);
        hi.push_back(vals[i + 1]);
    }
    return BoxDomain(std::move(lo), std::move(hi));
}

ManifoldChart make_chart(const std::string& chart_spec, const std::string& domain_spec) {
    auto dom = parse_domain(domain_spec);
    return dom ? parse_chart(chart_spec, *dom) : parse_chart(chart_spec);
}

struct Artifact {
    CsvWriter csv;
    std::vector<std::pair<std::string, std::string>> manifest;
};

void emit(const Common& c, const std::string& subcommand, Artifact art,
          std::chrono::steady_clock::time_point t0) {
    using ms = std::chrono::duration<double, std::milli>;
    double wall = ms(std::chrono::steady_clock::now() - t0).count();
    if (c.out.empty()) {
        std::cout << art.csv.str();
    } else {
        art.csv.write_file(c.out);
        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("subcommand", subcommand);
        for (auto& p : art.manifest) kv.push_back(p);
        kv.emplace_back("threads", std::to_string(c.threads));
        kv.emplace_back("precision-bits", std::to_string(c.precision_bits));
        kv.emplace_back("seed", std::to_string(c.seed));
        if (!c.domain.empty()) kv.emplace_back("domain", c.domain);
        kv.emplace_back("version", kVersion);
        kv.emplace_back("wall_ms", format_double(wall));
        write_manifest(c.out + ".manifest", kv);
    }
}

std::vector<std::string> point_header(int n) {
    std::vector<std::string> h{"Q", "q"};
    for (int i = 1; i <= n; ++i) h.push_back("p_" + std::to_string(i));
    h.push_back("res_v44_max");
    h.push_back("res_v45_max");
    h.push_back("certified");
    return h;
}

void add_solution_row(CsvWriter& csv, const DirichletSolution& sol) {
    std::vector<std::string> row{cell(sol.Q), cell(sol.point.q)};
    for (Int p : sol.point.p) row.push_back(cell(p));
    row.push_back(cell(sol.res_v44_max));
    row.push_back(cell(sol.res_v45_max));
    row.push_back(cell(sol.certified));
    csv.add_row(row);
}

// budget hint: take Q itself when admissible, else the first admissible
// budget at or above it
Int effective_Q(const ManifoldChart& chart, const std::vector<QuadExt>& alpha,
                const ApproxFunction& psi, Int hint) {
    if (admissible_Q(chart, alpha, psi, hint)) return hint;
    Int q0 = admissible_Q_set(chart, alpha, psi, 1, Int(1) << 50).front();
    if (q0 >= hint) return q0;
    for (Int Q = hint; Q <= hint + 1000000; ++Q)
        if (admissible_Q(chart, alpha, psi, Q)) return Q;
    throw Exhausted("no admissible budget near Q = " + std::to_string(hint));
}

int run(CLI::App& app, std::vector<std::string> args) {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    // ---- exponents ----
    auto* sub_exp = new_sub(app, "exponents", "critical and auxiliary exponents");
    static Common c_exp;
    static int exp_n = 0, exp_m = 0;
    static std::string exp_tau;
    sub_exp->add_option("--n", exp_n, "ambient dimension")->required();
    sub_exp->add_option("--m", exp_m, "codimension")->required();
    sub_exp->add_option("--tau", exp_tau, "approximation exponent")->required();
    add_common(sub_exp, c_exp);
    sub_exp->callback([&] {
        set_max_precision_bits(c_exp.precision_bits);
        auto tau = parse_rational(exp_tau);
        if (!tau) throw DomainError("cannot parse tau '" + exp_tau + "'");
        Rat s = critical_exponent(exp_n, exp_m, *tau);
        Rat jarnik = critical_exponent(exp_n, 0, *tau);  // (n+1)/(tau+1)
        CsvWriter csv({"n", "m", "d", "tau", "s", "s_exact", "eta", "eta_exact",
                       "eta_valid", "eta_boundary_warn", "jarnik_critical_s",
                       "jarnik_critical_s_exact"});
        if (exp_m >= 1) {
            auto eta = eta_exponent(exp_n - exp_m, exp_m, *tau);
            csv.add_row({cell(exp_n), cell(exp_m), cell(exp_n - exp_m), format_rat(*tau),
                         cell(to_double(s)), format_rat(s), cell(to_double(eta.eta)),
                         format_rat(eta.eta), cell(eta.valid), cell(eta.boundary_warn),
                         cell(to_double(jarnik)), format_rat(jarnik)});
        } else {
            csv.add_row({cell(exp_n), cell(exp_m), cell(exp_n), format_rat(*tau),
                         cell(to_double(s)), format_rat(s), "", "", "", "",
                         cell(to_double(jarnik)), format_rat(jarnik)});
        }
        Artifact art{std::move(csv),
                     {{"n", std::to_string(exp_n)},
                      {"m", std::to_string(exp_m)},
                      {"tau", exp_tau}}};
        emit(c_exp, "exponents", std::move(art), t0);
    });

    // ---- dirichlet ----
    auto* sub_dir = new_sub(app, "dirichlet", "certified Dirichlet-type solutions");
    static Common c_dir;
    static std::string dir_chart, dir_alpha, dir_psi;
    static Int dir_Q = 0;
    static int dir_samples = 0;
    sub_dir->add_option("--chart", dir_chart, "chart spec")->required();
    sub_dir->add_option("--alpha", dir_alpha, "point in U (csv of reals/golden/sqrt2)");
    sub_dir->add_option("--psi", dir_psi, "approximating function spec")->required();
    sub_dir->add_option("--Q", dir_Q, "budget (raised to the first admissible)")->required();
    sub_dir->add_option("--samples", dir_samples, "seeded alpha draws instead of --alpha");
    add_common(sub_dir, c_dir);
    sub_dir->callback([&] {
        set_max_precision_bits(c_dir.precision_bits);
        auto chart = make_chart(dir_chart, c_dir.domain);
        auto psi = ApproxFunction::parse(dir_psi).normalized_copy();
        std::vector<std::vector<QuadExt>> alphas;
        if (dir_samples > 0) {
            for (const auto& x : sample_points(chart.domain, dir_samples, c_dir.seed))
                alphas.push_back(exact_point(x));
        } else if (!dir_alpha.empty()) {
            alphas.push_back(parse_exact_vector(dir_alpha));
        } else {
            throw DomainError("dirichlet: need --alpha or --samples");
        }
        CsvWriter csv(point_header(chart.n()));
        for (const auto& alpha : alphas) {
            Int Q = effective_Q(chart, alpha, psi, dir_Q);
            add_solution_row(csv, dirichlet_search(chart, alpha, psi, Q, c_dir.threads));
        }
        Artifact art{std::move(csv),
                     {{"chart", dir_chart},
                      {"alpha", dir_alpha},
                      {"psi", dir_psi},
                      {"Q", std::to_string(dir_Q)},
                      {"samples", std::to_string(dir_samples)}}};
        emit(c_dir, "dirichlet", std::move(art), t0);
    });

    // ---- cor2 ----
    auto* sub_cor = new_sub(app, "cor2", "infinitely-often solution stream");
    static Common c_cor;
    static std::string cor_chart, cor_alpha, cor_psi, cor_tau, cor_kappa;
    static int cor_count = 1;
    static Int cor_qcap = Int(1) << 40;
    sub_cor->add_option("--chart", cor_chart, "chart spec")->required();
    sub_cor->add_option("--alpha", cor_alpha, "point in U")->required();
    sub_cor->add_option("--psi", cor_psi, "approximating function spec")->required();
    sub_cor->add_option("--tau", cor_tau, "exponent with kappa <= Q^tau psi(Q)")->required();
    sub_cor->add_option("--kappa", cor_kappa, "lower constant")->required();
    sub_cor->add_option("--count", cor_count, "solutions to stream")->required();
    sub_cor->add_option("--qcap", cor_qcap, "ladder budget cap")->capture_default_str();
    add_common(sub_cor, c_cor);
    sub_cor->callback([&] {
        set_max_precision_bits(c_cor.precision_bits);
        auto chart = make_chart(cor_chart, c_cor.domain);
        auto psi = ApproxFunction::parse(cor_psi).normalized_copy();
        auto tau = parse_rational(cor_tau);
        auto kappa = parse_rational(cor_kappa);
        if (!tau || !kappa) throw DomainError("cor2: cannot parse tau/kappa");
        auto alpha = parse_exact_vector(cor_alpha);
        bool substituted = false;
        bool all_rational = true;
        for (const auto& a : alpha) all_rational = all_rational && a.is_rational();
        if (all_rational) {
            // Corollary 2 wants an irrational coordinate; substitute a seeded
            // draw and flag it
            std::cerr << "cor2: alpha is rational; substituting a seeded sample point\n";
            alpha = exact_point(sample_points(chart.domain, 1, c_cor.seed).front());
            substituted = true;
        }
        auto sols =
            cor2_stream(chart, alpha, psi, *tau, *kappa, cor_count, cor_qcap, c_cor.threads);
        CsvWriter csv(point_header(chart.n()));
        for (const auto& s : sols) add_solution_row(csv, s);
        Artifact art{std::move(csv),
                     {{"chart", cor_chart},
                      {"alpha", cor_alpha},
                      {"psi", cor_psi},
                      {"tau", cor_tau},
                      {"kappa", cor_kappa},
                      {"count", std::to_string(cor_count)},
                      {"qcap", std::to_string(cor_qcap)},
                      {"alpha_substituted", substituted ? "1" : "0"}}};
        emit(c_cor, "cor2", std::move(art), t0);
    });

    // ---- enumerate ----
    auto* sub_enum = new_sub(app, "enumerate", "rational points near the manifold");
    static Common c_enum;
    static std::string enum_chart, enum_psi, enum_counts;
    static Int enum_qmax = 0;
    static bool enum_reduced = false;
    sub_enum->add_option("--chart", enum_chart, "chart spec")->required();
    sub_enum->add_option("--psi", enum_psi, "approximating function spec")->required();
    sub_enum->add_option("--qmax", enum_qmax, "denominator bound")->required();
    sub_enum->add_flag("--reduced", enum_reduced, "keep only primitive pairs");
    sub_enum->add_option("--counts", enum_counts, "also write the counting CSV here");
    add_common(sub_enum, c_enum);
    sub_enum->callback([&] {
        set_max_precision_bits(c_enum.precision_bits);
        auto chart = make_chart(enum_chart, c_enum.domain);
        auto psi = ApproxFunction::parse(enum_psi).normalized_copy();
        auto e = enumerate_near(chart, psi, enum_qmax, enum_reduced, c_enum.threads);
        std::vector<std::string> header{"q"};
        for (int i = 1; i <= chart.n(); ++i) header.push_back("p_" + std::to_string(i));
        header.push_back("residual");
        CsvWriter csv(header);
        for (const auto& rec : e.records) {
            std::vector<std::string> row{cell(rec.point.q)};
            for (Int p : rec.point.p) row.push_back(cell(p));
            row.push_back(rec.exact && rec.residual_exact.is_rational()
                              ? format_rat(rec.residual_exact.rational_value())
                              : cell(rec.residual));
            csv.add_row(row);
        }
        if (!enum_counts.empty()) {
            CsvWriter counts({"q", "N_cumulative"});
            for (auto [q, n] : e.counting) counts.add_row({cell(q), cell(n)});
            counts.write_file(enum_counts);
        }
        Artifact art{std::move(csv),
                     {{"chart", enum_chart},
                      {"psi", enum_psi},
                      {"qmax", std::to_string(enum_qmax)},
                      {"reduced", enum_reduced ? "1" : "0"}}};
        emit(c_enum, "enumerate", std::move(art), t0);
    });

    // ---- bset ----
    auto* sub_bset = new_sub(app, "bset", "denominator set B(beta; tau)");
    static Common c_bset;
    static std::string bset_beta, bset_tau;
    static Int bset_qmax = 0;
    sub_bset->add_option("--beta", bset_beta, "fibre point (csv/golden/sqrt2)")->required();
    sub_bset->add_option("--tau", bset_tau, "exponent")->required();
    sub_bset->add_option("--qmax", bset_qmax, "scan bound")->required();
    add_common(sub_bset, c_bset);
    sub_bset->callback([&] {
        set_max_precision_bits(c_bset.precision_bits);
        auto beta = parse_exact_vector(bset_beta);
        auto tau = parse_rational(bset_tau);
        if (!tau) throw DomainError("bset: cannot parse tau");
        auto set = bset(beta, *tau, bset_qmax, c_bset.threads);
        if (!set.undecided.empty())
            std::cerr << "bset: " << set.undecided.size()
                      << " boundary-ambiguous q reported separately\n";
        CsvWriter csv({"q"});
        for (Int q : set.members) csv.add_row({cell(q)});
        Artifact art{std::move(csv),
                     {{"beta", bset_beta},
                      {"tau", bset_tau},
                      {"qmax", std::to_string(bset_qmax)},
                      {"undecided", std::to_string(set.undecided.size())}}};
        emit(c_bset, "bset", std::move(art), t0);
    });

    // ---- counterexample ----
    auto* sub_ctr = new_sub(app, "counterexample", "badly-approximable emptiness check");
    static Common c_ctr;
    static std::string ctr_beta;
    static Int ctr_qmax = 0;
    sub_ctr->add_option("--beta", ctr_beta, "fibre point (csv/golden/sqrt2)")->required();
    sub_ctr->add_option("--qmax", ctr_qmax, "scan bound")->required();
    add_common(sub_ctr, c_ctr);
    sub_ctr->callback([&] {
        set_max_precision_bits(c_ctr.precision_bits);
        auto beta = parse_exact_vector(ctr_beta);
        auto rep = counterexample_check(beta, ctr_qmax);
        CsvWriter csv({"c0", "argmin_q", "scan_min", "scan_argmin_q", "empty", "qmax",
                       "caveat"});
        csv.add_row({cell(rep.constant.c0), cell(rep.constant.argmin_q),
                     cell(rep.constant.scan_min), cell(rep.constant.scan_argmin_q),
                     cell(rep.empty), cell(rep.qmax), rep.caveat});
        Artifact art{std::move(csv),
                     {{"beta", ctr_beta}, {"qmax", std::to_string(ctr_qmax)}}};
        emit(c_ctr, "counterexample", std::move(art), t0);
    });

    // ---- dimension ----
    auto* sub_dim = new_sub(app, "dimension", "box-counting dimension estimate");
    static Common c_dim;
    static std::string dim_chart, dim_tau;
    static int dim_bands = 0;
    sub_dim->add_option("--chart", dim_chart, "chart spec")->required();
    sub_dim->add_option("--tau", dim_tau, "exponent in [1/n, 1/m)")->required();
    sub_dim->add_option("--bands", dim_bands, "dyadic bands up to Q = 2^bands")->required();
    add_common(sub_dim, c_dim);
    sub_dim->callback([&] {
        set_max_precision_bits(c_dim.precision_bits);
        auto chart = make_chart(dim_chart, c_dim.domain);
        auto tau = parse_rational(dim_tau);
        if (!tau) throw DomainError("dimension: cannot parse tau");
        if (*tau < rat_of(1, chart.n()) || (chart.m >= 1 && *tau >= rat_of(1, chart.m))) {
            std::ostringstream os;
            os << "dimension: tau = " << format_rat(*tau) << " violates the range 1/"
               << chart.n() << " <= tau < 1/" << chart.m << "";
            throw DomainError(os.str());
        }
        auto est = estimate_dimension(chart, *tau, dim_bands, c_dim.threads);
        CsvWriter csv({"band", "Q", "delta", "N", "logN", "log_inv_delta"});
        for (const auto& pt : est.ladder) {
            csv.add_row({cell(pt.band), cell(pt.Q), cell(pt.delta), cell(pt.N),
                         pt.N >= 1 ? cell(std::log(static_cast<double>(pt.N))) : "",
                         cell(std::log(1.0 / pt.delta))});
        }
        csv.begin_section({"slope", "stderr", "target_s"});
        csv.add_row({cell(est.slope), cell(est.stderr_), cell(est.target_s)});
        Artifact art{std::move(csv),
                     {{"chart", dim_chart},
                      {"tau", dim_tau},
                      {"bands", std::to_string(dim_bands)}}};
        emit(c_dim, "dimension", std::move(art), t0);
    });

    // ---- mtp-check ----
    auto* sub_mtp = new_sub(app, "mtp-check", "full-measure hypothesis fractions");
    static Common c_mtp;
    static std::string mtp_chart, mtp_tau;
    static int mtp_grid = 0, mtp_bands = 0;
    sub_mtp->add_option("--chart", mtp_chart, "chart spec")->required();
    sub_mtp->add_option("--tau", mtp_tau, "exponent")->required();
    sub_mtp->add_option("--grid", mtp_grid, "grid cells per axis")->required();
    sub_mtp->add_option("--bands", mtp_bands, "dyadic bands up to Q = 2^bands")->required();
    add_common(sub_mtp, c_mtp);
    sub_mtp->callback([&] {
        set_max_precision_bits(c_mtp.precision_bits);
        auto chart = make_chart(mtp_chart, c_mtp.domain);
        auto tau = parse_rational(mtp_tau);
        if (!tau) throw DomainError("mtp-check: cannot parse tau");
        auto bundle = make_bundle(chart.n(), chart.m, *tau);
        auto rows = mtp_hypothesis_check(chart, *tau, bundle.s, mtp_grid, mtp_bands,
                                         c_mtp.threads);
        CsvWriter csv({"band", "fraction", "cumulative"});
        for (const auto& r : rows)
            csv.add_row({cell(r.band), cell(r.fraction), cell(r.cumulative)});
        Artifact art{std::move(csv),
                     {{"chart", mtp_chart},
                      {"tau", mtp_tau},
                      {"grid", std::to_string(mtp_grid)},
                      {"bands", std::to_string(mtp_bands)}}};
        emit(c_mtp, "mtp-check", std::move(art), t0);
    });

    app.require_subcommand(1);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Diophantine approximation on manifolds: Dirichlet-type solver, rational points "
        "near manifolds, limsup covers, box-counting dimension"};
    try {
        return run(app, apply_config_file(std::vector<std::string>(argv + 1, argv + argc)));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad flags are config errors
    } catch (const CertificationFailed& e) {
        std::cerr << "certification failure (bug class): " << e.what() << "\n";
        return 3;
    } catch (const SearchExhausted& e) {
        std::cerr << "search failure (bug class): " << e.what() << "\n";
        return 3;
    } catch (const HypothesisViolated& e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 2;
    } catch (const Exhausted& e) {
        std::cerr << "exhausted: " << e.what() << "\n";
        return 2;
    } catch (const Unclassifiable& e) {
        std::cerr << "unclassifiable: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
