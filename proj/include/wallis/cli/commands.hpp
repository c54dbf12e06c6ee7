#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wallis/cli/output.hpp"
#include "wallis/wallis.hpp"

namespace wallis::cli {

namespace detail {

inline std::string join(const std::vector<std::uint64_t>& ns)
{
    std::string s;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        s += (i ? " " : "") + std::to_string(ns[i]);
    }
    return s;
}

inline std::string upper_bound_text(const Float& x, int digits) { return format_scientific(x, digits, MPFR_RNDU); }
inline std::string lower_bound_text(const Float& x, int digits) { return format_scientific(x, digits, MPFR_RNDD); }

/// (text, digits) of the best certified rendering up to max_digits, or
/// ("", "0") when not one digit is certified.
inline std::pair<std::string, std::string> certified_cells(const RealInterval& x, int max_digits)
{
    if (auto r = best_certified_decimal(x, max_digits)) {
        return {r->text, std::to_string(r->digits)};
    }
    return {"", "0"};
}

} // namespace detail

inline const std::vector<std::uint64_t>& default_table_ns()
{
    static const std::vector<std::uint64_t> ns{50, 100, 250, 1000};
    return ns;
}

/// W_n - chi_n and W_n - mu_n at five certified significant digits.
inline OutputRecord cmd_table(const std::vector<std::uint64_t>& ns, const PrecisionPolicy& policy = {})
{
    if (ns.empty()) {
        throw UsageError("table: need at least one n");
    }
    for (auto n : ns) {
        if (n < 2) {
            throw UsageError("table: every n must be >= 2, got " + std::to_string(n));
        }
    }
    OutputRecord out;
    out.command = "table";
    out.parameters = {{"ns", detail::join(ns)},
                      {"precision_bits", std::to_string(policy.initial_bits)},
                      {"precision_cap", std::to_string(policy.cap_bits)}};
    out.columns = {"n",          "wallis_exact",      "w_minus_chi",       "w_minus_chi_digits",
                   "w_minus_chi_width", "w_minus_mu", "w_minus_mu_digits", "w_minus_mu_width",
                   "precision_bits"};
    for (const auto& row : error_table(ns, policy)) {
        const auto chi = certified_decimal(row.minus_chi, kTableDigits);
        const auto mu = certified_decimal(row.minus_mu, kTableDigits);
        if (!chi || !mu) {
            out.exit_code = kUndecidable;
        }
        out.add_row({std::to_string(row.n), row.wallis.str(), chi.value_or(""),
                     chi ? std::to_string(kTableDigits) : "0",
                     detail::upper_bound_text(row.minus_chi.width(), 3), mu.value_or(""),
                     mu ? std::to_string(kTableDigits) : "0", detail::upper_bound_text(row.minus_mu.width(), 3),
                     std::to_string(row.precision_bits)});
    }
    return out;
}

/// x_2..x_K and the solved a_1..a_{K-1}, with an exact round-trip check.
inline OutputRecord cmd_coeffs(unsigned long max_index)
{
    if (max_index < 2) {
        throw UsageError("coeffs: K must be >= 2");
    }
    const LogRatioCoefficients x = log_ratio_coeffs(max_index);
    const SeriesCoefficients a = solve_triangular(x);
    OutputRecord out;
    out.command = "coeffs";
    out.parameters = {{"K", std::to_string(max_index)}};
    out.columns = {"name", "index", "value"};
    for (unsigned long k = 2; k <= max_index; ++k) {
        out.add_row({"x", std::to_string(k), x.at(k).str()});
    }
    for (std::size_t j = 1; j <= a.order(); ++j) {
        out.add_row({"a", std::to_string(j), a.at(j).str()});
    }
    const bool round_trip = satisfies_triangular_system(x, a);
    out.summary = {{"x_count", x.values().size()},
                   {"a_count", a.order()},
                   {"round_trip", round_trip ? "pass" : "fail"}};
    return out;
}

/// Exit code for a set of sweep reports: any violation wins over any
/// undecidable verdict.
inline int exit_code_for(const std::vector<CertificateReport>& reports)
{
    bool undecidable = false;
    for (const auto& r : reports) {
        if (r.counts.violated > 0) {
            return kViolation;
        }
        undecidable = undecidable || r.counts.undecidable > 0;
    }
    return undecidable ? kUndecidable : kPass;
}

inline constexpr std::uint64_t kDefaultSweepMax = 10000;

struct VerifyOptions {
    std::vector<InequalityId> ids;        // all five when empty
    std::optional<std::uint64_t> n_min;   // per-inequality minimum when unset
    std::uint64_t n_max = kDefaultSweepMax;
    PrecisionPolicy policy;
    bool per_n = false;                   // one row per n instead of one per inequality
    unsigned workers = 0;
};

inline std::vector<CertificateReport> run_sweeps(const VerifyOptions& opt)
{
    std::vector<InequalityId> ids = opt.ids;
    if (ids.empty()) {
        ids.assign(std::begin(kAllInequalities), std::end(kAllInequalities));
    }
    // Validate every range before any work starts.
    for (auto id : ids) {
        const std::uint64_t lo = opt.n_min.value_or(min_n(id));
        if (lo < min_n(id)) {
            throw UsageError(to_string(id) + " is asserted for n >= " + std::to_string(min_n(id)) + ", got n-min "
                             + std::to_string(lo));
        }
        if (lo > opt.n_max) {
            throw UsageError("n-min " + std::to_string(lo) + " exceeds n-max " + std::to_string(opt.n_max));
        }
    }
    std::vector<CertificateReport> reports;
    for (auto id : ids) {
        reports.push_back(sweep(id, opt.n_min.value_or(min_n(id)), opt.n_max, opt.policy, opt.workers));
    }
    return reports;
}

inline std::string list_or_empty(const std::vector<std::uint64_t>& ns) { return detail::join(ns); }

/// Render sweep reports; exported separately so tests can feed synthetic
/// reports through the exit-code contract.
inline OutputRecord verify_record(const std::vector<CertificateReport>& reports, const VerifyOptions& opt)
{
    OutputRecord out;
    out.command = "verify";
    std::string names;
    for (const auto& r : reports) {
        names += (names.empty() ? "" : " ") + to_string(r.inequality);
    }
    out.parameters = {{"inequalities", names},
                      {"n_min", opt.n_min ? std::to_string(*opt.n_min) : "default"},
                      {"n_max", std::to_string(opt.n_max)},
                      {"precision_bits", std::to_string(opt.policy.initial_bits)},
                      {"precision_cap", std::to_string(opt.policy.cap_bits)}};
    if (opt.per_n) {
        out.columns = {"inequality", "n", "verdict"};
        for (const auto& r : reports) {
            for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
                out.add_row({to_string(r.inequality), std::to_string(r.n_min + i), to_string(r.verdicts[i])});
            }
        }
    } else {
        out.columns = {"inequality",   "n_min",        "n_max",          "holds_strict",       "holds_with_equality",
                       "violated",     "undecidable",  "equality_at",    "violated_at",        "undecidable_at",
                       "max_precision_bits", "summary"};
        for (const auto& r : reports) {
            out.add_row({to_string(r.inequality), std::to_string(r.n_min), std::to_string(r.n_max),
                         std::to_string(r.counts.holds_strict), std::to_string(r.counts.holds_with_equality),
                         std::to_string(r.counts.violated), std::to_string(r.counts.undecidable),
                         list_or_empty(r.where(Verdict::HoldsWithEquality)), list_or_empty(r.where(Verdict::Violated)),
                         list_or_empty(r.where(Verdict::Undecidable)), std::to_string(r.max_precision_used),
                         r.passed() ? "pass" : "fail"});
        }
    }
    out.exit_code = exit_code_for(reports);
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.passed();
    }
    out.summary = {{"inequalities", reports.size()}, {"result", all_pass ? "pass" : "fail"}};
    return out;
}

inline OutputRecord cmd_verify(const VerifyOptions& opt) { return verify_record(run_sweeps(opt), opt); }

struct RateOptions {
    std::vector<ApproximantSpec> candidates;
    unsigned k = 2;
    std::vector<std::uint64_t> grid = default_rate_grid();
    unsigned precision_bits = 512;
    unsigned max_order = 5;  // ranking probes k = 2..max_order
};

inline constexpr int kRateDigits = 10;

/// Rate limits for each candidate at order k, plus a ranking by the
/// first order with a nonzero limit when several candidates are given.
/// InconsistentTrend becomes exit code 3.
inline OutputRecord cmd_rate(const RateOptions& opt)
{
    if (opt.candidates.empty()) {
        throw UsageError("rate: no candidates");
    }
    if (opt.k < 2) {
        throw UsageError("rate: k must be >= 2");
    }
    OutputRecord out;
    out.command = "rate";
    std::string names;
    for (const auto& c : opt.candidates) {
        names += (names.empty() ? "" : " ") + describe(c);
    }
    out.parameters = {{"candidates", names},
                      {"k", std::to_string(opt.k)},
                      {"grid", detail::join(opt.grid)},
                      {"precision_bits", std::to_string(opt.precision_bits)}};
    out.columns = {"candidate",       "k",         "limit",           "limit_digits",
                   "limit_lo",        "limit_hi",  "scaled_residual", "scaled_residual_digits",
                   "scaled_residual_lo", "scaled_residual_hi", "status", "rank"};

    std::vector<std::string> ranks(opt.candidates.size());
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::array();
    if (opt.candidates.size() > 1) {
        try {
            const auto ranked =
                best_parameter_check(opt.candidates, std::max(opt.max_order, opt.k), opt.grid, opt.precision_bits);
            for (const auto& rc : ranked) {
                for (std::size_t i = 0; i < opt.candidates.size(); ++i) {
                    if (opt.candidates[i] == rc.spec && ranks[i].empty()) {
                        ranks[i] = std::to_string(rc.rank);
                        break;
                    }
                }
                ranking.push_back({{"rank", rc.rank},
                                   {"candidate", describe(rc.spec)},
                                   {"first_nonzero_order", rc.first_nonzero_order}});
            }
        } catch (const InconsistentTrend& e) {
            diagnostics.push_back(std::string("ranking: ") + e.what());
            out.exit_code = kInconsistentTrend;
        }
    }

    nlohmann::ordered_json samples = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < opt.candidates.size(); ++i) {
        const std::string name = describe(opt.candidates[i]);
        try {
            const auto report = estimate_rate(opt.candidates[i], opt.k, opt.grid, opt.precision_bits);
            const auto [limit, limit_digits] = detail::certified_cells(report.limit_estimate, kRateDigits);
            const auto [scaled, scaled_digits] = detail::certified_cells(report.scaled_residual_limit, kRateDigits);
            const std::string status = report.decided_nonzero() ? "nonzero" : "vanishes; try k+1";
            out.add_row({name, std::to_string(opt.k), limit, limit_digits,
                         detail::lower_bound_text(report.limit_estimate.lo(), 6),
                         detail::upper_bound_text(report.limit_estimate.hi(), 6), scaled, scaled_digits,
                         detail::lower_bound_text(report.scaled_residual_limit.lo(), 6),
                         detail::upper_bound_text(report.scaled_residual_limit.hi(), 6), status, ranks[i]});
            nlohmann::ordered_json per = nlohmann::ordered_json::array();
            for (const auto& s : report.samples) {
                per.push_back({{"n", std::to_string(s.n)},
                               {"scaled_difference", detail::certified_cells(s.scaled_difference, 15).first},
                               {"scaled_residual", detail::certified_cells(s.scaled_residual, 15).first}});
            }
            samples[name] = {{"monotone_trend", report.monotone_trend}, {"samples", per}};
        } catch (const InconsistentTrend& e) {
            out.add_row({name, std::to_string(opt.k), "", "0", "", "", "", "0", "", "", "inconsistent trend", ranks[i]});
            diagnostics.push_back(e.what());
            out.exit_code = kInconsistentTrend;
        }
    }
    out.summary = {{"samples", samples}};
    if (!ranking.empty()) {
        out.summary["ranking"] = ranking;
    }
    if (!diagnostics.empty()) {
        out.summary["diagnostics"] = diagnostics;
    }
    return out;
}

} // namespace wallis::cli
