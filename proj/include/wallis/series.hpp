#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <vector>

#include "wallis/approximants.hpp"
#include "wallis/errors.hpp"
#include "wallis/interval.hpp"
#include "wallis/precision.hpp"
#include "wallis/rational.hpp"

namespace wallis {

/// x_2..x_K, the coefficients of ln[W_n g(n+1) / (g(n) W_{n+1})] in powers
/// of 1/n, where g is the a = 0 approximant.
class LogRatioCoefficients {
public:
    explicit LogRatioCoefficients(std::vector<ExactRational> values) : values_(std::move(values))
    {
        if (values_.empty()) {
            throw std::invalid_argument("LogRatioCoefficients: need at least x_2");
        }
    }

    [[nodiscard]] const std::vector<ExactRational>& values() const noexcept { return values_; }
    /// Highest index K.
    [[nodiscard]] std::size_t max_index() const noexcept { return values_.size() + 1; }
    /// x_k for 2 <= k <= K.
    [[nodiscard]] const ExactRational& at(std::size_t k) const
    {
        if (k < 2) {
            throw std::out_of_range("x_k is indexed from 2");
        }
        return values_.at(k - 2);
    }

private:
    std::vector<ExactRational> values_;
};

/// x_k = (-1)^k [ (1 + (-1)^k) / ((k+1) 2^(k+1)) - 1/(k+1) + 1/(2k) ].
inline ExactRational log_ratio_coefficient(unsigned long k)
{
    const bool even = k % 2 == 0;
    const auto kk = static_cast<long>(k);
    ExactRational bracket = ExactRational(-1, kk + 1) + ExactRational(1, 2 * kk);
    if (even) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, k + 1);
        den *= kk + 1;
        bracket += ExactRational(mpz_class(2), den);
    }
    return even ? bracket : -bracket;
}

inline LogRatioCoefficients log_ratio_coeffs(unsigned long max_index)
{
    if (max_index < 2) {
        throw std::invalid_argument("log_ratio_coeffs: K must be >= 2");
    }
    std::vector<ExactRational> xs;
    xs.reserve(max_index - 1);
    for (unsigned long k = 2; k <= max_index; ++k) {
        xs.push_back(log_ratio_coefficient(k));
    }
    return LogRatioCoefficients(std::move(xs));
}

/// Coefficient of a_j in row k of the triangular system:
/// (-1)^(j+1) binom(k-1, j-1).
inline ExactRational triangular_entry(unsigned long k, unsigned long j)
{
    ExactRational c(binomial(k - 1, j - 1));
    return j % 2 == 1 ? c : -c;
}

/// Left-hand side of row k evaluated at a (a_1..a_{k-1} must be present).
inline ExactRational triangular_row(unsigned long k, const std::vector<ExactRational>& a)
{
    ExactRational lhs;
    for (unsigned long j = 1; j < k; ++j) {
        lhs += triangular_entry(k, j) * a.at(j - 1);
    }
    return lhs;
}

/// Forward substitution: row k fixes a_{k-1}, whose coefficient is
/// (-1)^k (k-1).
inline SeriesCoefficients solve_triangular(const LogRatioCoefficients& x)
{
    std::vector<ExactRational> a;
    const std::size_t K = x.max_index();
    a.reserve(K - 1);
    for (unsigned long k = 2; k <= K; ++k) {
        const ExactRational rhs = k % 2 == 0 ? x.at(k) : -x.at(k);
        ExactRational known;
        for (unsigned long j = 1; j + 1 < k; ++j) {
            known += triangular_entry(k, j) * a[j - 1];
        }
        a.push_back((rhs - known) / triangular_entry(k, k - 1));
    }
    return SeriesCoefficients(std::move(a), SeriesCoefficients::Source::Solved);
}

/// True when a reproduces (-1)^k x_k in every row k = 2..K.
inline bool satisfies_triangular_system(const LogRatioCoefficients& x, const SeriesCoefficients& a)
{
    if (a.order() + 1 < x.max_index()) {
        return false;
    }
    for (unsigned long k = 2; k <= x.max_index(); ++k) {
        const ExactRational rhs = k % 2 == 0 ? x.at(k) : -x.at(k);
        if (triangular_row(k, a.values()) != rhs) {
            return false;
        }
    }
    return true;
}

struct LogRatioCheck {
    RealInterval defect;       // log ratio minus the truncated series
    ExactRational ceiling;     // 1 / n^(K+1)
    bool within_ceiling;       // |defect| <= ceiling, certified
    unsigned precision_bits;
};

/// Checks the truncated expansion against a direct evaluation of the log
/// ratio at n_probe. The ratio equals residual_A0(n) - residual_A0(n+1).
inline LogRatioCheck verify_log_ratio(unsigned long max_index, std::uint64_t n_probe,
                                      const PrecisionPolicy& policy = {256, 8192})
{
    if (n_probe < 10) {
        throw std::invalid_argument("verify_log_ratio: n_probe must be >= 10");
    }
    const LogRatioCoefficients x = log_ratio_coeffs(max_index);
    ExactRational series;
    const ExactRational inv_n = ExactRational(1) / ExactRational(static_cast<unsigned long>(n_probe));
    for (unsigned long k = 2; k <= max_index; ++k) {
        series += x.at(k) * pow(inv_n, static_cast<long>(k));
    }
    const ExactRational ceiling = pow(inv_n, static_cast<long>(max_index + 1));
    const ApproximantSpec g = family::A{0};

    std::optional<LogRatioCheck> last;
    auto attempt = [&](unsigned bits) -> std::optional<LogRatioCheck> {
        const RealInterval ratio = residual(g, n_probe, bits) - residual(g, n_probe + 1, bits);
        RealInterval defect = ratio - enclose_rational(series, bits);
        const bool ok = mpfr_cmp_q(abs(defect).hi().get(), ceiling.mpq().get_mpq_t()) <= 0;
        last = LogRatioCheck{std::move(defect), ceiling, ok, bits};
        return ok ? last : std::nullopt;
    };
    auto result = escalate(policy, attempt);
    return result.value ? *result.value : *last;
}

struct RateSample {
    std::uint64_t n;
    RealInterval scaled_difference;  // n^k (w_n - w_{n+1})
    RealInterval scaled_residual;    // n^(k-1) w_n
};

struct ConvergenceReport {
    ApproximantSpec spec;
    unsigned order_k;
    RealInterval limit_estimate;         // estimate of the limit of n^k (w_n - w_{n+1})
    RealInterval scaled_residual_limit;  // estimate of the limit of n^(k-1) w_n
    std::vector<RateSample> samples;     // sorted by n
    bool monotone_trend;                 // successive changes shrink along the grid

    /// The limit enclosure excludes zero.
    [[nodiscard]] bool decided_nonzero() const { return !limit_estimate.contains_zero(); }
};

inline const std::vector<std::uint64_t>& default_rate_grid()
{
    static const std::vector<std::uint64_t> grid{100, 1000, 10000, 100000};
    return grid;
}

namespace detail {

inline RateSample rate_sample(const ApproximantSpec& spec, unsigned k, std::uint64_t n, unsigned prec)
{
    const RealInterval w_n = residual(spec, n, prec);
    const RealInterval w_next = residual(spec, n + 1, prec);
    const ExactRational nn(static_cast<unsigned long>(n));
    return {n, (w_n - w_next) * pow(nn, k), w_n * pow(nn, static_cast<long>(k) - 1)};
}

/// last widened by +-|last - previous|; the grid is geometric, so the
/// remaining drift past the last point is smaller than the last step.
inline RealInterval widen_by_step(const RealInterval& last, const RealInterval& previous)
{
    const RealInterval step = abs(last - previous);
    const unsigned p = step.precision_bits();
    Float neg(p);
    mpfr_neg(neg.get(), step.hi().get(), MPFR_RNDD);
    return last + RealInterval(std::move(neg), Float(step.hi()), p);
}

} // namespace detail

/// Estimates the limits in the rate lemma from residuals of `spec` on a
/// grid. Grid points are evaluated concurrently; the report is sorted by n.
inline ConvergenceReport estimate_rate(const ApproximantSpec& spec, unsigned k,
                                       std::vector<std::uint64_t> grid = default_rate_grid(),
                                       unsigned precision_bits = 512)
{
    if (k < 2) {
        throw std::invalid_argument("estimate_rate: k must be >= 2");
    }
    if (grid.size() < 3) {
        throw std::invalid_argument("estimate_rate: need at least 3 grid points");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("estimate_rate: grid must be strictly increasing");
    }
    if (grid.back() < 1000) {
        throw std::invalid_argument("estimate_rate: largest grid point must be >= 1000");
    }

    std::vector<std::future<RateSample>> pending;
    pending.reserve(grid.size());
    for (const std::uint64_t n : grid) {
        pending.push_back(std::async(std::launch::async, detail::rate_sample, std::cref(spec), k, n, precision_bits));
    }
    std::vector<RateSample> samples;
    samples.reserve(grid.size());
    for (auto& f : pending) {
        samples.push_back(f.get());
    }

    const auto& last = samples[samples.size() - 1];
    const auto& prev = samples[samples.size() - 2];
    RealInterval limit = detail::widen_by_step(last.scaled_difference, prev.scaled_difference);
    RealInterval scaled = detail::widen_by_step(last.scaled_residual, prev.scaled_residual);

    bool monotone = true;
    for (std::size_t i = 2; i < samples.size(); ++i) {
        const double before = std::abs((samples[i - 1].scaled_difference - samples[i - 2].scaled_difference).mid_double());
        const double after = std::abs((samples[i].scaled_difference - samples[i - 1].scaled_difference).mid_double());
        monotone = monotone && after <= before;
    }

    ConvergenceReport report{spec, k, std::move(limit), std::move(scaled), std::move(samples), monotone};
    if (report.decided_nonzero()) {
        const double a = last.scaled_difference.mid_double();
        const double b = prev.scaled_difference.mid_double();
        if (std::abs(a - b) > 0.1 * std::max(std::abs(a), std::abs(b))) {
            throw InconsistentTrend("n^k(w_n - w_{n+1}) moves by more than 10% between n=" + std::to_string(prev.n)
                                    + " and n=" + std::to_string(last.n) + " for " + describe(spec)
                                    + " at k=" + std::to_string(k));
        }
    }
    return report;
}

struct RankedCandidate {
    ApproximantSpec spec;
    unsigned rank;                            // 1 = fastest convergence
    unsigned first_nonzero_order;             // max_order + 1 when none was found
    std::optional<ConvergenceReport> report;  // at first_nonzero_order
};

/// Ranks candidates by the first order k (from 2) at which the rate limit
/// is decided nonzero, later first; ties go to the smaller |limit|.
inline std::vector<RankedCandidate> best_parameter_check(const std::vector<ApproximantSpec>& candidates,
                                                         unsigned max_order = 5,
                                                         const std::vector<std::uint64_t>& grid = default_rate_grid(),
                                                         unsigned precision_bits = 512)
{
    if (candidates.empty()) {
        throw std::invalid_argument("best_parameter_check: no candidates");
    }
    std::vector<RankedCandidate> ranked;
    for (const auto& spec : candidates) {
        RankedCandidate entry{spec, 0, max_order + 1, std::nullopt};
        for (unsigned k = 2; k <= max_order; ++k) {
            ConvergenceReport r = estimate_rate(spec, k, grid, precision_bits);
            if (r.decided_nonzero()) {
                entry.first_nonzero_order = k;
                entry.report = std::move(r);
                break;
            }
        }
        ranked.push_back(std::move(entry));
    }
    auto magnitude = [](const RankedCandidate& c) {
        return c.report ? std::abs(c.report->limit_estimate.mid_double()) : 0.0;
    };
    std::stable_sort(ranked.begin(), ranked.end(), [&](const RankedCandidate& x, const RankedCandidate& y) {
        if (x.first_nonzero_order != y.first_nonzero_order) {
            return x.first_nonzero_order > y.first_nonzero_order;
        }
        return magnitude(x) < magnitude(y);
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        ranked[i].rank = static_cast<unsigned>(i + 1);
    }
    return ranked;
}

} // namespace wallis
