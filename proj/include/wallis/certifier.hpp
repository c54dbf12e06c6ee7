#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wallis/approximants.hpp"
#include "wallis/errors.hpp"
#include "wallis/interval.hpp"
#include "wallis/precision.hpp"
#include "wallis/rational.hpp"

namespace wallis {

// ---------------------------------------------------------------------------
// Exact polynomials and positivity certificates
// ---------------------------------------------------------------------------

/// Polynomial with exact rational coefficients, ascending by degree.
class ExactPolynomial {
public:
    ExactPolynomial() = default;
    explicit ExactPolynomial(std::vector<ExactRational> coefficients) : coefficients_(std::move(coefficients))
    {
        while (!coefficients_.empty() && coefficients_.back().is_zero()) {
            coefficients_.pop_back();
        }
    }

    [[nodiscard]] const std::vector<ExactRational>& coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] bool is_zero() const noexcept { return coefficients_.empty(); }
    /// -1 for the zero polynomial.
    [[nodiscard]] long degree() const noexcept { return static_cast<long>(coefficients_.size()) - 1; }

    [[nodiscard]] ExactRational operator()(const ExactRational& x) const
    {
        ExactRational acc;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

private:
    std::vector<ExactRational> coefficients_;
};

namespace detail {
inline ExactPolynomial integer_polynomial(std::initializer_list<long> cs)
{
    std::vector<ExactRational> v;
    for (long c : cs) {
        v.emplace_back(c);
    }
    return ExactPolynomial(std::move(v));
}
} // namespace detail

/// Numerator C of s''(x) = C(x-1) / (32 x^7 (x+1)^7 (2x+1)^2 (2x-1)^2).
inline ExactPolynomial s_numerator()
{
    return detail::integer_polynomial(
        {4913, 33387, 98177, 164799, 174543, 121173, 55197, 15920, 2640, 192});
}

/// Numerator A of p''(x).
inline ExactPolynomial p_numerator()
{
    return detail::integer_polynomial({351068, 1516131, 2684091, 2495340, 1285956, 348624, 38880});
}

/// Numerator B of -q''(x).
inline ExactPolynomial q_numerator()
{
    return detail::integer_polynomial({6780036, 50421819, 166596550, 322415601, 405307306, 346439295,
                                       204449525, 82629900, 22094730, 3618864, 305208, 7776});
}

enum class PolyCertificate { AllCoeffsNonnegative, NotCertified };

/// All coefficients >= 0 with at least one > 0 implies p(x) > 0 for x > 0.
inline PolyCertificate poly_nonneg_certificate(const ExactPolynomial& p)
{
    const auto& cs = p.coefficients();
    const bool nonneg = std::all_of(cs.begin(), cs.end(), [](const ExactRational& c) { return c.sign() >= 0; });
    const bool some_positive = std::any_of(cs.begin(), cs.end(), [](const ExactRational& c) { return c.sign() > 0; });
    return nonneg && some_positive ? PolyCertificate::AllCoeffsNonnegative : PolyCertificate::NotCertified;
}

// ---------------------------------------------------------------------------
// Difference functions s, p, q
// ---------------------------------------------------------------------------

/// s: consecutive difference of the corrected residual; p and q: of the
/// lower and upper mu residuals.
enum class DifferenceFunction { S, P, Q };

inline std::string to_string(DifferenceFunction f)
{
    switch (f) {
    case DifferenceFunction::S: return "s";
    case DifferenceFunction::P: return "p";
    case DifferenceFunction::Q: return "q";
    }
    return "?";
}

/// Exact value of the closed-form second derivative.
inline ExactRational second_derivative_value(DifferenceFunction which, const ExactRational& x)
{
    const ExactRational one = 1;
    const ExactRational xm1 = x - one;
    auto sq = [](const ExactRational& v) { return v * v; };
    ExactRational den;
    ExactRational num;
    switch (which) {
    case DifferenceFunction::S:
        num = s_numerator()(xm1);
        den = 32 * pow(x, 7) * pow(x + one, 7) * sq(2 * x + one) * sq(2 * x - one);
        break;
    case DifferenceFunction::P:
        num = p_numerator()(xm1);
        den = 2 * sq(x) * (3 * x + one) * (3 * x + 4) * sq(x + one) * sq(2 * x + one) * sq(6 * x - one)
            * sq(6 * x + 5);
        break;
    case DifferenceFunction::Q:
        num = -q_numerator()(xm1);
        den = 12 * pow(x, 5) * (3 * x + one) * (3 * x + 4) * sq(2 * x + one) * sq(6 * x - one) * pow(x + one, 5)
            * sq(6 * x + 5);
        break;
    }
    if (den.is_zero()) {
        throw DomainError(to_string(which) + "'' has a pole at x=" + x.str());
    }
    return num / den;
}

namespace detail {

inline RealInterval ln_of(const ExactRational& q, unsigned prec)
{
    if (q.sign() <= 0) {
        throw DomainError("ln of non-positive " + q.str());
    }
    return ln(enclose_rational(q, prec));
}

/// t ln(1 - 1/(2t)).
inline RealInterval shifted_log_term(const ExactRational& t, unsigned prec)
{
    return enclose_rational(t, prec) * ln_of(1 - 1 / (2 * t), prec);
}

/// -1/2 ln(1 + 1/x) - ln((2x+1)/(2x+2)), shared by s and p.
inline RealInterval wallis_step_terms(const ExactRational& x, unsigned prec)
{
    const RealInterval half_log = ln_of(1 + 1 / x, prec) * ExactRational(1, 2);
    return -half_log - ln_of((2 * x + 1) / (2 * x + 2), prec);
}

} // namespace detail

/// Enclosure of s(x), p(x) or q(x) from their logarithmic definitions.
inline RealInterval difference_function(DifferenceFunction which, const ExactRational& x, unsigned precision_bits)
{
    if (x.sign() <= 0) {
        throw DomainError(to_string(which) + " is evaluated for x > 0 only");
    }
    const unsigned prec = precision_bits;
    if (which == DifferenceFunction::S) {
        const SeriesCoefficients h = published_correction();
        return detail::shifted_log_term(x + 1, prec) - detail::shifted_log_term(x, prec)
             + detail::wallis_step_terms(x, prec) + enclose_rational(h.sum_at(x + 1) - h.sum_at(x), prec);
    }
    const ExactRational third(1, 3);
    RealInterval p = detail::shifted_log_term(x + 1 + third, prec) - detail::shifted_log_term(x + third, prec)
                   + detail::wallis_step_terms(x, prec);
    if (which == DifferenceFunction::P) {
        return p;
    }
    const ExactRational correction = 1 / (144 * pow(x + 1, 3)) - 1 / (144 * pow(x, 3));
    return p + enclose_rational(correction, prec);
}

/// Closed-form difference at n minus the difference of consecutive
/// residual-based sequences; contains 0 when both agree.
inline RealInterval difference_consistency(DifferenceFunction which, std::uint64_t n, unsigned precision_bits)
{
    if (n == 0) {
        throw std::invalid_argument("difference_consistency: n must be >= 1");
    }
    const ExactRational x(static_cast<unsigned long>(n));
    RealInterval step(0, precision_bits);
    switch (which) {
    case DifferenceFunction::S: {
        // alpha_n = -residual(corrected, n)
        const ApproximantSpec spec = family::Corrected{published_correction()};
        step = residual(spec, n, precision_bits) - residual(spec, n + 1, precision_bits);
        break;
    }
    case DifferenceFunction::P:
    case DifferenceFunction::Q: {
        // b_n = -residual(mu, n), c_n = b_n + 1/(144 n^3)
        step = residual(family::Mu{}, n, precision_bits) - residual(family::Mu{}, n + 1, precision_bits);
        if (which == DifferenceFunction::Q) {
            step = step + (1 / (144 * pow(x + 1, 3)) - 1 / (144 * pow(x, 3)));
        }
        break;
    }
    }
    return difference_function(which, x, precision_bits) - step;
}

enum class Sign { Positive, Negative, Undecidable };

inline std::string to_string(Sign s)
{
    switch (s) {
    case Sign::Positive: return "+";
    case Sign::Negative: return "-";
    case Sign::Undecidable: return "?";
    }
    return "?";
}

inline Sign sign_of(const RealInterval& x)
{
    if (x.lo().sign() > 0) {
        return Sign::Positive;
    }
    if (x.hi().sign() < 0) {
        return Sign::Negative;
    }
    return Sign::Undecidable;
}

/// Sign the convexity argument needs from the second difference.
inline Sign expected_curvature(DifferenceFunction which)
{
    return which == DifferenceFunction::Q ? Sign::Negative : Sign::Positive;
}

struct ConvexitySample {
    ExactRational x;
    RealInterval second_difference;  // f(x+h) - 2 f(x) + f(x-h)
    Sign sign;
    bool as_expected;
    unsigned precision_bits;
};

inline std::vector<ConvexitySample> finite_difference_convexity(DifferenceFunction which,
                                                                const std::vector<ExactRational>& samples,
                                                                const ExactRational& h,
                                                                const PrecisionPolicy& policy = {})
{
    if (h.sign() <= 0) {
        throw std::invalid_argument("finite_difference_convexity: h must be positive");
    }
    std::vector<ConvexitySample> out;
    out.reserve(samples.size());
    for (const auto& x : samples) {
        if (x < 1 + h) {
            throw std::invalid_argument("finite_difference_convexity: samples must be >= 1 + h");
        }
        std::optional<RealInterval> last;
        auto attempt = [&](unsigned bits) -> std::optional<RealInterval> {
            RealInterval d = difference_function(which, x + h, bits)
                           - difference_function(which, x, bits) * ExactRational(2)
                           + difference_function(which, x - h, bits);
            last = d;
            return sign_of(d) == Sign::Undecidable ? std::nullopt : std::optional(std::move(d));
        };
        auto r = escalate(policy, attempt);
        const Sign s = sign_of(*last);
        out.push_back({x, *last, s, s == expected_curvature(which), r.precision_bits});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Inequality certification
// ---------------------------------------------------------------------------

enum class InequalityId { U_LOWER, U_UPPER, THM3, THM5_LOWER, THM5_UPPER };

inline constexpr InequalityId kAllInequalities[] = {InequalityId::U_LOWER, InequalityId::U_UPPER, InequalityId::THM3,
                                                    InequalityId::THM5_LOWER, InequalityId::THM5_UPPER};

inline std::string to_string(InequalityId id)
{
    switch (id) {
    case InequalityId::U_LOWER: return "U_LOWER";
    case InequalityId::U_UPPER: return "U_UPPER";
    case InequalityId::THM3: return "THM3";
    case InequalityId::THM5_LOWER: return "THM5_LOWER";
    case InequalityId::THM5_UPPER: return "THM5_UPPER";
    }
    return "?";
}

inline std::optional<InequalityId> parse_inequality(std::string_view name)
{
    for (InequalityId id : kAllInequalities) {
        if (to_string(id) == name) {
            return id;
        }
    }
    return std::nullopt;
}

/// Smallest n for which the inequality is asserted.
inline std::uint64_t min_n(InequalityId id)
{
    return id == InequalityId::U_LOWER || id == InequalityId::U_UPPER ? 2 : 1;
}

enum class Verdict { HoldsStrict, HoldsWithEquality, Violated, Undecidable };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::HoldsStrict: return "HoldsStrict";
    case Verdict::HoldsWithEquality: return "HoldsWithEquality";
    case Verdict::Violated: return "Violated";
    case Verdict::Undecidable: return "Undecidable";
    }
    return "?";
}

struct InequalityCheck {
    Verdict verdict;
    unsigned precision_bits;  // 0 when decided by exact arithmetic
};

namespace detail {

/// Verdict for "smaller < larger" from an interval comparison.
inline std::optional<Verdict> strict_verdict(const RealInterval& smaller, const RealInterval& larger)
{
    switch (compare(smaller, larger)) {
    case Ordering3::Less: return Verdict::HoldsStrict;
    case Ordering3::Greater: return Verdict::Violated;
    case Ordering3::Undecidable: return std::nullopt;
    }
    return std::nullopt;
}

/// (4/3) (1 - 1/2n)^n / n, the rational factor of the upper bound in U_UPPER.
inline ExactRational upper_u_rational_part(std::uint64_t n)
{
    return ExactRational(4, 3) * integer_power_part(n);
}

inline std::optional<Verdict> attempt_inequality(InequalityId id, std::uint64_t n, const ExactRational& w,
                                                 unsigned bits)
{
    const RealInterval wn = enclose_rational(w, bits);
    switch (id) {
    case InequalityId::U_LOWER:
        return strict_verdict(evaluate(family::Chi{}, n, bits), wn);
    case InequalityId::U_UPPER: {
        const RealInterval bound = enclose_rational(upper_u_rational_part(n), bits)
                                 * sqrt(enclose_rational(ExactRational(static_cast<unsigned long>(n - 1)), bits));
        return strict_verdict(wn, bound);
    }
    case InequalityId::THM3:
        return strict_verdict(evaluate(family::Corrected{published_correction()}, n, bits), wn);
    case InequalityId::THM5_LOWER:
        return strict_verdict(evaluate(family::Mu{}, n, bits), wn);
    case InequalityId::THM5_UPPER: {
        const ExactRational n3 = pow(ExactRational(static_cast<unsigned long>(n)), 3);
        const RealInterval bound = evaluate(family::Mu{}, n, bits) * exp(enclose_rational(1 / (144 * n3), bits));
        return strict_verdict(wn, bound);
    }
    }
    return std::nullopt;
}

} // namespace detail

/// Decides one inequality at one n, escalating precision per the policy.
/// U_UPPER is compared exactly whenever n - 1 is a perfect square, which is
/// the only way to see the equality at n = 2.
inline InequalityCheck check_inequality(InequalityId id, std::uint64_t n, const PrecisionPolicy& policy = {})
{
    if (n < min_n(id)) {
        throw RangeError(to_string(id) + " is asserted for n >= " + std::to_string(min_n(id)) + ", got n="
                         + std::to_string(n));
    }
    const ExactRational w = wallis_exact(n);
    if (id == InequalityId::U_UPPER) {
        const mpz_class m(static_cast<unsigned long>(n - 1));
        if (is_perfect_square(m)) {
            mpz_class root;
            mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
            const ExactRational bound = detail::upper_u_rational_part(n) * ExactRational(root);
            const auto c = w <=> bound;
            const Verdict v = c < 0 ? Verdict::HoldsStrict : c == 0 ? Verdict::HoldsWithEquality : Verdict::Violated;
            return {v, 0};
        }
    }
    auto r = escalate(policy, [&](unsigned bits) { return detail::attempt_inequality(id, n, w, bits); });
    return {r.value.value_or(Verdict::Undecidable), r.precision_bits};
}

struct VerdictCounts {
    std::size_t holds_strict = 0;
    std::size_t holds_with_equality = 0;
    std::size_t violated = 0;
    std::size_t undecidable = 0;
};

struct CertificateReport {
    InequalityId inequality;
    std::uint64_t n_min;
    std::uint64_t n_max;
    std::vector<Verdict> verdicts;  // verdicts[i] is for n = n_min + i
    VerdictCounts counts;
    unsigned max_precision_used;

    [[nodiscard]] bool passed() const { return counts.violated == 0 && counts.undecidable == 0; }
    [[nodiscard]] Verdict at(std::uint64_t n) const { return verdicts.at(n - n_min); }

    /// Every n carrying the given verdict, ascending.
    [[nodiscard]] std::vector<std::uint64_t> where(Verdict v) const
    {
        std::vector<std::uint64_t> ns;
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            if (verdicts[i] == v) {
                ns.push_back(n_min + i);
            }
        }
        return ns;
    }
};

/// Verdicts for every n in [n_min, n_max]. The range is split into
/// contiguous shards, one per worker; the report does not depend on the
/// worker count. workers = 0 uses the hardware concurrency.
inline CertificateReport sweep(InequalityId id, std::uint64_t n_min, std::uint64_t n_max,
                               const PrecisionPolicy& policy = {}, unsigned workers = 0)
{
    if (n_min > n_max) {
        throw RangeError("sweep: n_min > n_max");
    }
    if (n_min < min_n(id)) {
        throw RangeError(to_string(id) + " is asserted for n >= " + std::to_string(min_n(id)));
    }
    const std::uint64_t count = n_max - n_min + 1;
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    if (!mpfr_buildopt_tls_p()) {
        workers = 1;
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));

    std::vector<InequalityCheck> checks(count, InequalityCheck{Verdict::Undecidable, 0});
    auto run_shard = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            checks[i] = check_inequality(id, n_min + i, policy);
        }
    };
    std::vector<std::future<void>> shards;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (std::uint64_t begin = 0; begin < count; begin += chunk) {
        shards.push_back(std::async(std::launch::async, run_shard, begin, std::min(count, begin + chunk)));
    }
    for (auto& s : shards) {
        s.get();
    }

    CertificateReport report{id, n_min, n_max, {}, {}, 0};
    report.verdicts.reserve(count);
    for (const auto& c : checks) {
        report.verdicts.push_back(c.verdict);
        report.max_precision_used = std::max(report.max_precision_used, c.precision_bits);
        switch (c.verdict) {
        case Verdict::HoldsStrict: ++report.counts.holds_strict; break;
        case Verdict::HoldsWithEquality: ++report.counts.holds_with_equality; break;
        case Verdict::Violated: ++report.counts.violated; break;
        case Verdict::Undecidable: ++report.counts.undecidable; break;
        }
    }
    return report;
}

} // namespace wallis
