#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wallis/decimal.hpp"
#include "wallis/interval.hpp"
#include "wallis/precision.hpp"
#include "wallis/rational.hpp"

namespace wallis {

/// Coefficients a_1..a_K of a correction factor exp(sum_k a_k / n^k).
class SeriesCoefficients {
public:
    enum class Source { Solved, Supplied };

    SeriesCoefficients(std::vector<ExactRational> values, Source source)
        : values_(std::move(values)), source_(source)
    {
        if (values_.empty()) {
            throw std::invalid_argument("SeriesCoefficients: need at least a_1");
        }
    }

    [[nodiscard]] const std::vector<ExactRational>& values() const noexcept { return values_; }
    [[nodiscard]] Source source() const noexcept { return source_; }
    [[nodiscard]] std::size_t order() const noexcept { return values_.size(); }
    /// a_k, 1-based.
    [[nodiscard]] const ExactRational& at(std::size_t k) const { return values_.at(k - 1); }

    /// sum_k a_k / x^k, exactly.
    [[nodiscard]] ExactRational sum_at(const ExactRational& x) const
    {
        ExactRational total;
        ExactRational inv_power = 1;
        const ExactRational inv_x = 1 / x;
        for (const auto& a : values_) {
            inv_power *= inv_x;
            total += a * inv_power;
        }
        return total;
    }
    [[nodiscard]] ExactRational sum_at(std::uint64_t n) const
    {
        return sum_at(ExactRational(static_cast<unsigned long>(n)));
    }

    friend bool operator==(const SeriesCoefficients&, const SeriesCoefficients&) = default;

private:
    std::vector<ExactRational> values_;
    Source source_;
};

/// The five published correction coefficients 0, 1/24, 1/48, 1/160, 1/960.
inline SeriesCoefficients published_correction()
{
    return SeriesCoefficients({0, {1, 24}, {1, 48}, {1, 160}, {1, 960}},
                              SeriesCoefficients::Source::Supplied);
}

namespace family {

/// sqrt(e/pi) (1 - 1/2n)^n sqrt(n-1)/n.
struct Chi {
    friend bool operator==(const Chi&, const Chi&) = default;
};
/// sqrt(e/pi) (1 - 1/2n)^n sqrt(n+a)/n.
struct A {
    ExactRational a;
    friend bool operator==(const A&, const A&) = default;
};
/// sqrt(e/pi) [1 - 1/(2(n+1/3))]^(n+1/3) / sqrt(n).
struct Mu {
    friend bool operator==(const Mu&, const Mu&) = default;
};
/// sqrt(e/pi) [1 - 1/(2(n+b))]^(n+c) / sqrt(n).
struct BC {
    ExactRational b;
    ExactRational c;
    friend bool operator==(const BC&, const BC&) = default;
};
/// A(0) times exp(sum_k a_k / n^k).
struct Corrected {
    SeriesCoefficients coeffs;
    friend bool operator==(const Corrected&, const Corrected&) = default;
};

} // namespace family

using ApproximantSpec = std::variant<family::Chi, family::A, family::Mu, family::BC, family::Corrected>;

inline std::string describe(const ApproximantSpec& spec)
{
    struct {
        std::string operator()(const family::Chi&) const { return "chi"; }
        std::string operator()(const family::A& f) const { return "a(a=" + f.a.str() + ")"; }
        std::string operator()(const family::Mu&) const { return "mu"; }
        std::string operator()(const family::BC& f) const
        {
            return "bc(b=" + f.b.str() + ",c=" + f.c.str() + ")";
        }
        std::string operator()(const family::Corrected& f) const
        {
            std::string s = "corrected(";
            for (std::size_t k = 1; k <= f.coeffs.order(); ++k) {
                s += (k > 1 ? "," : "") + f.coeffs.at(k).str();
            }
            return s + ")";
        }
    } visitor;
    return std::visit(visitor, spec);
}

namespace detail {

inline void require_positive_n(std::uint64_t n)
{
    if (n == 0) {
        throw DomainError("approximants are defined for n >= 1");
    }
}

inline ExactRational as_rational(std::uint64_t n) { return ExactRational(static_cast<unsigned long>(n)); }

/// (1 - 1/2n)^n / n as an exact rational, built without a gcd: 2n-1 is
/// coprime to both 2n and n.
inline ExactRational integer_power_part(std::uint64_t n)
{
    mpz_class num;
    mpz_class den;
    mpz_ui_pow_ui(num.get_mpz_t(), 2 * n - 1, n);
    mpz_ui_pow_ui(den.get_mpz_t(), 2 * n, n);
    den *= static_cast<unsigned long>(n);
    return ExactRational::from_reduced(std::move(num), std::move(den));
}

inline RealInterval eval_family_a(const ExactRational& a, std::uint64_t n, unsigned prec)
{
    const ExactRational shifted = as_rational(n) + a;
    if (shifted.sign() <= 0) {
        throw DomainError("family a: n + a must be positive, got n=" + std::to_string(n) + ", a=" + a.str());
    }
    return sqrt_e_over_pi(prec) * enclose_rational(integer_power_part(n), prec)
         * sqrt(enclose_rational(shifted, prec));
}

inline RealInterval eval_family_bc(const ExactRational& b, const ExactRational& c, std::uint64_t n, unsigned prec)
{
    const ExactRational shifted = as_rational(n) + b;
    if (shifted.is_zero()) {
        throw DomainError("family bc: n + b must be nonzero");
    }
    const ExactRational base = 1 - 1 / (2 * shifted);
    if (base.sign() <= 0) {
        throw DomainError("family bc: 1 - 1/(2(n+b)) must be positive, got " + base.str());
    }
    const ExactRational exponent = as_rational(n) + c;
    const RealInterval powered = exp(enclose_rational(exponent, prec) * ln(enclose_rational(base, prec)));
    return sqrt_e_over_pi(prec) * powered / sqrt(enclose_rational(as_rational(n), prec));
}

} // namespace detail

/// Enclosure of the approximant value at n.
inline RealInterval evaluate(const ApproximantSpec& spec, std::uint64_t n, unsigned precision_bits)
{
    detail::require_positive_n(n);
    struct {
        std::uint64_t n;
        unsigned prec;
        RealInterval operator()(const family::Chi&) const
        {
            if (n == 1) {
                return RealInterval(0, prec);
            }
            return detail::eval_family_a(-1, n, prec);
        }
        RealInterval operator()(const family::A& f) const { return detail::eval_family_a(f.a, n, prec); }
        RealInterval operator()(const family::Mu&) const
        {
            return detail::eval_family_bc({1, 3}, {1, 3}, n, prec);
        }
        RealInterval operator()(const family::BC& f) const { return detail::eval_family_bc(f.b, f.c, n, prec); }
        RealInterval operator()(const family::Corrected& f) const
        {
            return detail::eval_family_a(0, n, prec) * exp(enclose_rational(f.coeffs.sum_at(n), prec));
        }
    } visitor{n, precision_bits};
    return std::visit(visitor, spec);
}

/// ln(W_n) - ln(approximant at n); positive when the approximant
/// underestimates W_n.
inline RealInterval residual(const ApproximantSpec& spec, std::uint64_t n, unsigned precision_bits)
{
    const RealInterval g = evaluate(spec, n, precision_bits);
    if (g.lo().sign() <= 0) {
        throw DomainError("residual: approximant " + describe(spec) + " is not positive at n=" + std::to_string(n));
    }
    return ln(enclose_rational(wallis_exact(n), precision_bits)) - ln(g);
}

inline constexpr int kTableDigits = 5;

struct ErrorRow {
    std::uint64_t n;
    ExactRational wallis;
    RealInterval minus_chi;    // W_n - chi_n
    RealInterval minus_mu;     // W_n - mu_n
    unsigned precision_bits;   // precision at which both columns pinned (or the cap)
    bool pinned;               // both columns certified to kTableDigits digits
    bool below_table_range;    // n = 1, where chi_n = 0
};

/// W_n - chi_n and W_n - mu_n, escalating precision until both are pinned
/// to five significant digits.
inline std::vector<ErrorRow> error_table(const std::vector<std::uint64_t>& ns, const PrecisionPolicy& policy = {})
{
    std::vector<ErrorRow> rows;
    rows.reserve(ns.size());
    for (const std::uint64_t n : ns) {
        detail::require_positive_n(n);
        const ExactRational w = wallis_exact(n);
        auto attempt = [&](unsigned bits) -> std::optional<ErrorRow> {
            const RealInterval wn = enclose_rational(w, bits);
            ErrorRow row{n, w, wn - evaluate(family::Chi{}, n, bits), wn - evaluate(family::Mu{}, n, bits),
                         bits, false, n == 1};
            row.pinned = certified_decimal(row.minus_chi, kTableDigits) && certified_decimal(row.minus_mu, kTableDigits);
            if (!row.pinned && bits < policy.cap_bits) {
                return std::nullopt;
            }
            return row;
        };
        rows.push_back(*escalate(policy, attempt).value);
    }
    return rows;
}

} // namespace wallis
