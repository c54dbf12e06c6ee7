#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "wallis/errors.hpp"

namespace wallis {

/// Arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(long value) : value_(value) {}          // NOLINT(google-explicit-constructor)
    ExactRational(int value) : value_(value) {}           // NOLINT(google-explicit-constructor)
    ExactRational(unsigned long value) : value_(value) {} // NOLINT(google-explicit-constructor)

    ExactRational(const mpz_class& numerator, const mpz_class& denominator)
    {
        if (denominator == 0) {
            throw DomainError("ExactRational: zero denominator");
        }
        value_.get_num() = numerator;
        value_.get_den() = denominator;
        value_.canonicalize();
    }

    ExactRational(long numerator, long denominator)
        : ExactRational(mpz_class(numerator), mpz_class(denominator))
    {}

    explicit ExactRational(const mpq_class& q) : value_(q) { value_.canonicalize(); }
    explicit ExactRational(const mpz_class& z) : value_(z) {}

    /// Parses "p", "p/q" or "-p/q" (base 10).
    static ExactRational parse(std::string_view text)
    {
        std::string s(text);
        mpq_class q;
        if (s.empty() || q.set_str(s, 10) != 0) {
            throw std::invalid_argument("not a rational: '" + s + "'");
        }
        if (q.get_den() == 0) {
            throw DomainError("ExactRational: zero denominator");
        }
        q.canonicalize();
        return ExactRational(q);
    }

    /// Builds p/q from parts already known to be coprime with q > 0;
    /// skips the gcd, which matters for million-bit powers.
    static ExactRational from_reduced(mpz_class numerator, mpz_class denominator)
    {
        ExactRational r;
        r.value_.get_num() = std::move(numerator);
        r.value_.get_den() = std::move(denominator);
        return r;
    }

    [[nodiscard]] const mpq_class& mpq() const noexcept { return value_; }
    [[nodiscard]] const mpz_class& numerator() const noexcept { return value_.get_num(); }
    [[nodiscard]] const mpz_class& denominator() const noexcept { return value_.get_den(); }
    [[nodiscard]] int sign() const noexcept { return sgn(value_); }
    [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
    [[nodiscard]] bool is_integer() const noexcept { return value_.get_den() == 1; }

    /// Canonical text: "p/q", or "p" when the denominator is 1.
    [[nodiscard]] std::string str() const { return value_.get_str(10); }

    [[nodiscard]] double to_double() const { return value_.get_d(); }

    ExactRational operator-() const { return ExactRational(mpq_class(-value_)); }

    ExactRational& operator+=(const ExactRational& o) { value_ += o.value_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { value_ -= o.value_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { value_ *= o.value_; return *this; }
    ExactRational& operator/=(const ExactRational& o)
    {
        if (o.is_zero()) {
            throw DomainError("ExactRational: division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
    friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
    friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
    friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

private:
    mpq_class value_;
};

/// q^e for any integer exponent; numerator and denominator are powered
/// separately so no gcd is taken.
inline ExactRational pow(const ExactRational& base, long exponent)
{
    if (exponent == 0) {
        return 1;
    }
    if (exponent < 0) {
        if (base.is_zero()) {
            throw DomainError("pow: zero to a negative power");
        }
        return pow(1 / base, -exponent);
    }
    const auto e = static_cast<unsigned long>(exponent);
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), e);
    return ExactRational::from_reduced(std::move(num), std::move(den));
}

inline ExactRational abs(const ExactRational& q) { return q.sign() < 0 ? -q : q; }

inline mpz_class binomial(unsigned long n, unsigned long k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline bool is_perfect_square(const mpz_class& z) { return mpz_perfect_square_p(z.get_mpz_t()) != 0; }

/// The Wallis ratio (2n-1)!!/(2n)!! = binom(2n, n)/4^n. The 2-adic valuation
/// of binom(2n, n) is popcount(n), so the reduced form is odd/2^(2n-popcount).
inline ExactRational wallis_exact(std::uint64_t n)
{
    if (n == 0) {
        throw DomainError("wallis_exact: n must be >= 1");
    }
    mpz_class num = binomial(2 * n, n);
    const auto twos = static_cast<unsigned long>(__builtin_popcountll(n));
    mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), twos);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, 2 * n - twos);
    return ExactRational::from_reduced(std::move(num), std::move(den));
}

} // namespace wallis
