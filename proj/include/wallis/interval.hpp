#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include <mpfr.h>

#include "wallis/errors.hpp"
#include "wallis/rational.hpp"

namespace wallis {

inline constexpr unsigned kMinPrecisionBits = 16;

/// RAII owner of an mpfr_t. Copies keep the source precision.
class Float {
public:
    explicit Float(unsigned precision_bits)
    {
        mpfr_init2(value_, static_cast<mpfr_prec_t>(std::max(precision_bits, 2u)));
        mpfr_set_zero(value_, 1);
    }
    Float(const Float& other)
    {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    Float(Float&& other) noexcept
    {
        mpfr_init2(value_, 2);
        mpfr_swap(value_, other.value_);
    }
    Float& operator=(const Float& other)
    {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }
    Float& operator=(Float&& other) noexcept
    {
        mpfr_swap(value_, other.value_);
        return *this;
    }
    ~Float() { mpfr_clear(value_); }

    [[nodiscard]] mpfr_ptr get() noexcept { return value_; }
    [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }
    [[nodiscard]] unsigned precision() const noexcept { return static_cast<unsigned>(mpfr_get_prec(value_)); }
    [[nodiscard]] double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
    [[nodiscard]] int sign() const noexcept { return mpfr_sgn(value_); }

    friend int cmp(const Float& a, const Float& b) { return mpfr_cmp(a.value_, b.value_); }

private:
    mpfr_t value_;
};

/// Closed interval [lo, hi] with endpoints rounded outward at
/// precision_bits. Every operation returns an interval containing the exact
/// result for every choice of points in the operands.
class RealInterval {
public:
    /// Point interval at an exactly representable integer.
    RealInterval(long value, unsigned precision_bits)
        : lo_(precision_bits), hi_(precision_bits), precision_(precision_bits)
    {
        mpfr_set_si(lo_.get(), value, MPFR_RNDD);
        mpfr_set_si(hi_.get(), value, MPFR_RNDU);
    }

    RealInterval(Float lo, Float hi, unsigned precision_bits)
        : lo_(std::move(lo)), hi_(std::move(hi)), precision_(precision_bits)
    {
        if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get())) {
            throw DomainError("RealInterval: NaN endpoint");
        }
        if (cmp(lo_, hi_) > 0) {
            throw std::invalid_argument("RealInterval: lo > hi");
        }
    }

    [[nodiscard]] const Float& lo() const noexcept { return lo_; }
    [[nodiscard]] const Float& hi() const noexcept { return hi_; }
    [[nodiscard]] unsigned precision_bits() const noexcept { return precision_; }

    [[nodiscard]] bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }

    /// hi - lo, rounded up.
    [[nodiscard]] Float width() const
    {
        Float w(precision_);
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }

    [[nodiscard]] Float midpoint() const
    {
        Float m(precision_ + 1);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m;
    }

    [[nodiscard]] double mid_double() const { return midpoint().to_double(); }

    [[nodiscard]] bool contains(const ExactRational& q) const
    {
        return mpfr_cmp_q(lo_.get(), q.mpq().get_mpq_t()) <= 0
            && mpfr_cmp_q(hi_.get(), q.mpq().get_mpq_t()) >= 0;
    }
    [[nodiscard]] bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    [[nodiscard]] bool overlaps(const RealInterval& o) const
    {
        return cmp(lo_, o.hi_) <= 0 && cmp(o.lo_, hi_) <= 0;
    }
    /// Endpoint-identical (same precision not required).
    [[nodiscard]] bool identical(const RealInterval& o) const
    {
        return mpfr_equal_p(lo_.get(), o.lo_.get()) && mpfr_equal_p(hi_.get(), o.hi_.get());
    }

    friend std::ostream& operator<<(std::ostream& os, const RealInterval& x)
    {
        return os << '[' << x.lo_.to_double(MPFR_RNDD) << ", " << x.hi_.to_double(MPFR_RNDU) << ']';
    }

private:
    Float lo_;
    Float hi_;
    unsigned precision_;
};

namespace detail {

inline unsigned joint_precision(const RealInterval& a, const RealInterval& b)
{
    return std::max(a.precision_bits(), b.precision_bits());
}

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

/// For operations monotone in each argument separately the extremes sit at
/// the four corners of the operand box.
inline RealInterval corner_hull(BinaryOp op, const RealInterval& a, const RealInterval& b, unsigned prec)
{
    Float lo(prec);
    Float hi(prec);
    Float t(prec);
    bool first = true;
    for (const Float* x : {&a.lo(), &a.hi()}) {
        for (const Float* y : {&b.lo(), &b.hi()}) {
            op(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || cmp(t, lo) < 0) {
                mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            }
            op(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || cmp(t, hi) > 0) {
                mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            }
            first = false;
        }
    }
    return {std::move(lo), std::move(hi), prec};
}

} // namespace detail

inline RealInterval operator+(const RealInterval& a, const RealInterval& b)
{
    const unsigned p = detail::joint_precision(a, b);
    Float lo(p);
    Float hi(p);
    mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), p};
}

inline RealInterval operator-(const RealInterval& a)
{
    const unsigned p = a.precision_bits();
    Float lo(p);
    Float hi(p);
    mpfr_neg(lo.get(), a.hi().get(), MPFR_RNDD);
    mpfr_neg(hi.get(), a.lo().get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), p};
}

inline RealInterval operator-(const RealInterval& a, const RealInterval& b)
{
    const unsigned p = detail::joint_precision(a, b);
    Float lo(p);
    Float hi(p);
    mpfr_sub(lo.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), p};
}

inline RealInterval operator*(const RealInterval& a, const RealInterval& b)
{
    return detail::corner_hull(mpfr_mul, a, b, detail::joint_precision(a, b));
}

inline RealInterval operator/(const RealInterval& a, const RealInterval& b)
{
    if (b.contains_zero()) {
        throw DomainError("interval division by an interval containing 0");
    }
    return detail::corner_hull(mpfr_div, a, b, detail::joint_precision(a, b));
}

/// Smallest interval containing both operands.
inline RealInterval hull(const RealInterval& a, const RealInterval& b)
{
    const unsigned p = detail::joint_precision(a, b);
    Float lo(p);
    Float hi(p);
    mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), p};
}

/// |x| as an interval.
inline RealInterval abs(const RealInterval& x)
{
    if (x.lo().sign() >= 0) {
        return x;
    }
    if (x.hi().sign() <= 0) {
        return -x;
    }
    const unsigned p = x.precision_bits();
    Float hi(p);
    mpfr_max(hi.get(), x.hi().get(), (-x).hi().get(), MPFR_RNDU);
    return {Float(p), std::move(hi), p};
}

/// Encloses q; the result is a point interval when q is representable at
/// precision_bits, otherwise one ulp wide.
inline RealInterval enclose_rational(const ExactRational& q, unsigned precision_bits)
{
    if (precision_bits < kMinPrecisionBits) {
        throw std::invalid_argument("enclose_rational: precision_bits must be >= 16");
    }
    Float lo(precision_bits);
    Float hi(precision_bits);
    mpfr_set_q(lo.get(), q.mpq().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), q.mpq().get_mpq_t(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), precision_bits};
}

inline RealInterval enclose_pi(unsigned precision_bits)
{
    Float lo(precision_bits);
    Float hi(precision_bits);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), precision_bits};
}

inline RealInterval enclose_e(unsigned precision_bits)
{
    Float lo(precision_bits);
    Float hi(precision_bits);
    mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
    mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
    mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), precision_bits};
}

enum class Elementary { Exp, Ln, Sqrt, PowRationalExponent };

namespace detail {

using UnaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

inline RealInterval monotone_increasing(UnaryOp op, const RealInterval& x, unsigned prec)
{
    Float lo(prec);
    Float hi(prec);
    op(lo.get(), x.lo().get(), MPFR_RNDD);
    op(hi.get(), x.hi().get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi), prec};
}

} // namespace detail

inline RealInterval exp(const RealInterval& x, unsigned precision_bits)
{
    return detail::monotone_increasing(mpfr_exp, x, precision_bits);
}
inline RealInterval exp(const RealInterval& x) { return exp(x, x.precision_bits()); }

inline RealInterval ln(const RealInterval& x, unsigned precision_bits)
{
    if (x.lo().sign() <= 0) {
        throw DomainError("ln of an interval touching or below 0");
    }
    return detail::monotone_increasing(mpfr_log, x, precision_bits);
}
inline RealInterval ln(const RealInterval& x) { return ln(x, x.precision_bits()); }

inline RealInterval sqrt(const RealInterval& x, unsigned precision_bits)
{
    if (x.lo().sign() < 0) {
        throw DomainError("sqrt of an interval below 0");
    }
    return detail::monotone_increasing(mpfr_sqrt, x, precision_bits);
}
inline RealInterval sqrt(const RealInterval& x) { return sqrt(x, x.precision_bits()); }

/// base^exponent for a positive base interval. x^y is monotone in each
/// argument on base > 0, so the corners bound it.
inline RealInterval pow(const RealInterval& base, const RealInterval& exponent, unsigned precision_bits)
{
    if (base.lo().sign() <= 0) {
        throw DomainError("pow requires a base interval with lo > 0");
    }
    return detail::corner_hull(mpfr_pow, base, exponent, precision_bits);
}

inline RealInterval pow(const RealInterval& base, const ExactRational& exponent, unsigned precision_bits)
{
    return pow(base, enclose_rational(exponent, precision_bits), precision_bits);
}

/// Dispatcher over the supported elementary functions. The exponent is only
/// read by PowRationalExponent.
inline RealInterval elementary(Elementary fn, const RealInterval& x, unsigned precision_bits,
                               const ExactRational& exponent = 1)
{
    switch (fn) {
    case Elementary::Exp: return exp(x, precision_bits);
    case Elementary::Ln: return ln(x, precision_bits);
    case Elementary::Sqrt: return sqrt(x, precision_bits);
    case Elementary::PowRationalExponent: return pow(x, exponent, precision_bits);
    }
    throw std::invalid_argument("elementary: unknown function");
}

inline RealInterval sqrt_e_over_pi(unsigned precision_bits)
{
    return sqrt(enclose_e(precision_bits) / enclose_pi(precision_bits));
}

enum class Ordering3 { Less, Greater, Undecidable };

inline Ordering3 compare(const RealInterval& f, const RealInterval& g)
{
    if (cmp(f.hi(), g.lo()) < 0) {
        return Ordering3::Less;
    }
    if (cmp(f.lo(), g.hi()) > 0) {
        return Ordering3::Greater;
    }
    return Ordering3::Undecidable;
}

inline std::string to_string(Ordering3 o)
{
    switch (o) {
    case Ordering3::Less: return "Less";
    case Ordering3::Greater: return "Greater";
    case Ordering3::Undecidable: return "Undecidable";
    }
    return "?";
}

/// Mixed interval/rational arithmetic, enclosing the rational at the
/// interval's precision.
inline RealInterval operator+(const RealInterval& a, const ExactRational& q) { return a + enclose_rational(q, a.precision_bits()); }
inline RealInterval operator-(const RealInterval& a, const ExactRational& q) { return a - enclose_rational(q, a.precision_bits()); }
inline RealInterval operator*(const RealInterval& a, const ExactRational& q) { return a * enclose_rational(q, a.precision_bits()); }
inline RealInterval operator/(const RealInterval& a, const ExactRational& q) { return a / enclose_rational(q, a.precision_bits()); }

} // namespace wallis
