#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "wallis/decimal.hpp"
#include "wallis/interval.hpp"
#include "wallis/precision.hpp"
#include "wallis/rational.hpp"

using namespace wallis;
using wallis::testing::decimal;
using wallis::testing::near;
using wallis::testing::random_rational;
using wallis::testing::width_of;

namespace {

// Oracle: (2n-1)!! / (2n)!! multiplied out factor by factor, then reduced.
ExactRational wallis_by_product(unsigned long n)
{
    mpz_class odd = 1;
    mpz_class even = 1;
    for (unsigned long k = 1; k <= n; ++k) {
        odd *= 2 * k - 1;
        even *= 2 * k;
    }
    return ExactRational(odd, even);
}

bool is_power_of_two(const mpz_class& z) { return z > 0 && mpz_popcount(z.get_mpz_t()) == 1; }

} // namespace

TEST(ExactRational, ReducesAndNormalisesSign)
{
    const ExactRational q(6, -8);
    EXPECT_EQ(q.str(), "-3/4");
    EXPECT_EQ(q.denominator(), 4);
    EXPECT_EQ(ExactRational::parse("10/4"), ExactRational(5, 2));
    EXPECT_EQ(ExactRational::parse("-7").str(), "-7");
    EXPECT_THROW(ExactRational::parse("1/0"), DomainError);
    EXPECT_THROW(ExactRational::parse("abc"), std::invalid_argument);
    EXPECT_THROW(ExactRational(1) / ExactRational(0), DomainError);
}

TEST(ExactRational, IntegerPower)
{
    EXPECT_EQ(pow(ExactRational(2, 3), 3), ExactRational(8, 27));
    EXPECT_EQ(pow(ExactRational(-2, 3), -3), ExactRational(-27, 8));
    EXPECT_EQ(pow(ExactRational(5, 7), 0), ExactRational(1));
    EXPECT_THROW(pow(ExactRational(0), -1), DomainError);
}

TEST(WallisExact, SmallCases)
{
    EXPECT_EQ(wallis_exact(1), ExactRational(1, 2));
    EXPECT_EQ(wallis_exact(2), ExactRational(3, 8));
    EXPECT_EQ(wallis_exact(5), ExactRational(63, 256));
    EXPECT_EQ(wallis_exact(5), wallis_by_product(5));
}

TEST(WallisExact, RejectsZero) { EXPECT_THROW(wallis_exact(0), DomainError); }

TEST(WallisExact, MatchesDirectProduct)
{
    for (unsigned long n = 1; n <= 200; ++n) {
        ASSERT_EQ(wallis_exact(n), wallis_by_product(n)) << "n=" << n;
    }
}

TEST(WallisExact, ReducedFormIsOddOverPowerOfTwo)
{
    for (unsigned long n = 1; n <= 500; ++n) {
        const ExactRational w = wallis_exact(n);
        ASSERT_TRUE(mpz_odd_p(w.numerator().get_mpz_t())) << "n=" << n;
        ASSERT_TRUE(is_power_of_two(w.denominator())) << "n=" << n;
        // from_reduced skipped the gcd; the canonical form must agree.
        ASSERT_EQ(w, ExactRational(w.numerator(), w.denominator()));
    }
}

TEST(WallisExact, Recurrence)
{
    for (unsigned long n = 1; n <= 500; ++n) {
        ASSERT_EQ(wallis_exact(n + 1) * ExactRational(static_cast<long>(2 * n + 2)),
                  wallis_exact(n) * ExactRational(static_cast<long>(2 * n + 1)))
            << "n=" << n;
    }
}

TEST(EncloseRational, DyadicIsExact)
{
    const RealInterval half = enclose_rational({1, 2}, 64);
    EXPECT_TRUE(half.is_point());
    EXPECT_EQ(half.lo().to_double(), 0.5);
    const RealInterval w5 = enclose_rational({63, 256}, 128);
    EXPECT_TRUE(w5.is_point());
    EXPECT_TRUE(w5.contains({63, 256}));
}

TEST(EncloseRational, ThirdIsTight)
{
    const RealInterval third = enclose_rational({1, 3}, 64);
    EXPECT_TRUE(third.contains({1, 3}));
    EXPECT_FALSE(third.is_point());
    EXPECT_LE(width_of(third), std::ldexp(1.0, -62));
}

TEST(EncloseRational, RejectsTinyPrecision) { EXPECT_THROW(enclose_rational(1, 8), std::invalid_argument); }

TEST(EncloseRational, ContainmentAndRelativeWidthProperty)
{
    std::uniform_int_distribution<unsigned> bits(16, 600);
    for (int i = 0; i < 1000; ++i) {
        const ExactRational q = random_rational();
        const unsigned p = bits(wallis::testing::rng());
        const RealInterval x = enclose_rational(q, p);
        ASSERT_TRUE(x.contains(q)) << q << " at " << p;
        if (!q.is_zero()) {
            // width <= 2^(2-p) |q|
            const ExactRational bound = abs(q) * pow(ExactRational(2), 2 - static_cast<long>(p));
            ASSERT_LE(mpfr_cmp_q(x.width().get(), bound.mpq().get_mpq_t()), 0) << q << " at " << p;
        }
    }
}

TEST(IntervalArithmetic, ProductSignCases)
{
    auto iv = [](long lo, long hi) { return hull(RealInterval(lo, 64), RealInterval(hi, 64)); };
    const RealInterval p = iv(-2, 3) * iv(-5, 4);
    EXPECT_EQ(p.lo().to_double(), -15.0);
    EXPECT_EQ(p.hi().to_double(), 12.0);
    const RealInterval q = iv(2, 4) / iv(-2, -1);
    EXPECT_EQ(q.lo().to_double(), -4.0);
    EXPECT_EQ(q.hi().to_double(), -1.0);
    EXPECT_THROW(iv(1, 2) / iv(-1, 1), DomainError);
}

TEST(IntervalArithmetic, ArithmeticContainsExactRationalResults)
{
    for (int i = 0; i < 300; ++i) {
        const ExactRational x = random_rational();
        const ExactRational y = random_rational();
        const RealInterval ix = enclose_rational(x, 80);
        const RealInterval iy = enclose_rational(y, 80);
        ASSERT_TRUE((ix + iy).contains(x + y));
        ASSERT_TRUE((ix - iy).contains(x - y));
        ASSERT_TRUE((ix * iy).contains(x * y));
        if (!y.is_zero()) {
            ASSERT_TRUE((ix / iy).contains(x / y));
        }
    }
}

TEST(Elementary, IdentityCases)
{
    const RealInterval one = exp(RealInterval(0, 128));
    EXPECT_TRUE(one.is_point());
    EXPECT_TRUE(one.contains(1));
    const RealInterval zero = ln(RealInterval(1, 128));
    EXPECT_TRUE(zero.is_point());
    EXPECT_TRUE(zero.contains(0));
    EXPECT_TRUE(elementary(Elementary::Sqrt, enclose_rational({9, 4}, 64), 64).contains({3, 2}));
    EXPECT_TRUE(elementary(Elementary::PowRationalExponent, enclose_rational(8, 64), 64, {2, 3}).contains(4));
}

TEST(Elementary, SqrtOfEOverPi)
{
    // 50-digit reference value computed independently (mpmath, 50 dps).
    const ExactRational reference = decimal("0.93019136710263285866812462363333155602971092070429");
    const RealInterval x = sqrt(enclose_e(256) / enclose_pi(256), 256);
    EXPECT_TRUE(near(x, reference, decimal("1e-48")));
    EXPECT_LT(width_of(x), 1e-70);
    EXPECT_TRUE(near(sqrt_e_over_pi(256), reference, decimal("1e-48")));
}

TEST(Elementary, DomainErrors)
{
    const RealInterval touching_zero = hull(RealInterval(0, 64), RealInterval(1, 64));
    EXPECT_THROW(ln(touching_zero), DomainError);
    EXPECT_THROW(sqrt(RealInterval(-1, 64)), DomainError);
    EXPECT_NO_THROW(sqrt(touching_zero));
    EXPECT_THROW(elementary(Elementary::PowRationalExponent, touching_zero, 64, {1, 2}), DomainError);
}

TEST(Elementary, ConstantsBracketDoubleValues)
{
    for (unsigned p : {53u, 128u, 1024u}) {
        const RealInterval pi = enclose_pi(p);
        const RealInterval e = enclose_e(p);
        EXPECT_LE(pi.lo().to_double(MPFR_RNDD), M_PI);
        EXPECT_GE(pi.hi().to_double(MPFR_RNDU), M_PI);
        EXPECT_LE(e.lo().to_double(MPFR_RNDD), M_E);
        EXPECT_GE(e.hi().to_double(MPFR_RNDU), M_E);
    }
}

TEST(Elementary, MonotoneRefinement)
{
    const std::vector<ExactRational> inputs{{1, 3}, {7, 2}, {1, 1000}, {123456, 7}, 2};
    for (const auto& q : inputs) {
        // The input interval is fixed; only the output precision changes.
        const RealInterval x = enclose_rational(q, 64);
        for (unsigned p = 64; p <= 1024; p *= 2) {
            for (auto fn : {Elementary::Exp, Elementary::Ln, Elementary::Sqrt, Elementary::PowRationalExponent}) {
                const Float w1 = elementary(fn, x, p, {5, 3}).width();
                const Float w2 = elementary(fn, x, 2 * p, {5, 3}).width();
                ASSERT_LE(cmp(w2, w1), 0) << q << " p=" << p;
            }
        }
    }
}

TEST(Elementary, ExpOfLnContainsInputProperty)
{
    for (int i = 0; i < 300; ++i) {
        const ExactRational x = random_rational(true);
        const RealInterval r = exp(ln(enclose_rational(x, 128)));
        ASSERT_TRUE(r.contains(x)) << x;
    }
}

TEST(Compare, ThreeWay)
{
    auto iv = [](long lo, long hi) { return hull(RealInterval(lo, 64), RealInterval(hi, 64)); };
    EXPECT_EQ(compare(iv(1, 2), iv(3, 4)), Ordering3::Less);
    EXPECT_EQ(compare(iv(3, 4), iv(1, 2)), Ordering3::Greater);
    EXPECT_EQ(compare(iv(1, 3), iv(2, 4)), Ordering3::Undecidable);
    // Touching endpoints overlap.
    EXPECT_EQ(compare(iv(1, 2), iv(2, 3)), Ordering3::Undecidable);
}

TEST(Escalate, DoublesUpToCap)
{
    std::vector<unsigned> seen;
    auto r = escalate(PrecisionPolicy{128, 1000}, [&](unsigned bits) -> std::optional<int> {
        seen.push_back(bits);
        return std::nullopt;
    });
    EXPECT_FALSE(r.value);
    EXPECT_EQ(seen, (std::vector<unsigned>{128, 256, 512, 1000}));
    auto ok = escalate(PrecisionPolicy{}, [](unsigned bits) -> std::optional<unsigned> {
        return bits >= 512 ? std::optional(bits) : std::nullopt;
    });
    EXPECT_EQ(ok.precision_bits, 512u);
}

TEST(Decimal, ScientificFormatting)
{
    Float x(128);
    mpfr_set_str(x.get(), "0.00080123849", 10, MPFR_RNDN);
    EXPECT_EQ(format_scientific(x, 5), "8.0124e-4");
    mpfr_set_str(x.get(), "-123.456", 10, MPFR_RNDN);
    EXPECT_EQ(format_scientific(x, 3), "-1.23e2");
    mpfr_set_zero(x.get(), 1);
    EXPECT_EQ(format_scientific(x, 3), "0.00e0");
}

TEST(Decimal, CertifiedOnlyWhenEndpointsAgree)
{
    const RealInterval tight = enclose_rational({80123849, 100000000000}, 128);
    EXPECT_EQ(certified_decimal(tight, 5).value_or("none"), "8.0124e-4");
    // [0.12344, 0.12346] straddles the 5-digit boundary 1.2345e-1.
    const RealInterval loose = hull(enclose_rational({12344, 100000}, 64), enclose_rational({12346, 100000}, 64));
    EXPECT_FALSE(certified_decimal(loose, 5));
    EXPECT_EQ(certified_decimal(loose, 3).value_or("none"), "1.23e-1");
    const auto best = best_certified_decimal(loose, 10);
    ASSERT_TRUE(best);
    EXPECT_EQ(best->digits, 3);
}
