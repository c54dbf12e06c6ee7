#pragma once

#include <cstdlib>
#include <optional>
#include <string>

#include <mpfr.h>

#include "wallis/interval.hpp"

namespace wallis {

/// Scientific notation with `digits` significant digits, e.g. "8.0124e-4".
inline std::string format_scientific(const Float& x, int digits, mpfr_rnd_t rnd = MPFR_RNDN)
{
    if (digits < 1) {
        throw std::invalid_argument("format_scientific: digits must be >= 1");
    }
    if (mpfr_zero_p(x.get())) {
        return digits == 1 ? "0e0" : "0." + std::string(static_cast<std::size_t>(digits - 1), '0') + "e0";
    }
    mpfr_exp_t exponent = 0;
    char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<std::size_t>(digits), x.get(), rnd);
    std::string mantissa(raw);
    mpfr_free_str(raw);

    std::string out;
    if (mantissa.front() == '-') {
        out += '-';
        mantissa.erase(0, 1);
    }
    out += mantissa[0];
    if (mantissa.size() > 1) {
        out += '.';
        out += mantissa.substr(1);
    }
    out += 'e';
    out += std::to_string(static_cast<long>(exponent) - 1);
    return out;
}

/// Decimal rendering whose every shown digit is certified: the midpoint
/// rounded to nearest, returned only when both endpoints round to the same
/// string.
inline std::optional<std::string> certified_decimal(const RealInterval& x, int digits)
{
    const std::string lo = format_scientific(x.lo(), digits);
    const std::string hi = format_scientific(x.hi(), digits);
    if (lo != hi) {
        return std::nullopt;
    }
    return format_scientific(x.midpoint(), digits);
}

struct Rendering {
    std::string text;
    int digits;
};

/// Largest digit count in [1, max_digits] at which the rendering is
/// certified; empty when not even one digit is.
inline std::optional<Rendering> best_certified_decimal(const RealInterval& x, int max_digits)
{
    std::optional<Rendering> best;
    for (int d = 1; d <= max_digits; ++d) {
        if (auto s = certified_decimal(x, d)) {
            best = Rendering{*s, d};
        }
    }
    return best;
}

} // namespace wallis
