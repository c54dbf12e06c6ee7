#pragma once

#include <stdexcept>
#include <string>

namespace wallis {

/// Argument outside the mathematical domain of a function (ln of a
/// non-positive interval, square root of a negative number, zero divisor).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An index n outside the validity range of an inequality.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Successive scaled differences disagree at the two largest grid points,
/// which usually means the probed order k is wrong.
class InconsistentTrend : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wallis
