#pragma once

#include <optional>
#include <stdexcept>

namespace wallis {

/// Working precision for a decision: start at initial_bits and double up to
/// cap_bits before giving up.
struct PrecisionPolicy {
    unsigned initial_bits = 128;
    unsigned cap_bits = 8192;
};

template <typename T>
struct Escalated {
    std::optional<T> value;   // empty when undecided at the cap
    unsigned precision_bits;  // last precision tried
};

/// Runs attempt(bits) at increasing precision until it returns a value.
template <typename Attempt>
auto escalate(const PrecisionPolicy& policy, Attempt&& attempt)
    -> Escalated<typename decltype(attempt(0u))::value_type>
{
    if (policy.initial_bits == 0 || policy.cap_bits < policy.initial_bits) {
        throw std::invalid_argument("PrecisionPolicy: need 0 < initial_bits <= cap_bits");
    }
    unsigned bits = policy.initial_bits;
    for (;;) {
        if (auto r = attempt(bits)) {
            return {std::move(r), bits};
        }
        if (bits >= policy.cap_bits) {
            return {std::nullopt, bits};
        }
        bits = bits * 2 > policy.cap_bits ? policy.cap_bits : bits * 2;
    }
}

} // namespace wallis
