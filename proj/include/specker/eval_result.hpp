#pragma once

#include <optional>
#include <string_view>

#include "specker/bigint.hpp"

namespace specker {

enum class UnknownReason {
    NoWitness,        // threshold-min found no witness below the horizon
    BudgetExhausted,  // threshold-min stopped scanning a non-monotone stretch
    BeyondHorizon,    // a tabulated function was consulted past its table
};

std::string_view to_string(UnknownReason r);

// Value of a function at a point under finite-horizon semantics.
struct EvalResult {
    std::optional<BigInt> value;
    UnknownReason reason = UnknownReason::NoWitness;

    static EvalResult of(BigInt v) { return {std::move(v), UnknownReason::NoWitness}; }
    static EvalResult unknown(UnknownReason r) { return {std::nullopt, r}; }

    bool known() const { return value.has_value(); }
    const BigInt& operator*() const { return *value; }
};

}  // namespace specker
