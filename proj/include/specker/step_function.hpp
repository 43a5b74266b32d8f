#pragma once

// Vector-valued functions on [0, horizon) that are constant between
// breakpoints.  Generators, their integer combinations, and running maxima
// all live here; nothing is ever stored densely.

#include <cstddef>
#include <optional>
#include <vector>

#include "specker/bigint.hpp"
#include "specker/intlat.hpp"

namespace specker {

class StepFunction {
public:
    StepFunction() = default;
    // breaks[0] == 0, strictly increasing, all < horizon; values[i] holds
    // the value on [breaks[i], breaks[i+1]) (the last piece ends at horizon).
    StepFunction(std::size_t dim, std::vector<BigInt> breaks, std::vector<IntVector> values, BigInt horizon);

    static StepFunction zero(std::size_t dim, const BigInt& horizon);
    static StepFunction constant(const IntVector& v, const BigInt& horizon);
    // One piece per point: values[i] on [i, i+1).
    static StepFunction from_points(const std::vector<IntVector>& values);

    std::size_t dim() const { return dim_; }
    const BigInt& horizon() const { return horizon_; }
    std::size_t pieces() const { return breaks_.size(); }
    const BigInt& piece_start(std::size_t i) const { return breaks_[i]; }
    const BigInt& piece_end(std::size_t i) const { return i + 1 < breaks_.size() ? breaks_[i + 1] : horizon_; }
    const IntVector& piece_value(std::size_t i) const { return values_[i]; }
    const std::vector<BigInt>& breaks() const { return breaks_; }
    const std::vector<IntVector>& values() const { return values_; }

    // Index of the piece containing p; throws std::out_of_range outside [0, horizon).
    std::size_t piece_of(const BigInt& p) const;
    const IntVector& at(const BigInt& p) const { return values_[piece_of(p)]; }

    StepFunction coordinate(std::size_t i) const;
    StepFunction coordinates(std::size_t first, std::size_t count) const;
    // Pointwise B * value, B of shape r x dim.
    StepFunction apply(const IntMatrix& b) const;
    StepFunction operator+(const StepFunction& o) const;
    // Stack the coordinates of two functions on the same horizon.
    StepFunction concat(const StepFunction& o) const;
    // Coordinatewise running maximum of absolute values.
    StepFunction hat() const;
    // Scalar function p -> ||value(p)||.
    StepFunction sup_norm() const;
    // Drops breakpoints whose neighbouring values agree.
    StepFunction simplified() const;

    friend bool operator==(const StepFunction&, const StepFunction&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<BigInt> breaks_;
    std::vector<IntVector> values_;
    BigInt horizon_;
};

// Union of the breakpoint lists, sorted and deduplicated.
std::vector<BigInt> merge_breaks(const std::vector<BigInt>& a, const std::vector<BigInt>& b);

// Finite union of disjoint half-open intervals of integers, kept sorted.
class IntervalSet {
public:
    struct Interval {
        BigInt lo, hi;
    };

    void add(const BigInt& lo, const BigInt& hi);
    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    bool contains(const BigInt& x) const;
    BigInt count() const;
    BigInt count_at_least(const BigInt& x) const;
    std::optional<BigInt> first_in(const BigInt& lo, const BigInt& hi) const;
    // The first `n` elements >= from, in increasing order.
    std::vector<BigInt> first_elements(const BigInt& from, std::size_t n) const;

private:
    std::vector<Interval> parts_;
};

}  // namespace specker
