#pragma once

// Paired partition of N, the block-constant enumeration of integer matrices,
// the diagonal breakpoint scale, and the finite forms of the [f << h]
// relation and its nowhere-dense extension step.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specker/bigint.hpp"
#include "specker/eval_result.hpp"
#include "specker/intlat.hpp"

namespace specker {

using NatFn = std::function<BigInt(const BigInt&)>;
using SeedFn = std::function<EvalResult(const BigInt&)>;

// Block l with n in I_l: the 2-adic valuation of floor(n/2) + 1.  Even n and
// n+1 always share a block, and pair index 2^l - 1 lies in block l.
std::uint64_t partition_block(const BigInt& n);
std::uint64_t partition_block(std::uint64_t n);

// First index n = 2p (p >= 0) whose pair lies in block l, at or after `from`.
std::uint64_t next_pair_in_block(std::uint64_t l, std::uint64_t from);

// Fixed bijection N -> Z^{k x (k+1)}: matrices ordered by largest absolute
// entry, then lexicographically on the row-major entry tuple.
IntMatrix matrix_for_block(std::uint64_t l, std::size_t k);
std::uint64_t block_of_matrix(const IntMatrix& b);

// A_n := matrix_for_block(partition_block(n), k).
IntMatrix matrix_for_index(const BigInt& n, std::size_t k);

// Integer polynomial in n, used for the dominating stand-ins and for the
// comparison functions handed to the certificate checks.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<BigInt> coeffs);  // coeffs[i] multiplies n^i

    static Poly constant(const BigInt& c);
    // scale * (n + shift)^exp + add
    static Poly shifted_power(long shift, unsigned exp, const BigInt& scale = 1, const BigInt& add = 0);

    BigInt operator()(const BigInt& n) const;
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    Poly operator-(const Poly& o) const;
    Poly operator+(const BigInt& c) const;

    // Coefficients of p(lo + t) as a polynomial in t.
    Poly taylor_shift(const BigInt& lo) const;
    // True when every coefficient of p(lo + t) is >= 0, which proves
    // p >= 0 on [lo, infinity).
    bool provably_nonnegative_from(const BigInt& lo) const;
    // Least n in [lo, hi) with p(n) >= target, assuming p nondecreasing there.
    std::optional<BigInt> first_at_least(const BigInt& target, const BigInt& lo, const BigInt& hi) const;

    std::string str() const;

private:
    std::vector<BigInt> coeffs_;
};

class Scale {
public:
    Scale() = default;
    explicit Scale(std::vector<BigInt> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    const BigInt& operator[](std::size_t i) const { return values_.at(i); }
    const std::vector<BigInt>& values() const { return values_; }
    void push_back(BigInt v) { values_.push_back(std::move(v)); }

    bool strictly_increasing() const;
    bool nondecreasing() const;

    // Tabulated lookup with the argument given as an integer; BeyondHorizon
    // when the index falls outside the table.
    EvalResult at(const BigInt& n) const;

    static Scale tabulate(const NatFn& f, std::size_t count);
    static Scale tabulate(const Poly& f, std::size_t count);

private:
    std::vector<BigInt> values_;
};

class HorizonExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// h(0) = 0, h(n+1) = max{h(n), f_0(h(n)), ..., f_n(h(n))} + 1 for n < steps.
// Seeds past the end of `fs` count as the zero function.  A seed that reports
// NoWitness or BudgetExhausted contributes 0; BeyondHorizon throws.
Scale diag_scale(std::span<const SeedFn> fs, std::size_t steps);

struct CappedDiagonal {
    Scale h;
    // True when the last value was forced past the cap because some seed was
    // not evaluable at the final breakpoint.
    bool forced = false;
};

// Same recurrence, stopped at the first value >= cap (or after max_steps).
// A BeyondHorizon seed at h(n) < cap ends the scale with
// h(n+1) = max(h(n), known seed values, cap) + 1.
CappedDiagonal diag_scale_capped(std::span<const SeedFn> fs, const std::optional<BigInt>& cap,
                                 std::size_t max_steps);

struct DominationReport {
    struct Failure {
        std::size_t seed;
        std::size_t n;
        BigInt value;
        BigInt bound;
    };
    std::size_t checked = 0;
    std::size_t unknown = 0;
    std::vector<Failure> failures;
    bool ok() const { return failures.empty(); }
};

// Checks f_i(h(n)) < h(n+1) for every i <= n with h(n+1) in the table;
// transitions at index >= last_transition are skipped.
DominationReport check_domination(std::span<const SeedFn> fs, const Scale& h,
                                  std::size_t transitions);

// {n < horizon : f(h(n)) < h(n+1)}.
std::vector<std::size_t> f_ll_h(const NatFn& f, const Scale& h, std::size_t horizon);

struct DprimeReport {
    std::size_t horizon = 0;
    std::size_t pairs_required = 0;
    // counts[f][l] = #{n < horizon : n, n+1 in I_l and both in [f << h]}
    std::vector<std::vector<std::size_t>> counts;
    bool pass = false;
};

DprimeReport dprime_condition(std::span<const NatFn> ys, const Scale& h, std::size_t blocks,
                              std::size_t pairs_required, std::size_t horizon);

// Extension s~ of a strictly increasing s such that for some n >= m with
// n, n+1 in I_l: f(s~(n)) < s~(n+1) and f(s~(n+1)) < s~(n+2).  Returns s
// itself when s already contains such a witness; otherwise n >= max(|s|, m)
// is minimal and the new entries grow as slowly as the constraints allow.
std::vector<BigInt> nwd_extend(std::span<const BigInt> s, const NatFn& f, std::uint64_t l,
                               std::uint64_t m);

// d_i(n) = (n+2)^(i+1), i < count.
std::vector<Poly> standin_family(std::size_t count);
Poly standin(std::size_t i);

}  // namespace specker
