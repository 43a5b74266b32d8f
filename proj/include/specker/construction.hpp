#pragma once

// Finite stages of the generator construction.  Stage alpha fixes a
// stand-in d_alpha, computes phi_alpha, diagonalizes over a finite fragment
// of the closure of its seeds to get the breakpoint scale h_alpha, and
// places on each interval [h(n), h(n+1)) a minimal kernel vector of A_n
// whose norm clears d_alpha(h(n+1)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specker/bigint.hpp"
#include "specker/funalg.hpp"
#include "specker/intlat.hpp"
#include "specker/scales.hpp"
#include "specker/step_function.hpp"

namespace specker {

struct BuildConfig {
    std::size_t k = 1;
    std::size_t stages = 3;
    std::size_t breakpoints = 12;  // T: stage 0 runs T diagonal steps
    std::size_t depth = 3;
    std::size_t count = 64;
    std::vector<long> tmin_thresholds = {1, 2};
    std::size_t tmin_budget = 256;
    std::size_t min_hits = 3;
    std::uint64_t seed = 1;
    std::size_t samples = 20;

    void validate() const;  // throws std::invalid_argument
    FragmentConfig fragment() const { return {depth, count, tmin_thresholds}; }
};

class AuditFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StageMissing : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct StageResult {
    std::size_t alpha = 0;
    Poly d;
    Scale h;             // h(0) < ... ; only the last entry may reach the horizon
    bool forced = false; // last breakpoint set by the cap, not the recurrence
    // Coordinates g_0..g_k stacked; breakpoints are the entries of h below
    // the horizon.
    StepFunction gens;
    std::vector<BigInt> norms;  // phi_{alpha,n}(h(n+1)) per piece
    std::vector<FuncExpr> fragment;

    std::size_t pieces() const { return gens.pieces(); }
    StepFunction generator(std::size_t i) const { return gens.coordinate(i); }
};

struct GeneratorFamily {
    BuildConfig config;
    BigInt horizon;
    std::vector<StageResult> stages;

    std::size_t k() const { return config.k; }
    EvalContext context() const { return {horizon, config.tmin_budget}; }
};

// ||min_solution(A, d(x))||.
BigInt phi_m(const IntMatrix& a, const Poly& d, const BigInt& x);
// max over m <= x of phi_m(A_m, d, x).
BigInt phi(const Poly& d, std::size_t k, const BigInt& x);
// Kernel basis of the matrix owning block l, cached.
const KernelBasis& block_kernel(std::uint64_t l, std::size_t k);

// phi_alpha, phi_beta, g^beta_i, h_beta for beta < alpha, in that order.
std::vector<FuncExpr> closure_seeds(const GeneratorFamily& prior, std::size_t alpha);

StageResult build_stage(const GeneratorFamily& prior, std::size_t alpha);
GeneratorFamily build_family(const BuildConfig& cfg);

// Rebuilds the diagonal seeds of a stage (for checks on loaded families).
std::vector<SeedFn> stage_diagonal(const GeneratorFamily& fam, std::size_t alpha);
// Recomputes the fragment of every stage from the stored data.
void restore_fragments(GeneratorFamily& fam);

// Kernel identity, norm identity and threshold inequality at every piece;
// throws AuditFailure naming the first violation.
void verify_stage_invariants(const GeneratorFamily& fam, const StageResult& st);
void verify_family(const GeneratorFamily& fam);

struct Term {
    std::size_t stage;
    IntMatrix b;  // k x (k+1)
};

struct Combination {
    // partial[m] = sum of the first m terms, k coordinates; partial[0] = 0.
    std::vector<StepFunction> partial;
    const StepFunction& total() const { return partial.back(); }
};

Combination eval_combination(const GeneratorFamily& fam, const std::vector<Term>& terms);

// Matrices that appear as A_n (n even, both n and n+1 pieces below the
// horizon) in the given stage, deduplicated in block order.
std::vector<IntMatrix> realized_pair_matrices(const StageResult& st, std::size_t k);

// Deterministic combinations: M in [1, max_terms], increasing stages,
// matrices drawn from realized_pair_matrices (entries in [-2, 2]).
std::vector<std::vector<Term>> sample_combinations(const GeneratorFamily& fam, std::size_t count,
                                                   std::size_t max_terms, std::uint64_t seed);

}  // namespace specker
