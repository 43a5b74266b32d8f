#include "specker/construction.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "specker/parallel.hpp"

namespace specker {

void BuildConfig::validate() const {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (breakpoints < 3) throw std::invalid_argument("breakpoints must be >= 3");
    if (count < 1) throw std::invalid_argument("fragment count must be >= 1");
    if (min_hits < 1) throw std::invalid_argument("min_hits must be >= 1");
    for (long c : tmin_thresholds)
        if (c < 1) throw std::invalid_argument("threshold constants must be >= 1");
}

BigInt phi_m(const IntMatrix& a, const Poly& d, const BigInt& x) {
    return min_solution(a, d(x)).sup_norm();
}

const KernelBasis& block_kernel(std::uint64_t l, std::size_t k) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, std::uint64_t>, std::unique_ptr<KernelBasis>> cache;
    std::lock_guard lk(mu);
    auto& slot = cache[{k, l}];
    if (!slot) slot = std::make_unique<KernelBasis>(kernel_basis(matrix_for_block(l, k)));
    return *slot;
}

BigInt phi(const Poly& d, std::size_t k, const BigInt& x) {
    // Blocks met by some m <= x are those whose first index 2^(l+1) - 2 is <= x.
    std::size_t top = bit_length(floor_div(x, 2) + 1) - 1;
    BigInt threshold = d(x), best = 0;
    for (std::uint64_t l = 0; l <= top; ++l)
        best = big_max(best, min_solution(block_kernel(l, k), threshold).sup_norm());
    return best;
}

namespace {

FuncExpr phi_seed(std::size_t alpha, std::size_t k) {
    struct Memo {
        std::mutex mu;
        std::map<BigInt, BigInt> values;
    };
    auto memo = std::make_shared<Memo>();
    Poly d = standin(alpha);
    auto fn = [memo, d, k](const BigInt& x) {
        {
            std::lock_guard lk(memo->mu);
            auto it = memo->values.find(x);
            if (it != memo->values.end()) return it->second;
        }
        BigInt v = phi(d, k, x);
        std::lock_guard lk(memo->mu);
        memo->values.emplace(x, v);
        return v;
    };
    return FuncExpr::rule("phi" + std::to_string(alpha), fn);
}

std::string where(const StageResult& st, std::size_t n) {
    return "stage " + std::to_string(st.alpha) + " piece " + std::to_string(n) + ": ";
}

}  // namespace

std::vector<FuncExpr> closure_seeds(const GeneratorFamily& prior, std::size_t alpha) {
    if (alpha > prior.stages.size()) throw StageMissing("closure_seeds: earlier stages missing");
    const std::size_t k = prior.k();
    std::vector<FuncExpr> out{phi_seed(alpha, k)};
    for (std::size_t b = 0; b < alpha; ++b) out.push_back(phi_seed(b, k));
    for (std::size_t b = 0; b < alpha; ++b)
        for (std::size_t i = 0; i <= k; ++i)
            out.push_back(FuncExpr::step("g" + std::to_string(b) + "_" + std::to_string(i),
                                         prior.stages[b].generator(i)));
    for (std::size_t b = 0; b < alpha; ++b) out.push_back(FuncExpr::table("h" + std::to_string(b), prior.stages[b].h));
    return out;
}

namespace {

EvalContext stage_context(const GeneratorFamily& fam, std::size_t alpha) {
    if (alpha == 0) return {std::nullopt, fam.config.tmin_budget};
    return fam.context();
}

std::vector<SeedFn> diagonal_of(const std::vector<FuncExpr>& fragment, const EvalContext& ctx) {
    std::vector<SeedFn> fs;
    fs.reserve(fragment.size());
    for (const auto& e : fragment) fs.push_back(diagonal_view(e, ctx));
    return fs;
}

}  // namespace

StageResult build_stage(const GeneratorFamily& prior, std::size_t alpha) {
    const BuildConfig& cfg = prior.config;
    if (alpha != prior.stages.size()) throw StageMissing("build_stage: stages must be built in order");
    StageResult st;
    st.alpha = alpha;
    st.d = standin(alpha);
    st.fragment = closure_fragment(closure_seeds(prior, alpha), cfg.fragment());
    auto fs = diagonal_of(st.fragment, stage_context(prior, alpha));

    BigInt horizon;
    if (alpha == 0) {
        auto diag = diag_scale_capped(fs, std::nullopt, cfg.breakpoints);
        st.h = std::move(diag.h);
        horizon = st.h.values().back();
    } else {
        horizon = prior.horizon;
        auto diag = diag_scale_capped(fs, horizon, 8 * cfg.breakpoints + 64);
        st.h = std::move(diag.h);
        st.forced = diag.forced;
        if (st.h.values().back() < horizon)
            throw HorizonExceeded("stage " + std::to_string(alpha) + ": diagonal did not reach the horizon");
    }

    std::size_t pieces = 0;
    while (pieces < st.h.size() && st.h[pieces] < horizon) ++pieces;
    if (pieces < 3)
        throw HorizonExceeded("stage " + std::to_string(alpha) + ": only " + std::to_string(pieces) +
                              " breakpoints below the horizon " + to_dec(horizon));

    std::vector<IntVector> values(pieces);
    parallel_for(pieces, [&](std::size_t n) {
        values[n] = min_solution(block_kernel(partition_block(std::uint64_t{n}), cfg.k), st.d(st.h[n + 1]));
    });
    st.norms.reserve(pieces);
    for (const auto& v : values) st.norms.push_back(v.sup_norm());
    std::vector<BigInt> breaks(st.h.values().begin(), st.h.values().begin() + static_cast<long>(pieces));
    st.gens = StepFunction(cfg.k + 1, std::move(breaks), std::move(values), horizon);
    return st;
}

GeneratorFamily build_family(const BuildConfig& cfg) {
    cfg.validate();
    GeneratorFamily fam;
    fam.config = cfg;
    for (std::size_t a = 0; a < cfg.stages; ++a) {
        StageResult st = build_stage(fam, a);
        if (a == 0) fam.horizon = st.h.values().back();
        fam.stages.push_back(std::move(st));
        verify_stage_invariants(fam, fam.stages.back());
    }
    return fam;
}

std::vector<SeedFn> stage_diagonal(const GeneratorFamily& fam, std::size_t alpha) {
    if (alpha >= fam.stages.size()) throw StageMissing("stage_diagonal: no stage " + std::to_string(alpha));
    return diagonal_of(fam.stages[alpha].fragment, stage_context(fam, alpha));
}

void restore_fragments(GeneratorFamily& fam) {
    for (std::size_t a = 0; a < fam.stages.size(); ++a)
        fam.stages[a].fragment = closure_fragment(closure_seeds(fam, a), fam.config.fragment());
}

void verify_stage_invariants(const GeneratorFamily& fam, const StageResult& st) {
    const std::size_t k = fam.k();
    const auto& h = st.h.values();
    if (h.empty() || h[0] != 0) throw AuditFailure(where(st, 0) + "h(0) != 0");
    if (!st.h.strictly_increasing()) throw AuditFailure(where(st, 0) + "h not strictly increasing");
    if (st.gens.dim() != k + 1) throw AuditFailure(where(st, 0) + "generator dimension mismatch");
    if (st.gens.horizon() != fam.horizon) throw AuditFailure(where(st, 0) + "generator horizon mismatch");
    if (st.norms.size() != st.pieces()) throw AuditFailure(where(st, 0) + "norm table size mismatch");
    for (std::size_t n = 0; n < st.pieces(); ++n) {
        if (n + 1 >= h.size() || st.gens.piece_start(n) != h[n])
            throw AuditFailure(where(st, n) + "breakpoint differs from h(" + std::to_string(n) + ")");
        const IntVector& v = st.gens.piece_value(n);
        IntMatrix a = matrix_for_index(BigInt(static_cast<unsigned long>(n)), k);
        if (!(a * v).is_zero()) throw AuditFailure(where(st, n) + "A_n * g(h(n)) != 0 with g = " + v.str());
        BigInt norm = v.sup_norm();
        BigInt threshold = st.d(h[n + 1]);
        if (norm < threshold)
            throw AuditFailure(where(st, n) + "||g(h(n))|| = " + to_dec(norm) + " < d(h(n+1)) = " + to_dec(threshold));
        BigInt expect = phi_m(a, st.d, h[n + 1]);
        if (norm != expect)
            throw AuditFailure(where(st, n) + "||g(h(n))|| = " + to_dec(norm) + " != phi_n(h(n+1)) = " + to_dec(expect));
        if (st.norms[n] != norm) throw AuditFailure(where(st, n) + "stored norm " + to_dec(st.norms[n]) + " is stale");
    }
}

void verify_family(const GeneratorFamily& fam) {
    for (const auto& st : fam.stages) verify_stage_invariants(fam, st);
}

Combination eval_combination(const GeneratorFamily& fam, const std::vector<Term>& terms) {
    const std::size_t k = fam.k();
    Combination out;
    out.partial.push_back(StepFunction::zero(k, fam.horizon));
    std::optional<std::size_t> last;
    for (const auto& t : terms) {
        if (t.stage >= fam.stages.size()) throw StageMissing("eval_combination: no stage " + std::to_string(t.stage));
        if (last && t.stage <= *last) throw std::invalid_argument("eval_combination: stages must increase");
        if (t.b.rows() != k || t.b.cols() != k + 1)
            throw std::invalid_argument("eval_combination: coefficient matrix must be k x (k+1)");
        last = t.stage;
        out.partial.push_back(out.partial.back() + fam.stages[t.stage].gens.apply(t.b));
    }
    return out;
}

std::vector<IntMatrix> realized_pair_matrices(const StageResult& st, std::size_t k) {
    std::vector<IntMatrix> out;
    std::vector<std::uint64_t> seen;
    for (std::size_t n = 0; n + 1 < st.pieces(); n += 2) {
        std::uint64_t l = partition_block(std::uint64_t{n});
        if (std::find(seen.begin(), seen.end(), l) != seen.end()) continue;
        seen.push_back(l);
        IntMatrix a = matrix_for_block(l, k);
        if (a.max_abs() <= 2) out.push_back(std::move(a));
    }
    return out;
}

std::vector<std::vector<Term>> sample_combinations(const GeneratorFamily& fam, std::size_t count,
                                                   std::size_t max_terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t s = fam.stages.size();
    std::vector<std::vector<IntMatrix>> pool;
    for (const auto& st : fam.stages) pool.push_back(realized_pair_matrices(st, fam.k()));
    std::vector<std::vector<Term>> out;
    const std::size_t cap = std::min(max_terms, s);
    for (std::size_t c = 0; c < count; ++c) {
        std::size_t m = cap == 0 ? 0 : 1 + rng() % cap;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng() % (s - i)]);
        std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<long>(m));
        std::sort(chosen.begin(), chosen.end());
        std::vector<Term> terms;
        for (std::size_t a : chosen) {
            const auto& mats = pool[a];
            if (mats.empty()) continue;
            terms.push_back({a, mats[rng() % mats.size()]});
        }
        out.push_back(std::move(terms));
    }
    return out;
}

}  // namespace specker
