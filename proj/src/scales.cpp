#include "specker/scales.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace specker {

std::string_view to_string(UnknownReason r) {
    switch (r) {
        case UnknownReason::NoWitness: return "no witness below horizon";
        case UnknownReason::BudgetExhausted: return "search budget exhausted";
        case UnknownReason::BeyondHorizon: return "beyond tabulated horizon";
    }
    return "?";
}

std::uint64_t partition_block(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("partition_block: negative index");
    BigInt pair = n / 2 + 1;
    return mpz_scan1(pair.get_mpz_t(), 0);
}

std::uint64_t partition_block(std::uint64_t n) {
    const std::uint64_t pair = n / 2 + 1;
    return static_cast<std::uint64_t>(__builtin_ctzll(pair));
}

std::uint64_t next_pair_in_block(std::uint64_t l, std::uint64_t from) {
    // Pairs p with nu2(p + 1) = l are p + 1 = 2^l * (2q + 1).
    const std::uint64_t step = std::uint64_t{1} << (l + 1);
    const std::uint64_t first = (std::uint64_t{1} << l) - 1;
    std::uint64_t p = first;
    const std::uint64_t min_pair = (from + 1) / 2;
    if (min_pair > first) p = first + (min_pair - first + step - 1) / step * step;
    return 2 * p;
}

namespace {

BigInt pow_ui(std::uint64_t base, std::size_t exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

// Vectors in [-e, e]^rem, with (`hit`) or without a prior entry of size e.
BigInt completions(std::uint64_t e, std::size_t rem, bool hit) {
    BigInt all = pow_ui(2 * e + 1, rem);
    if (hit) return all;
    if (e == 0) return rem == 0 ? BigInt(0) : BigInt(0);
    return all - pow_ui(2 * e - 1, rem);
}

}  // namespace

IntMatrix matrix_for_block(std::uint64_t l, std::size_t k) {
    const std::size_t cells = k * (k + 1);
    IntMatrix out(k, k + 1);
    for (std::size_t i = 0; i < cells; ++i) out(i / (k + 1), i % (k + 1)) = 0;
    if (l == 0) return out;
    std::uint64_t e = 1;
    while (pow_ui(2 * e + 1, cells) <= l) ++e;
    BigInt idx = BigInt(static_cast<unsigned long>(l)) - pow_ui(2 * e - 1, cells);
    bool hit = false;
    const long se = static_cast<long>(e);
    for (std::size_t i = 0; i < cells; ++i) {
        for (long x = -se; x <= se; ++x) {
            const bool h = hit || std::labs(x) == se;
            const BigInt cnt = completions(e, cells - i - 1, h);
            if (idx < cnt) {
                out(i / (k + 1), i % (k + 1)) = x;
                hit = h;
                break;
            }
            idx -= cnt;
        }
    }
    return out;
}

std::uint64_t block_of_matrix(const IntMatrix& b) {
    if (b.cols() != b.rows() + 1) throw std::invalid_argument("block_of_matrix: shape must be k x (k+1)");
    const std::size_t cells = b.rows() * b.cols();
    const BigInt emax = b.max_abs();
    if (emax == 0) return 0;
    if (!emax.fits_slong_p()) throw std::out_of_range("block_of_matrix: entries too large");
    const std::uint64_t e = emax.get_ui();
    const long se = static_cast<long>(e);
    BigInt idx = pow_ui(2 * e - 1, cells);
    bool hit = false;
    for (std::size_t i = 0; i < cells; ++i) {
        const long v = b.entries()[i].get_si();
        for (long x = -se; x < v; ++x) idx += completions(e, cells - i - 1, hit || std::labs(x) == se);
        hit = hit || std::labs(v) == se;
    }
    if (!idx.fits_ulong_p()) throw std::out_of_range("block_of_matrix: block index overflows");
    return idx.get_ui();
}

IntMatrix matrix_for_index(const BigInt& n, std::size_t k) {
    return matrix_for_block(partition_block(n), k);
}

Poly::Poly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::constant(const BigInt& c) { return Poly({c}); }

Poly Poly::shifted_power(long shift, unsigned exp, const BigInt& scale, const BigInt& add) {
    std::vector<BigInt> c(exp + 1);
    BigInt binom;
    for (unsigned i = 0; i <= exp; ++i) {
        mpz_bin_uiui(binom.get_mpz_t(), exp, i);
        BigInt s;
        mpz_pow_ui(s.get_mpz_t(), BigInt(shift).get_mpz_t(), exp - i);
        c[i] = scale * binom * s;
    }
    c[0] += add;
    return Poly(std::move(c));
}

BigInt Poly::operator()(const BigInt& n) const {
    BigInt acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * n + *it;
    return acc;
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<BigInt> c(std::max(coeffs_.size(), o.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = 0;
        if (i < coeffs_.size()) c[i] += coeffs_[i];
        if (i < o.coeffs_.size()) c[i] -= o.coeffs_[i];
    }
    return Poly(std::move(c));
}

Poly Poly::operator+(const BigInt& c) const {
    std::vector<BigInt> out = coeffs_;
    if (out.empty()) out.emplace_back(0);
    out[0] += c;
    return Poly(std::move(out));
}

Poly Poly::taylor_shift(const BigInt& lo) const {
    // Horner in the polynomial ring: p(lo + t).
    std::vector<BigInt> acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        std::vector<BigInt> next(acc.size() + 1);
        for (auto& x : next) x = 0;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += acc[i];
            next[i] += acc[i] * lo;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    return Poly(std::move(acc));
}

bool Poly::provably_nonnegative_from(const BigInt& lo) const {
    const Poly s = taylor_shift(lo);
    return std::all_of(s.coeffs_.begin(), s.coeffs_.end(), [](const BigInt& x) { return x >= 0; });
}

std::optional<BigInt> Poly::first_at_least(const BigInt& target, const BigInt& lo, const BigInt& hi) const {
    if (lo >= hi) return std::nullopt;
    BigInt last = hi - 1;
    if ((*this)(last) < target) return std::nullopt;
    BigInt a = lo, b = last;
    while (a < b) {
        BigInt mid = (a + b) / 2;
        if ((*this)(mid) >= target) b = mid;
        else a = mid + 1;
    }
    return a;
}

std::string Poly::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i] == 0) continue;
        if (!first) os << (coeffs_[i] < 0 ? " - " : " + ");
        else if (coeffs_[i] < 0) os << '-';
        BigInt a = abs(coeffs_[i]);
        if (a != 1 || i == 0) os << a;
        if (i >= 1) os << 'n';
        if (i >= 2) os << '^' << i;
        first = false;
    }
    return os.str();
}

bool Scale::strictly_increasing() const {
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i - 1] < values_[i])) return false;
    return true;
}

bool Scale::nondecreasing() const {
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] < values_[i - 1]) return false;
    return true;
}

EvalResult Scale::at(const BigInt& n) const {
    if (n < 0 || n >= values_.size()) return EvalResult::unknown(UnknownReason::BeyondHorizon);
    return EvalResult::of(values_[n.get_ui()]);
}

Scale Scale::tabulate(const NatFn& f, std::size_t count) {
    Scale s;
    for (std::size_t i = 0; i < count; ++i) s.push_back(f(BigInt(static_cast<unsigned long>(i))));
    return s;
}

Scale Scale::tabulate(const Poly& f, std::size_t count) {
    return tabulate(NatFn([&f](const BigInt& n) { return f(n); }), count);
}

namespace {

EvalResult seed_at(std::span<const SeedFn> fs, std::size_t i, const BigInt& x) {
    if (i >= fs.size()) return EvalResult::of(0);
    return fs[i](x);
}

}  // namespace

Scale diag_scale(std::span<const SeedFn> fs, std::size_t steps) {
    Scale h;
    h.push_back(0);
    for (std::size_t n = 0; n < steps; ++n) {
        const BigInt& cur = h[n];
        BigInt best = cur;
        for (std::size_t i = 0; i <= n; ++i) {
            EvalResult r = seed_at(fs, i, cur);
            if (!r.known()) {
                if (r.reason == UnknownReason::BeyondHorizon)
                    throw HorizonExceeded("diag_scale: seed " + std::to_string(i) + " is not tabulated at " +
                                          to_dec(cur));
                continue;
            }
            if (*r > best) best = *r;
        }
        h.push_back(best + 1);
    }
    return h;
}

CappedDiagonal diag_scale_capped(std::span<const SeedFn> fs, const std::optional<BigInt>& cap,
                                 std::size_t max_steps) {
    CappedDiagonal out;
    out.h.push_back(0);
    for (std::size_t n = 0; n < max_steps; ++n) {
        const BigInt cur = out.h[n];
        if (cap && cur >= *cap) break;
        BigInt best = cur;
        bool beyond = false;
        for (std::size_t i = 0; i <= n; ++i) {
            EvalResult r = seed_at(fs, i, cur);
            if (!r.known()) {
                beyond = beyond || r.reason == UnknownReason::BeyondHorizon;
                continue;
            }
            if (*r > best) best = *r;
        }
        if (beyond) {
            if (!cap) throw HorizonExceeded("diag_scale: seed not evaluable at " + to_dec(cur));
            out.h.push_back(big_max(best, *cap) + 1);
            out.forced = true;
            break;
        }
        out.h.push_back(best + 1);
    }
    return out;
}

DominationReport check_domination(std::span<const SeedFn> fs, const Scale& h, std::size_t transitions) {
    DominationReport rep;
    const std::size_t limit = std::min(transitions, h.size() == 0 ? 0 : h.size() - 1);
    for (std::size_t n = 0; n < limit; ++n) {
        for (std::size_t i = 0; i <= n && i < fs.size(); ++i) {
            EvalResult r = fs[i](h[n]);
            if (!r.known()) {
                // Threshold-min seeds without a witness enter the recurrence as 0.
                if (r.reason == UnknownReason::BeyondHorizon) ++rep.unknown;
                else ++rep.checked;
                continue;
            }
            ++rep.checked;
            if (!(*r < h[n + 1])) rep.failures.push_back({i, n, *r, h[n + 1]});
        }
    }
    return rep;
}

std::vector<std::size_t> f_ll_h(const NatFn& f, const Scale& h, std::size_t horizon) {
    std::vector<std::size_t> out;
    const std::size_t limit = std::min(horizon, h.size() == 0 ? 0 : h.size() - 1);
    for (std::size_t n = 0; n < limit; ++n)
        if (f(h[n]) < h[n + 1]) out.push_back(n);
    return out;
}

DprimeReport dprime_condition(std::span<const NatFn> ys, const Scale& h, std::size_t blocks,
                              std::size_t pairs_required, std::size_t horizon) {
    DprimeReport rep;
    rep.horizon = std::min(horizon, h.size() >= 2 ? h.size() - 2 : 0);
    rep.pairs_required = pairs_required;
    rep.pass = true;
    for (const auto& f : ys) {
        std::vector<bool> good(rep.horizon + 1, false);
        for (std::size_t n = 0; n <= rep.horizon && n + 1 < h.size(); ++n) good[n] = f(h[n]) < h[n + 1];
        std::vector<std::size_t> counts(blocks, 0);
        for (std::size_t n = 0; n < rep.horizon; ++n) {
            const std::uint64_t l = partition_block(static_cast<std::uint64_t>(n));
            if (l >= blocks || partition_block(static_cast<std::uint64_t>(n + 1)) != l) continue;
            if (good[n] && good[n + 1]) ++counts[l];
        }
        for (std::size_t c : counts) rep.pass = rep.pass && c >= pairs_required;
        rep.counts.push_back(std::move(counts));
    }
    return rep;
}

std::vector<BigInt> nwd_extend(std::span<const BigInt> s, const NatFn& f, std::uint64_t l, std::uint64_t m) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i - 1] < s[i])) throw std::invalid_argument("nwd_extend: sequence must be strictly increasing");
    std::vector<BigInt> out(s.begin(), s.end());

    // Already witnessed inside s: every extension of s avoids the set.
    for (std::uint64_t n = next_pair_in_block(l, m); n + 2 < s.size(); n = next_pair_in_block(l, n + 1)) {
        if (f(s[n]) < s[n + 1] && f(s[n + 1]) < s[n + 2]) return out;
    }

    const std::uint64_t n = next_pair_in_block(l, std::max<std::uint64_t>(s.size(), m));
    while (out.size() <= n) out.push_back(out.empty() ? BigInt(0) : out.back() + 1);
    for (int step = 0; step < 2; ++step) {
        const BigInt& prev = out.back();
        out.push_back(big_max(prev, f(prev)) + 1);
    }
    return out;
}

Poly standin(std::size_t i) { return Poly::shifted_power(2, static_cast<unsigned>(i + 1)); }

std::vector<Poly> standin_family(std::size_t count) {
    if (count == 0) throw std::invalid_argument("standin_family: count must be >= 1");
    std::vector<Poly> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(standin(i));
    return out;
}

}  // namespace specker
