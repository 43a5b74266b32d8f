#pragma once

// Finite certificates for both halves of the power argument: the
// k+1 generators of one stage violate condition (4) against a slow f, while
// integer combinations of k-tuples keep infinitely many (here: at least
// min_hits) linear-bound witnesses.  Also the witness converters between
// conditions (1)-(4).

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "specker/construction.hpp"

namespace specker {

class DominationFails : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Pointwise max over the family of coordinatewise running maxima of |g|.
StepFunction running_sup(const std::vector<StepFunction>& fam);

struct Cond4Report {
    IntervalSet witnesses;  // n in [1, horizon) with max_g ghat(n-1) <= f(n)
    BigInt count;
    std::size_t min_hits = 0;
    bool pass = false;
};

// f must be nondecreasing on [1, horizon).
Cond4Report check_cond4(const std::vector<StepFunction>& fam, const Poly& f, const BigInt& horizon,
                        std::size_t min_hits);

enum class Cond { Two, Three };

struct Cond23Report {
    Cond variant = Cond::Three;
    std::vector<std::size_t> witnesses;  // n with max_g ghat(h(n)-1) <= f(n)
    std::size_t checked = 0;
    bool pass = false;
};

// Only n with h(n) <= horizon of the family are checked; f is indexed by n.
Cond23Report check_cond2_cond3(const std::vector<StepFunction>& fam, const Scale& f, const Scale& h,
                               std::size_t min_hits, Cond variant);

// f~(n) = f(h(n+1)) for n + 1 < |h|.
Scale convert_4_to_3(const Poly& f, const Scale& h);
Scale convert_4_to_3(const NatFn& f, const Scale& h);

// m with [h(m), h(m+1)) meeting the witnesses above h(0), increasing.
std::vector<std::size_t> map_cond4_witnesses(const IntervalSet& witnesses, const Scale& h);

// f(n) = max{|a(i)| : a in F_n, i < h(n)}; each a must cover [0, h(n)).
Scale convert_cover_to_f(const std::vector<std::vector<std::vector<BigInt>>>& fns, const Scale& h);

// F_n = coordinates occurring in G_n, in order of first occurrence.
template <class T>
std::vector<std::vector<T>> reshape_klem(const std::vector<std::vector<std::vector<T>>>& gsets) {
    std::vector<std::vector<T>> out;
    out.reserve(gsets.size());
    for (const auto& g : gsets) {
        std::vector<T> f;
        for (const auto& tuple : g)
            for (const auto& a : tuple)
                if (std::find(f.begin(), f.end(), a) == f.end()) f.push_back(a);
        out.push_back(std::move(f));
    }
    return out;
}

// G_n is contained in F_n^k for every n.
template <class T>
bool klem_contained(const std::vector<std::vector<std::vector<T>>>& gsets, const std::vector<std::vector<T>>& fsets) {
    if (gsets.size() != fsets.size()) return false;
    for (std::size_t n = 0; n < gsets.size(); ++n)
        for (const auto& tuple : gsets[n])
            for (const auto& a : tuple)
                if (std::find(fsets[n].begin(), fsets[n].end(), a) == fsets[n].end()) return false;
    return true;
}

struct ViolationRow {
    std::size_t piece;
    BigInt m_lo, m_hi;  // m in [m_lo, m_hi), so m - 1 lies in the piece
    BigInt norm;        // ||g(m-1)|| on the piece
    BigInt d_break;     // d(h(n+1))
    BigInt d_worst;     // d(m_hi - 1)
    BigInt f_worst;     // f(m_hi - 1)
};

struct ViolationCertificate {
    std::size_t alpha = 0;
    Poly f;
    BigInt lo, hi;
    std::vector<ViolationRow> rows;
    bool total = false;
};

// Requires f nondecreasing and f < d_alpha on [lo, hi); hi is clamped to
// horizon + 1.  Throws DominationFails otherwise.
ViolationCertificate certify_unbounded(const GeneratorFamily& fam, std::size_t alpha, const Poly& f,
                                       const BigInt& lo, const BigInt& hi);

struct AuditRow {
    std::size_t m = 0;
    std::size_t n = 0;
    BigInt j;
    int kase = 1;
    BigInt p_lo, p_hi;  // p in [p_lo, p_hi)
    BigInt value;       // max_i |g_{i,m}(p)|
    BigInt prev;        // max_i |g_{i,m-1}(p)|
    BigInt prev_bound;  // c_{m-1} (j+1)
    BigInt gen;         // max_t |g^alpha_t(p)| (case 2)
    BigInt gen_bound;   // h(n+1) (case 2)
    BigInt bound;       // bound on value
};

struct PreservationStep {
    std::size_t m = 0;
    std::size_t stage = 0;
    IntMatrix b;
    std::uint64_t block = 0;
    BigInt big_c;  // max |entry of B_m|
    BigInt c;      // c_m
    IntervalSet j_set;
    std::vector<std::size_t> i_set;
    std::vector<BigInt> witnesses;  // one j per n in I, same order
    std::vector<AuditRow> rows;
};

struct PreservationTrace {
    std::vector<PreservationStep> steps;  // steps[0] is m = 0
    BigInt hits;                          // |J_M intersected with [c_M, horizon)|
    std::size_t min_hits = 0;
    bool quadratic_ok = false;
    bool pass = false;
};

// Throws AuditFailure on the first violated inequality.
PreservationTrace verify_preservation(const GeneratorFamily& fam, const std::vector<Term>& terms,
                                      std::size_t min_hits);

struct PowerReport {
    std::size_t power = 0;
    std::size_t families = 0;
    std::size_t passed = 0;
    bool pass() const { return families > 0 && passed == families; }
};

// Condition (4) over several families per power.
std::vector<PowerReport> power_reports(const std::vector<std::vector<std::vector<StepFunction>>>& by_power,
                                       const Poly& f, const BigInt& horizon, std::size_t min_hits);

// Powers 1..kmax: the first p coordinates of sampled combinations; powers
// above k additionally get the generators of the last stage.
std::vector<PowerReport> scheepers_check(const GeneratorFamily& fam, std::size_t kmax, const Poly& f,
                                         std::size_t min_hits, std::size_t samples, std::uint64_t seed);

}  // namespace specker
