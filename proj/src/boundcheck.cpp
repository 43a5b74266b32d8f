#include "specker/boundcheck.hpp"

#include "specker/parallel.hpp"

namespace specker {

StepFunction running_sup(const std::vector<StepFunction>& fam) {
    if (fam.empty()) throw std::invalid_argument("running_sup: empty family");
    StepFunction all = fam[0];
    for (std::size_t i = 1; i < fam.size(); ++i) all = all.concat(fam[i]);
    return all.sup_norm().hat().simplified();
}

Cond4Report check_cond4(const std::vector<StepFunction>& fam, const Poly& f, const BigInt& horizon,
                        std::size_t min_hits) {
    Cond4Report rep;
    rep.min_hits = min_hits;
    StepFunction s = running_sup(fam);
    for (std::size_t i = 0; i < s.pieces(); ++i) {
        // n - 1 in [a, b)
        BigInt lo = s.piece_start(i) + 1;
        BigInt hi = big_min(s.piece_end(i) + 1, horizon);
        if (lo >= hi) continue;
        if (auto first = f.first_at_least(s.piece_value(i)[0], lo, hi)) rep.witnesses.add(*first, hi);
    }
    rep.count = rep.witnesses.count();
    rep.pass = rep.count >= BigInt(static_cast<unsigned long>(min_hits));
    return rep;
}

Cond23Report check_cond2_cond3(const std::vector<StepFunction>& fam, const Scale& f, const Scale& h,
                               std::size_t min_hits, Cond variant) {
    Cond23Report rep;
    rep.variant = variant;
    StepFunction s = running_sup(fam);
    const std::size_t limit = std::min(f.size(), h.size());
    for (std::size_t n = 0; n < limit; ++n) {
        if (h[n] > s.horizon()) break;
        ++rep.checked;
        BigInt v = h[n] == 0 ? BigInt(0) : s.at(h[n] - 1)[0];
        if (v <= f[n]) rep.witnesses.push_back(n);
    }
    std::size_t need = variant == Cond::Two ? 1 : min_hits;
    rep.pass = rep.witnesses.size() >= need;
    return rep;
}

Scale convert_4_to_3(const Poly& f, const Scale& h) {
    Scale out;
    for (std::size_t n = 0; n + 1 < h.size(); ++n) out.push_back(f(h[n + 1]));
    return out;
}

Scale convert_4_to_3(const NatFn& f, const Scale& h) {
    Scale out;
    for (std::size_t n = 0; n + 1 < h.size(); ++n) out.push_back(f(h[n + 1]));
    return out;
}

std::vector<std::size_t> map_cond4_witnesses(const IntervalSet& witnesses, const Scale& h) {
    std::vector<std::size_t> out;
    if (h.size() == 0) return out;
    for (std::size_t m = 0; m + 1 < h.size(); ++m) {
        BigInt lo = big_max(h[m], h[0] + 1);
        if (lo >= h[m + 1]) continue;
        if (witnesses.first_in(lo, h[m + 1])) out.push_back(m);
    }
    return out;
}

Scale convert_cover_to_f(const std::vector<std::vector<std::vector<BigInt>>>& fns, const Scale& h) {
    if (fns.size() > h.size()) throw std::invalid_argument("convert_cover_to_f: h shorter than the cover");
    Scale out;
    for (std::size_t n = 0; n < fns.size(); ++n) {
        BigInt best = 0;
        for (const auto& a : fns[n]) {
            if (BigInt(static_cast<unsigned long>(a.size())) < h[n])
                throw std::invalid_argument("convert_cover_to_f: function shorter than h(n)");
            std::size_t len = h[n].get_ui();
            for (std::size_t i = 0; i < len; ++i) best = big_max(best, abs(a[i]));
        }
        out.push_back(best);
    }
    return out;
}

namespace {

// p(x+1) - p(x) >= 0 on [lo, hi)
bool nondecreasing_on(const Poly& p, const BigInt& lo, const BigInt& hi) {
    Poly step = p.taylor_shift(1) - p;
    if (step.provably_nonnegative_from(lo)) return true;
    if (hi - lo > 65536) return false;
    for (BigInt x = lo; x + 1 < hi; ++x)
        if (p(x + 1) < p(x)) return false;
    return true;
}

bool below_on(const Poly& f, const Poly& d, const BigInt& lo, const BigInt& hi) {
    Poly gap = (d - f) + BigInt(-1);
    if (gap.provably_nonnegative_from(lo)) return true;
    if (hi - lo > 65536) return false;
    for (BigInt x = lo; x < hi; ++x)
        if (!(f(x) < d(x))) return false;
    return true;
}

}  // namespace

ViolationCertificate certify_unbounded(const GeneratorFamily& fam, std::size_t alpha, const Poly& f,
                                       const BigInt& lo, const BigInt& hi_in) {
    if (alpha >= fam.stages.size()) throw StageMissing("certify_unbounded: no stage " + std::to_string(alpha));
    if (lo < 1) throw std::invalid_argument("certify_unbounded: window must start at m >= 1");
    const StageResult& st = fam.stages[alpha];
    BigInt hi = big_min(hi_in, fam.horizon + 1);
    if (lo >= hi) throw std::invalid_argument("certify_unbounded: empty window");
    if (!nondecreasing_on(f, lo, hi)) throw DominationFails("f is not nondecreasing on the window");
    if (!below_on(f, st.d, lo, hi))
        throw DominationFails("f is not below d_" + std::to_string(alpha) + " = " + st.d.str() + " on [" +
                              to_dec(lo) + ", " + to_dec(hi) + ")");

    ViolationCertificate cert;
    cert.alpha = alpha;
    cert.f = f;
    cert.lo = lo;
    cert.hi = hi;
    cert.total = true;
    for (std::size_t n = 0; n < st.pieces(); ++n) {
        BigInt m_lo = big_max(st.gens.piece_start(n) + 1, lo);
        BigInt m_hi = big_min(st.gens.piece_end(n) + 1, hi);
        if (m_lo >= m_hi) continue;
        ViolationRow row;
        row.piece = n;
        row.m_lo = m_lo;
        row.m_hi = m_hi;
        row.norm = st.gens.piece_value(n).sup_norm();
        row.d_break = st.d(st.h[n + 1]);
        row.d_worst = st.d(m_hi - 1);
        row.f_worst = f(m_hi - 1);
        // f nondecreasing, so the last m of the row has the smallest margin.
        bool ok = row.norm >= row.d_break && row.d_break >= row.d_worst && row.d_worst > row.f_worst &&
                  row.norm > row.f_worst;
        if (!ok) cert.total = false;
        cert.rows.push_back(std::move(row));
    }
    return cert;
}

namespace {

IntervalSet linear_witnesses(const StepFunction& s, const BigInt& c) {
    IntervalSet out;
    for (std::size_t i = 0; i < s.pieces(); ++i) {
        const BigInt& v = s.piece_value(i)[0];
        BigInt a = s.piece_start(i), b = s.piece_end(i);
        if (c == 0) {
            if (v == 0) out.add(a, b);
            continue;
        }
        BigInt t = big_max(a, ceil_div(v, c) - 1);
        if (t < b) out.add(t, b);
    }
    return out;
}

BigInt max_abs_of(const IntVector& v, std::size_t first, std::size_t count) {
    BigInt best = 0;
    for (std::size_t i = first; i < first + count; ++i) best = big_max(best, abs(v[i]));
    return best;
}

std::string at(std::size_t m, std::size_t n, const BigInt& j) {
    return "m=" + std::to_string(m) + " n=" + std::to_string(n) + " j=" + to_dec(j) + ": ";
}

void audit_pair(PreservationStep& step, const StepFunction& prev, const StepFunction& cur,
                const StageResult& st, std::size_t k, std::size_t n, const BigInt& j, const BigInt& c_prev) {
    const BigInt prev_bound = c_prev * (j + 1);
    const BigInt h_n = st.h[n], h_next = st.h[n + 1];
    const BigInt spread = BigInt(static_cast<unsigned long>(k + 1)) * step.big_c;
    StepFunction joint = prev.concat(cur).concat(st.gens);
    for (std::size_t q = 0; q < joint.pieces() && joint.piece_start(q) <= j; ++q) {
        const IntVector& v = joint.piece_value(q);
        BigInt a = joint.piece_start(q), b = big_min(joint.piece_end(q), j + 1);
        BigInt pv = max_abs_of(v, 0, k), cv = max_abs_of(v, k, k);
        auto region = [&](int kase, const BigInt& lo, const BigInt& hi) {
            if (lo >= hi) return;
            AuditRow row;
            row.m = step.m;
            row.n = n;
            row.j = j;
            row.kase = kase;
            row.p_lo = lo;
            row.p_hi = hi;
            row.value = cv;
            row.prev = pv;
            row.prev_bound = prev_bound;
            std::string loc = at(step.m, n, j) + "case " + std::to_string(kase) + " p in [" + to_dec(lo) + ", " +
                              to_dec(hi) + "): ";
            if (pv > prev_bound)
                throw AuditFailure(loc + "|g_{m-1}(p)| = " + to_dec(pv) + " > c_{m-1}(j+1) = " + to_dec(prev_bound));
            if (kase == 1) {
                for (std::size_t i = 0; i < k; ++i)
                    if (v[i] != v[k + i])
                        throw AuditFailure(loc + "g_{" + std::to_string(i) + ",m}(p) != g_{" + std::to_string(i) +
                                           ",m-1}(p)");
                row.bound = prev_bound;
            } else {
                row.gen = max_abs_of(v, 2 * k, k + 1);
                row.gen_bound = h_next;
                if (!(row.gen < h_next))
                    throw AuditFailure(loc + "|g^alpha(p)| = " + to_dec(row.gen) + " >= h(n+1) = " + to_dec(h_next));
                if (h_next > j) throw AuditFailure(loc + "h(n+1) = " + to_dec(h_next) + " > j");
                row.bound = prev_bound + spread * j;
                if (row.bound > step.c * (j + 1))
                    throw AuditFailure(loc + "bound " + to_dec(row.bound) + " > c_m(j+1) = " + to_dec(step.c * (j + 1)));
            }
            if (cv > row.bound)
                throw AuditFailure(loc + "|g_m(p)| = " + to_dec(cv) + " > bound " + to_dec(row.bound));
            step.rows.push_back(std::move(row));
        };
        region(2, a, big_min(b, h_n));
        region(1, big_max(a, h_n), b);
    }
}

}  // namespace

PreservationTrace verify_preservation(const GeneratorFamily& fam, const std::vector<Term>& terms,
                                      std::size_t min_hits) {
    const std::size_t k = fam.k();
    const BigInt& horizon = fam.horizon;
    Combination comb = eval_combination(fam, terms);
    std::vector<StepFunction> sups;
    for (const auto& p : comb.partial) sups.push_back(p.sup_norm().hat().simplified());

    PreservationTrace trace;
    trace.min_hits = min_hits;
    PreservationStep first;
    first.c = 0;
    first.j_set = linear_witnesses(sups[0], 0);
    trace.steps.push_back(std::move(first));

    for (std::size_t m = 1; m <= terms.size(); ++m) {
        const Term& t = terms[m - 1];
        const StageResult& st = fam.stages[t.stage];
        const PreservationStep& before = trace.steps.back();
        PreservationStep step;
        step.m = m;
        step.stage = t.stage;
        step.b = t.b;
        step.block = block_of_matrix(t.b);
        step.big_c = t.b.max_abs();
        step.c = before.c + BigInt(static_cast<unsigned long>(k + 1)) * step.big_c;
        step.j_set = linear_witnesses(sups[m], step.c);

        StepFunction gen_sup = st.gens.sup_norm().hat();
        for (std::size_t n = 0; n + 1 < st.pieces(); n += 2) {
            if (partition_block(std::uint64_t{n}) != step.block) continue;
            auto j = before.j_set.first_in(st.h[n + 1], big_min(st.h[n + 2], horizon));
            if (!j) continue;
            if (n > 0 && !(gen_sup.at(st.h[n - 1])[0] < st.h[n + 1])) continue;
            step.i_set.push_back(n);
            step.witnesses.push_back(*j);
            audit_pair(step, comb.partial[m - 1], comb.partial[m], st, k, n, *j, before.c);
            if (!step.j_set.contains(*j))
                throw AuditFailure(at(m, n, *j) + "witness not in J_m");
        }
        trace.steps.push_back(std::move(step));
    }

    const PreservationStep& last = trace.steps.back();
    trace.hits = last.j_set.count_at_least(last.c);
    trace.quadratic_ok = true;
    const StepFunction& s = sups.back();
    for (const auto& iv : last.j_set.intervals()) {
        BigInt lo = big_max(iv.lo, last.c);
        if (lo >= iv.hi) continue;
        for (std::size_t q = s.piece_of(lo); q < s.pieces() && s.piece_start(q) < iv.hi; ++q) {
            BigInt p = big_max(lo, s.piece_start(q));
            if (s.piece_value(q)[0] > (p + 1) * (p + 1)) trace.quadratic_ok = false;
        }
    }
    trace.pass = trace.hits >= BigInt(static_cast<unsigned long>(min_hits)) && trace.quadratic_ok;
    return trace;
}

std::vector<PowerReport> power_reports(const std::vector<std::vector<std::vector<StepFunction>>>& by_power,
                                       const Poly& f, const BigInt& horizon, std::size_t min_hits) {
    std::vector<PowerReport> out;
    for (std::size_t p = 0; p < by_power.size(); ++p) {
        const auto& fams = by_power[p];
        std::vector<char> ok(fams.size(), 0);
        parallel_for(fams.size(), [&](std::size_t i) { ok[i] = check_cond4(fams[i], f, horizon, min_hits).pass; });
        PowerReport r;
        r.power = p + 1;
        r.families = fams.size();
        r.passed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
        out.push_back(r);
    }
    return out;
}

std::vector<PowerReport> scheepers_check(const GeneratorFamily& fam, std::size_t kmax, const Poly& f,
                                         std::size_t min_hits, std::size_t samples, std::uint64_t seed) {
    if (kmax < 1) throw std::invalid_argument("scheepers_check: kmax must be >= 1");
    const std::size_t k = fam.k();
    std::vector<StepFunction> totals;
    for (const auto& terms : sample_combinations(fam, samples, 3, seed))
        totals.push_back(eval_combination(fam, terms).total());
    StepFunction stacked = fam.stages.back().gens;
    for (std::size_t a = fam.stages.size() - 1; a-- > 0;) stacked = stacked.concat(fam.stages[a].gens);

    std::vector<std::vector<std::vector<StepFunction>>> by_power(kmax);
    for (std::size_t p = 1; p <= kmax; ++p) {
        if (p <= k) {
            for (const auto& t : totals) by_power[p - 1].push_back({t.coordinates(0, p)});
        } else if (p <= stacked.dim()) {
            by_power[p - 1].push_back({stacked.coordinates(0, p)});
        }
    }
    return power_reports(by_power, f, fam.horizon + 1, min_hits);
}

}  // namespace specker
