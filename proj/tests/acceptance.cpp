// Acceptance run: one PASS/FAIL line per criterion.  Optional argv[1] is the
// specker-lab binary used for the replay check.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "specker/boundcheck.hpp"
#include "specker/construction.hpp"
#include "specker/intlat.hpp"
#include "specker/parallel.hpp"
#include "specker/scales.hpp"
#include "specker/serialize.hpp"

using namespace specker;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::cout << "criterion " << id << " " << title << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")"
              << std::endl;
    if (!ok) ++failures;
}

std::string dec(const BigInt& x) { return x.get_str(); }

BuildConfig config(std::size_t k, std::size_t stages, std::size_t T) {
    BuildConfig c;
    c.k = k;
    c.stages = stages;
    c.breakpoints = T;
    return c;
}

// Every matrix with the given shape and entries in [-3, 3].
std::vector<IntMatrix> all_matrices(std::size_t rows, std::size_t cols) {
    std::size_t cells = rows * cols, total = 1;
    for (std::size_t i = 0; i < cells; ++i) total *= 7;
    std::vector<IntMatrix> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<BigInt> e(cells);
        std::size_t c = code;
        for (std::size_t i = 0; i < cells; ++i, c /= 7) e[i] = static_cast<long>(c % 7) - 3;
        out.emplace_back(rows, cols, std::move(e));
    }
    return out;
}

void criterion1() {
    std::vector<long> thresholds;
    for (long n = 0; n <= 20; ++n) thresholds.push_back(n);
    std::vector<IntMatrix> ms = all_matrices(1, 2);
    auto more = all_matrices(2, 3);
    ms.insert(ms.end(), more.begin(), more.end());

    std::atomic<std::size_t> compared{0}, mismatches{0};
    std::mutex mu;
    std::string first_bad;
    parallel_for(ms.size(), [&](std::size_t i) {
        const IntMatrix& a = ms[i];
        KernelBasis kb = kernel_basis(a);
        long box = feasibility_box(kb, 20).get_si();
        auto brute = brute_min_solutions(a, thresholds, box);
        for (std::size_t t = 0; t < thresholds.size(); ++t) {
            IntVector fast = min_solution(kb, thresholds[t]);
            ++compared;
            if (!brute[t] || !(*brute[t] == fast)) {
                ++mismatches;
                std::lock_guard<std::mutex> lock(mu);
                if (first_bad.empty()) first_bad = a.str() + " N=" + std::to_string(thresholds[t]);
            }
        }
    });
    std::string detail = std::to_string(ms.size()) + " matrices, " + std::to_string(compared.load()) +
                         " comparisons, " + std::to_string(mismatches.load()) + " mismatches";
    if (!first_bad.empty()) detail += ", first " + first_bad;
    report(1, "oracle equivalence", mismatches == 0 && compared > 0, detail);
}

// Minimal admissible norm computed without min_solution: closed forms for
// rank one and the zero matrix, exhaustive search otherwise.
BigInt expected_norm(const IntMatrix& a, const BigInt& threshold) {
    BigInt n = threshold < 1 ? BigInt(1) : threshold;
    if (a.is_zero()) return n;
    KernelBasis kb = kernel_basis(a);
    if (kb.rank() == 1) {
        BigInt w = kb.basis[0].sup_norm();
        BigInt q = (n + w - 1) / w;
        return q * w;
    }
    auto v = brute_min_solution(a, threshold, feasibility_box(kb, threshold));
    return v ? v->sup_norm() : BigInt(-1);
}

void criterion2() {
    GeneratorFamily fam = build_family(config(1, 2, 8));
    std::size_t checked = 0, bad = 0;
    for (const auto& st : fam.stages) {
        for (std::size_t n = 0; n < st.pieces(); ++n) {
            IntMatrix a = matrix_for_index(n, fam.k());
            const IntVector& g = st.gens.piece_value(n);
            const BigInt next = st.h[n + 1];
            bool ok = (a * g).is_zero() && !g.is_zero();
            ok = ok && g.sup_norm() == expected_norm(a, st.d(next));
            ok = ok && g.sup_norm() == phi_m(a, st.d, next);
            ok = ok && g.sup_norm() >= st.d(next);
            ++checked;
            if (!ok) ++bad;
        }
    }
    report(2, "breakpoint identities", bad == 0 && checked > 0,
           std::to_string(checked) + " breakpoints over " + std::to_string(fam.stages.size()) +
               " stages, horizon " + dec(fam.horizon) + ", " + std::to_string(bad) + " violations");
}

void criterion3() {
    std::size_t checked = 0, unknown = 0, bad = 0, stages = 0;
    for (auto [k, S, T] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 2, 8}, {1, 3, 12}, {2, 3, 12}}) {
        GeneratorFamily fam = build_family(config(k, S, T));
        for (std::size_t a = 0; a < fam.stages.size(); ++a) {
            const auto& st = fam.stages[a];
            auto fs = stage_diagonal(fam, a);
            DominationReport r = check_domination(fs, st.h, st.h.size() - 1 - (st.forced ? 1 : 0));
            checked += r.checked;
            unknown += r.unknown;
            bad += r.failures.size();
            ++stages;
        }
    }
    report(3, "diagonal domination", bad == 0 && checked > 0,
           std::to_string(stages) + " stages, " + std::to_string(checked) + " seed/breakpoint checks, " +
               std::to_string(unknown) + " not evaluable, " + std::to_string(bad) + " exceptions");
}

void criterion4() {
    Poly f({0, 0, 1});
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t k : {1, 2}) {
        GeneratorFamily fam = build_family(config(k, 3, 12));
        std::size_t alpha = fam.stages.size() - 1;
        ViolationCertificate cert = certify_unbounded(fam, alpha, f, 2, fam.horizon + 1);
        Cond4Report c4 = check_cond4({fam.stages[alpha].gens}, f, fam.horizon + 1, fam.config.min_hits);
        BigInt in_window = c4.witnesses.count_at_least(cert.lo) - c4.witnesses.count_at_least(cert.hi);
        ok = ok && cert.total && in_window == 0 && !cert.rows.empty();
        detail << "k=" << k << ": window [" << dec(cert.lo) << "," << dec(cert.hi) << ") " << cert.rows.size()
               << " rows " << (cert.total ? "total" : "not total") << ", cond4 witnesses " << dec(in_window) << "; ";
    }
    std::string d = detail.str();
    report(4, "non-boundedness certificate", ok, d.substr(0, d.size() - 2));
}

struct TraceTally {
    std::size_t traces = 0, passed = 0, audit_failures = 0;
    BigInt min_hits_seen = -1;
};

TraceTally run_traces(const GeneratorFamily& fam, std::size_t count, std::uint64_t seed) {
    auto combos = sample_combinations(fam, count, 3, seed);
    std::vector<int> status(combos.size(), 0);
    std::vector<BigInt> hits(combos.size());
    parallel_for(combos.size(), [&](std::size_t i) {
        try {
            PreservationTrace t = verify_preservation(fam, combos[i], fam.config.min_hits);
            hits[i] = t.hits;
            status[i] = t.pass && t.quadratic_ok && t.hits >= 3 ? 1 : 0;
        } catch (const AuditFailure&) {
            status[i] = -1;
        }
    });
    TraceTally r;
    r.traces = combos.size();
    for (std::size_t i = 0; i < combos.size(); ++i) {
        if (status[i] == 1) ++r.passed;
        if (status[i] == -1) ++r.audit_failures;
        else if (r.min_hits_seen < 0 || hits[i] < r.min_hits_seen) r.min_hits_seen = hits[i];
    }
    return r;
}

void criterion5() {
    bool ok = true;
    std::ostringstream detail;
    std::size_t total = 0;
    for (std::size_t k : {1, 2}) {
        GeneratorFamily fam = build_family(config(k, 3, 12));
        TraceTally t = run_traces(fam, 20, fam.config.seed);
        total += t.traces;
        ok = ok && t.traces >= 20 && t.passed == t.traces && t.audit_failures == 0;
        detail << "k=" << k << ": " << t.passed << "/" << t.traces << " pass, " << t.audit_failures
               << " audit failures, min hits " << dec(t.min_hits_seen) << "; ";
    }
    std::string d = detail.str();
    report(5, "preservation traces", ok && total >= 20, d.substr(0, d.size() - 2));

    if (std::getenv("SPECKER_ACCEPTANCE_LONG")) {
        GeneratorFamily fam = build_family(config(1, 3, 36));
        TraceTally t = run_traces(fam, 20, 1);
        std::cout << "info: k=1 T=36 horizon " << dec(fam.horizon) << ": " << t.passed << "/" << t.traces
                  << " traces reach min_hits, " << t.audit_failures << " audit failures" << std::endl;
    }
}

void criterion6() {
    bool ok = true;
    std::size_t families = 0, mapped_total = 0;
    for (std::size_t k : {1, 2}) {
        GeneratorFamily fam = build_family(config(k, 3, 12));
        std::vector<std::vector<StepFunction>> inputs;
        for (const auto& terms : sample_combinations(fam, 20, 3, fam.config.seed))
            inputs.push_back({eval_combination(fam, terms).total()});
        for (const auto& st : fam.stages) inputs.push_back({st.gens});
        for (std::size_t a = 0; a < fam.stages.size(); ++a) {
            const Scale& h = fam.stages[a].h;
            for (const Poly& f : {Poly({0, 0, 1}), Poly({0, 0, 0, 0, 1}), standin(3)}) {
                Scale ft = convert_4_to_3(f, h);
                for (const auto& F : inputs) {
                    Cond4Report c4 = check_cond4(F, f, fam.horizon + 1, fam.config.min_hits);
                    Cond23Report c3 = check_cond2_cond3(F, ft, h, fam.config.min_hits, Cond::Three);
                    auto mapped = map_cond4_witnesses(c4.witnesses, h);
                    ok = ok && std::includes(c3.witnesses.begin(), c3.witnesses.end(), mapped.begin(), mapped.end());
                    mapped_total += mapped.size();
                    ++families;
                }
            }
        }
    }

    std::mt19937_64 rng(6);
    std::size_t shapes = 0;
    bool contained = true;
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t k = 1 + rng() % 3, len = 1 + rng() % 5;
        std::vector<std::vector<std::vector<long>>> g(len);
        for (auto& gn : g) {
            std::size_t size = rng() % 5;
            for (std::size_t i = 0; i < size; ++i) {
                std::vector<long> tuple(k);
                for (auto& x : tuple) x = static_cast<long>(rng() % 9) - 4;
                gn.push_back(tuple);
            }
        }
        contained = contained && klem_contained(g, reshape_klem(g));
        ++shapes;
    }
    report(6, "converter round trips", ok && contained && mapped_total > 0,
           std::to_string(families) + " cond4/cond3 pairs, " + std::to_string(mapped_total) +
               " mapped witnesses, " + std::to_string(shapes) + " reshape inputs");
}

void criterion7() {
    std::mt19937_64 rng(7);
    std::size_t bad = 0, extended = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<BigInt> s;
        BigInt cur = static_cast<long>(rng() % 6);
        std::size_t len = rng() % 8;
        for (std::size_t i = 0; i < len; ++i) {
            s.push_back(cur);
            cur += 1 + static_cast<long>(rng() % 5);
        }
        long a = 1 + static_cast<long>(rng() % 3), b = static_cast<long>(rng() % 10);
        unsigned e = 1 + static_cast<unsigned>(rng() % 2);
        NatFn f = [a, b, e](const BigInt& x) {
            BigInt p;
            mpz_pow_ui(p.get_mpz_t(), x.get_mpz_t(), e);
            return BigInt(a * p + b);
        };
        std::uint64_t l = rng() % 4, m = rng() % 12;
        auto t = nwd_extend(s, f, l, m);
        bool ok = t.size() >= s.size() && std::equal(s.begin(), s.end(), t.begin());
        for (std::size_t i = 1; i < t.size(); ++i) ok = ok && t[i - 1] < t[i];
        bool witnessed = false;
        for (std::uint64_t n = next_pair_in_block(l, m); n + 2 < t.size(); n = next_pair_in_block(l, n + 1))
            witnessed = witnessed || (partition_block(n) == l && partition_block(n + 1) == l &&
                                      f(t[n]) < t[n + 1] && f(t[n + 1]) < t[n + 2]);
        ok = ok && witnessed;
        if (t.size() > s.size()) ++extended;
        if (!ok) ++bad;
    }
    report(7, "nowhere-dense extension", bad == 0,
           "50 inputs, " + std::to_string(extended) + " extended, " + std::to_string(bad) + " failures");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion8(const char* cli) {
    if (!cli) {
        // In-process fallback: serialized build and certificate halves.
        auto run = [] {
            GeneratorFamily fam = build_family(config(1, 3, 12));
            ViolationCertificate cert = certify_unbounded(fam, 2, Poly({0, 0, 1}), 2, fam.horizon + 1);
            json out = {{"family", to_json(fam)}, {"violation", to_json(cert)}};
            for (const auto& terms : sample_combinations(fam, 20, 3, 1))
                out["traces"].push_back(to_json(verify_preservation(fam, terms, 3)));
            return out.dump();
        };
        report(8, "replay determinism", run() == run(), "in-process");
        return;
    }
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("specker-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run = [&](const std::string& tag, int threads) {
        std::string fam = (dir / ("family-" + tag + ".json")).string();
        std::string cert = (dir / ("cert-" + tag + ".json")).string();
        std::string env = "SPECKER_LAB_THREADS=" + std::to_string(threads) + " ";
        std::string q = std::string("\"") + cli + "\"";
        int rb = std::system((env + q + " build --out " + fam + " 2>/dev/null").c_str());
        int rc = std::system((env + q + " certify --family " + fam + " --out " + cert + " 2>/dev/null").c_str());
        return std::tuple{rb, rc, slurp(fam), slurp(cert)};
    };
    auto [b1, c1, f1, x1] = run("a", 1);
    auto [b2, c2, f2, x2] = run("b", 4);
    fs::remove_all(dir);
    bool ok = b1 == 0 && b2 == 0 && c1 == 0 && c2 == 0 && !f1.empty() && !x1.empty() && f1 == f2 && x1 == x2;
    report(8, "replay determinism", ok,
           "family " + std::to_string(f1.size()) + " bytes " + (f1 == f2 ? "identical" : "differ") +
               ", certificate " + std::to_string(x1.size()) + " bytes " + (x1 == x2 ? "identical" : "differ"));
}

template <class F>
void timed(int id, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    try {
        f();
    } catch (const std::exception& e) {
        report(id, "aborted", false, e.what());
    }
    auto s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "  (" << s << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
    timed(1, criterion1);
    timed(2, criterion2);
    timed(3, criterion3);
    timed(4, criterion4);
    timed(5, criterion5);
    timed(6, criterion6);
    timed(7, criterion7);
    timed(8, [&] { criterion8(argc > 1 ? argv[1] : nullptr); });
    std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
    return failures == 0 ? 0 : 1;
}
