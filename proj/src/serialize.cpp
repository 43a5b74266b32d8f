#include "specker/serialize.hpp"

namespace specker {

json to_json(const BigInt& x) { return to_dec(x); }

json to_json(const IntVector& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_dec(v[i]));
    return out;
}

json to_json(const IntMatrix& a) {
    json entries = json::array();
    for (const auto& x : a.entries()) entries.push_back(to_dec(x));
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
}

json to_json(const Scale& s) {
    json out = json::array();
    for (const auto& v : s.values()) out.push_back(to_dec(v));
    return out;
}

json to_json(const Poly& p) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs()) coeffs.push_back(to_dec(c));
    return {{"rule", p.str()}, {"coeffs", std::move(coeffs)}};
}

json to_json(const StepFunction& f) {
    json breaks = json::array(), values = json::array();
    for (const auto& b : f.breaks()) breaks.push_back(to_dec(b));
    for (const auto& v : f.values()) values.push_back(to_json(v));
    return {{"dim", f.dim()}, {"horizon", to_dec(f.horizon())}, {"breaks", std::move(breaks)},
            {"values", std::move(values)}};
}

json to_json(const IntervalSet& s) {
    json out = json::array();
    for (const auto& iv : s.intervals()) out.push_back(json::array({to_dec(iv.lo), to_dec(iv.hi)}));
    return out;
}

json to_json(const FuncExpr& e) {
    switch (e.op()) {
    case Op::Seed: return {{"tag", "seed"}, {"name", e.name()}};
    case Op::Hat: return {{"tag", "hat"}, {"arg", to_json(e.left())}};
    case Op::Neg: return {{"tag", "neg"}, {"arg", to_json(e.left())}};
    case Op::ThresholdMin: return {{"tag", "tmin"}, {"c", to_dec(e.threshold())}, {"arg", to_json(e.left())}};
    case Op::Sum: return {{"tag", "sum"}, {"left", to_json(e.left())}, {"right", to_json(e.right())}};
    case Op::MaxPair: return {{"tag", "maxpair"}, {"left", to_json(e.left())}, {"right", to_json(e.right())}};
    }
    return nullptr;
}

json to_json(const BuildConfig& c) {
    return {{"k", c.k},
            {"stages", c.stages},
            {"breakpoints", c.breakpoints},
            {"depth", c.depth},
            {"count", c.count},
            {"tmin_thresholds", c.tmin_thresholds},
            {"tmin_budget", c.tmin_budget},
            {"min_hits", c.min_hits},
            {"seed", c.seed},
            {"samples", c.samples}};
}

json to_json(const StageResult& st) {
    json gens = json::array();
    for (std::size_t i = 0; i < st.gens.dim(); ++i) {
        StepFunction g = st.generator(i);
        json values = json::array();
        for (const auto& v : g.values()) values.push_back(to_dec(v[0]));
        json breaks = json::array();
        for (const auto& b : g.breaks()) breaks.push_back(to_dec(b));
        gens.push_back({{"breaks", std::move(breaks)}, {"values", std::move(values)}});
    }
    json norms = json::array();
    for (const auto& n : st.norms) norms.push_back(to_dec(n));
    json seeds = json::array();
    for (const auto& e : st.fragment) seeds.push_back(to_json(e));
    json d = to_json(st.d);
    d["index"] = st.alpha;
    return {{"alpha", st.alpha}, {"d", std::move(d)},     {"h", to_json(st.h)},         {"forced", st.forced},
            {"norms", std::move(norms)}, {"gens", std::move(gens)}, {"seeds", std::move(seeds)}};
}

json to_json(const GeneratorFamily& fam) {
    json stages = json::array();
    for (const auto& st : fam.stages) stages.push_back(to_json(st));
    return {{"config", to_json(fam.config)}, {"horizon", to_dec(fam.horizon)}, {"stages", std::move(stages)}};
}

json to_json(const Cond4Report& r) {
    return {{"witnesses", to_json(r.witnesses)},
            {"count", to_dec(r.count)},
            {"min_hits", r.min_hits},
            {"pass", r.pass}};
}

json to_json(const Cond23Report& r) {
    return {{"variant", r.variant == Cond::Two ? "cond2" : "cond3"},
            {"witnesses", r.witnesses},
            {"checked", r.checked},
            {"pass", r.pass}};
}

json to_json(const ViolationCertificate& c) {
    json rows = json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"piece", r.piece},
                        {"m_lo", to_dec(r.m_lo)},
                        {"m_hi", to_dec(r.m_hi)},
                        {"norm", to_dec(r.norm)},
                        {"d_break", to_dec(r.d_break)},
                        {"d_worst", to_dec(r.d_worst)},
                        {"f_worst", to_dec(r.f_worst)}});
    return {{"alpha", c.alpha},
            {"f", to_json(c.f)},
            {"window", json::array({to_dec(c.lo), to_dec(c.hi)})},
            {"rows", std::move(rows)},
            {"total", c.total}};
}

json to_json(const PreservationTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) {
        json rows = json::array();
        for (const auto& r : s.rows) {
            json row = {{"n", r.n},
                        {"j", to_dec(r.j)},
                        {"case", r.kase},
                        {"p", json::array({to_dec(r.p_lo), to_dec(r.p_hi)})},
                        {"value", to_dec(r.value)},
                        {"prev", to_dec(r.prev)},
                        {"prev_bound", to_dec(r.prev_bound)},
                        {"bound", to_dec(r.bound)}};
            if (r.kase == 2) {
                row["gen"] = to_dec(r.gen);
                row["gen_bound"] = to_dec(r.gen_bound);
            }
            rows.push_back(std::move(row));
        }
        json witnesses = json::array();
        for (const auto& w : s.witnesses) witnesses.push_back(to_dec(w));
        json step = {{"m", s.m}, {"c", to_dec(s.c)}, {"J", to_json(s.j_set)}};
        if (s.m > 0) {
            step["stage"] = s.stage;
            step["B"] = to_json(s.b);
            step["block"] = s.block;
            step["C"] = to_dec(s.big_c);
            step["I"] = s.i_set;
            step["witnesses"] = std::move(witnesses);
            step["audit"] = std::move(rows);
        }
        steps.push_back(std::move(step));
    }
    return {{"steps", std::move(steps)},
            {"hits", to_dec(t.hits)},
            {"min_hits", t.min_hits},
            {"quadratic_ok", t.quadratic_ok},
            {"pass", t.pass}};
}

json to_json(const PowerReport& r) {
    return {{"power", r.power}, {"families", r.families}, {"passed", r.passed}, {"pass", r.pass()}};
}

json to_json(const std::vector<Term>& terms) {
    json out = json::array();
    for (const auto& t : terms) out.push_back({{"stage", t.stage}, {"B", to_json(t.b)}});
    return out;
}

BigInt bigint_from_json(const json& j) {
    if (j.is_string()) return from_dec(j.get<std::string>());
    if (j.is_number_integer()) return BigInt(j.get<long>());
    throw std::invalid_argument("expected a decimal string");
}

IntVector vector_from_json(const json& j) {
    std::vector<BigInt> out;
    for (const auto& x : j) out.push_back(bigint_from_json(x));
    return IntVector(std::move(out));
}

IntMatrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
    std::vector<BigInt> flat;
    for (const auto& x : j.at("entries")) flat.push_back(bigint_from_json(x));
    if (flat.size() != rows * cols) throw std::invalid_argument("matrix: entry count mismatch");
    return IntMatrix(rows, cols, std::move(flat));
}

Scale scale_from_json(const json& j) {
    std::vector<BigInt> out;
    for (const auto& x : j) out.push_back(bigint_from_json(x));
    return Scale(std::move(out));
}

BuildConfig config_from_json(const json& j) {
    BuildConfig c;
    c.k = j.at("k").get<std::size_t>();
    c.stages = j.at("stages").get<std::size_t>();
    c.breakpoints = j.at("breakpoints").get<std::size_t>();
    c.depth = j.at("depth").get<std::size_t>();
    c.count = j.at("count").get<std::size_t>();
    c.tmin_thresholds = j.at("tmin_thresholds").get<std::vector<long>>();
    c.tmin_budget = j.at("tmin_budget").get<std::size_t>();
    c.min_hits = j.at("min_hits").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.samples = j.at("samples").get<std::size_t>();
    return c;
}

GeneratorFamily family_from_json(const json& j) {
    GeneratorFamily fam;
    fam.config = config_from_json(j.at("config"));
    fam.config.validate();
    fam.horizon = bigint_from_json(j.at("horizon"));
    const std::size_t k = fam.config.k;
    for (const auto& s : j.at("stages")) {
        StageResult st;
        st.alpha = s.at("alpha").get<std::size_t>();
        if (st.alpha != fam.stages.size()) throw std::invalid_argument("family: stages out of order");
        st.d = standin(st.alpha);
        std::vector<BigInt> coeffs;
        for (const auto& c : s.at("d").at("coeffs")) coeffs.push_back(bigint_from_json(c));
        if (Poly(coeffs).coeffs() != st.d.coeffs()) throw std::invalid_argument("family: unexpected d rule");
        st.h = scale_from_json(s.at("h"));
        st.forced = s.at("forced").get<bool>();
        for (const auto& n : s.at("norms")) st.norms.push_back(bigint_from_json(n));
        const auto& gens = s.at("gens");
        if (gens.size() != k + 1) throw std::invalid_argument("family: expected k+1 generators");
        std::vector<BigInt> breaks;
        for (const auto& b : gens[0].at("breaks")) breaks.push_back(bigint_from_json(b));
        std::vector<IntVector> values(breaks.size(), IntVector(std::vector<BigInt>(k + 1)));
        for (std::size_t i = 0; i <= k; ++i) {
            const auto& g = gens[i];
            if (g.at("breaks").size() != breaks.size() || g.at("values").size() != breaks.size())
                throw std::invalid_argument("family: generator shapes differ");
            for (std::size_t p = 0; p < breaks.size(); ++p) {
                if (bigint_from_json(g.at("breaks")[p]) != breaks[p])
                    throw std::invalid_argument("family: generator breakpoints differ");
                values[p][i] = bigint_from_json(g.at("values")[p]);
            }
        }
        st.gens = StepFunction(k + 1, std::move(breaks), std::move(values), fam.horizon);
        fam.stages.push_back(std::move(st));
    }
    restore_fragments(fam);
    return fam;
}

IntMatrix parse_matrix(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw std::invalid_argument("matrix literal must be [[...],...]");
    std::size_t cols = j[0].size();
    std::vector<BigInt> flat;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) throw std::invalid_argument("matrix rows differ in length");
        for (const auto& x : row) flat.push_back(bigint_from_json(x));
    }
    return IntMatrix(j.size(), cols, std::move(flat));
}

}  // namespace specker
