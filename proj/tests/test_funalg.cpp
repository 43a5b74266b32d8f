#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "specker/funalg.hpp"

using namespace specker;

namespace {

std::vector<std::optional<long>> values(const FuncExpr& e, long len, const EvalContext& ctx = {}) {
    std::vector<std::optional<long>> out;
    for (long n = 0; n < len; ++n) {
        EvalResult r = evaluate(e, n, ctx);
        out.push_back(r.known() ? std::optional<long>(r.value->get_si()) : std::nullopt);
    }
    return out;
}

std::vector<std::optional<long>> known(std::initializer_list<long> xs) {
    std::vector<std::optional<long>> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

// Dense reference semantics over [0, len).
struct Dense {
    std::vector<std::optional<long>> v;
};

Dense dense_hat(const Dense& g) {
    Dense out;
    long best = 0;
    bool ok = true;
    for (auto x : g.v) {
        if (!x) ok = false;
        if (ok) best = std::max(best, std::labs(*x));
        out.v.push_back(ok ? std::optional<long>(best) : std::nullopt);
    }
    return out;
}

Dense dense_tmin(const Dense& g, long c) {
    Dense out;
    const long len = static_cast<long>(g.v.size());
    for (long n = 0; n < len; ++n) {
        std::optional<long> r;
        for (long j = n; j < len; ++j) {
            if (!g.v[static_cast<std::size_t>(j)]) break;
            if (*g.v[static_cast<std::size_t>(j)] < c * (j + 1)) {
                r = j;
                break;
            }
        }
        out.v.push_back(r);
    }
    return out;
}

template <class Op>
Dense dense_zip(const Dense& a, const Dense& b, Op op) {
    Dense out;
    for (std::size_t i = 0; i < a.v.size(); ++i)
        out.v.push_back(a.v[i] && b.v[i] ? std::optional<long>(op(*a.v[i], *b.v[i])) : std::nullopt);
    return out;
}

struct Pair {
    FuncExpr e;
    Dense d;
};

Pair random_expr(std::mt19937_64& rng, int depth, long len) {
    if (depth == 0 || rng() % 4 == 0) {
        if (rng() % 3 == 0) {
            long a = static_cast<long>(rng() % 3), b = static_cast<long>(rng() % 5);
            Dense d;
            for (long n = 0; n < len; ++n) d.v.emplace_back(a * n + b);
            return {FuncExpr::rule("lin", [a, b](const BigInt& x) { return BigInt(a * x + b); }), d};
        }
        std::vector<long> pts;
        long cur = static_cast<long>(rng() % 7) - 3;
        for (long n = 0; n < len; ++n) {
            if (rng() % 5 == 0) cur = static_cast<long>(rng() % 41) - 20;
            pts.push_back(cur);
        }
        Dense d;
        for (long x : pts) d.v.emplace_back(x);
        return {FuncExpr::points("pts", pts), d};
    }
    switch (rng() % 5) {
    case 0: {
        auto g = random_expr(rng, depth - 1, len);
        return {hat(g.e), dense_hat(g.d)};
    }
    case 1: {
        auto g = random_expr(rng, depth - 1, len);
        Dense d;
        for (auto x : g.d.v) d.v.push_back(x ? std::optional<long>(-*x) : std::nullopt);
        return {neg(g.e), d};
    }
    case 2: {
        auto g = random_expr(rng, depth - 1, len);
        long c = 1 + static_cast<long>(rng() % 3);
        return {threshold_min(g.e, c), dense_tmin(g.d, c)};
    }
    case 3: {
        auto f = random_expr(rng, depth - 1, len), g = random_expr(rng, depth - 1, len);
        return {sum(f.e, g.e), dense_zip(f.d, g.d, [](long x, long y) { return x + y; })};
    }
    default: {
        auto f = random_expr(rng, depth - 1, len), g = random_expr(rng, depth - 1, len);
        return {max_pair(f.e, g.e),
                dense_zip(f.d, g.d, [](long x, long y) { return std::max(std::labs(x), std::labs(y)); })};
    }
    }
}

}  // namespace

TEST_CASE("hat examples") {
    CHECK(values(hat(FuncExpr::points("g", {-3, 1, -2, 5})), 4) == known({3, 3, 3, 5}));
    CHECK(values(hat(FuncExpr::points("g", {0, 0, 0})), 3) == known({0, 0, 0}));
    CHECK(values(hat(FuncExpr::points("g", {0, -7, 0})), 3) == known({0, 7, 7}));
}

TEST_CASE("max_pair examples") {
    auto f = FuncExpr::points("f", {1, -4}), g = FuncExpr::points("g", {-2, 3});
    CHECK(values(max_pair(f, g), 2) == known({2, 4}));
    CHECK(values(max_pair(f, f), 2) == known({1, 4}));
    CHECK(values(max_pair(FuncExpr::points("z", {0, 0}), FuncExpr::points("w", {5, -5})), 2) == known({5, 5}));
}

TEST_CASE("threshold-min examples") {
    auto sq = FuncExpr::rule("sq", [](const BigInt& x) { return BigInt(x * x); });
    CHECK(*evaluate(threshold_min(sq, 2), 0) == 0);
    EvalResult r = evaluate(threshold_min(sq, 2), 3, {BigInt(50), 256});
    CHECK_FALSE(r.known());
    CHECK(r.reason == UnknownReason::NoWitness);
    auto zero = FuncExpr::rule("zero", [](const BigInt&) { return BigInt(0); }, {Kind::Const, Sign::NonNeg});
    for (long n = 0; n < 20; ++n) CHECK(*evaluate(threshold_min(zero, 1), n) == n);
    CHECK_THROWS(threshold_min(zero, 0));
}

TEST_CASE("sum and negation examples") {
    auto f = FuncExpr::points("f", {1, 2}), g = FuncExpr::points("g", {3, -5});
    CHECK(values(sum(f, g), 2) == known({4, -3}));
    CHECK(values(neg(neg(g)), 2) == values(g, 2));
    CHECK(values(sum(g, neg(g)), 2) == known({0, 0}));
}

TEST_CASE("step seeds report BeyondHorizon past their table") {
    auto g = FuncExpr::points("g", {1, 2, 3});
    EvalResult r = evaluate(g, 3);
    CHECK_FALSE(r.known());
    CHECK(r.reason == UnknownReason::BeyondHorizon);
    CHECK_THROWS(evaluate(g, -1));
}

TEST_CASE("threshold-min on huge constant and decreasing stretches") {
    BigInt big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 40);
    auto c = FuncExpr::rule("c", [big](const BigInt&) { return big; }, {Kind::Const, Sign::NonNeg});
    CHECK(*evaluate(threshold_min(c, 1), 0) == big);
    CHECK(*evaluate(threshold_min(c, 2), 0) == BigInt(big / 2));
    auto dec = FuncExpr::rule("dec", [big](const BigInt& x) { return BigInt(big - x); }, {Kind::Dec, Sign::Any});
    BigInt j = *evaluate(threshold_min(dec, 1), 0);
    CHECK(big - j < j + 1);
    CHECK(big - (j - 1) >= j);
}

TEST_CASE("evaluation matches dense semantics on random trees") {
    std::mt19937_64 rng(23);
    const long len = 40;
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto p = random_expr(rng, 3, len);
        EvalContext ctx{BigInt(len), 4096};
        for (long n = 0; n < len; ++n) {
            EvalResult r = evaluate(p.e, n, ctx);
            if (!r.known() && r.reason == UnknownReason::BudgetExhausted) continue;
            auto expect = p.d.v[static_cast<std::size_t>(n)];
            if (!r.known() && r.reason == UnknownReason::BeyondHorizon) continue;
            CHECK_MESSAGE(r.known() == expect.has_value(), p.e.str() << " at " << n);
            if (r.known() && expect) CHECK_MESSAGE(*r == *expect, p.e.str() << " at " << n);
            ++compared;
        }
    }
    CHECK(compared > 10000);
}

TEST_CASE("hat properties") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_expr(rng, 2, 30);
        auto h = values(hat(p.e), 30, {BigInt(30), 4096});
        auto hh = values(hat(hat(p.e)), 30, {BigInt(30), 4096});
        CHECK(h == hh);
        for (std::size_t i = 1; i < h.size(); ++i)
            if (h[i - 1] && h[i]) CHECK(*h[i - 1] <= *h[i]);
    }
}

TEST_CASE("threshold-min is minimal and horizon monotone") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_expr(rng, 2, 60);
        auto t = threshold_min(p.e, 2);
        for (long n = 0; n < 30; ++n) {
            EvalResult small = evaluate(t, n, {BigInt(30), 4096});
            EvalResult large = evaluate(t, n, {BigInt(60), 4096});
            if (small.known()) {
                REQUIRE(large.known());
                CHECK(*small == *large);
                CHECK(*small >= n);
                CHECK(*evaluate(p.e, *small) < 2 * (*small + 1));
                for (BigInt j = n; j < *small; ++j) {
                    auto v = evaluate(p.e, j);
                    if (v.known()) CHECK(*v >= 2 * (j + 1));
                }
            }
        }
    }
}

TEST_CASE("shape analysis") {
    auto inc = FuncExpr::rule("inc", [](const BigInt& x) { return x; });
    auto pts = FuncExpr::points("p", {1, 1, 2, 2, -3});
    CHECK(pts.shape().kind == Kind::Const);
    CHECK(pts.breaks().size() == 3);
    CHECK(neg(inc).shape() == Shape{Kind::Dec, Sign::NonPos});
    CHECK(hat(neg(inc)).shape() == Shape{Kind::Inc, Sign::NonNeg});
    CHECK(sum(inc, neg(inc)).shape().kind == Kind::Mixed);
    CHECK(max_pair(inc, pts).shape().kind == Kind::Inc);
    CHECK(threshold_min(pts, 1).shape() == Shape{Kind::Inc, Sign::NonNeg});
    CHECK(hat(pts).shape().kind == Kind::Const);
}

TEST_CASE("closure fragment") {
    auto s = FuncExpr::rule("s", [](const BigInt& x) { return BigInt(x + 1); });
    auto frag = closure_fragment({s}, {1, 64, {1, 2}});
    std::vector<std::string> names;
    for (const auto& e : frag) names.push_back(e.str());
    CHECK(names == std::vector<std::string>{"s", "hat(s)", "-s", "tmin1(s)", "tmin2(s)", "(s+s)"});

    auto big = closure_fragment({s, FuncExpr::points("p", {1, 2, 3})}, {3, 64, {1, 2}});
    CHECK(big.size() == 64);
    for (const auto& e : big) {
        CHECK(e.depth() <= 3);
        CHECK(e.shape().kind != Kind::Mixed);
    }
    for (std::size_t i = 1; i < big.size(); ++i) CHECK(big[i - 1].size() <= big[i].size());
    auto again = closure_fragment({s, FuncExpr::points("p", {1, 2, 3})}, {3, 64, {1, 2}});
    for (std::size_t i = 0; i < big.size(); ++i) CHECK(big[i].str() == again[i].str());
}
