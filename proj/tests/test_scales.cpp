#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "specker/scales.hpp"

using namespace specker;

namespace {

SeedFn from_nat(NatFn f) {
    return [f](const BigInt& x) { return EvalResult::of(f(x)); };
}

// Matrices with all entries in [-r, r], sorted by (max |entry|, row-major lex).
std::vector<std::vector<long>> ordered_matrices(std::size_t k, long r) {
    const std::size_t len = k * (k + 1);
    std::vector<std::vector<long>> all;
    std::vector<long> v(len, -r);
    for (;;) {
        all.push_back(v);
        std::size_t i = len;
        while (i > 0 && v[i - 1] == r) v[--i] = -r;
        if (i == 0) break;
        ++v[i - 1];
    }
    auto key = [](const std::vector<long>& m) {
        long mx = 0;
        for (long x : m) mx = std::max(mx, std::labs(x));
        return mx;
    };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        if (key(a) != key(b)) return key(a) < key(b);
        return a < b;
    });
    return all;
}

}  // namespace

TEST_CASE("partition blocks") {
    CHECK(partition_block(std::uint64_t{0}) == 0);
    CHECK(partition_block(std::uint64_t{1}) == 0);
    CHECK(partition_block(std::uint64_t{2}) == 1);
    CHECK(partition_block(std::uint64_t{3}) == 1);
    CHECK(partition_block(std::uint64_t{6}) == 2);
    CHECK(partition_block(std::uint64_t{7}) == 2);
    for (std::uint64_t n = 0; n < 4096; n += 2) CHECK(partition_block(n) == partition_block(n + 1));
    for (std::uint64_t l = 0; l < 20; ++l) {
        std::uint64_t pair = (std::uint64_t{1} << l) - 1;
        CHECK(partition_block(2 * pair) == l);
        CHECK(next_pair_in_block(l, 0) == 2 * pair);
    }
    BigInt big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, 200);
    CHECK(partition_block(BigInt(big - 2)) == 199);
}

TEST_CASE("every block meets infinitely many pairs") {
    for (std::uint64_t l = 0; l < 6; ++l) {
        std::uint64_t n = 0;
        for (int i = 0; i < 5; ++i) {
            n = next_pair_in_block(l, n);
            CHECK(n % 2 == 0);
            CHECK(partition_block(n) == l);
            n += 1;
        }
    }
}

TEST_CASE("matrix bijection follows (max entry, lex) order") {
    CHECK(matrix_for_block(0, 1) == IntMatrix{{0, 0}});
    for (std::size_t k : {1, 2}) {
        auto order = ordered_matrices(k, k == 1 ? 3 : 1);
        for (std::size_t l = 0; l < order.size(); ++l) {
            IntMatrix m = matrix_for_block(l, k);
            std::vector<long> flat;
            for (const auto& x : m.entries()) flat.push_back(x.get_si());
            CHECK(flat == order[l]);
            CHECK(block_of_matrix(m) == l);
        }
    }
    // the eight nonzero 1x2 matrices with entries in {-1,0,1} sit in blocks 1..8
    for (std::uint64_t l = 1; l <= 8; ++l) CHECK(matrix_for_block(l, 1).max_abs() == 1);
    CHECK(matrix_for_block(9, 1).max_abs() == 2);
}

TEST_CASE("block round trip on larger entries") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BigInt> e(6);
        for (auto& x : e) x = static_cast<long>(rng() % 41) - 20;
        IntMatrix m(2, 3, e);
        CHECK(matrix_for_block(block_of_matrix(m), 2) == m);
    }
    CHECK(matrix_for_index(BigInt(6), 1) == matrix_for_block(2, 1));
}

TEST_CASE("diagonal scale examples") {
    SeedFn succ = from_nat([](const BigInt& x) { return BigInt(x + 1); });
    std::vector<SeedFn> fs(6, succ);
    Scale h = diag_scale(fs, 5);
    CHECK(h.values() == std::vector<BigInt>{0, 2, 4, 6, 8, 10});

    Scale plain = diag_scale(std::span<const SeedFn>{}, 4);
    CHECK(plain.values() == std::vector<BigInt>{0, 1, 2, 3, 4});

    std::vector<SeedFn> dbl{from_nat([](const BigInt& x) { return BigInt(2 * x); })};
    CHECK(diag_scale(dbl, 3).values() == std::vector<BigInt>{0, 1, 3, 7});
}

TEST_CASE("diagonal scale dominates its seeds") {
    std::vector<SeedFn> fs;
    for (long c = 1; c < 6; ++c) fs.push_back(from_nat([c](const BigInt& x) { return BigInt(c * x * x + c); }));
    Scale h = diag_scale(fs, 8);
    CHECK(h.strictly_increasing());
    auto rep = check_domination(fs, h, 8);
    CHECK(rep.ok());
    CHECK(rep.checked > 0);
    // recomputed from the recurrence by hand
    BigInt cur = 0;
    for (std::size_t n = 0; n < 8; ++n) {
        BigInt best = cur;
        for (std::size_t i = 0; i <= n && i < fs.size(); ++i) best = big_max(best, *fs[i](cur));
        CHECK(h[n + 1] == best + 1);
        cur = h[n + 1];
    }
}

TEST_CASE("unknown seeds") {
    SeedFn none = [](const BigInt&) { return EvalResult::unknown(UnknownReason::NoWitness); };
    std::vector<SeedFn> fs{none};
    CHECK(diag_scale(fs, 3).values() == std::vector<BigInt>{0, 1, 2, 3});
    SeedFn beyond = [](const BigInt& x) {
        return x < 3 ? EvalResult::of(x + 5) : EvalResult::unknown(UnknownReason::BeyondHorizon);
    };
    std::vector<SeedFn> gs{beyond};
    CHECK_THROWS_AS(diag_scale(gs, 4), HorizonExceeded);
    auto capped = diag_scale_capped(gs, BigInt(100), 10);
    CHECK(capped.forced);
    CHECK(capped.h.values() == std::vector<BigInt>{0, 6, 101});
}

TEST_CASE("f << h") {
    Scale h({0, 2, 4, 6, 8});
    CHECK(f_ll_h([](const BigInt&) { return BigInt(0); }, h, 4) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(f_ll_h([](const BigInt& x) { return BigInt(x + 2); }, h, 4).empty());
    CHECK(f_ll_h([](const BigInt& x) { return BigInt(x + 1); }, h, 4) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("pair condition") {
    Scale h = Scale::tabulate([](const BigInt& x) { return BigInt(x * 3); }, 20);
    std::vector<NatFn> zero{[](const BigInt&) { return BigInt(0); }};
    CHECK(dprime_condition(zero, h, 2, 2, 18).pass);
    std::vector<NatFn> big{[&](const BigInt&) { return BigInt(1000); }};
    auto rep = dprime_condition(big, h, 2, 1, 18);
    CHECK_FALSE(rep.pass);
    CHECK(rep.counts[0][0] == 0);
}

TEST_CASE("nowhere-dense extension examples") {
    auto zero = [](const BigInt&) { return BigInt(0); };
    CHECK(nwd_extend({}, zero, 0, 0) == std::vector<BigInt>{0, 1, 2});
    std::vector<BigInt> s{5};
    auto t = nwd_extend(s, [](const BigInt& x) { return BigInt(x + 10); }, 0, 0);
    CHECK(t == std::vector<BigInt>{5, 6, 7, 8, 9, 20, 31});
    CHECK(nwd_extend(t, [](const BigInt& x) { return BigInt(x + 10); }, 0, 0) == t);
}

TEST_CASE("nowhere-dense extension properties") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<BigInt> s;
        BigInt cur = static_cast<long>(rng() % 5);
        std::size_t len = rng() % 6;
        for (std::size_t i = 0; i < len; ++i) {
            s.push_back(cur);
            cur += 1 + static_cast<long>(rng() % 4);
        }
        long a = static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 7);
        NatFn f = [a, b](const BigInt& x) { return BigInt(a * x + b); };
        std::uint64_t l = rng() % 3, m = rng() % 8;
        auto t = nwd_extend(s, f, l, m);
        REQUIRE(t.size() >= s.size());
        CHECK(std::equal(s.begin(), s.end(), t.begin()));
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i - 1] < t[i]);
        bool witnessed = false;
        for (std::uint64_t n = next_pair_in_block(l, m); n + 2 < t.size(); n = next_pair_in_block(l, n + 1))
            witnessed = witnessed || (f(t[n]) < t[n + 1] && f(t[n + 1]) < t[n + 2]);
        CHECK(witnessed);
    }
}

TEST_CASE("stand-in family") {
    auto d = standin_family(3);
    CHECK(d[0](0) == 2);
    CHECK(d[0](3) == 5);
    CHECK(d[1](3) == 25);
    for (long n = 0; n < 50; ++n) {
        CHECK(d[0](n) < d[1](n));
        CHECK(d[1](n) < d[2](n));
        CHECK(d[2](n) < d[2](n + 1));
    }
    CHECK_THROWS(standin_family(0));
}

TEST_CASE("polynomial helpers") {
    Poly p({-10, 0, 1});  // n^2 - 10
    CHECK(p(4) == 6);
    CHECK(p.provably_nonnegative_from(4));
    CHECK_FALSE(p.provably_nonnegative_from(3));
    CHECK(*p.first_at_least(0, 0, 100) == 4);
    CHECK_FALSE(p.first_at_least(10000, 0, 100).has_value());
    Poly shifted = p.taylor_shift(2);  // (t+2)^2 - 10
    CHECK(shifted(1) == p(3));
    CHECK(Poly::shifted_power(2, 3)(1) == 27);
}
