#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "specker/serialize.hpp"

using namespace specker;

namespace {

GeneratorFamily small_family() {
    BuildConfig c;
    c.k = 1;
    c.stages = 2;
    c.breakpoints = 8;
    return build_family(c);
}

}  // namespace

TEST_CASE("matrices and vectors use decimal strings") {
    json m = to_json(IntMatrix{{2, -3}});
    CHECK(m.dump() == R"({"rows":1,"cols":2,"entries":["2","-3"]})");
    CHECK(matrix_from_json(m) == IntMatrix{{2, -3}});
    BigInt big;
    mpz_ui_pow_ui(big.get_mpz_t(), 3, 100);
    json v = to_json(IntVector(std::vector<BigInt>{big, BigInt(-1)}));
    CHECK(v[0].get<std::string>() == to_dec(big));
    CHECK(vector_from_json(v)[0] == big);
    CHECK_THROWS(matrix_from_json(json::parse(R"({"rows":2,"cols":2,"entries":["1"]})")));
    CHECK_THROWS(bigint_from_json(json::parse(R"("12x")")));
}

TEST_CASE("matrix literals") {
    CHECK(parse_matrix("[[2,3]]") == IntMatrix{{2, 3}});
    CHECK(parse_matrix("[[1,0,-1],[0,1,-1]]") == IntMatrix{{1, 0, -1}, {0, 1, -1}});
    CHECK_THROWS(parse_matrix("[[1,2],[3]]"));
    CHECK_THROWS(parse_matrix("[1,2]"));
}

TEST_CASE("expression trees") {
    auto s = FuncExpr::points("s", {1, 2});
    json j = to_json(max_pair(threshold_min(hat(s), 2), sum(s, neg(s))));
    CHECK(j["tag"] == "maxpair");
    CHECK(j["left"]["tag"] == "tmin");
    CHECK(j["left"]["c"] == "2");
    CHECK(j["left"]["arg"]["tag"] == "hat");
    CHECK(j["right"]["tag"] == "sum");
    CHECK(j["right"]["right"]["tag"] == "neg");
    CHECK(j["right"]["left"]["name"] == "s");
}

TEST_CASE("family round trip") {
    GeneratorFamily fam = small_family();
    json j = to_json(fam);
    CHECK(j["stages"].size() == 2);
    CHECK(j["stages"][0]["gens"].size() == 2);
    CHECK(j["horizon"].is_string());
    GeneratorFamily back = family_from_json(j);
    CHECK(back.horizon == fam.horizon);
    CHECK_NOTHROW(verify_family(back));
    for (std::size_t a = 0; a < fam.stages.size(); ++a) {
        CHECK(back.stages[a].gens == fam.stages[a].gens);
        CHECK(back.stages[a].h.values() == fam.stages[a].h.values());
        REQUIRE(back.stages[a].fragment.size() == fam.stages[a].fragment.size());
        for (std::size_t i = 0; i < fam.stages[a].fragment.size(); ++i)
            CHECK(back.stages[a].fragment[i].str() == fam.stages[a].fragment[i].str());
    }
    CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("identical configs give identical bytes") {
    CHECK(to_json(small_family()).dump() == to_json(small_family()).dump());
}

TEST_CASE("malformed families are rejected") {
    json j = to_json(small_family());
    json bad = j;
    bad["stages"][0]["gens"].erase(1);
    CHECK_THROWS(family_from_json(bad));
    bad = j;
    bad["stages"][1]["alpha"] = 3;
    CHECK_THROWS(family_from_json(bad));
    bad = j;
    bad["config"]["breakpoints"] = 1;
    CHECK_THROWS(family_from_json(bad));
}

TEST_CASE("certificates serialize") {
    GeneratorFamily fam = small_family();
    auto cert = certify_unbounded(fam, 1, Poly({0, 0, 1}), 2, fam.horizon + 1);
    json c = to_json(cert);
    CHECK(c["total"] == true);
    CHECK(c["window"][0] == "2");
    auto trace = verify_preservation(fam, {{0, IntMatrix{{-1, -1}}}}, 3);
    json t = to_json(trace);
    CHECK(t["steps"].size() == 2);
    CHECK(t["steps"][1]["B"]["entries"][0] == "-1");
    CHECK(t["pass"] == true);
}
