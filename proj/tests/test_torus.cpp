#include <catch2/catch_amalgamated.hpp>

#include "charfield/torus.hpp"

#include <map>
#include <set>

using namespace charfield;
using namespace charfield::torus;

TEST_CASE("group params") {
    auto gp = make_group_params(2, 9, 1);
    CHECK(gp.p == 3);
    CHECK(gp.f == 2);
    CHECK(gp.q_is_square);
    CHECK(gp.eta == -1);
    CHECK(make_group_params(2, 5, -1).eta == 1);
    CHECK(make_group_params(2, 4, -1).eta == 0);
    CHECK_THROWS_AS(make_group_params(2, 6, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_group_params(0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_group_params(2, 3, 0), std::invalid_argument);
}

TEST_CASE("torus_order") {
    CHECK(torus_order_big(make_group_params(2, 3, -1), 1) == 4);
    CHECK(torus_order_big(make_group_params(3, 3, -1), 3) == 28);
    CHECK(torus_order_big(make_group_params(2, 3, 1), 2) == 8);
    // exceeds 64 bits without complaint
    CHECK(torus_order_big(make_group_params(30, 11, 1), 30) ==
          boost::multiprecision::pow(torus::bigint(11), 30) - 1);
    CHECK_THROWS_AS(torus_level(make_group_params(30, 11, 1), 30), std::length_error);
}

TEST_CASE("simplex_of and descent") {
    auto gp = make_group_params(2, 3, 1);
    auto s = simplex_of(gp, 2, 2);
    CHECK(s.d == 2);
    CHECK(s.rep == 2);
    CHECK(s.orbit == std::vector<int64_t>{2, 6});

    auto t = simplex_of(gp, 2, 0);
    CHECK(t.d == 1);
    CHECK(t.rep == 0);

    // q=2, eps=-1: frob == 1 mod 3 at level 2, everything descends to level 1
    auto gu = make_group_params(2, 2, -1);
    auto u = simplex_of(gu, 2, 1);
    CHECK(u.d == 1);

    CHECK_THROWS_AS(simplex_of(gp, 2, 8), std::invalid_argument);
    CHECK_THROWS_AS(simplex_of(gp, 2, -1), std::invalid_argument);
}

TEST_CASE("enumerate_simplices") {
    auto gu2 = make_group_params(2, 2, -1);
    auto sims = enumerate_simplices(gu2, 2);
    REQUIRE(sims.size() == 3);
    for (const auto& s : sims) CHECK(s.d == 1);

    auto gl3 = make_group_params(2, 3, 1);
    CHECK(enumerate_simplices(gl3, 1).size() == 2);
    auto sims2 = enumerate_simplices(gl3, 2);
    REQUIRE(sims2.size() == 5);
    CHECK(sims2[0].d == 1);
    CHECK(sims2[1].d == 1);
    CHECK(sims2[2].orbit == std::vector<int64_t>{1, 3});
    CHECK(sims2[3].orbit == std::vector<int64_t>{2, 6});
    CHECK(sims2[4].orbit == std::vector<int64_t>{5, 7});

    auto gu7 = make_group_params(1, 7, -1);
    CHECK(enumerate_simplices(gu7, 1).size() == 8);
}

TEST_CASE("simplex counting identity") {
    // #T^_D = Sum_{e | D} e * #{simplices of native size e}
    for (auto [q, eps] : std::vector<std::pair<int64_t, int>>{{2, 1}, {3, 1}, {2, -1},
                                                              {3, -1}, {4, -1}, {5, 1}}) {
        auto gp = make_group_params(4, q, eps);
        auto sims = enumerate_simplices(gp, 4);
        std::map<int64_t, int64_t> count_by_size;
        for (const auto& s : sims) count_by_size[s.d]++;
        for (int64_t D = 1; D <= 4; ++D) {
            int64_t total = 0;
            for (int64_t e = 1; e <= D; ++e)
                if (D % e == 0) total += e * count_by_size[e];
            CHECK(total == static_cast<int64_t>(torus_order_big(gp, D)));
        }
    }
}

TEST_CASE("level-1 action is trivial") {
    for (auto [q, eps] : std::vector<std::pair<int64_t, int>>{{3, 1}, {3, -1}, {5, 1},
                                                              {4, -1}, {7, -1}}) {
        auto gp = make_group_params(2, q, eps);
        int64_t n1 = q - eps;
        for (int64_t a = 0; a < n1; ++a) CHECK(simplex_of(gp, 1, a).d == 1);
    }
}

TEST_CASE("orbit-size dichotomy and char_order constancy") {
    for (auto [q, eps] : std::vector<std::pair<int64_t, int>>{{3, 1}, {2, -1}, {3, -1}, {5, 1}}) {
        auto gp = make_group_params(4, q, eps);
        for (const auto& s : enumerate_simplices(gp, 4)) {
            for (int64_t e = 1; e < s.d; ++e) {
                if (s.d % e != 0) continue;
                int64_t ne = static_cast<int64_t>(torus_order_big(gp, e));
                CHECK(s.rep % (s.modulus / ne) != 0);
            }
            for (int64_t j : s.orbit)
                CHECK(s.modulus / std::gcd(s.modulus, j) == char_order(s));
        }
    }
}

TEST_CASE("galois_power") {
    auto gp = make_group_params(2, 3, 1);
    auto b = simplex_of(gp, 2, 2);   // {2,6} mod 8
    auto a = simplex_of(gp, 2, 1);   // {1,3} mod 8
    CHECK(galois_power(b, 3) == b);
    CHECK(galois_power(a, 1) == a);
    CHECK(galois_power(a, 5).rep == 5);
    CHECK_THROWS_AS(galois_power(b, 2), std::invalid_argument);

    // composition law on every simplex for small parameter sets
    for (const auto& s : enumerate_simplices(make_group_params(3, 3, -1), 3)) {
        int64_t ord = char_order(s);
        for (int64_t c = 1; c <= ord; ++c) {
            if (std::gcd(c, ord) != 1) continue;
            for (int64_t c2 = 1; c2 <= ord; ++c2) {
                if (std::gcd(c2, ord) != 1) continue;
                CHECK(galois_power(galois_power(s, c), c2) == galois_power(s, c * c2 % ord));
            }
        }
    }
}

TEST_CASE("t1_shift") {
    auto gp = make_group_params(2, 3, 1);
    auto b = simplex_of(gp, 2, 2);
    auto a = simplex_of(gp, 2, 1);
    CHECK(t1_shift(b, 1) == b);
    CHECK(t1_shift(a, 1).rep == 5);
    CHECK(t1_shift(a, 0) == a);

    // additivity of the shift
    for (const auto& s : enumerate_simplices(make_group_params(3, 4, -1), 3)) {
        int64_t qe = 5;
        for (int64_t x = 0; x < qe; ++x)
            for (int64_t y = 0; y < qe; ++y)
                CHECK(t1_shift(t1_shift(s, x), y) == t1_shift(s, (x + y) % qe));
    }
}
