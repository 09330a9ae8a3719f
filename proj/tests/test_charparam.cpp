#include <catch2/catch_amalgamated.hpp>

#include "charfield/charparam.hpp"

#include <set>

using namespace charfield;
using namespace charfield::charparam;
using charfield::numth::Partition;

static PartitionFn make_fn(const torus::GroupParams& gp,
                           std::vector<std::pair<torus::Simplex, Partition>> entries) {
    PartitionFn fn;
    fn.params = gp;
    fn.entries = std::move(entries);
    sort_entries(fn);
    return fn;
}

TEST_CASE("weight") {
    auto gp = torus::make_group_params(2, 3, 1);
    PartitionFn empty;
    empty.params = gp;
    CHECK(weight(empty) == 0);

    auto triv = torus::simplex_of(gp, 1, 0);
    CHECK(weight(make_fn(gp, {{triv, Partition({1, 1})}})) == 2);

    auto s2 = torus::simplex_of(gp, 2, 1);
    CHECK(weight(make_fn(gp, {{s2, Partition({1})}})) == 2);
}

TEST_CASE("enumerate_Fn counts") {
    // class counts of the ambient groups; re-derived by brute force in matgrp
    CHECK(enumerate_Fn(torus::make_group_params(2, 3, 1)).size() == 8);
    CHECK(enumerate_Fn(torus::make_group_params(2, 2, -1)).size() == 9);
    CHECK(enumerate_Fn(torus::make_group_params(1, 3, 1)).size() == 2);
    CHECK(enumerate_Fn(torus::make_group_params(2, 2, 1)).size() == 3);

    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {3, 2, -1}, {2, 5, 1}, {3, 3, 1}}) {
        auto all = enumerate_Fn(torus::make_group_params(n, q, eps));
        std::set<PartitionFn> distinct(all.begin(), all.end());
        CHECK(distinct.size() == all.size());
        for (const auto& fn : all) CHECK(weight(fn) == n);
    }
}

TEST_CASE("sigma and alpha actions") {
    auto gp = torus::make_group_params(2, 3, 1);
    auto sB = torus::simplex_of(gp, 2, 2);  // {2,6}, order 4
    auto sA = torus::simplex_of(gp, 2, 1);  // {1,3}, order 8
    auto lamB = make_fn(gp, {{sB, Partition({1})}});
    auto lamA = make_fn(gp, {{sA, Partition({1})}});

    CHECK(sigma_act(1, lamB) == lamB);
    CHECK(sigma_act(3, lamB) == lamB);
    CHECK(sigma_act(5, lamA).entries[0].first.rep == 5);
    CHECK_THROWS_AS(sigma_act(2, lamA), std::invalid_argument);

    CHECK(alpha_act(0, lamA) == lamA);
    CHECK(alpha_act(1, lamB) == lamB);
    CHECK(alpha_act(1, lamA).entries[0].first.rep == 5);
}

TEST_CASE("actions commute and preserve weight") {
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {2, 3, -1}, {3, 2, -1}, {2, 5, 1}}) {
        auto gp = torus::make_group_params(n, q, eps);
        int64_t qe = gp.q_minus_eps();
        for (const auto& fn : enumerate_Fn(gp)) {
            // c must act on every character in sight, i.e. be a unit mod
            // lcm(m, q-eps); the shifted supports have orders dividing that.
            int64_t M = std::lcm(support_modulus(fn), qe);
            for (int64_t c = 1; c <= M; ++c) {
                if (std::gcd(c, M) != 1) continue;
                for (int64_t a = 0; a < qe; ++a) {
                    // sigma_c(alpha_a lambda) = alpha_{a'}(sigma_c lambda)
                    // with a' = a * c^{-1} mod (q-eps)
                    auto lhs = sigma_act(c, alpha_act(a, fn));
                    int64_t ap = (qe == 1) ? 0
                                           : numth::mul_mod(numth::inv_mod(c, qe), a, qe);
                    auto rhs = alpha_act(ap, sigma_act(c, fn));
                    CHECK(lhs == rhs);
                    CHECK(weight(lhs) == n);
                }
            }
        }
    }
}

TEST_CASE("t1_stabilizer examples") {
    auto gp = torus::make_group_params(2, 3, 1);
    auto triv = torus::simplex_of(gp, 1, 0);
    auto sB = torus::simplex_of(gp, 2, 2);

    auto steinberg = make_fn(gp, {{triv, Partition({2})}});
    CHECK(t1_stabilizer(steinberg) == std::vector<int64_t>{0});

    auto trivial_char = make_fn(gp, {{triv, Partition({1, 1})}});
    CHECK(t1_stabilizer(trivial_char) == std::vector<int64_t>{0});
    CHECK(i_lambda_index(trivial_char) == 1);

    auto lamB = make_fn(gp, {{sB, Partition({1})}});
    CHECK(t1_stabilizer(lamB) == std::vector<int64_t>{0, 1});
    CHECK(i_lambda_index(lamB) == 2);
}

TEST_CASE("index divides gcd(q-eps, n)") {
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {2, 3, -1}, {3, 4, -1}, {3, 2, -1}, {4, 3, 1}}) {
        auto gp = torus::make_group_params(n, q, eps);
        int64_t g = std::gcd(gp.q_minus_eps(), n);
        for (const auto& fn : enumerate_Fn(gp)) CHECK(g % i_lambda_index(fn) == 0);
    }
}

TEST_CASE("t1 orbits") {
    auto gp1 = torus::make_group_params(1, 3, 1);
    auto orbs1 = t1_orbits_of_Fn(gp1);
    REQUIRE(orbs1.size() == 1);
    CHECK(orbs1[0].size() == 2);

    // Sum over orbits of the constituent count = |Irr(SL_2(3))| = 7
    auto gp2 = torus::make_group_params(2, 3, 1);
    int64_t total = 0;
    for (const auto& orb : t1_orbits_of_Fn(gp2)) total += i_lambda_index(orb.front());
    CHECK(total == 7);

    // SU_2(2): q - eps = 3 coprime to n forces all indices 1, orbit count 3
    auto gp3 = torus::make_group_params(2, 2, -1);
    auto orbs3 = t1_orbits_of_Fn(gp3);
    CHECK(orbs3.size() == 3);
    int64_t total3 = 0;
    for (const auto& orb : orbs3) total3 += i_lambda_index(orb.front());
    CHECK(total3 == 3);

    // orbit-stabilizer: |orbit| * |stab| = q - eps, and the index is constant
    // along the orbit
    for (const auto& orb : t1_orbits_of_Fn(torus::make_group_params(2, 5, 1))) {
        for (const auto& fn : orb)
            CHECK(i_lambda_index(fn) * static_cast<int64_t>(orb.size()) == 4);
    }
}

TEST_CASE("sgn stability matches even index when q odd") {
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {2, 5, 1}, {2, 3, -1}, {4, 3, 1}}) {
        auto gp = torus::make_group_params(n, q, eps);
        int64_t half = gp.q_minus_eps() / 2;  // the order-2 shift: sgn
        for (const auto& fn : enumerate_Fn(gp)) {
            bool sgn_fixes = (alpha_act(half, fn) == fn);
            CHECK(sgn_fixes == (i_lambda_index(fn) % 2 == 0));
        }
    }
}
