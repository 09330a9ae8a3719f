#include <catch2/catch_amalgamated.hpp>

#include "charfield/cyclofield.hpp"

#include <set>

using namespace charfield;
using namespace charfield::cyclofield;
using charfield::charparam::PartitionFn;
using charfield::numth::Partition;

static PartitionFn single(const torus::GroupParams& gp, int64_t d, int64_t j,
                          std::vector<int64_t> parts) {
    PartitionFn fn;
    fn.params = gp;
    fn.entries.emplace_back(torus::simplex_of(gp, d, j), Partition(std::move(parts)));
    return fn;
}

TEST_CASE("field descriptor basics") {
    FieldDesc q = rational_field();
    CHECK(field_degree(q) == 1);
    CHECK(field_is_real(q));
    CHECK(field_str(q) == "Q");

    FieldDesc sqrtm3{3, {1}};
    CHECK(field_degree(sqrtm3) == 2);
    CHECK(!field_is_real(sqrtm3));

    FieldDesc sqrt5{5, {1, 4}};
    CHECK(field_degree(sqrt5) == 2);
    CHECK(field_is_real(sqrt5));

    FieldDesc deg2_8{8, {1, 7}};
    CHECK(field_degree(deg2_8) == 2);
}

TEST_CASE("field string round-trip") {
    for (const FieldDesc& f : {rational_field(), FieldDesc{3, {1}}, FieldDesc{5, {1, 4}},
                               FieldDesc{8, {1, 7}}, FieldDesc{15, {1, 4}}}) {
        CHECK(field_parse(field_str(f)) == f);
    }
    CHECK_THROWS_AS(field_parse("Q(zeta_8)"), std::invalid_argument);
}

TEST_CASE("canonicalization") {
    // full stabilizer collapses to Q
    CHECK(canonicalize(FieldDesc{8, {1, 3, 5, 7}}) == rational_field());
    CHECK(canonicalize(FieldDesc{12, {1, 5, 7, 11}}) == rational_field());
    // Q(zeta_2) = Q(zeta_6 fixed by {1}) has honest conductors 1 and 3
    CHECK(canonicalize(FieldDesc{6, {1}}) == FieldDesc{3, {1}});
    // idempotence on a batch of descriptors
    for (int64_t m : {8, 12, 15, 16, 20, 21, 24, 36, 40}) {
        auto units = numth::units_mod(m);
        // cyclic subgroups generated by each unit
        for (int64_t g : units) {
            std::set<int64_t> sub{1};
            int64_t v = g;
            while (!sub.count(v)) {
                sub.insert(v);
                v = numth::mul_mod(v, g, m);
            }
            FieldDesc raw{m, std::vector<int64_t>(sub.begin(), sub.end())};
            FieldDesc canon = canonicalize(raw);
            CHECK(canonicalize(canon) == canon);
            CHECK(field_degree(canon) ==
                  static_cast<int64_t>(units.size() / raw.stab.size()));
            // embedding into a larger modulus and re-reducing lands on the
            // same canonical descriptor
            for (int64_t k : {2, 3, 4}) {
                int64_t big = m * k;
                FieldDesc lifted{big, {}};
                for (int64_t c : numth::units_mod(big))
                    if (sub.count(numth::mod_norm(c, m))) lifted.stab.push_back(c);
                CHECK(canonicalize(lifted) == canon);
            }
        }
    }
}

TEST_CASE("subfield_of") {
    FieldDesc q = rational_field();
    FieldDesc i4{4, {1}};
    FieldDesc z8{8, {1}};
    CHECK(subfield_of(q, i4));
    CHECK(subfield_of(i4, z8));
    CHECK(!subfield_of(z8, i4));
    CHECK(!subfield_of(FieldDesc{3, {1}}, FieldDesc{5, {1}}));
}

TEST_CASE("lambda_modulus") {
    auto gp = torus::make_group_params(2, 3, 1);
    auto steinberg = single(gp, 1, 0, {2});
    CHECK(lambda_modulus(steinberg) == 1);
    CHECK(lambda_modulus(single(gp, 2, 2, {1})) == 4);
    CHECK(lambda_modulus(single(gp, 2, 1, {1})) == 8);
    // coprime to p over a wider sweep
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {3, 2, -1}, {2, 9, 1}, {3, 4, -1}, {4, 3, 1}}) {
        auto g2 = torus::make_group_params(n, q, eps);
        for (const auto& fn : charparam::enumerate_Fn(g2))
            CHECK(std::gcd(lambda_modulus(fn), g2.p) == 1);
    }
}

TEST_CASE("galg and galr membership") {
    auto gp = torus::make_group_params(2, 3, 1);
    auto lamB = single(gp, 2, 2, {1});  // orbit {2,6} mod 8, order 4
    CHECK(galg_member(1, lamB));
    CHECK(galr_member(1, lamB));
    CHECK(galg_member(3, lamB));

    auto lamA = single(gp, 2, 1, {1});  // orbit {1,3} mod 8, order 8
    CHECK(galg_member(3, lamA));
    CHECK(!galg_member(5, lamA));
    CHECK(galr_member(5, lamA));
    CHECK(galr_member(-1, lamA));
}

TEST_CASE("sigma_{-1} can need an alpha twist") {
    // search at (2,5,+1) for lambda with galg(-1) false but galr(-1) true
    auto gp = torus::make_group_params(2, 5, 1);
    bool found = false;
    for (const auto& fn : charparam::enumerate_Fn(gp)) {
        if (!galg_member(-1, fn) && galr_member(-1, fn)) {
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("galg within galr and membership closure") {
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {2, 2, -1}, {2, 3, -1}, {3, 2, -1}}) {
        auto gp = torus::make_group_params(n, q, eps);
        for (const auto& fn : charparam::enumerate_Fn(gp)) {
            int64_t m = lambda_modulus(fn);
            auto units = numth::units_mod(m);
            for (int64_t c : units) {
                if (galg_member(c, fn)) CHECK(galr_member(c, fn));
                // closure under products
                for (int64_t c2 : units) {
                    if (galr_member(c, fn) && galr_member(c2, fn))
                        CHECK(galr_member(numth::mul_mod(c, c2, m), fn));
                }
            }
        }
    }
}

TEST_CASE("fixed_field examples") {
    auto gp = torus::make_group_params(2, 3, 1);
    CHECK(fixed_field(single(gp, 1, 0, {2}), Gal::galg) == rational_field());
    CHECK(fixed_field(single(gp, 2, 2, {1}), Gal::galg) == rational_field());

    // {1,3} mod 8: Galg = {1,3}, fixed field Q(sqrt(-2)); Galr is everything
    FieldDesc fg = fixed_field(single(gp, 2, 1, {1}), Gal::galg);
    CHECK(fg.conductor == 8);
    CHECK(field_degree(fg) == 2);
    FieldDesc fr = fixed_field(single(gp, 2, 1, {1}), Gal::galr);
    CHECK(field_degree(fr) <= 2);
    CHECK(fr == rational_field());
}

TEST_CASE("fixed field containment and conductor coprimality") {
    for (auto [n, q, eps] : std::vector<std::tuple<int64_t, int64_t, int>>{
             {2, 3, 1}, {2, 2, -1}, {3, 2, -1}, {2, 5, 1}, {2, 4, -1}}) {
        auto gp = torus::make_group_params(n, q, eps);
        for (const auto& fn : charparam::enumerate_Fn(gp)) {
            FieldDesc fr = fixed_field(fn, Gal::galr);
            FieldDesc fg = fixed_field(fn, Gal::galg);
            CHECK(subfield_of(fr, fg));
            CHECK(fr.conductor % gp.p != 0);
            CHECK(fr.conductor == fixed_field_conductor(fn, Gal::galr));
            CHECK(fg.conductor == fixed_field_conductor(fn, Gal::galg));
        }
    }
}

TEST_CASE("adjoin_sqrt_eta_p") {
    CHECK(adjoin_sqrt_eta_p(rational_field(), 3, -1) == FieldDesc{3, {1}});
    CHECK(adjoin_sqrt_eta_p(rational_field(), 5, 1) == FieldDesc{5, {1, 4}});
    CHECK(adjoin_sqrt_eta_p(rational_field(), 7, -1) == FieldDesc{7, {1, 2, 4}});
    CHECK_THROWS_AS(adjoin_sqrt_eta_p(rational_field(), 5, -1), std::invalid_argument);
    CHECK_THROWS_AS(adjoin_sqrt_eta_p(FieldDesc{3, {1}}, 3, -1), std::invalid_argument);

    // doubling over some non-rational bases
    FieldDesc base{8, {1, 7}};
    FieldDesc ext = adjoin_sqrt_eta_p(base, 3, -1);
    CHECK(field_degree(ext) == 4);
    CHECK(subfield_of(base, ext));
    FieldDesc ext2 = adjoin_sqrt_eta_p(FieldDesc{5, {1, 4}}, 7, -1);
    CHECK(field_degree(ext2) == 4);
}
