#pragma once

// Decision procedures for the fields of values of the irreducible characters
// of SL_n^eps(q): the exceptional-case gate, the field of a constituent of a
// restricted character, the reality test, and the per-group report.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "charfield/charparam.hpp"
#include "charfield/cyclofield.hpp"
#include "charfield/numth.hpp"
#include "charfield/torus.hpp"

namespace charfield::fieldthm {

using charparam::PartitionFn;
using cyclofield::FieldDesc;
using numth::int64_t;
using torus::GroupParams;

// True iff all of: p odd, q nonsquare, 2 <= n_2 <= (q-eps)_2, and lambda is
// stabilized by a T^_1 character of order n_2. The stabilizer is a subgroup
// of the cyclic group Z/(q-eps), so the last clause is the divisibility
// n_2 | |stab(lambda)|.
inline bool exceptional_gate(const GroupParams& gp, const PartitionFn& fn) {
    if (gp.p == 2 || gp.q_is_square) return false;
    int64_t n2 = numth::two_adic_split(gp.n).two_part;
    int64_t qe2 = numth::two_adic_split(gp.q_minus_eps()).two_part;
    if (n2 < 2 || n2 > qe2) return false;
    return charparam::i_lambda_index(fn) % n2 == 0;
}

// Q(chi) for chi a constituent of the restriction of chi~_lambda: the fixed
// field of Galr(lambda), with sqrt(eta*p) adjoined in the exceptional case.
inline FieldDesc field_of_values(const GroupParams& gp, const PartitionFn& fn,
                                 int64_t units_cap = numth::kDefaultUnitsCap) {
    FieldDesc f = cyclofield::fixed_field(fn, cyclofield::Gal::galr, units_cap);
    if (!exceptional_gate(gp, fn)) return f;
    return cyclofield::adjoin_sqrt_eta_p(f, gp.p, gp.eta, units_cap);
}

// chi is real-valued iff sigma_{-1} lies in Galr(lambda) and, in the
// exceptional case, p == 1 (mod 4).
inline bool is_real_constituent(const GroupParams& gp, const PartitionFn& fn) {
    if (!cyclofield::galr_member(-1, fn)) return false;
    if (exceptional_gate(gp, fn) && gp.eta != 1) return false;
    return true;
}

struct CharacterVerdict {
    std::string lambda_key;
    PartitionFn lambda;            // minimal member of its T^_1-orbit
    int64_t orbit_size = 0;
    int64_t num_constituents = 0;  // [T_1 : I(lambda)]
    FieldDesc field_restriction;   // F_lambda = Q(Res chi~_lambda)
    FieldDesc field_constituent;   // Q(chi)
    bool exceptional = false;
    bool real_constituent = false;
    bool real_restriction = false;
};

struct GroupReport {
    GroupParams params;
    std::vector<CharacterVerdict> verdicts;
    // Aggregates over Irr(SL^eps_n(q)); each verdict contributes
    // num_constituents copies of its constituent field.
    int64_t irr_count = 0;
    std::map<std::string, int64_t> field_multiset;
    int64_t real_count = 0;
    // Same aggregates over Irr(GL^eps_n(q)) via Galg.
    int64_t ambient_irr_count = 0;
    std::map<std::string, int64_t> ambient_field_multiset;
    int64_t ambient_real_count = 0;
};

// Verdict computation is a pure map over T^_1-orbits, so it parallelizes
// over a worker pool; assembly order is fixed by the orbit order, making the
// report independent of the schedule.
inline GroupReport group_report(const GroupParams& gp,
                                int64_t enum_cap = torus::kDefaultLevelCap,
                                int64_t units_cap = numth::kDefaultUnitsCap,
                                int workers = 1) {
    GroupReport rep;
    rep.params = gp;
    auto orbits = charparam::t1_orbits_of_Fn(gp, enum_cap);

    struct OrbitData {
        CharacterVerdict verdict;
        std::vector<std::pair<std::string, bool>> ambient;  // (field, real) per member
    };
    std::vector<OrbitData> slots(orbits.size());

    auto work = [&](size_t idx) {
        const auto& orbit = orbits[idx];
        const PartitionFn& fn = orbit.front();
        CharacterVerdict v;
        v.lambda = fn;
        v.lambda_key = charparam::lambda_key(fn);
        v.orbit_size = static_cast<int64_t>(orbit.size());
        v.num_constituents = charparam::i_lambda_index(fn);
        if (v.orbit_size * v.num_constituents != gp.q_minus_eps())
            throw std::logic_error("group_report: orbit-stabilizer mismatch");
        v.field_restriction = cyclofield::fixed_field(fn, cyclofield::Gal::galr, units_cap);
        v.exceptional = exceptional_gate(gp, fn);
        v.field_constituent =
            v.exceptional
                ? cyclofield::adjoin_sqrt_eta_p(v.field_restriction, gp.p, gp.eta, units_cap)
                : v.field_restriction;
        v.real_restriction = cyclofield::galr_member(-1, fn);
        v.real_constituent = v.real_restriction && (!v.exceptional || gp.eta == 1);
        slots[idx].verdict = std::move(v);
        for (const PartitionFn& member : orbit) {
            FieldDesc fg = cyclofield::fixed_field(member, cyclofield::Gal::galg, units_cap);
            slots[idx].ambient.emplace_back(cyclofield::field_str(fg),
                                            cyclofield::galg_member(-1, member));
        }
    };

    if (workers <= 1) {
        for (size_t i = 0; i < orbits.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (size_t i = static_cast<size_t>(w); i < orbits.size();
                         i += static_cast<size_t>(workers))
                        work(i);
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (auto& slot : slots) {
        const CharacterVerdict& v = slot.verdict;
        rep.irr_count += v.num_constituents;
        rep.field_multiset[cyclofield::field_str(v.field_constituent)] += v.num_constituents;
        if (v.real_constituent) rep.real_count += v.num_constituents;
        for (const auto& [field, real] : slot.ambient) {
            rep.ambient_irr_count += 1;
            rep.ambient_field_multiset[field] += 1;
            if (real) rep.ambient_real_count += 1;
        }
        rep.verdicts.push_back(std::move(slot.verdict));
    }
    return rep;
}

}  // namespace charfield::fieldthm
