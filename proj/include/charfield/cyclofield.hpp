#pragma once

// Abelian number fields presented as subfields of cyclotomic fields: a field
// is the fixed field of a subgroup H <= (Z/f)^x acting on Q(zeta_f), stored
// canonically with the minimal conductor f. Large Galois groups are never
// materialized: conductor reduction works prime by prime through kernel
// generators and a membership oracle, and only the units of the final small
// conductor are enumerated.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "charfield/charparam.hpp"
#include "charfield/numth.hpp"

namespace charfield::cyclofield {

using charparam::PartitionFn;
using numth::int64_t;

struct FieldDesc {
    int64_t conductor = 1;       // minimal f with the field inside Q(zeta_f)
    std::vector<int64_t> stab;   // sorted subgroup of (Z/f)^x fixing the field

    bool operator==(const FieldDesc& o) const {
        return conductor == o.conductor && stab == o.stab;
    }
    bool operator<(const FieldDesc& o) const {
        return conductor != o.conductor ? conductor < o.conductor : stab < o.stab;
    }
};

inline FieldDesc rational_field() { return FieldDesc{1, {1}}; }

inline std::string field_str(const FieldDesc& f) {
    if (f.conductor == 1) return "Q";
    std::string s = "Q(zeta_" + std::to_string(f.conductor) + ")^{";
    for (size_t i = 0; i < f.stab.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(f.stab[i]);
    }
    return s + "}";
}

inline FieldDesc field_parse(const std::string& s) {
    if (s == "Q") return rational_field();
    auto fail = [&] { throw std::invalid_argument("field_parse: bad descriptor: " + s); };
    if (s.rfind("Q(zeta_", 0) != 0) fail();
    size_t close = s.find(')');
    if (close == std::string::npos || s.size() < close + 3) fail();
    FieldDesc out;
    out.conductor = std::stoll(s.substr(7, close - 7));
    if (s[close + 1] != '^' || s[close + 2] != '{' || s.back() != '}') fail();
    std::string body = s.substr(close + 3, s.size() - close - 4);
    size_t pos = 0;
    while (pos < body.size()) {
        size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        out.stab.push_back(std::stoll(body.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.stab.empty()) fail();
    return out;
}

inline int64_t field_degree(const FieldDesc& f) {
    return numth::euler_phi(f.conductor) / static_cast<int64_t>(f.stab.size());
}

// True iff complex conjugation (the class of -1) fixes the field.
inline bool field_is_real(const FieldDesc& f) {
    if (f.conductor <= 2) return true;
    return std::binary_search(f.stab.begin(), f.stab.end(), f.conductor - 1);
}

namespace detail {

struct PrimePower {
    int64_t ell;
    int a;
    int64_t pow;  // ell^a
};

inline std::vector<PrimePower> prime_powers(int64_t m) {
    std::vector<PrimePower> out;
    for (auto [p, e] : numth::factorize(m)) out.push_back({p, e, numth::ipow(p, e)});
    return out;
}

// Generators of {u in (Z/ell^a)^x : u == 1 mod ell^a'}.
inline std::vector<int64_t> kernel_generators(int64_t ell, int a, int aprime) {
    std::vector<int64_t> gens;
    int64_t pa = numth::ipow(ell, a);
    if (ell == 2) {
        if (a == 1) return gens;  // trivial unit group
        if (aprime <= 1) {
            gens.push_back(pa - 1);  // -1
            if (a >= 3) gens.push_back(5);
        } else if (aprime == 2) {
            if (a >= 3) gens.push_back(5);
        } else if (aprime < a) {
            gens.push_back(numth::pow_mod(5, numth::ipow(2, aprime - 2), pa));
        }
        return gens;
    }
    int64_t g = numth::primitive_root_mod_prime_power(ell, a);
    if (aprime == 0) {
        gens.push_back(g);
    } else if (aprime < a) {
        gens.push_back(numth::pow_mod(g, numth::euler_phi(numth::ipow(ell, aprime)), pa));
    }
    return gens;
}

// Lifts a unit r mod pp.pow to the unit mod m that is 1 at all other primes.
inline int64_t embed_unit(int64_t m, const std::vector<PrimePower>& pps, size_t which,
                          int64_t r) {
    std::vector<int64_t> rs, ms;
    for (size_t i = 0; i < pps.size(); ++i) {
        rs.push_back(i == which ? r : 1);
        ms.push_back(pps[i].pow);
    }
    (void)m;
    return numth::crt(rs, ms);
}

}  // namespace detail

// Minimal conductor of the fixed field of the subgroup described by `member`
// inside Q(zeta_m). `member` must be a subgroup-membership test on units mod m.
inline int64_t reduce_conductor(int64_t m, const std::function<bool(int64_t)>& member) {
    if (m <= 2) return 1;
    auto pps = detail::prime_powers(m);
    int64_t f = 1;
    for (size_t i = 0; i < pps.size(); ++i) {
        int best = pps[i].a;
        for (int aprime = 0; aprime <= pps[i].a; ++aprime) {
            bool ok = true;
            for (int64_t g : detail::kernel_generators(pps[i].ell, pps[i].a, aprime)) {
                if (!member(detail::embed_unit(m, pps, i, g))) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                best = aprime;
                break;
            }
        }
        f *= numth::ipow(pps[i].ell, best);
    }
    return f;
}

// Canonical descriptor of the fixed field of `member` inside Q(zeta_m).
inline FieldDesc canonical_subfield(int64_t m, const std::function<bool(int64_t)>& member,
                                    int64_t units_cap = numth::kDefaultUnitsCap) {
    int64_t f = reduce_conductor(m, member);
    if (f == 1) return rational_field();
    auto pps = detail::prime_powers(m);
    // CRT lift of a unit mod f to a unit mod m (1 at primes dropped entirely).
    auto lift = [&](int64_t c) {
        std::vector<int64_t> rs, ms;
        for (const auto& pp : pps) {
            int64_t fpart = std::gcd(f, pp.pow);  // ell^a' as a divisor of f
            rs.push_back(fpart == 1 ? 1 : numth::mod_norm(c, fpart));
            ms.push_back(pp.pow);
        }
        return numth::crt(rs, ms);
    };
    FieldDesc out;
    out.conductor = f;
    for (int64_t c : numth::units_mod(f, units_cap))
        if (member(lift(c))) out.stab.push_back(c);
    return out;
}

// Re-canonicalizes an explicitly given (conductor, subgroup) pair.
inline FieldDesc canonicalize(const FieldDesc& f,
                              int64_t units_cap = numth::kDefaultUnitsCap) {
    if (f.conductor == 1) return rational_field();
    auto member = [&](int64_t c) {
        int64_t cn = numth::mod_norm(c, f.conductor);
        if (f.conductor == 1) cn = 1;
        return std::binary_search(f.stab.begin(), f.stab.end(), cn == 0 ? 1 : cn);
    };
    return canonical_subfield(f.conductor, member, units_cap);
}

// F1 subset-or-equal F2, both canonical.
inline bool subfield_of(const FieldDesc& f1, const FieldDesc& f2) {
    if (f1.conductor == 1) return true;
    if (f2.conductor % f1.conductor != 0) return false;
    for (int64_t h : f2.stab) {
        int64_t r = numth::mod_norm(h, f1.conductor);
        if (!std::binary_search(f1.stab.begin(), f1.stab.end(), r)) return false;
    }
    return true;
}

// --- lambda-side fields -----------------------------------------------------

// m with Q(lambda) = Q(zeta_m): the lcm of the character orders over the
// support of lambda. Coprime to the defining characteristic.
inline int64_t lambda_modulus(const PartitionFn& fn) {
    return charparam::support_modulus(fn);
}

inline bool galg_member(int64_t c, const PartitionFn& fn) {
    return charparam::sigma_act(c, fn) == fn;
}

inline bool galr_member(int64_t c, const PartitionFn& fn) {
    PartitionFn moved = charparam::sigma_act(c, fn);
    int64_t qe = fn.params.q_minus_eps();
    for (int64_t a = 0; a < qe; ++a)
        if (charparam::alpha_act(a, fn) == moved) return true;
    return false;
}

enum class Gal { galg, galr };

inline FieldDesc fixed_field(const PartitionFn& fn, Gal which,
                             int64_t units_cap = numth::kDefaultUnitsCap) {
    int64_t m = lambda_modulus(fn);
    auto member = [&](int64_t c) {
        return which == Gal::galg ? galg_member(c, fn) : galr_member(c, fn);
    };
    return canonical_subfield(m, member, units_cap);
}

// Conductor-only fast path (skips the stabilizer enumeration).
inline int64_t fixed_field_conductor(const PartitionFn& fn, Gal which) {
    int64_t m = lambda_modulus(fn);
    auto member = [&](int64_t c) {
        return which == Gal::galg ? galg_member(c, fn) : galr_member(c, fn);
    };
    return reduce_conductor(m, member);
}

// F(sqrt(eta*p)) inside Q(zeta_{f*p}): the new stabilizer keeps the classes
// that lie in stab(F) mod f and are quadratic residues mod p. Degree doubles
// because F cap Q(zeta_p) = Q whenever p does not divide the conductor.
inline FieldDesc adjoin_sqrt_eta_p(const FieldDesc& f, int64_t p, int eta,
                                   int64_t units_cap = numth::kDefaultUnitsCap) {
    if (p == 2 || !numth::is_prime(p))
        throw std::invalid_argument("adjoin_sqrt_eta_p: p must be an odd prime");
    if (numth::mod_norm(p - eta, 4) != 0)
        throw std::invalid_argument("adjoin_sqrt_eta_p: need p == eta (mod 4)");
    if (f.conductor % p == 0)
        throw std::invalid_argument("adjoin_sqrt_eta_p: p divides the conductor");
    int64_t big = f.conductor * p;
    FieldDesc raw;
    raw.conductor = big;
    for (int64_t c : numth::units_mod(big, units_cap)) {
        if (f.conductor > 1) {
            int64_t r = numth::mod_norm(c, f.conductor);
            if (!std::binary_search(f.stab.begin(), f.stab.end(), r)) continue;
        }
        if (numth::pow_mod(c, (p - 1) / 2, p) != 1) continue;
        raw.stab.push_back(c);
    }
    FieldDesc out = canonicalize(raw, units_cap);
    if (field_degree(out) != 2 * field_degree(f))
        throw std::logic_error("adjoin_sqrt_eta_p: extension degree did not double");
    return out;
}

}  // namespace charfield::cyclofield
