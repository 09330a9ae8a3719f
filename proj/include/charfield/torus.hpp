#pragma once

// Torus character groups T^_k for GL_n^eps(q), the Frobenius action on
// character indices, norm-map descent, and the Frobenius orbits ("simplices")
// that label the character parametrization.
//
// Conventions: the level-d character group is identified with Z/N_d where
// N_d = q^d - eps^d > 0, and the Frobenius acts on indices as multiplication
// by eps*q reduced mod N_d. Everything is kept on the positive modulus; no
// signed-modulus arithmetic anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "charfield/numth.hpp"

namespace charfield::torus {

using numth::int64_t;
using bigint = boost::multiprecision::cpp_int;

constexpr int64_t kDefaultLevelCap = 10'000'000;  // max N_d that is enumerated

struct GroupParams {
    int64_t n = 0;        // rank
    int64_t q = 0;        // prime power
    int eps = +1;         // +1 for GL/SL, -1 for GU/SU
    int64_t p = 0;        // defining characteristic
    int64_t f = 0;        // q = p^f
    int eta = 0;          // sign with p == eta (mod 4); 0 when p = 2
    bool q_is_square = false;

    int64_t q_minus_eps() const { return q - eps; }
};

inline GroupParams make_group_params(int64_t n, int64_t q, int eps) {
    if (n < 1) throw std::invalid_argument("make_group_params: n must be >= 1");
    if (eps != 1 && eps != -1)
        throw std::invalid_argument("make_group_params: eps must be +1 or -1");
    if (q < 2) throw std::invalid_argument("make_group_params: q must be a prime power >= 2");
    auto fac = numth::factorize(q);
    if (fac.size() != 1)
        throw std::invalid_argument("make_group_params: q is not a prime power");
    GroupParams gp;
    gp.n = n;
    gp.q = q;
    gp.eps = eps;
    gp.p = fac[0].first;
    gp.f = fac[0].second;
    gp.eta = (gp.p == 2) ? 0 : (gp.p % 4 == 1 ? +1 : -1);
    gp.q_is_square = (gp.f % 2 == 0);
    return gp;
}

// N_d = q^d - eps^d as an exact big integer (no overflow for any d).
inline bigint torus_order_big(const GroupParams& gp, int64_t d) {
    if (d < 1) throw std::invalid_argument("torus_order_big: level must be >= 1");
    bigint qd = boost::multiprecision::pow(bigint(gp.q), static_cast<unsigned>(d));
    bigint ed = (gp.eps == 1 || d % 2 == 0) ? 1 : -1;
    return qd - ed;
}

struct TorusLevel {
    int64_t d = 0;        // level
    int64_t modulus = 0;  // N_d = q^d - eps^d
    int64_t frob = 0;     // eps*q mod N_d
};

// Builds the level descriptor, enforcing the enumeration cap.
inline TorusLevel torus_level(const GroupParams& gp, int64_t d,
                              int64_t cap = kDefaultLevelCap) {
    bigint big = torus_order_big(gp, d);
    if (big > cap)
        throw std::length_error("torus_level: N_d exceeds the enumeration cap");
    TorusLevel tl;
    tl.d = d;
    tl.modulus = static_cast<int64_t>(big);
    tl.frob = numth::mod_norm(gp.eps * gp.q, tl.modulus);
    if (tl.modulus > 1 && std::gcd(tl.frob, tl.modulus) != 1)
        throw std::logic_error("torus_level: Frobenius multiplier not a unit");
    return tl;
}

// Sum_{i=0}^{t-1} frob^(step*i) mod N; this is the index multiplier of the
// norm-map embedding of level-(d/t) characters into level d (step = d/t).
inline int64_t norm_multiplier(const TorusLevel& tl, int64_t step, int64_t terms) {
    int64_t k = 0, fpow = 1;
    int64_t fstep = numth::pow_mod(tl.frob, step, tl.modulus);
    for (int64_t i = 0; i < terms; ++i) {
        k = numth::mod_norm(k + fpow, tl.modulus);
        fpow = numth::mul_mod(fpow, fstep, tl.modulus);
    }
    return k;
}

// A Frobenius orbit of torus characters at its native level: the orbit has
// exactly d distinct elements mod N_d, and rep is the minimum of the orbit.
struct Simplex {
    int64_t d = 0;
    int64_t modulus = 0;
    int64_t frob = 0;
    int64_t rep = 0;
    std::vector<int64_t> orbit;

    bool operator==(const Simplex& o) const { return d == o.d && rep == o.rep; }
    bool operator<(const Simplex& o) const {
        return d != o.d ? d < o.d : rep < o.rep;
    }

    std::string str() const {
        return "d" + std::to_string(d) + "r" + std::to_string(rep);
    }
};

// Order of any character in the orbit (constant along the orbit).
inline int64_t char_order(const Simplex& s) {
    return s.modulus / std::gcd(s.modulus, s.rep);
}

namespace detail {

// Orbit of index j under multiplication by frob mod N; sorted, at the given
// level, without any norm descent.
inline Simplex raw_orbit(const TorusLevel& tl, int64_t j) {
    Simplex s;
    s.modulus = tl.modulus;
    s.frob = tl.frob;
    s.orbit.push_back(j);
    int64_t cur = numth::mul_mod(j, tl.frob, tl.modulus);
    while (cur != j) {
        s.orbit.push_back(cur);
        cur = numth::mul_mod(cur, tl.frob, tl.modulus);
    }
    s.d = static_cast<int64_t>(s.orbit.size());
    std::sort(s.orbit.begin(), s.orbit.end());
    s.rep = s.orbit.front();
    return s;
}

}  // namespace detail

// The simplex containing the level-d character of index j, returned at its
// native level e = orbit size. When e < d the index is descended through the
// norm identification: j == j' * k_{d,e} (mod N_d) with a unique j' mod N_e.
inline Simplex simplex_of(const GroupParams& gp, int64_t d, int64_t j,
                          int64_t cap = kDefaultLevelCap) {
    TorusLevel tl = torus_level(gp, d, cap);
    if (j < 0 || j >= tl.modulus)
        throw std::invalid_argument("simplex_of: index out of range");
    Simplex raw = detail::raw_orbit(tl, j);
    int64_t e = raw.d;
    if (e == d) return raw;
    if (d % e != 0) throw std::logic_error("simplex_of: orbit size does not divide level");

    TorusLevel te = torus_level(gp, e, cap);
    int64_t k = norm_multiplier(tl, e, d / e);
    int64_t g = std::gcd(k, tl.modulus);
    if (g != tl.modulus / te.modulus || j % g != 0)
        throw std::logic_error("simplex_of: norm multiplier has unexpected gcd");
    // Solve j' * k == j (mod N_d); solutions are unique mod N_d/g = N_e.
    int64_t m2 = tl.modulus / g;
    int64_t jp = numth::mul_mod(j / g, numth::inv_mod(k / g, m2), m2);
    Simplex down = simplex_of(gp, e, jp, cap);
    if (down.d != e)
        throw std::logic_error("simplex_of: descended index is not native at its level");
    return down;
}

// All simplices of native size exactly d for each d <= max_d, sorted by (d, rep).
inline std::vector<Simplex> enumerate_simplices(const GroupParams& gp, int64_t max_d,
                                                int64_t cap = kDefaultLevelCap) {
    std::vector<Simplex> out;
    for (int64_t d = 1; d <= max_d; ++d) {
        TorusLevel tl = torus_level(gp, d, cap);
        std::vector<char> seen(static_cast<size_t>(tl.modulus), 0);
        for (int64_t j = 0; j < tl.modulus; ++j) {
            if (seen[static_cast<size_t>(j)]) continue;
            Simplex s = detail::raw_orbit(tl, j);
            for (int64_t x : s.orbit) seen[static_cast<size_t>(x)] = 1;
            if (s.d == d) out.push_back(std::move(s));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Simplex of theta^c for gcd(c, char_order) = 1; the orbit size is preserved.
inline Simplex galois_power(const Simplex& s, int64_t c) {
    int64_t ord = char_order(s);
    int64_t cn = numth::mod_norm(c, ord == 1 ? 1 : ord);
    if (ord > 1 && std::gcd(cn, ord) != 1)
        throw std::invalid_argument("galois_power: exponent not coprime to character order");
    TorusLevel tl{s.d, s.modulus, s.frob};
    Simplex r = detail::raw_orbit(tl, numth::mul_mod(s.rep, ord == 1 ? 1 : cn, s.modulus));
    if (r.d != s.d)
        throw std::logic_error("galois_power: orbit size changed under a unit power");
    return r;
}

// Simplex of theta * (alpha_a o Nm): index shift by a * k_d where k_d is the
// norm multiplier embedding level 1 into level d. Orbit size is preserved
// because the shift is by a Frobenius-fixed index.
inline Simplex t1_shift(const Simplex& s, int64_t a) {
    TorusLevel tl{s.d, s.modulus, s.frob};
    int64_t kd = norm_multiplier(tl, 1, s.d);
    int64_t j = numth::mod_norm(s.rep + numth::mul_mod(numth::mod_norm(a, s.modulus), kd, s.modulus),
                                s.modulus);
    Simplex r = detail::raw_orbit(tl, j);
    if (r.d != s.d)
        throw std::logic_error("t1_shift: orbit size changed under a T1 shift");
    return r;
}

}  // namespace charfield::torus
