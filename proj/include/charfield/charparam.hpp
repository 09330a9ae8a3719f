#pragma once

// The parametrization of Irr(GL_n^eps(q)) by partition-valued functions on
// simplices, together with the two actions that drive everything downstream:
// Galois powers sigma_c and multiplication by linear characters of T_1.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charfield/numth.hpp"
#include "charfield/torus.hpp"

namespace charfield::charparam {

using numth::Partition;
using numth::int64_t;
using torus::GroupParams;
using torus::Simplex;

// A finitely supported map Simplex -> Partition with nonempty partitions,
// entries sorted by (level, rep). Total weight Sum |phi| * |lambda(phi)|
// equals params.n for members of F_n.
struct PartitionFn {
    GroupParams params;
    std::vector<std::pair<Simplex, Partition>> entries;

    bool operator==(const PartitionFn& o) const {
        if (entries.size() != o.entries.size()) return false;
        for (size_t i = 0; i < entries.size(); ++i) {
            if (!(entries[i].first == o.entries[i].first)) return false;
            if (!(entries[i].second == o.entries[i].second)) return false;
        }
        return true;
    }

    bool operator<(const PartitionFn& o) const {
        const size_t m = std::min(entries.size(), o.entries.size());
        for (size_t i = 0; i < m; ++i) {
            const auto& a = entries[i];
            const auto& b = o.entries[i];
            if (a.first < b.first || b.first < a.first) return a.first < b.first;
            if (a.second.parts != b.second.parts) return a.second.parts < b.second.parts;
        }
        return entries.size() < o.entries.size();
    }
};

inline void sort_entries(PartitionFn& fn) {
    std::sort(fn.entries.begin(), fn.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

inline int64_t weight(const PartitionFn& fn) {
    int64_t w = 0;
    for (const auto& [s, part] : fn.entries) w += s.d * part.size();
    return w;
}

// Stable text key, e.g. "d1r0[1,1]+d2r2[1]".
inline std::string lambda_key(const PartitionFn& fn) {
    std::string key;
    for (size_t i = 0; i < fn.entries.size(); ++i) {
        if (i) key += "+";
        key += fn.entries[i].first.str() + fn.entries[i].second.str();
    }
    return key.empty() ? "(empty)" : key;
}

// Every lambda with |lambda| = n, in a fixed deterministic order: simplices
// are consumed in (level, rep) order, and at each simplex the choices run
// "skip" first, then partitions of increasing size, reverse-lex within a size.
inline std::vector<PartitionFn> enumerate_Fn(const GroupParams& gp,
                                             int64_t cap = torus::kDefaultLevelCap) {
    std::vector<Simplex> sims = torus::enumerate_simplices(gp, gp.n, cap);
    std::vector<std::vector<Partition>> parts_by_size(static_cast<size_t>(gp.n) + 1);
    for (int64_t s = 0; s <= gp.n; ++s)
        parts_by_size[static_cast<size_t>(s)] = numth::partitions_of(s);

    std::vector<PartitionFn> out;
    PartitionFn cur;
    cur.params = gp;
    auto rec = [&](auto&& self, size_t idx, int64_t remaining) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (idx >= sims.size()) return;
        const Simplex& s = sims[idx];
        self(self, idx + 1, remaining);  // skip this simplex
        for (int64_t sz = 1; sz * s.d <= remaining; ++sz) {
            for (const Partition& p : parts_by_size[static_cast<size_t>(sz)]) {
                cur.entries.emplace_back(s, p);
                self(self, idx + 1, remaining - sz * s.d);
                cur.entries.pop_back();
            }
        }
    };
    rec(rec, 0, gp.n);
    for (auto& fn : out) sort_entries(fn);
    std::sort(out.begin(), out.end());
    return out;
}

// lcm of the character orders over the support; 1 for the trivial support.
// Lives here as well as in cyclofield because both actions need it.
inline int64_t support_modulus(const PartitionFn& fn) {
    int64_t m = 1;
    for (const auto& [s, part] : fn.entries) {
        (void)part;
        m = std::lcm(m, torus::char_order(s));
    }
    return m;
}

// sigma_c lambda: the support is relabeled through galois_power with the
// inverse unit, so that (sigma lambda)(phi) = lambda(phi^c).
inline PartitionFn sigma_act(int64_t c, const PartitionFn& fn) {
    int64_t m = support_modulus(fn);
    int64_t cn = numth::mod_norm(c, m);
    if (m > 1 && std::gcd(cn, m) != 1)
        throw std::invalid_argument("sigma_act: c is not a unit mod the lambda modulus");
    int64_t cinv = (m == 1) ? 1 : numth::inv_mod(cn, m);
    PartitionFn res;
    res.params = fn.params;
    res.entries.reserve(fn.entries.size());
    for (const auto& [s, part] : fn.entries)
        res.entries.emplace_back(torus::galois_power(s, cinv), part);
    sort_entries(res);
    return res;
}

// alpha_a lambda: support shifted by t1_shift with -a, partitions carried.
inline PartitionFn alpha_act(int64_t a, const PartitionFn& fn) {
    PartitionFn res;
    res.params = fn.params;
    res.entries.reserve(fn.entries.size());
    for (const auto& [s, part] : fn.entries)
        res.entries.emplace_back(torus::t1_shift(s, -a), part);
    sort_entries(res);
    return res;
}

// {a mod q-eps : alpha_a lambda = lambda}; a subgroup of Z/(q-eps).
inline std::vector<int64_t> t1_stabilizer(const PartitionFn& fn) {
    std::vector<int64_t> stab;
    int64_t qe = fn.params.q_minus_eps();
    for (int64_t a = 0; a < qe; ++a)
        if (alpha_act(a, fn) == fn) stab.push_back(a);
    return stab;
}

// [T_1 : I(lambda)] = number of irreducible constituents of the restriction.
inline int64_t i_lambda_index(const PartitionFn& fn) {
    return static_cast<int64_t>(t1_stabilizer(fn).size());
}

// Partition of F_n into T^_1-orbits; orbits sorted by their minimal member,
// members sorted within each orbit.
inline std::vector<std::vector<PartitionFn>> t1_orbits_of_Fn(
    const GroupParams& gp, int64_t cap = torus::kDefaultLevelCap) {
    std::vector<PartitionFn> all = enumerate_Fn(gp, cap);
    std::map<PartitionFn, std::vector<PartitionFn>> orbits;
    int64_t qe = gp.q_minus_eps();
    std::vector<char> used(all.size(), 0);
    for (size_t i = 0; i < all.size(); ++i) {
        if (used[i]) continue;
        std::vector<PartitionFn> orbit;
        for (int64_t a = 0; a < qe; ++a) {
            PartitionFn shifted = alpha_act(a, all[i]);
            auto it = std::lower_bound(all.begin(), all.end(), shifted);
            if (it == all.end() || !(*it == shifted))
                throw std::logic_error("t1_orbits_of_Fn: orbit left the enumerated set");
            size_t j = static_cast<size_t>(it - all.begin());
            if (!used[j]) {
                used[j] = 1;
                orbit.push_back(shifted);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        orbits.emplace(orbit.front(), std::move(orbit));
    }
    std::vector<std::vector<PartitionFn>> out;
    out.reserve(orbits.size());
    for (auto& [k, v] : orbits) out.push_back(std::move(v));
    return out;
}

}  // namespace charfield::charparam
