#pragma once

// Integer and partition utilities shared by every other module.
//
// All routines are exact. Inputs are bounded (factorization is plain trial
// division, adequate for arguments up to ~10^12), and everything that has to
// survive larger intermediates goes through __int128 or boost::cpp_int at the
// call site.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace charfield::numth {

using std::int64_t;

inline int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
}

inline int64_t pow_mod(int64_t a, int64_t e, int64_t m) {
    if (m <= 0) throw std::invalid_argument("pow_mod: modulus must be positive");
    if (m == 1) return 0;
    a %= m;
    if (a < 0) a += m;
    int64_t r = 1;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Normalizes a (possibly negative) residue into [0, m).
inline int64_t mod_norm(int64_t a, int64_t m) {
    a %= m;
    if (a < 0) a += m;
    return a;
}

inline int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }
inline int64_t lcm64(int64_t a, int64_t b) { return std::lcm(a, b); }

// Extended gcd: returns g and sets x with a*x == g (mod m). Throws if a is
// not invertible when g != 1 is unacceptable; callers check g themselves.
inline int64_t inv_mod(int64_t a, int64_t m) {
    if (m == 1) return 0;
    a = mod_norm(a, m);
    int64_t t = 0, newt = 1, r = m, newr = a;
    while (newr != 0) {
        int64_t qt = r / newr;
        std::swap(t -= qt * newt, newt);
        std::swap(r -= qt * newr, newr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: argument not invertible");
    return mod_norm(t, m);
}

struct TwoAdicSplit {
    int64_t two_part;  // power of 2
    int64_t odd_part;  // odd
};

inline TwoAdicSplit two_adic_split(int64_t n) {
    if (n <= 0) throw std::invalid_argument("two_adic_split: n must be >= 1");
    int64_t two = 1;
    while (n % 2 == 0) {
        n /= 2;
        two *= 2;
    }
    return {two, n};
}

inline int64_t mult_order(int64_t a, int64_t m) {
    if (m < 1) throw std::invalid_argument("mult_order: modulus must be >= 1");
    if (m == 1) return 1;
    a = mod_norm(a, m);
    if (std::gcd(a, m) != 1)
        throw std::invalid_argument("mult_order: gcd(a, m) != 1");
    int64_t k = 1, v = a;
    while (v != 1) {
        v = mul_mod(v, a, m);
        ++k;
    }
    return k;
}

inline bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d : {2, 3, 5, 7}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    for (int64_t d = 11; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// Trial-division factorization, (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            out.emplace_back(d, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline int64_t euler_phi(int64_t n) {
    int64_t phi = 1;
    for (auto [p, e] : factorize(n)) {
        int64_t pe = 1;
        for (int i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

inline int64_t smallest_primitive_root(int64_t p) {
    if (p == 2 || !is_prime(p))
        throw std::invalid_argument("smallest_primitive_root: p must be an odd prime");
    auto fac = factorize(p - 1);
    for (int64_t b = 2; b < p; ++b) {
        bool primitive = true;
        for (auto [ell, e] : fac) {
            (void)e;
            if (pow_mod(b, (p - 1) / ell, p) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return b;
    }
    throw std::logic_error("smallest_primitive_root: no generator found");
}

struct Partition {
    std::vector<int64_t> parts;  // weakly decreasing, all >= 1

    Partition() = default;
    explicit Partition(std::vector<int64_t> pv) : parts(std::move(pv)) {
        for (size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] < 1)
                throw std::invalid_argument("Partition: parts must be >= 1");
            if (i > 0 && parts[i] > parts[i - 1])
                throw std::invalid_argument("Partition: parts must be weakly decreasing");
        }
    }

    int64_t size() const {
        int64_t s = 0;
        for (int64_t p : parts) s += p;
        return s;
    }

    bool operator==(const Partition& o) const { return parts == o.parts; }
    bool operator<(const Partition& o) const { return parts < o.parts; }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts[i]);
        }
        return s + "]";
    }
};

namespace detail {
inline void partitions_rec(int64_t n, int64_t maxpart, std::vector<int64_t>& cur,
                           std::vector<Partition>& out) {
    if (n == 0) {
        out.emplace_back();
        out.back().parts = cur;
        return;
    }
    for (int64_t first = std::min(n, maxpart); first >= 1; --first) {
        cur.push_back(first);
        partitions_rec(n - first, first, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

// All partitions of n in reverse-lexicographic order: (n) first, (1,...,1) last.
inline std::vector<Partition> partitions_of(int64_t n) {
    if (n < 0) throw std::invalid_argument("partitions_of: n must be >= 0");
    std::vector<Partition> out;
    std::vector<int64_t> cur;
    detail::partitions_rec(n, n, cur, out);
    if (n == 0) out.assign(1, Partition{});
    return out;
}

constexpr int64_t kDefaultUnitsCap = 10'000'000;

// Residues in [1, m] coprime to m. For m = 1 returns {1}, standing for the
// trivial group.
inline std::vector<int64_t> units_mod(int64_t m, int64_t cap = kDefaultUnitsCap) {
    if (m < 1) throw std::invalid_argument("units_mod: modulus must be >= 1");
    if (m > cap)
        throw std::length_error("units_mod: modulus too large to enumerate");
    if (m == 1) return {1};
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(m / 2));
    for (int64_t a = 1; a < m; ++a)
        if (std::gcd(a, m) == 1) out.push_back(a);
    return out;
}

// Smallest generator of the cyclic group (Z/p^a)^x for odd prime p.
inline int64_t primitive_root_mod_prime_power(int64_t p, int a) {
    int64_t g = smallest_primitive_root(p);
    if (a >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
    return g;
}

inline int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Solves x == r[i] (mod m[i]) for pairwise coprime moduli.
inline int64_t crt(const std::vector<int64_t>& rs, const std::vector<int64_t>& ms) {
    int64_t x = 0, m = 1;
    for (size_t i = 0; i < rs.size(); ++i) {
        int64_t mi = ms[i], ri = mod_norm(rs[i], mi);
        int64_t inv = inv_mod(mod_norm(m, mi), mi);
        int64_t t = mul_mod(mod_norm(ri - x, mi), inv, mi);
        x += m * t;
        m *= mi;
    }
    return mod_norm(x, m);
}

}  // namespace charfield::numth
