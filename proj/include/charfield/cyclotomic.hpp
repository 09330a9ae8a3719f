#pragma once

// Exact arithmetic in Z[zeta_e]: elements are integer vectors in the power
// basis 1, x, ..., x^{phi(e)-1} reduced modulo the e-th cyclotomic
// polynomial. No floating point; equality is exact.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "charfield/numth.hpp"

namespace charfield::cyclotomic {

using numth::int64_t;

using Poly = std::vector<int64_t>;  // coefficient vector, lowest degree first

namespace detail {

// Exact division of integer polynomials, divisor monic.
inline Poly poly_divide_exact(Poly num, const Poly& den) {
    if (den.empty() || den.back() != 1)
        throw std::logic_error("poly_divide_exact: divisor must be monic");
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    Poly quot(static_cast<size_t>(dn - dd + 1), 0);
    for (int i = dn; i >= dd; --i) {
        int64_t c = num[static_cast<size_t>(i)];
        if (c == 0) continue;
        quot[static_cast<size_t>(i - dd)] = c;
        for (int j = 0; j <= dd; ++j)
            num[static_cast<size_t>(i - dd + j)] -= c * den[static_cast<size_t>(j)];
    }
    for (int64_t c : num)
        if (c != 0) throw std::logic_error("poly_divide_exact: nonzero remainder");
    return quot;
}

inline const Poly& cyclotomic_poly(int64_t e) {
    static std::map<int64_t, Poly> cache;
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    Poly f(static_cast<size_t>(e) + 1, 0);
    f[0] = -1;
    f[static_cast<size_t>(e)] = 1;  // x^e - 1
    for (int64_t d = 1; d < e; ++d)
        if (e % d == 0) f = poly_divide_exact(std::move(f), cyclotomic_poly(d));
    return cache.emplace(e, std::move(f)).first->second;
}

}  // namespace detail

class CycRing {
public:
    int64_t e;    // root order
    int64_t phi;  // degree of the ring over Z

    explicit CycRing(int64_t e_) : e(e_) {
        if (e < 1) throw std::invalid_argument("CycRing: order must be >= 1");
        const Poly& cp = detail::cyclotomic_poly(e);
        phi = static_cast<int64_t>(cp.size()) - 1;
        cyclo_.assign(cp.begin(), cp.end() - 1);  // non-leading coefficients
        // x^k mod Phi_e for all k in [0, e)
        red_.resize(static_cast<size_t>(e));
        for (int64_t k = 0; k < e; ++k) {
            Poly& r = red_[static_cast<size_t>(k)];
            if (k < phi) {
                r.assign(static_cast<size_t>(phi), 0);
                r[static_cast<size_t>(k)] = 1;
            } else {
                const Poly& prev = red_[static_cast<size_t>(k - 1)];
                r.assign(static_cast<size_t>(phi), 0);
                int64_t carry = prev[static_cast<size_t>(phi - 1)];
                for (int64_t i = phi - 1; i >= 1; --i) r[static_cast<size_t>(i)] = prev[static_cast<size_t>(i - 1)];
                if (carry != 0)
                    for (int64_t i = 0; i < phi; ++i)
                        r[static_cast<size_t>(i)] -= carry * cyclo_[static_cast<size_t>(i)];
            }
        }
    }

    using Elt = Poly;  // length phi

    Elt zero() const { return Elt(static_cast<size_t>(phi), 0); }

    Elt from_int(int64_t v) const {
        Elt z = zero();
        z[0] = v;
        return z;
    }

    // zeta_e^u as a ring element
    Elt root_power(int64_t u) const { return red_[static_cast<size_t>(numth::mod_norm(u, e))]; }

    Elt add(Elt a, const Elt& b) const {
        for (int64_t i = 0; i < phi; ++i) a[static_cast<size_t>(i)] += b[static_cast<size_t>(i)];
        return a;
    }

    Elt sub(Elt a, const Elt& b) const {
        for (int64_t i = 0; i < phi; ++i) a[static_cast<size_t>(i)] -= b[static_cast<size_t>(i)];
        return a;
    }

    Elt scale(Elt a, int64_t c) const {
        for (auto& v : a) v *= c;
        return a;
    }

    Elt mul(const Elt& a, const Elt& b) const {
        std::vector<int64_t> conv(static_cast<size_t>(2 * phi - 1), 0);
        for (int64_t i = 0; i < phi; ++i) {
            if (a[static_cast<size_t>(i)] == 0) continue;
            for (int64_t j = 0; j < phi; ++j)
                conv[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        }
        Elt out = zero();
        for (int64_t k = 0; k < 2 * phi - 1; ++k) {
            int64_t c = conv[static_cast<size_t>(k)];
            if (c == 0) continue;
            if (k < phi) {
                out[static_cast<size_t>(k)] += c;
            } else {
                const Poly& r = red_[static_cast<size_t>(k % e)];
                for (int64_t i = 0; i < phi; ++i) out[static_cast<size_t>(i)] += c * r[static_cast<size_t>(i)];
            }
        }
        return out;
    }

    // Galois twist zeta -> zeta^c; complex conjugation is c = -1.
    Elt galois(const Elt& a, int64_t c) const {
        Elt out = zero();
        for (int64_t i = 0; i < phi; ++i) {
            int64_t v = a[static_cast<size_t>(i)];
            if (v == 0) continue;
            const Poly& r = red_[static_cast<size_t>(numth::mod_norm(i * c, e))];
            for (int64_t j = 0; j < phi; ++j) out[static_cast<size_t>(j)] += v * r[static_cast<size_t>(j)];
        }
        return out;
    }

    Elt conj(const Elt& a) const { return galois(a, -1); }

    static bool is_zero(const Elt& a) {
        for (int64_t v : a)
            if (v != 0) return false;
        return true;
    }

    static std::string str(const Elt& a) {
        std::string s = "(";
        for (size_t i = 0; i < a.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(a[i]);
        }
        return s + ")";
    }

private:
    Poly cyclo_;              // non-leading coefficients of Phi_e
    std::vector<Poly> red_;   // x^k mod Phi_e
};

}  // namespace charfield::cyclotomic
