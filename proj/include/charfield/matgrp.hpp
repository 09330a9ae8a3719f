#pragma once

// Explicit matrix groups GL/GU/SL/SU at oracle scale: a concrete F_{q^2} with
// its index-2 Frobenius and the F_q subfield, dense matrices over it, BFS
// element enumeration from Borel-plus-Weyl generators, conjugacy classes and
// class power maps. Everything is deterministic: the field modulus is the
// lexicographically smallest primitive irreducible, and class representatives
// are minimal in a fixed total order on matrices.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "charfield/numth.hpp"
#include "charfield/torus.hpp"

namespace charfield::matgrp {

using numth::int64_t;
using torus::GroupParams;

// F_{q^2} as F_p[x]/(g) for the lexicographically smallest monic irreducible
// g of degree 2f with x primitive. Elements are indices 0..q^2-1 encoding
// coefficient vectors base p. The subfield F_q is the fixed set of y -> y^q.
class FiniteField {
public:
    int64_t p, f, q, q2;
    int deg;  // 2f

    explicit FiniteField(int64_t p_, int64_t f_) : p(p_), f(f_) {
        q = numth::ipow(p, static_cast<int>(f));
        q2 = q * q;
        deg = static_cast<int>(2 * f);
        if (q2 > 20000)
            throw std::length_error("FiniteField: q^2 too large for table arithmetic");
        find_modulus();
        build_tables();
    }

    int64_t zero() const { return 0; }
    int64_t one() const { return 1; }
    int64_t gen() const { return gen_; }  // the class of x, primitive

    int64_t add(int64_t a, int64_t b) const { return add_t[size_t(a * q2 + b)]; }
    int64_t mul(int64_t a, int64_t b) const { return mul_t[size_t(a * q2 + b)]; }
    int64_t neg(int64_t a) const { return neg_t[size_t(a)]; }
    int64_t sub(int64_t a, int64_t b) const { return add(a, neg(b)); }
    int64_t inv(int64_t a) const {
        if (a == 0) throw std::domain_error("FiniteField: inverse of zero");
        return inv_t[size_t(a)];
    }
    int64_t conj(int64_t a) const { return frob_t[size_t(a)]; }  // a^q
    int64_t norm(int64_t a) const { return mul(a, conj(a)); }    // lands in F_q
    bool in_subfield(int64_t a) const { return conj(a) == a; }

    int64_t pow(int64_t a, int64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        e %= (q2 - 1);
        if (e < 0) e += q2 - 1;
        int64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    int64_t element_order(int64_t a) const {
        if (a == 0) throw std::domain_error("FiniteField: order of zero");
        int64_t k = 1, v = a;
        while (v != 1) {
            v = mul(v, a);
            ++k;
        }
        return k;
    }

    std::vector<int64_t> subfield_elements() const {
        std::vector<int64_t> out;
        for (int64_t a = 0; a < q2; ++a)
            if (in_subfield(a)) out.push_back(a);
        return out;
    }

    // Norm-1 elements: the torus T_1 of GU, cyclic of order q+1.
    std::vector<int64_t> norm_one_elements() const {
        std::vector<int64_t> out;
        for (int64_t a = 1; a < q2; ++a)
            if (norm(a) == 1) out.push_back(a);
        return out;
    }

    const std::vector<int64_t>& modulus_coeffs() const { return poly_; }

private:
    std::vector<int64_t> poly_;  // non-leading coefficients, poly = x^deg + sum c_i x^i
    std::vector<int64_t> mul_t, add_t;
    std::vector<int64_t> inv_t, frob_t, neg_t;
    int64_t gen_ = 0;

    static std::vector<int64_t> poly_mod(std::vector<int64_t> a,
                                         const std::vector<int64_t>& m, int64_t p) {
        // reduce a by the monic poly with non-leading coeffs m (degree m.size())
        int dm = static_cast<int>(m.size());
        for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
            int64_t c = a[size_t(i)];
            if (c == 0) continue;
            a[size_t(i)] = 0;
            for (int j = 0; j < dm; ++j)
                a[size_t(i - dm + j)] =
                    ((a[size_t(i - dm + j)] - c * m[size_t(j)]) % p + p) % p;
        }
        a.resize(size_t(dm));
        return a;
    }

    static std::vector<int64_t> poly_mul(const std::vector<int64_t>& a,
                                         const std::vector<int64_t>& b, int64_t p) {
        std::vector<int64_t> c(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                c[i + j] = (c[i + j] + a[i] * b[j]) % p;
        return c;
    }

    // True if x^deg + coeffs has a monic divisor of degree in [1, deg/2].
    static bool reducible(const std::vector<int64_t>& coeffs, int64_t p) {
        int deg = static_cast<int>(coeffs.size());
        std::vector<int64_t> full = coeffs;
        full.push_back(1);
        for (int d = 1; 2 * d <= deg; ++d) {
            std::vector<int64_t> div(size_t(d) + 1);
            int64_t total = numth::ipow(p, d);
            for (int64_t enc = 0; enc < total; ++enc) {
                int64_t e = enc;
                for (int i = 0; i < d; ++i) {
                    div[size_t(i)] = e % p;
                    e /= p;
                }
                div[size_t(d)] = 1;
                // full mod div == 0 ?
                std::vector<int64_t> r = full;
                for (int i = static_cast<int>(r.size()) - 1; i >= d; --i) {
                    int64_t c = r[size_t(i)];
                    if (c == 0) continue;
                    r[size_t(i)] = 0;
                    for (int j = 0; j < d; ++j)
                        r[size_t(i - d + j)] =
                            ((r[size_t(i - d + j)] - c * div[size_t(j)]) % p + p) % p;
                }
                bool zero = true;
                for (int i = 0; i < d; ++i)
                    if (r[size_t(i)] != 0) zero = false;
                if (zero) return true;
            }
        }
        return false;
    }

    void find_modulus() {
        auto ord_fac = numth::factorize(q2 - 1);
        int64_t total = numth::ipow(p, deg);
        for (int64_t enc = 0; enc < total; ++enc) {
            std::vector<int64_t> coeffs(static_cast<size_t>(deg));
            int64_t e = enc;
            for (int i = 0; i < deg; ++i) {
                coeffs[size_t(i)] = e % p;
                e /= p;
            }
            if (coeffs[0] == 0) continue;  // x would divide
            if (reducible(coeffs, p)) continue;
            // primitivity of x: order q^2-1 in F_p[x]/(g)
            bool primitive = true;
            for (auto [ell, ee] : ord_fac) {
                (void)ee;
                std::vector<int64_t> acc{1};
                std::vector<int64_t> base{0, 1};
                int64_t expn = (q2 - 1) / ell;
                while (expn) {
                    if (expn & 1) acc = poly_mod(poly_mul(acc, base, p), coeffs, p);
                    base = poly_mod(poly_mul(base, base, p), coeffs, p);
                    expn >>= 1;
                }
                bool is_one = (acc[0] == 1);
                for (size_t i = 1; i < acc.size(); ++i)
                    if (acc[i] != 0) is_one = false;
                if (is_one) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                poly_ = coeffs;
                return;
            }
        }
        throw std::logic_error("FiniteField: no primitive irreducible found");
    }

    void build_tables() {
        auto decode = [&](int64_t idx) {
            std::vector<int64_t> v(static_cast<size_t>(deg));
            for (int i = 0; i < deg; ++i) {
                v[size_t(i)] = idx % p;
                idx /= p;
            }
            return v;
        };
        auto encode = [&](const std::vector<int64_t>& v) {
            int64_t idx = 0;
            for (int i = deg - 1; i >= 0; --i) idx = idx * p + v[size_t(i)];
            return idx;
        };
        add_t.assign(size_t(q2 * q2), 0);
        mul_t.assign(size_t(q2 * q2), 0);
        neg_t.assign(size_t(q2), 0);
        inv_t.assign(size_t(q2), 0);
        frob_t.assign(size_t(q2), 0);
        for (int64_t a = 0; a < q2; ++a) {
            auto va = decode(a);
            std::vector<int64_t> vn(static_cast<size_t>(deg));
            for (int i = 0; i < deg; ++i) vn[size_t(i)] = (p - va[size_t(i)]) % p;
            neg_t[size_t(a)] = encode(vn);
            for (int64_t b = a; b < q2; ++b) {
                auto vb = decode(b);
                std::vector<int64_t> vs(static_cast<size_t>(deg));
                for (int i = 0; i < deg; ++i)
                    vs[size_t(i)] = (va[size_t(i)] + vb[size_t(i)]) % p;
                int64_t s = encode(vs);
                add_t[size_t(a * q2 + b)] = s;
                add_t[size_t(b * q2 + a)] = s;
                int64_t m = encode(poly_mod(poly_mul(va, vb, p), poly_, p));
                mul_t[size_t(a * q2 + b)] = m;
                mul_t[size_t(b * q2 + a)] = m;
            }
        }
        // the class of x is the element with coefficient vector (0,1,0,...)
        std::vector<int64_t> xv(size_t(deg), 0);
        xv[1] = 1;
        gen_ = encode(xv);
        for (int64_t a = 1; a < q2; ++a) {
            frob_t[size_t(a)] = pow_raw(a, q);
            int64_t b = pow_raw(a, q2 - 2);
            inv_t[size_t(a)] = b;
        }
        frob_t[0] = 0;
        if (mul(gen_, inv_t[size_t(gen_)]) != 1)
            throw std::logic_error("FiniteField: inverse table inconsistent");
    }

    int64_t pow_raw(int64_t a, int64_t e) const {
        int64_t r = 1;
        while (e) {
            if (e & 1) r = mul_t[size_t(r * q2 + a)];
            a = mul_t[size_t(a * q2 + a)];
            e >>= 1;
        }
        return r;
    }
};

// Dense little matrix over a FiniteField, up to 4x4.
struct Mat {
    int n = 0;
    std::array<uint16_t, 16> e{};

    uint16_t& at(int i, int j) { return e[size_t(i * n + j)]; }
    uint16_t at(int i, int j) const { return e[size_t(i * n + j)]; }

    bool operator==(const Mat& o) const {
        if (n != o.n) return false;
        for (int i = 0; i < n * n; ++i)
            if (e[size_t(i)] != o.e[size_t(i)]) return false;
        return true;
    }
};

using MatKey = std::pair<uint64_t, uint64_t>;

struct MatKeyHash {
    size_t operator()(const MatKey& k) const {
        uint64_t h = k.first * 0x9e3779b97f4a7c15ULL ^ (k.second + 0x517cc1b727220a95ULL);
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 32;
        return static_cast<size_t>(h);
    }
};

// Row-major packing, 7 bits per entry; total order on matrices = numeric
// order of this key.
inline MatKey mat_key(const Mat& m) {
    uint64_t lo = 0, hi = 0;
    for (int i = 0; i < m.n * m.n; ++i) {
        int bit = 7 * i;
        uint64_t v = m.e[size_t(i)];
        if (bit < 57) {
            lo |= v << bit;
        } else if (bit < 64) {
            lo |= v << bit;
            hi |= v >> (64 - bit);
        } else {
            hi |= v << (bit - 64);
        }
    }
    return {hi, lo};  // hi first so pair-compare is the numeric order
}

inline Mat mat_identity(const FiniteField& F, int n) {
    Mat m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.at(i, i) = static_cast<uint16_t>(F.one());
    return m;
}

inline Mat mat_mul(const FiniteField& F, const Mat& a, const Mat& b) {
    Mat c;
    c.n = a.n;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            int64_t s = 0;
            for (int k = 0; k < a.n; ++k)
                s = F.add(s, F.mul(a.at(i, k), b.at(k, j)));
            c.at(i, j) = static_cast<uint16_t>(s);
        }
    return c;
}

inline Mat mat_conj_transpose(const FiniteField& F, const Mat& a) {
    Mat c;
    c.n = a.n;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            c.at(i, j) = static_cast<uint16_t>(F.conj(a.at(j, i)));
    return c;
}

inline int64_t mat_det(const FiniteField& F, Mat a) {
    int64_t det = F.one();
    for (int col = 0; col < a.n; ++col) {
        int pivot = -1;
        for (int r = col; r < a.n; ++r)
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != col) {
            for (int j = 0; j < a.n; ++j) std::swap(a.e[size_t(pivot * a.n + j)], a.e[size_t(col * a.n + j)]);
            det = F.neg(det);
        }
        int64_t pv = a.at(col, col);
        det = F.mul(det, pv);
        int64_t pinv = F.inv(pv);
        for (int r = col + 1; r < a.n; ++r) {
            int64_t factor = F.mul(a.at(r, col), pinv);
            if (factor == 0) continue;
            for (int j = col; j < a.n; ++j)
                a.at(r, j) = static_cast<uint16_t>(
                    F.sub(a.at(r, j), F.mul(factor, a.at(col, j))));
        }
    }
    return det;
}

inline Mat mat_inverse(const FiniteField& F, Mat a) {
    int n = a.n;
    Mat inv = mat_identity(F, n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::domain_error("mat_inverse: singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.e[size_t(pivot * n + j)], a.e[size_t(col * n + j)]);
                std::swap(inv.e[size_t(pivot * n + j)], inv.e[size_t(col * n + j)]);
            }
        int64_t pinv = F.inv(a.at(col, col));
        for (int j = 0; j < n; ++j) {
            a.at(col, j) = static_cast<uint16_t>(F.mul(a.at(col, j), pinv));
            inv.at(col, j) = static_cast<uint16_t>(F.mul(inv.at(col, j), pinv));
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col) == 0) continue;
            int64_t factor = a.at(r, col);
            for (int j = 0; j < n; ++j) {
                a.at(r, j) = static_cast<uint16_t>(
                    F.sub(a.at(r, j), F.mul(factor, a.at(col, j))));
                inv.at(r, j) = static_cast<uint16_t>(
                    F.sub(inv.at(r, j), F.mul(factor, inv.at(col, j))));
            }
        }
    }
    return inv;
}

inline Mat mat_pow(const FiniteField& F, Mat a, int64_t e) {
    if (e < 0) return mat_pow(F, mat_inverse(F, a), -e);
    Mat r = mat_identity(F, a.n);
    while (e) {
        if (e & 1) r = mat_mul(F, r, a);
        a = mat_mul(F, a, a);
        e >>= 1;
    }
    return r;
}

enum class GramKind { none, identity, antidiagonal };

inline Mat gram_matrix(const FiniteField& F, int n, GramKind kind) {
    Mat j;
    j.n = n;
    for (int i = 0; i < n; ++i) {
        if (kind == GramKind::identity) j.at(i, i) = static_cast<uint16_t>(F.one());
        if (kind == GramKind::antidiagonal)
            j.at(i, n - 1 - i) = static_cast<uint16_t>(F.one());
    }
    return j;
}

inline bool is_unitary(const FiniteField& F, const Mat& g, const Mat& gram) {
    Mat lhs = mat_mul(F, mat_conj_transpose(F, g), mat_mul(F, gram, g));
    return lhs == gram;
}

inline int64_t group_order_formula(const GroupParams& gp, bool special) {
    int64_t n = gp.n, q = gp.q;
    int64_t order = numth::ipow(q, static_cast<int>(n * (n - 1) / 2));
    for (int64_t i = 1; i <= n; ++i) {
        int64_t qi = numth::ipow(q, static_cast<int>(i));
        order *= (gp.eps == 1) ? (qi - 1) : (qi - ((i % 2 == 0) ? 1 : -1));
    }
    if (special) order /= gp.q_minus_eps();
    return order;
}

struct ConjClass {
    Mat rep;          // minimal member in key order
    int64_t size = 0;
    int64_t rep_order = 0;
};

struct MatGroup {
    GroupParams params;
    bool special = false;
    GramKind form = GramKind::none;
    FiniteField field;
    Mat gram;

    std::vector<Mat> elements;  // sorted by key
    std::unordered_map<MatKey, int32_t, MatKeyHash> index_of;
    std::vector<ConjClass> classes;
    std::vector<int32_t> class_of;  // element index -> class index
    int64_t exponent = 0;

    MatGroup(const GroupParams& gp, bool special_, GramKind form_)
        : params(gp), special(special_), form(form_), field(gp.p, gp.f) {}

    int32_t index(const Mat& m) const {
        auto it = index_of.find(mat_key(m));
        if (it == index_of.end()) throw std::logic_error("MatGroup: element not found");
        return it->second;
    }

    int64_t order() const { return static_cast<int64_t>(elements.size()); }
};

namespace detail {

inline void append_unitriangular(const MatGroup& G, std::vector<Mat>& gens, bool upper,
                                 const std::vector<int64_t>& entry_domain) {
    const auto& F = G.field;
    int n = static_cast<int>(G.params.n);
    int nfree = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((upper && j > i) || (!upper && j < i)) slots.emplace_back(i, j);
    int64_t dom = static_cast<int64_t>(entry_domain.size());
    int64_t total = 1;
    for (int i = 0; i < nfree; ++i) total *= dom;
    for (int64_t enc = 0; enc < total; ++enc) {
        Mat m = mat_identity(F, n);
        int64_t e = enc;
        for (auto [i, j] : slots) {
            m.at(i, j) = static_cast<uint16_t>(entry_domain[size_t(e % dom)]);
            e /= dom;
        }
        if (G.form == GramKind::none || is_unitary(F, m, G.gram)) gens.push_back(m);
    }
}

inline std::vector<Mat> standard_generators(const MatGroup& G) {
    const auto& F = G.field;
    const auto& gp = G.params;
    int n = static_cast<int>(gp.n);
    std::vector<Mat> gens;

    std::vector<int64_t> scalars =
        (gp.eps == 1) ? F.subfield_elements()
                      : [&] {
                            std::vector<int64_t> all;
                            for (int64_t a = 0; a < F.q2; ++a) all.push_back(a);
                            return all;
                        }();

    // Unipotent part of the Borel: all unitriangular (unitary when eps = -1).
    append_unitriangular(G, gens, true, scalars);
    append_unitriangular(G, gens, false, scalars);

    // Torus: all invertible diagonals compatible with the form.
    std::vector<int64_t> units;
    for (int64_t a = 1; a < F.q2; ++a)
        if (gp.eps == -1 || F.in_subfield(a)) units.push_back(a);
    int64_t du = static_cast<int64_t>(units.size());
    int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= du;
    for (int64_t enc = 0; enc < total; ++enc) {
        Mat m;
        m.n = n;
        int64_t e = enc;
        for (int i = 0; i < n; ++i) {
            m.at(i, i) = static_cast<uint16_t>(units[size_t(e % du)]);
            e /= du;
        }
        if (G.form == GramKind::none || is_unitary(F, m, G.gram)) gens.push_back(m);
    }

    // Weyl representatives: permutation matrices (those preserving the form
    // when there is one).
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Mat m;
        m.n = n;
        for (int i = 0; i < n; ++i)
            m.at(perm[size_t(i)], i) = static_cast<uint16_t>(F.one());
        if (G.form == GramKind::none || is_unitary(F, m, G.gram)) gens.push_back(m);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return gens;
}

}  // namespace detail

// A matrix S with conj(S)^T * S = J; conjugation by S^{-1} carries the
// J-unitary group onto the identity-form unitary group. Found by
// Gram-Schmidt: an orthonormal basis P for the form gives S = P^{-1}.
inline Mat hermitian_transport(const FiniteField& F, const Mat& J) {
    int n = J.n;
    auto h = [&](const std::array<int64_t, 4>& x, const std::array<int64_t, 4>& y) {
        int64_t s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s = F.add(s, F.mul(F.conj(x[size_t(i)]), F.mul(J.at(i, j), y[size_t(j)])));
        return s;
    };
    std::vector<std::array<int64_t, 4>> rest;
    for (int i = 0; i < n; ++i) {
        std::array<int64_t, 4> e{};
        e[size_t(i)] = F.one();
        rest.push_back(e);
    }
    std::vector<std::array<int64_t, 4>> ortho;
    while (!rest.empty()) {
        // find an anisotropic vector in the span of the remaining ones
        std::array<int64_t, 4> w{};
        bool found = false;
        for (const auto& r : rest)
            if (h(r, r) != 0) {
                w = r;
                found = true;
                break;
            }
        if (!found) {
            for (size_t a = 0; a < rest.size() && !found; ++a)
                for (size_t b = a + 1; b < rest.size() && !found; ++b)
                    for (int64_t c = 1; c < F.q2 && !found; ++c) {
                        std::array<int64_t, 4> cand{};
                        for (int i = 0; i < n; ++i)
                            cand[size_t(i)] = F.add(rest[a][size_t(i)],
                                                    F.mul(c, rest[b][size_t(i)]));
                        if (h(cand, cand) != 0) {
                            w = cand;
                            found = true;
                        }
                    }
        }
        if (!found) throw std::logic_error("hermitian_transport: no anisotropic vector");
        // scale to norm one: need N(s) * h(w,w) = 1
        int64_t t = h(w, w), s = 0;
        for (int64_t cand = 1; cand < F.q2; ++cand)
            if (F.mul(F.norm(cand), t) == F.one()) {
                s = cand;
                break;
            }
        if (s == 0) throw std::logic_error("hermitian_transport: norm not surjective?");
        std::array<int64_t, 4> v{};
        for (int i = 0; i < n; ++i) v[size_t(i)] = F.mul(s, w[size_t(i)]);
        ortho.push_back(v);
        // project the rest off v
        std::vector<std::array<int64_t, 4>> next;
        for (const auto& r : rest) {
            int64_t coef = h(v, r);
            std::array<int64_t, 4> nr{};
            bool zero = true;
            for (int i = 0; i < n; ++i) {
                nr[size_t(i)] = F.sub(r[size_t(i)], F.mul(v[size_t(i)], coef));
                if (nr[size_t(i)] != 0) zero = false;
            }
            if (!zero) next.push_back(nr);
        }
        rest = std::move(next);
    }
    if (static_cast<int>(ortho.size()) != n)
        throw std::logic_error("hermitian_transport: basis has wrong size");
    Mat P;
    P.n = n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            P.at(i, j) = static_cast<uint16_t>(ortho[size_t(j)][size_t(i)]);
    Mat S = mat_inverse(F, P);
    Mat check = mat_mul(F, mat_conj_transpose(F, S), S);
    if (!(check == J)) throw std::logic_error("hermitian_transport: verification failed");
    return S;
}

constexpr int64_t kDefaultGroupCap = 100'000;

// Full element enumeration by BFS closure from standard generators; the order
// is verified against the closed-form formula before returning. The
// identity-form variant is built in antidiagonal coordinates (where the
// triangular generators live) and transported through a form equivalence.
inline MatGroup build_group(const GroupParams& gp, bool special,
                            GramKind form = GramKind::none,
                            int64_t cap = kDefaultGroupCap) {
    if (gp.n > 4) throw std::length_error("build_group: n > 4 not supported");
    if (gp.eps == 1 && form != GramKind::none)
        throw std::invalid_argument("build_group: linear groups take no Gram form");
    if (gp.eps == -1 && form == GramKind::none)
        form = GramKind::antidiagonal;
    int64_t target = group_order_formula(gp, special);
    if (target > cap)
        throw std::length_error("build_group: group order exceeds cap");

    if (form == GramKind::identity) {
        MatGroup anti = build_group(gp, special, GramKind::antidiagonal, cap);
        Mat S = hermitian_transport(anti.field, anti.gram);
        Mat Sinv = mat_inverse(anti.field, S);
        MatGroup G(gp, special, GramKind::identity);
        G.gram = gram_matrix(G.field, static_cast<int>(gp.n), GramKind::identity);
        for (const Mat& x : anti.elements)
            G.elements.push_back(mat_mul(G.field, S, mat_mul(G.field, x, Sinv)));
        std::sort(G.elements.begin(), G.elements.end(),
                  [](const Mat& a, const Mat& b) { return mat_key(a) < mat_key(b); });
        for (size_t i = 0; i < G.elements.size(); ++i)
            G.index_of.emplace(mat_key(G.elements[i]), static_cast<int32_t>(i));
        for (size_t i = 0; i < G.elements.size(); i += 97)
            if (!is_unitary(G.field, G.elements[i], G.gram))
                throw std::logic_error("build_group: transported element not unitary");
        return G;
    }

    MatGroup G(gp, special, form);
    G.gram = gram_matrix(G.field, static_cast<int>(gp.n), form);

    std::vector<Mat> gens = detail::standard_generators(G);

    // BFS closure of the ambient GL^eps; filter by determinant afterwards.
    std::unordered_map<MatKey, int32_t, MatKeyHash> seen;
    std::vector<Mat> pool;
    Mat id = mat_identity(G.field, static_cast<int>(gp.n));
    pool.push_back(id);
    seen.emplace(mat_key(id), 0);
    int64_t ambient_target = group_order_formula(gp, false);
    for (size_t head = 0; head < pool.size(); ++head) {
        Mat cur = pool[head];
        for (const Mat& g : gens) {
            Mat nxt = mat_mul(G.field, cur, g);
            MatKey k = mat_key(nxt);
            if (seen.emplace(k, static_cast<int32_t>(pool.size())).second)
                pool.push_back(nxt);
        }
        if (static_cast<int64_t>(pool.size()) > ambient_target)
            throw std::logic_error("build_group: closure exceeded the order formula");
    }
    if (static_cast<int64_t>(pool.size()) != ambient_target)
        throw std::logic_error("build_group: generators did not reach the expected order");

    for (const Mat& m : pool) {
        if (special && mat_det(G.field, m) != G.field.one()) continue;
        G.elements.push_back(m);
    }
    if (static_cast<int64_t>(G.elements.size()) != target)
        throw std::logic_error("build_group: determinant filter gave the wrong order");

    std::sort(G.elements.begin(), G.elements.end(),
              [](const Mat& a, const Mat& b) { return mat_key(a) < mat_key(b); });
    for (size_t i = 0; i < G.elements.size(); ++i)
        G.index_of.emplace(mat_key(G.elements[i]), static_cast<int32_t>(i));

    // Deterministic unitarity spot check over the enumerated elements.
    if (form != GramKind::none) {
        for (size_t i = 0; i < G.elements.size(); i += 97)
            if (!is_unitary(G.field, G.elements[i], G.gram))
                throw std::logic_error("build_group: non-unitary element in closure");
    }
    return G;
}

// A certified generating set of the built group: starts from the standard
// generators that survive the determinant filter and greedily extends with
// the first unreached element until the closure is the whole group. The
// closure check works on element indices, so this is exact.
inline std::vector<Mat> certified_generators(const MatGroup& G) {
    std::vector<Mat> gens;
    for (const Mat& g : detail::standard_generators(G))
        if (!G.special || mat_det(G.field, g) == G.field.one()) gens.push_back(g);
    size_t N = G.elements.size();
    for (;;) {
        std::vector<char> reached(N, 0);
        std::vector<int32_t> queue;
        int32_t id_idx = G.index(mat_identity(G.field, static_cast<int>(G.params.n)));
        reached[size_t(id_idx)] = 1;
        queue.push_back(id_idx);
        for (size_t head = 0; head < queue.size(); ++head) {
            const Mat& cur = G.elements[size_t(queue[head])];
            for (const Mat& g : gens) {
                int32_t idx = G.index(mat_mul(G.field, cur, g));
                if (!reached[size_t(idx)]) {
                    reached[size_t(idx)] = 1;
                    queue.push_back(idx);
                }
            }
        }
        if (queue.size() == N) return gens;
        for (size_t i = 0; i < N; ++i)
            if (!reached[i]) {
                gens.push_back(G.elements[i]);
                break;
            }
    }
}

// Conjugacy classes by orbit refinement under conjugation by certified
// generators; representatives are minimal in the fixed matrix order.
inline void conjugacy_classes(MatGroup& G) {
    if (!G.classes.empty()) return;
    size_t N = G.elements.size();
    G.class_of.assign(N, -1);

    std::vector<std::pair<Mat, Mat>> gen_pairs;  // (g, g^{-1})
    for (const Mat& g : certified_generators(G))
        gen_pairs.emplace_back(g, mat_inverse(G.field, g));

    for (size_t i = 0; i < N; ++i) {
        if (G.class_of[i] >= 0) continue;
        int32_t cls = static_cast<int32_t>(G.classes.size());
        std::vector<int32_t> queue{static_cast<int32_t>(i)};
        G.class_of[i] = cls;
        for (size_t head = 0; head < queue.size(); ++head) {
            const Mat cur = G.elements[size_t(queue[head])];
            for (const auto& [g, ginv] : gen_pairs) {
                Mat conj = mat_mul(G.field, ginv, mat_mul(G.field, cur, g));
                int32_t idx = G.index(conj);
                if (G.class_of[size_t(idx)] < 0) {
                    G.class_of[size_t(idx)] = cls;
                    queue.push_back(idx);
                }
            }
        }
        ConjClass c;
        c.rep = G.elements[i];  // minimal: elements are sorted and i is first
        c.size = static_cast<int64_t>(queue.size());
        Mat pw = c.rep;
        c.rep_order = 1;
        Mat id = mat_identity(G.field, c.rep.n);
        while (!(pw == id)) {
            pw = mat_mul(G.field, pw, c.rep);
            ++c.rep_order;
        }
        G.classes.push_back(std::move(c));
    }
    int64_t total = 0;
    for (const auto& c : G.classes) total += c.size;
    if (total != static_cast<int64_t>(N))
        throw std::logic_error("conjugacy_classes: sizes do not sum to the order");
    G.exponent = 1;
    for (const auto& c : G.classes) G.exponent = std::lcm(G.exponent, c.rep_order);
}

// Permutation of class indices induced by g -> g^c; needs gcd(c, exp) = 1.
inline std::vector<int32_t> class_power_map(const MatGroup& G, int64_t c) {
    if (G.classes.empty())
        throw std::logic_error("class_power_map: classes not computed");
    int64_t cn = numth::mod_norm(c, G.exponent);
    if (std::gcd(cn, G.exponent) != 1)
        throw std::invalid_argument("class_power_map: exponent not coprime to c");
    std::vector<int32_t> out;
    out.reserve(G.classes.size());
    for (const auto& cls : G.classes) {
        Mat pw = mat_pow(G.field, cls.rep, cn);
        out.push_back(G.class_of[size_t(G.index(pw))]);
    }
    return out;
}

inline int64_t real_class_count(const MatGroup& G) {
    auto pm = class_power_map(G, G.exponent - 1);
    int64_t cnt = 0;
    for (size_t i = 0; i < pm.size(); ++i)
        if (pm[i] == static_cast<int32_t>(i)) ++cnt;
    return cnt;
}

}  // namespace charfield::matgrp
