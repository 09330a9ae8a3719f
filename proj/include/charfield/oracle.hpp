#pragma once

// Exact character tables of oracle-sized matrix groups by the class-algebra
// method: common eigenvectors of the class matrices over F_ell for a prime
// ell == 1 (mod exponent) with ell > 2*sqrt(|G|), lifted to exact cyclotomic
// integers through the discrete Fourier inversion over element orders. A
// table is verified against exact row and column orthogonality before it is
// returned; a failure is a hard error, never a wrong table.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "charfield/cyclofield.hpp"
#include "charfield/cyclotomic.hpp"
#include "charfield/fieldthm.hpp"
#include "charfield/matgrp.hpp"
#include "charfield/numth.hpp"

namespace charfield::oracle {

using cyclotomic::CycRing;
using matgrp::MatGroup;
using numth::int64_t;

struct CharTable {
    int64_t group_order = 0;
    int64_t exponent = 0;
    int64_t ell = 0;
    int k = 0;
    std::vector<int64_t> class_sizes;
    std::vector<int64_t> rep_orders;
    std::vector<int32_t> inverse_class;
    // permutation of classes under g -> g^c for every unit c mod exponent
    std::vector<std::pair<int64_t, std::vector<int32_t>>> power_maps;
    CycRing ring;
    std::vector<std::vector<CycRing::Elt>> rows;  // sorted by (degree, values)
    std::vector<int64_t> degrees;

    explicit CharTable(int64_t e) : ring(e) {}

    const std::vector<int32_t>& power_map(int64_t c) const {
        int64_t cn = numth::mod_norm(c, exponent);
        for (const auto& [cc, pm] : power_maps)
            if (cc == cn) return pm;
        throw std::invalid_argument("CharTable: no power map for that exponent");
    }

    bool row_is_real(int r) const {
        for (int m = 0; m < k; ++m)
            if (rows[size_t(r)][size_t(m)] != ring.conj(rows[size_t(r)][size_t(m)]))
                return false;
        return true;
    }

    int64_t real_row_count() const {
        int64_t c = 0;
        for (int r = 0; r < k; ++r)
            if (row_is_real(r)) ++c;
        return c;
    }
};

namespace detail {

using Vec = std::vector<int64_t>;
using Matx = std::vector<Vec>;  // row-major

inline int64_t minv(int64_t a, int64_t ell) { return numth::pow_mod(a, ell - 2, ell); }

// Kernel basis of a (square) matrix over F_ell.
inline std::vector<Vec> kernel_basis(Matx a, int64_t ell) {
    int nr = static_cast<int>(a.size());
    int nc = nr;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < nc && rank < nr; ++col) {
        int piv = -1;
        for (int r = rank; r < nr; ++r)
            if (a[size_t(r)][size_t(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[size_t(piv)], a[size_t(rank)]);
        int64_t iv = minv(a[size_t(rank)][size_t(col)], ell);
        for (int c = col; c < nc; ++c)
            a[size_t(rank)][size_t(c)] = numth::mul_mod(a[size_t(rank)][size_t(c)], iv, ell);
        for (int r = 0; r < nr; ++r) {
            if (r == rank || a[size_t(r)][size_t(col)] == 0) continue;
            int64_t f = a[size_t(r)][size_t(col)];
            for (int c = col; c < nc; ++c)
                a[size_t(r)][size_t(c)] = numth::mod_norm(
                    a[size_t(r)][size_t(c)] - numth::mul_mod(f, a[size_t(rank)][size_t(c)], ell), ell);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<char> is_pivot(size_t(nc), 0);
    for (int c : pivot_col) is_pivot[size_t(c)] = 1;
    std::vector<Vec> basis;
    for (int free = 0; free < nc; ++free) {
        if (is_pivot[size_t(free)]) continue;
        Vec v(size_t(nc), 0);
        v[size_t(free)] = 1;
        for (int r = 0; r < rank; ++r) {
            int64_t val = a[size_t(r)][size_t(free)];
            if (val != 0) v[size_t(pivot_col[size_t(r)])] = numth::mod_norm(-val, ell);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves B * alpha = w where the columns of B (k x s) are independent.
inline Vec solve_in_basis(const std::vector<Vec>& basis, const Vec& w, int64_t ell) {
    int k = static_cast<int>(w.size());
    int s = static_cast<int>(basis.size());
    Matx aug(size_t(k), Vec(size_t(s) + 1, 0));
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < s; ++c) aug[size_t(r)][size_t(c)] = basis[size_t(c)][size_t(r)];
        aug[size_t(r)][size_t(s)] = w[size_t(r)];
    }
    int rank = 0;
    std::vector<int> pivot_col(size_t(s), -1);
    for (int col = 0; col < s && rank < k; ++col) {
        int piv = -1;
        for (int r = rank; r < k; ++r)
            if (aug[size_t(r)][size_t(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::logic_error("solve_in_basis: dependent basis");
        std::swap(aug[size_t(piv)], aug[size_t(rank)]);
        int64_t iv = minv(aug[size_t(rank)][size_t(col)], ell);
        for (int c = col; c <= s; ++c)
            aug[size_t(rank)][size_t(c)] = numth::mul_mod(aug[size_t(rank)][size_t(c)], iv, ell);
        for (int r = 0; r < k; ++r) {
            if (r == rank || aug[size_t(r)][size_t(col)] == 0) continue;
            int64_t f = aug[size_t(r)][size_t(col)];
            for (int c = col; c <= s; ++c)
                aug[size_t(r)][size_t(c)] = numth::mod_norm(
                    aug[size_t(r)][size_t(c)] - numth::mul_mod(f, aug[size_t(rank)][size_t(c)], ell),
                    ell);
        }
        pivot_col[size_t(col)] = rank;
        ++rank;
    }
    Vec alpha(size_t(s), 0);
    for (int c = 0; c < s; ++c) alpha[size_t(c)] = aug[size_t(pivot_col[size_t(c)])][size_t(s)];
    // consistency: rows beyond rank must be zero
    for (int r = rank; r < k; ++r)
        if (aug[size_t(r)][size_t(s)] != 0)
            throw std::logic_error("solve_in_basis: vector outside span");
    return alpha;
}

}  // namespace detail

constexpr int kMaxClasses = 200;

inline CharTable character_table(MatGroup& G) {
    matgrp::conjugacy_classes(G);
    int k = static_cast<int>(G.classes.size());
    if (k > kMaxClasses) throw std::length_error("character_table: too many classes");
    int64_t order = G.order();
    int64_t e = G.exponent;

    CharTable T(e);
    T.group_order = order;
    T.exponent = e;
    T.k = k;
    for (const auto& c : G.classes) {
        T.class_sizes.push_back(c.size);
        T.rep_orders.push_back(c.rep_order);
    }

    // smallest usable modular prime
    int64_t ell = 0;
    for (int64_t cand = e + 1;; cand += e) {
        if (!numth::is_prime(cand)) continue;
        if (cand * cand <= 4 * order) continue;
        if (order % cand == 0) continue;
        ell = cand;
        break;
    }
    T.ell = ell;

    auto pm_inv = matgrp::class_power_map(G, -1);
    T.inverse_class = pm_inv;
    for (int64_t c : numth::units_mod(e))
        T.power_maps.emplace_back(c, matgrp::class_power_map(G, c));

    // class matrices mod ell: cm[i][j][m] = #{(x,y) in C_i x C_j : xy = z_m}
    std::vector<detail::Matx> cm(size_t(k), detail::Matx(size_t(k), detail::Vec(size_t(k), 0)));
    {
        std::vector<int32_t> inv_index(G.elements.size());
        for (size_t idx = 0; idx < G.elements.size(); ++idx)
            inv_index[idx] = G.index(matgrp::mat_inverse(G.field, G.elements[idx]));
        for (int m = 0; m < k; ++m) {
            const matgrp::Mat& z = G.classes[size_t(m)].rep;
            for (size_t idx = 0; idx < G.elements.size(); ++idx) {
                int i = G.class_of[idx];
                const matgrp::Mat& xinv = G.elements[size_t(inv_index[idx])];
                int j = G.class_of[size_t(G.index(matgrp::mat_mul(G.field, xinv, z)))];
                cm[size_t(i)][size_t(j)][size_t(m)]++;
            }
        }
        for (auto& mi : cm)
            for (auto& row : mi)
                for (auto& v : row) v %= ell;
    }

    int idc = G.class_of[size_t(G.index(matgrp::mat_identity(G.field, static_cast<int>(G.params.n))))];

    // split the common eigenspaces
    std::vector<std::vector<detail::Vec>> spaces;
    {
        std::vector<detail::Vec> full;
        for (int i = 0; i < k; ++i) {
            detail::Vec v(size_t(k), 0);
            v[size_t(i)] = 1;
            full.push_back(std::move(v));
        }
        spaces.push_back(std::move(full));
    }
    for (int i = 0; i < k; ++i) {
        bool all_one = true;
        for (const auto& S : spaces)
            if (S.size() > 1) all_one = false;
        if (all_one) break;
        std::vector<std::vector<detail::Vec>> next;
        for (auto& S : spaces) {
            int s = static_cast<int>(S.size());
            if (s == 1) {
                next.push_back(std::move(S));
                continue;
            }
            // restriction A of cm[i] to S
            detail::Matx A(size_t(s), detail::Vec(size_t(s), 0));
            for (int r = 0; r < s; ++r) {
                detail::Vec w(size_t(k), 0);
                for (int row = 0; row < k; ++row) {
                    int64_t acc = 0;
                    for (int m = 0; m < k; ++m)
                        acc = numth::mod_norm(
                            acc + numth::mul_mod(cm[size_t(i)][size_t(row)][size_t(m)],
                                                 S[size_t(r)][size_t(m)], ell),
                            ell);
                    w[size_t(row)] = acc;
                }
                detail::Vec alpha = detail::solve_in_basis(S, w, ell);
                for (int c = 0; c < s; ++c) A[size_t(c)][size_t(r)] = alpha[size_t(c)];
            }
            int found = 0;
            for (int64_t t = 0; t < ell && found < s; ++t) {
                detail::Matx shifted = A;
                for (int d = 0; d < s; ++d)
                    shifted[size_t(d)][size_t(d)] = numth::mod_norm(shifted[size_t(d)][size_t(d)] - t, ell);
                auto ker = detail::kernel_basis(shifted, ell);
                if (ker.empty()) continue;
                found += static_cast<int>(ker.size());
                std::vector<detail::Vec> sub;
                for (const auto& kv : ker) {
                    detail::Vec lifted(size_t(k), 0);
                    for (int c = 0; c < s; ++c)
                        for (int m = 0; m < k; ++m)
                            lifted[size_t(m)] = numth::mod_norm(
                                lifted[size_t(m)] +
                                    numth::mul_mod(kv[size_t(c)], S[size_t(c)][size_t(m)], ell),
                                ell);
                    sub.push_back(std::move(lifted));
                }
                next.push_back(std::move(sub));
            }
            if (found != s)
                throw std::logic_error("character_table: class matrix failed to split");
        }
        spaces = std::move(next);
    }
    if (static_cast<int>(spaces.size()) != k)
        throw std::logic_error("character_table: eigenspaces did not fully split");

    // normalize at the identity class and read off central characters
    std::vector<detail::Vec> omegas;
    for (auto& S : spaces) {
        detail::Vec v = S.front();
        if (v[size_t(idc)] == 0)
            throw std::logic_error("character_table: eigenvector vanishes at identity");
        int64_t s = detail::minv(v[size_t(idc)], ell);
        for (auto& x : v) x = numth::mul_mod(x, s, ell);
        omegas.push_back(std::move(v));
    }

    // degrees from the orthogonality of central characters
    std::vector<int64_t> degrees;
    int64_t sumsq = 0;
    for (const auto& om : omegas) {
        int64_t s = 0;
        for (int m = 0; m < k; ++m) {
            int64_t term = numth::mul_mod(om[size_t(m)], om[size_t(T.inverse_class[size_t(m)])], ell);
            s = numth::mod_norm(s + numth::mul_mod(term, detail::minv(T.class_sizes[size_t(m)] % ell, ell), ell), ell);
        }
        int64_t d2 = numth::mul_mod(numth::mod_norm(order, ell), detail::minv(s, ell), ell);
        int64_t deg = 0;
        for (int64_t d = 1; d * d <= order; ++d)
            if (numth::mul_mod(d, d, ell) == d2) {
                deg = d;
                break;
            }
        if (deg == 0) throw std::logic_error("character_table: no degree matches");
        if (order % deg != 0)
            throw std::logic_error("character_table: degree does not divide the order");
        degrees.push_back(deg);
        sumsq += deg * deg;
    }
    if (sumsq != order)
        throw std::logic_error("character_table: sum of squared degrees is off");

    // exact values: chi(g) = sum_u mu_u zeta_o^u with integer multiplicities
    int64_t g0 = numth::smallest_primitive_root(ell);
    int64_t z = numth::pow_mod(g0, (ell - 1) / e, ell);
    std::vector<std::vector<int32_t>> rep_power_class(static_cast<size_t>(k));
    for (int m = 0; m < k; ++m) {
        int64_t o = T.rep_orders[size_t(m)];
        auto& pc = rep_power_class[size_t(m)];
        pc.resize(size_t(o));
        matgrp::Mat pw = matgrp::mat_identity(G.field, static_cast<int>(G.params.n));
        for (int64_t v = 0; v < o; ++v) {
            pc[size_t(v)] = G.class_of[size_t(G.index(pw))];
            pw = matgrp::mat_mul(G.field, pw, G.classes[size_t(m)].rep);
        }
    }

    struct RowData {
        int64_t degree;
        std::vector<CycRing::Elt> vals;
    };
    std::vector<RowData> rowdata;
    for (size_t t = 0; t < omegas.size(); ++t) {
        const auto& om = omegas[t];
        int64_t d = degrees[t];
        detail::Vec val(size_t(k), 0);
        for (int m = 0; m < k; ++m)
            val[size_t(m)] = numth::mul_mod(
                numth::mul_mod(d % ell, om[size_t(m)], ell),
                detail::minv(T.class_sizes[size_t(m)] % ell, ell), ell);
        RowData rd;
        rd.degree = d;
        for (int m = 0; m < k; ++m) {
            int64_t o = T.rep_orders[size_t(m)];
            int64_t zo = numth::pow_mod(z, e / o, ell);
            int64_t oinv = detail::minv(o % ell, ell);
            CycRing::Elt acc = T.ring.zero();
            int64_t check = 0;
            for (int64_t u = 0; u < o; ++u) {
                int64_t mu = 0;
                for (int64_t v = 0; v < o; ++v) {
                    int64_t zpow = numth::pow_mod(zo, numth::mod_norm(-u * v, o), ell);
                    mu = numth::mod_norm(
                        mu + numth::mul_mod(val[size_t(rep_power_class[size_t(m)][size_t(v)])], zpow, ell),
                        ell);
                }
                mu = numth::mul_mod(mu, oinv, ell);
                if (mu > d)
                    throw std::logic_error("character_table: multiplicity exceeds degree");
                if (mu != 0)
                    acc = T.ring.add(acc, T.ring.scale(T.ring.root_power(u * (e / o)), mu));
                check = numth::mod_norm(check + numth::mul_mod(mu, numth::pow_mod(zo, u, ell), ell), ell);
            }
            if (check != val[size_t(m)])
                throw std::logic_error("character_table: lifted value mismatch");
            rd.vals.push_back(std::move(acc));
        }
        rowdata.push_back(std::move(rd));
    }

    std::sort(rowdata.begin(), rowdata.end(), [](const RowData& a, const RowData& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        for (size_t m = 0; m < a.vals.size(); ++m)
            if (a.vals[m] != b.vals[m]) return a.vals[m] < b.vals[m];
        return false;
    });
    for (auto& rd : rowdata) {
        T.degrees.push_back(rd.degree);
        T.rows.push_back(std::move(rd.vals));
    }

    // exact verification before returning anything
    for (int r = 0; r < k; ++r) {
        if (T.rows[size_t(r)][size_t(idc)] != T.ring.from_int(T.degrees[size_t(r)]))
            throw std::logic_error("character_table: identity column disagrees with degree");
        for (int r2 = r; r2 < k; ++r2) {
            CycRing::Elt acc = T.ring.zero();
            for (int m = 0; m < k; ++m) {
                CycRing::Elt term =
                    T.ring.mul(T.rows[size_t(r)][size_t(m)], T.ring.conj(T.rows[size_t(r2)][size_t(m)]));
                acc = T.ring.add(acc, T.ring.scale(term, T.class_sizes[size_t(m)]));
            }
            CycRing::Elt want = T.ring.from_int(r == r2 ? order : 0);
            if (acc != want)
                throw std::logic_error("character_table: row orthogonality failed");
        }
    }
    for (int m = 0; m < k; ++m)
        for (int m2 = m; m2 < k; ++m2) {
            CycRing::Elt acc = T.ring.zero();
            for (int r = 0; r < k; ++r)
                acc = T.ring.add(acc, T.ring.mul(T.rows[size_t(r)][size_t(m)],
                                                 T.ring.conj(T.rows[size_t(r)][size_t(m2)])));
            CycRing::Elt want =
                T.ring.from_int(m == m2 ? order / T.class_sizes[size_t(m)] : 0);
            if (acc != want)
                throw std::logic_error("character_table: column orthogonality failed");
        }

    return T;
}

// Field of values of one row: the fixed field of the Galois stabilizer of the
// row under value permutation, as a canonical descriptor.
inline cyclofield::FieldDesc char_field(const CharTable& T, int r) {
    std::vector<int64_t> stab;
    for (const auto& [c, pm] : T.power_maps) {
        bool fixes = true;
        for (int m = 0; m < T.k && fixes; ++m)
            if (T.rows[size_t(r)][size_t(pm[size_t(m)])] != T.rows[size_t(r)][size_t(m)])
                fixes = false;
        if (fixes) stab.push_back(c);
    }
    return cyclofield::canonicalize(cyclofield::FieldDesc{T.exponent, stab});
}

// Text dump: a documented header carrying the exponent e and the modular
// prime, then one row per character with the values as integer coordinate
// vectors over the power basis of Q(zeta_e).
inline std::string table_dump(const CharTable& T) {
    std::string out;
    out += "# character table: classes=" + std::to_string(T.k) +
           " order=" + std::to_string(T.group_order) + " exponent=" +
           std::to_string(T.exponent) + " ell=" + std::to_string(T.ell) + "\n";
    out += "# class sizes:";
    for (int64_t s : T.class_sizes) out += " " + std::to_string(s);
    out += "\n# rep orders:";
    for (int64_t o : T.rep_orders) out += " " + std::to_string(o);
    out += "\n# values: integer vectors in the power basis 1, z, ..., z^" +
           std::to_string(T.ring.phi - 1) + " of Q(zeta_" + std::to_string(T.exponent) +
           ")\n";
    for (int r = 0; r < T.k; ++r) {
        out += "deg " + std::to_string(T.degrees[size_t(r)]) + " |";
        for (int m = 0; m < T.k; ++m) out += " " + CycRing::str(T.rows[size_t(r)][size_t(m)]);
        out += "\n";
    }
    return out;
}

struct DiffReport {
    std::vector<std::string> mismatches;
    bool pass() const { return mismatches.empty(); }
};

// Multiset-level comparison of an exact character table against the
// parametrization pipeline. With ambient = false the table must belong to
// SL^eps and is compared to the per-constituent data; with ambient = true it
// must belong to GL^eps and is compared to the Galg aggregates.
inline DiffReport compare_with_pipeline(const CharTable& T,
                                        const fieldthm::GroupReport& rep,
                                        bool ambient) {
    DiffReport diff;
    int64_t want_count = ambient ? rep.ambient_irr_count : rep.irr_count;
    if (static_cast<int64_t>(T.k) != want_count)
        diff.mismatches.push_back("irreducible count: table " + std::to_string(T.k) +
                                  " vs pipeline " + std::to_string(want_count));

    std::map<std::string, int64_t> table_fields;
    for (int r = 0; r < T.k; ++r) table_fields[cyclofield::field_str(char_field(T, r))]++;
    const auto& want_fields = ambient ? rep.ambient_field_multiset : rep.field_multiset;
    if (table_fields != want_fields) {
        std::string msg = "field multiset: table {";
        for (const auto& [f, c] : table_fields) msg += f + ":" + std::to_string(c) + ",";
        msg += "} vs pipeline {";
        for (const auto& [f, c] : want_fields) msg += f + ":" + std::to_string(c) + ",";
        msg += "}";
        diff.mismatches.push_back(msg);
    }

    int64_t want_real = ambient ? rep.ambient_real_count : rep.real_count;
    if (T.real_row_count() != want_real)
        diff.mismatches.push_back("real count: table " + std::to_string(T.real_row_count()) +
                                  " vs pipeline " + std::to_string(want_real));
    return diff;
}

}  // namespace charfield::oracle
