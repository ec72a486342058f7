#pragma once

// Independent reference implementations used only by tests.

#include "torsionkit/abelian.hpp"
#include "torsionkit/fox.hpp"
#include "torsionkit/groupring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using torsionkit::Int;
using torsionkit::IntMatrix;
using torsionkit::IntVector;

// Leibniz formula: sum over permutations.
template <class T>
T leibniz_det(const std::vector<std::vector<T>>& a, const T& zero, const T& one) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    T total = zero;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        T term = one;
        for (std::size_t i = 0; i < n; ++i) term = term * a[i][perm[i]];
        if (inversions % 2)
            total = total - term;
        else
            total = total + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Truncated noncommutative power series in X_1..X_m: x -> 1 + X, x^-1 -> 1 - X + X^2 - ...
using Series = std::map<std::vector<int>, Int>;

inline Series series_mul(const Series& a, const Series& b, std::size_t max_degree) {
    Series out;
    for (const auto& [u, c] : a)
        for (const auto& [v, d] : b) {
            if (u.size() + v.size() > max_degree) continue;
            std::vector<int> w = u;
            w.insert(w.end(), v.begin(), v.end());
            out[w] += c * d;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline Series magnus_series(const torsionkit::FreeWord& w, std::size_t max_degree) {
    Series s{{{}, Int(1)}};
    for (const auto& l : w.letters()) {
        Series f{{{}, Int(1)}};
        if (l.sign > 0) {
            f[{l.gen}] = 1;
        } else {
            std::vector<int> mono;
            for (std::size_t k = 1; k <= max_degree; ++k) {
                mono.push_back(l.gen);
                f[mono] = k % 2 ? -1 : 1;
            }
        }
        s = series_mul(s, f, max_degree);
    }
    return s;
}

inline Int magnus(const torsionkit::FreeWord& w, const std::vector<int>& seq) {
    auto s = magnus_series(w, seq.size());
    auto it = s.find(seq);
    return it == s.end() ? Int(0) : it->second;
}

// Fox derivative from the closed formula: sum over occurrences of x_j^(+-1) of the prefix (times x_j^-1).
inline torsionkit::FreeGroupRingElement fox_by_positions(const torsionkit::FreeWord& w, int j) {
    using torsionkit::FreeWord;
    torsionkit::FreeGroupRingElement out;
    const auto& l = w.letters();
    for (std::size_t k = 0; k < l.size(); ++k) {
        if (l[k].gen != j) continue;
        FreeWord prefix(std::vector<torsionkit::Letter>(l.begin(), l.begin() + k));
        if (l[k].sign > 0)
            out.add_term(prefix.reduced(), 1);
        else
            out.add_term((prefix * FreeWord::generator(j, -1)).reduced(), -1);
    }
    return out;
}

// Row-echelon membership test for integer lattices (Euclid on columns).
class Lattice {
public:
    explicit Lattice(std::size_t dim) : dim_(dim) {}
    void add(IntVector v) {
        for (;;) {
            const std::size_t c = lead(v);
            if (c == dim_) return;
            auto it = std::find_if(rows_.begin(), rows_.end(), [&](const IntVector& r) { return lead(r) == c; });
            if (it == rows_.end()) {
                rows_.push_back(std::move(v));
                std::sort(rows_.begin(), rows_.end(),
                          [&](const IntVector& a, const IntVector& b) { return lead(a) < lead(b); });
                return;
            }
            IntVector& row = *it;
            while (v[c] != 0) {
                Int q = row[c] / v[c];
                for (std::size_t i = 0; i < dim_; ++i) row[i] -= q * v[i];
                std::swap(row, v);
            }
        }
    }
    bool contains(IntVector v) const {
        for (const auto& row : rows_) {
            std::size_t p = lead(row);
            if (v[p] % row[p] != 0) return false;
            Int q = v[p] / row[p];
            for (std::size_t i = 0; i < dim_; ++i) v[i] -= q * row[i];
        }
        return is_zero(v);
    }

private:
    std::size_t lead(const IntVector& v) const {
        for (std::size_t i = 0; i < dim_; ++i)
            if (v[i] != 0) return i;
        return dim_;
    }
    bool is_zero(const IntVector& v) const { return lead(v) == dim_; }
    std::size_t dim_;
    std::vector<IntVector> rows_;
};

inline Int gen_binomial(const Int& e, int a) {
    Int num = 1, den = 1;
    for (int i = 0; i < a; ++i) {
        num *= e - i;
        den *= i + 1;
    }
    return num / den;
}

// Z[H]/I^k (or (Z/r)[H]/I^k) membership through the group-element basis of the torsion part:
// x lies in I^k iff its coefficient of x^alpha (free part expanded binomially) lies in I_T^(k - |alpha|).
class IdealOracle {
public:
    IdealOracle(torsionkit::AbelianGroup H, int k, Int modulus = 0) : H_(std::move(H)), k_(k), r_(modulus) {
        torsionkit::AbelianGroup T(0, H_.torsion_orders());
        elements_ = T.elements();
        for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i].torsion_part] = i;
        for (int j = 0; j <= k_; ++j) ideal_.emplace_back(build_power(T, j));
    }

    bool in_ideal(const torsionkit::GroupRingElement& x) const {
        std::map<std::vector<int>, IntVector> coeff;
        const int f = H_.free_rank();
        for (const auto& [g, c] : x.terms()) {
            std::vector<std::pair<std::vector<int>, Int>> expansion{{{}, c}};
            for (int i = 0; i < f; ++i) {
                std::vector<std::pair<std::vector<int>, Int>> next;
                for (const auto& [mono, cc] : expansion) {
                    int used = 0;
                    for (int e : mono) used += e;
                    for (int a = 0; used + a < k_; ++a) {
                        auto m2 = mono;
                        m2.push_back(a);
                        next.emplace_back(m2, cc * gen_binomial(g.free_part[i], a));
                    }
                }
                expansion = std::move(next);
            }
            for (const auto& [mono, cc] : expansion) {
                auto& v = coeff.try_emplace(mono, IntVector(elements_.size(), Int(0))).first->second;
                v[index_.at(g.torsion_part)] += cc;
            }
        }
        for (const auto& [mono, v] : coeff) {
            int deg = 0;
            for (int e : mono) deg += e;
            if (!ideal_[k_ - deg].contains(v)) return false;
        }
        return true;
    }

private:
    Lattice build_power(const torsionkit::AbelianGroup& T, int j) const {
        const std::size_t n = elements_.size();
        Lattice L(n);
        if (r_ != 0)
            for (std::size_t i = 0; i < n; ++i) {
                IntVector v(n, Int(0));
                v[i] = r_;
                L.add(v);
            }
        // products h * prod (t_g - 1) over multisets of j generators
        const int g = T.num_generators();
        std::vector<int> multiset;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(multiset.size()) == j) {
                std::map<std::vector<long long>, Int> prod{{T.zero().torsion_part, Int(1)}};
                for (int gen : multiset) {
                    std::map<std::vector<long long>, Int> next;
                    for (const auto& [t, c] : prod) {
                        next[T.add(T.element({}, t), T.generator(gen)).torsion_part] += c;
                        next[t] -= c;
                    }
                    prod = std::move(next);
                }
                for (const auto& h : elements_) {
                    IntVector v(n, Int(0));
                    for (const auto& [t, c] : prod) v[index_.at(T.add(h, T.element({}, t)).torsion_part)] += c;
                    L.add(v);
                }
                return;
            }
            for (int s = start; s < g; ++s) {
                multiset.push_back(s);
                rec(s);
                multiset.pop_back();
            }
        };
        if (j == 0 || g > 0) rec(0);
        return L;
    }

    torsionkit::AbelianGroup H_;
    int k_;
    Int r_;
    std::vector<torsionkit::GroupElement> elements_;
    std::map<std::vector<long long>, std::size_t> index_;
    std::vector<Lattice> ideal_;
};

// Subgroup generated by elements of a finite group, by closure.
inline std::set<torsionkit::GroupElement> generated_subgroup(const torsionkit::AbelianGroup& H,
                                                             const std::vector<torsionkit::GroupElement>& gens) {
    std::set<torsionkit::GroupElement> seen{H.zero()};
    std::vector<torsionkit::GroupElement> stack{H.zero()};
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& g : gens) {
            auto y = H.add(x, g);
            if (seen.insert(y).second) stack.push_back(y);
        }
    }
    return seen;
}

}  // namespace oracle
