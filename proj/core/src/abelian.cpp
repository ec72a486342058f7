#include "torsionkit/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace torsionkit {

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) { std::swap(m[a], m[b]); }

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

// row[a] += k * row[b]
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < m[a].size(); ++j) m[a][j] += k * m[b][j];
}

void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& k) {
    if (k == 0) return;
    for (auto& row : m) row[a] += k * row[b];
}

long long mod_ll(long long x, long long m) {
    long long r = x % m;
    return r < 0 ? r + m : r;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    for (const auto& row : A)
        if (row.size() != n) throw Error("smith_normal_form: ragged matrix");
    SmithForm s{identity_matrix(m), A, identity_matrix(n)};
    IntMatrix& D = s.D;
    const std::size_t lim = std::min(m, n);
    for (std::size_t t = 0; t < lim; ++t) {
        // smallest nonzero entry of the trailing block becomes the pivot
        std::size_t pi = m, pj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (D[i][j] != 0 && (pi == m || abs(D[i][j]) < abs(D[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == m) break;
        swap_rows(D, t, pi);
        swap_rows(s.U, t, pi);
        swap_cols(D, t, pj);
        swap_cols(s.V, t, pj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D[i][t] == 0) continue;
                Int q = D[i][t] / D[t][t];
                add_row(D, i, t, -q);
                add_row(s.U, i, t, -q);
                if (D[i][t] != 0) {
                    swap_rows(D, t, i);
                    swap_rows(s.U, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D[t][j] == 0) continue;
                Int q = D[t][j] / D[t][t];
                add_col(D, j, t, -q);
                add_col(s.V, j, t, -q);
                if (D[t][j] != 0) {
                    swap_cols(D, t, j);
                    swap_cols(s.V, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D[i][j] % D[t][t] != 0) {
                        add_row(D, t, i, 1);
                        add_row(s.U, t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (D[t][t] < 0) {
            for (auto& x : D[t]) x = -x;
            for (auto& x : s.U[t]) x = -x;
        }
    }
    return s;
}

AbelianGroup::AbelianGroup(int free_rank, std::vector<long long> invariant_factors)
    : free_rank_(free_rank), torsion_(std::move(invariant_factors)) {
    if (free_rank_ < 0) throw Error("AbelianGroup: negative free rank");
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
        if (torsion_[i] < 2) throw Error("AbelianGroup: invariant factors must be >= 2");
        if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
            throw Error("AbelianGroup: invariant factors must form a divisibility chain");
    }
}

AbelianGroup AbelianGroup::from_orders(int free_rank, const std::vector<long long>& cyclic_orders) {
    const std::size_t k = cyclic_orders.size();
    IntMatrix rel = zero_matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        if (cyclic_orders[i] < 0) throw Error("AbelianGroup: negative cyclic order");
        rel[i][i] = cyclic_orders[i];
    }
    auto pg = abelian_group_from_relations(rel, static_cast<int>(k));
    return AbelianGroup(free_rank + pg.group.free_rank(), pg.group.torsion_orders());
}

long long AbelianGroup::torsion_order() const {
    long long o = 1;
    for (auto d : torsion_) o *= d;
    return o;
}

GroupElement AbelianGroup::zero() const {
    return GroupElement{std::vector<long long>(free_rank_, 0), std::vector<long long>(torsion_.size(), 0)};
}

GroupElement AbelianGroup::element(std::vector<long long> free_part, std::vector<long long> torsion_part) const {
    if (static_cast<int>(free_part.size()) != free_rank_ || torsion_part.size() != torsion_.size())
        throw Error("group element has the wrong shape for " + to_string());
    for (std::size_t j = 0; j < torsion_.size(); ++j) torsion_part[j] = mod_ll(torsion_part[j], torsion_[j]);
    return GroupElement{std::move(free_part), std::move(torsion_part)};
}

GroupElement AbelianGroup::generator(int i) const {
    if (i < 0 || i >= num_generators()) throw Error("generator index out of range");
    return i < free_rank_ ? free_generator(i) : torsion_generator(i - free_rank_);
}

GroupElement AbelianGroup::free_generator(int i) const {
    GroupElement g = zero();
    g.free_part.at(i) = 1;
    return g;
}

GroupElement AbelianGroup::torsion_generator(int j) const {
    GroupElement g = zero();
    g.torsion_part.at(j) = 1;
    return g;
}

void AbelianGroup::validate(const GroupElement& a) const {
    if (static_cast<int>(a.free_part.size()) != free_rank_ || a.torsion_part.size() != torsion_.size())
        throw Error("group element does not belong to " + to_string());
    for (std::size_t j = 0; j < torsion_.size(); ++j)
        if (a.torsion_part[j] < 0 || a.torsion_part[j] >= torsion_[j])
            throw Error("group element torsion coordinate not reduced");
}

GroupElement AbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
    GroupElement c = a;
    for (int i = 0; i < free_rank_; ++i) c.free_part[i] += b.free_part[i];
    for (std::size_t j = 0; j < torsion_.size(); ++j)
        c.torsion_part[j] = mod_ll(a.torsion_part[j] + b.torsion_part[j], torsion_[j]);
    return c;
}

GroupElement AbelianGroup::negate(const GroupElement& a) const { return multiple(a, -1); }

GroupElement AbelianGroup::multiple(const GroupElement& a, long long k) const {
    GroupElement c = a;
    for (auto& x : c.free_part) x *= k;
    for (std::size_t j = 0; j < torsion_.size(); ++j)
        c.torsion_part[j] = mod_ll(static_cast<long long>((Int(a.torsion_part[j]) * k) % torsion_[j]), torsion_[j]);
    return c;
}

bool AbelianGroup::is_zero(const GroupElement& a) const {
    for (auto x : a.free_part)
        if (x != 0) return false;
    for (auto x : a.torsion_part)
        if (x != 0) return false;
    return true;
}

long long AbelianGroup::order_of(const GroupElement& a) const {
    for (auto x : a.free_part)
        if (x != 0) return 0;
    long long o = 1;
    for (std::size_t j = 0; j < torsion_.size(); ++j) {
        long long d = torsion_[j];
        long long oj = d / std::gcd(d, a.torsion_part[j]);
        o = std::lcm(o, oj);
    }
    return o;
}

std::vector<GroupElement> AbelianGroup::elements() const {
    if (!is_finite()) throw Error("elements(): group is infinite");
    std::vector<GroupElement> out;
    GroupElement g = zero();
    for (;;) {
        out.push_back(g);
        int j = num_torsion() - 1;
        while (j >= 0) {
            if (++g.torsion_part[j] < torsion_[j]) break;
            g.torsion_part[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return out;
}

std::string AbelianGroup::to_string() const {
    std::ostringstream os;
    bool first = true;
    if (free_rank_ > 0) {
        os << "Z";
        if (free_rank_ > 1) os << "^" << free_rank_;
        first = false;
    }
    for (auto d : torsion_) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

PresentedGroup abelian_group_from_relations(const IntMatrix& relations, int num_generators) {
    for (const auto& row : relations)
        if (static_cast<int>(row.size()) != num_generators) throw Error("relation matrix has wrong width");
    IntMatrix rel = relations;
    SmithForm s = smith_normal_form(rel);
    const std::size_t n = num_generators;
    // coordinate kinds: 1 -> trivial, >=2 -> torsion, 0 -> free
    std::vector<Int> diag(n, Int(0));
    for (std::size_t i = 0; i < std::min(rel.size(), n); ++i) diag[i] = s.D[i][i];
    std::vector<long long> torsion;
    int free_rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diag[i] == 0)
            ++free_rank;
        else if (diag[i] >= 2)
            torsion.push_back(to_ll(diag[i]));
    }
    PresentedGroup out{AbelianGroup(free_rank, torsion), {}};
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<long long> fp, tp;
        for (std::size_t i = 0; i < n; ++i) {
            const Int& y = s.V[c][i];
            if (diag[i] == 0)
                fp.push_back(to_ll(y));
            else if (diag[i] >= 2)
                tp.push_back(to_ll(reduce(y, diag[i])));
        }
        out.generator_images.push_back(out.group.element(fp, tp));
    }
    return out;
}

long long subgroup_order(const AbelianGroup& H, const std::vector<GroupElement>& generators) {
    const int t = H.num_torsion();
    IntMatrix rows;
    for (const auto& g : generators) {
        H.validate(g);
        for (auto x : g.free_part)
            if (x != 0) throw Error("subgroup_order: element of infinite order");
        IntVector r(t);
        for (int j = 0; j < t; ++j) r[j] = g.torsion_part[j];
        rows.push_back(r);
    }
    for (int j = 0; j < t; ++j) {
        IntVector r(t, Int(0));
        r[j] = H.torsion_orders()[j];
        rows.push_back(r);
    }
    if (t == 0) return 1;
    SmithForm s = smith_normal_form(rows);
    Int index = 1;
    for (int j = 0; j < t; ++j) index *= s.D[j][j];
    return H.torsion_order() / to_ll(index);
}

PrimaryPart primary_part(const AbelianGroup& H, long long p) {
    if (!is_prime(p)) throw Error("primary_part: " + std::to_string(p) + " is not prime");
    std::vector<std::pair<long long, GroupElement>> items;
    for (int j = 0; j < H.num_torsion(); ++j) {
        long long d = H.torsion_orders()[j];
        long long pv = 1;
        while (d % (pv * p) == 0) pv *= p;
        if (pv == 1) continue;
        GroupElement g = H.zero();
        g.torsion_part[j] = d / pv;
        items.emplace_back(pv, g);
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.torsion_part < b.second.torsion_part;
    });
    PrimaryPart out;
    out.prime = p;
    std::vector<long long> orders;
    for (auto& [o, g] : items) {
        out.basis.elements.push_back(g);
        out.basis.orders.push_back(o);
        orders.push_back(o);
    }
    out.group = AbelianGroup(0, orders);
    return out;
}

namespace {

bool is_power_of(long long o, long long p) {
    if (o < 1) return false;
    while (o % p == 0) o /= p;
    return o == 1;
}

// Coordinates of H_(p) relative to the canonical pseudo-basis, flattened to an index.
struct PrimaryCoords {
    std::vector<long long> orders;
    long long size = 1;

    long long index(const std::vector<long long>& c) const {
        long long idx = 0;
        for (std::size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + c[i];
        return idx;
    }
    std::vector<long long> coords(long long idx) const {
        std::vector<long long> c(orders.size());
        for (std::size_t i = orders.size(); i-- > 0;) {
            c[i] = idx % orders[i];
            idx /= orders[i];
        }
        return c;
    }
    long long add(long long a, long long b, long long k) const {
        auto ca = coords(a), cb = coords(b);
        for (std::size_t i = 0; i < orders.size(); ++i) ca[i] = mod_ll(ca[i] + k * cb[i], orders[i]);
        return index(ca);
    }
    long long order(long long a) const {
        auto c = coords(a);
        long long o = 1;
        for (std::size_t i = 0; i < orders.size(); ++i) o = std::lcm(o, orders[i] / std::gcd(orders[i], c[i]));
        return o;
    }
};

GroupElement to_ambient(const AbelianGroup& H, const PrimaryPart& pp, const PrimaryCoords& pc, long long idx) {
    auto c = pc.coords(idx);
    GroupElement g = H.zero();
    for (std::size_t i = 0; i < c.size(); ++i) g = H.add(g, H.multiple(pp.basis.elements[i], c[i]));
    return g;
}

// Tries to extend the subgroup `span` (indicator) by the cyclic group of x; returns false unless direct.
bool extend_span(const PrimaryCoords& pc, std::vector<char>& span, long long x, long long ord) {
    long long y = 0;
    for (long long j = 1; j < ord; ++j) {
        y = pc.add(y, x, 1);
        if (span[y]) return false;
    }
    std::vector<long long> members;
    for (long long i = 0; i < pc.size; ++i)
        if (span[i]) members.push_back(i);
    y = 0;
    for (long long j = 1; j < ord; ++j) {
        y = pc.add(y, x, 1);
        for (long long s : members) span[pc.add(s, y, 1)] = 1;
    }
    return true;
}

}  // namespace

bool is_pseudo_basis(const AbelianGroup& H, long long p, const PseudoBasis& basis) {
    PrimaryPart pp = primary_part(H, p);
    if (basis.elements.size() != basis.orders.size()) return false;
    long long prod = 1;
    for (std::size_t i = 0; i < basis.elements.size(); ++i) {
        H.validate(basis.elements[i]);
        long long o = H.order_of(basis.elements[i]);
        if (o != basis.orders[i] || !is_power_of(o, p) || o == 1) return false;
        if (i > 0 && basis.orders[i] < basis.orders[i - 1]) return false;
        prod *= o;
    }
    long long target = pp.group.torsion_order();
    return prod == target && subgroup_order(H, basis.elements) == target;
}

std::optional<std::vector<PseudoBasis>> enumerate_pseudo_bases(const AbelianGroup& H, long long p,
                                                               std::size_t limit) {
    PrimaryPart pp = primary_part(H, p);
    PrimaryCoords pc{pp.basis.orders, pp.group.torsion_order()};
    const std::size_t k = pc.orders.size();
    std::vector<std::vector<long long>> by_order(k);
    for (std::size_t t = 0; t < k; ++t)
        for (long long i = 0; i < pc.size; ++i)
            if (pc.order(i) == pc.orders[t]) by_order[t].push_back(i);
    std::vector<PseudoBasis> out;
    std::vector<long long> chosen;
    bool overflow = false;
    std::vector<char> span0(pc.size, 0);
    span0[0] = 1;
    auto rec = [&](auto&& self, std::size_t t, const std::vector<char>& span) -> void {
        if (overflow) return;
        if (t == k) {
            if (out.size() >= limit) {
                overflow = true;
                return;
            }
            PseudoBasis b;
            for (std::size_t i = 0; i < k; ++i) {
                b.elements.push_back(to_ambient(H, pp, pc, chosen[i]));
                b.orders.push_back(pc.orders[i]);
            }
            out.push_back(std::move(b));
            return;
        }
        for (long long x : by_order[t]) {
            std::vector<char> next = span;
            if (!extend_span(pc, next, x, pc.orders[t])) continue;
            chosen.push_back(x);
            self(self, t + 1, next);
            chosen.pop_back();
            if (overflow) return;
        }
    };
    rec(rec, 0, span0);
    if (overflow) return std::nullopt;
    return out;
}

PseudoBasis random_pseudo_basis(const AbelianGroup& H, long long p, std::mt19937_64& rng) {
    PrimaryPart pp = primary_part(H, p);
    PrimaryCoords pc{pp.basis.orders, pp.group.torsion_order()};
    const std::size_t k = pc.orders.size();
    std::uniform_int_distribution<long long> pick(0, pc.size - 1);
    for (;;) {
        std::vector<char> span(pc.size, 0);
        span[0] = 1;
        PseudoBasis b;
        bool ok = true;
        for (std::size_t t = 0; t < k && ok; ++t) {
            ok = false;
            for (int attempt = 0; attempt < 1000; ++attempt) {
                long long x = pick(rng);
                if (pc.order(x) != pc.orders[t]) continue;
                if (!extend_span(pc, span, x, pc.orders[t])) continue;
                b.elements.push_back(to_ambient(H, pp, pc, x));
                b.orders.push_back(pc.orders[t]);
                ok = true;
                break;
            }
        }
        if (ok) return b;
    }
}

Rational frac(const Rational& q) {
    Int num = numerator(q), den = denominator(q);
    Int r = num % den;
    if (r < 0) r += den;
    return Rational(r, den);
}

LinkingForm::LinkingForm(AbelianGroup left, AbelianGroup right, std::vector<std::vector<Rational>> table)
    : left_(std::move(left)), right_(std::move(right)), table_(std::move(table)) {
    const int t = left_.num_torsion(), u = right_.num_torsion();
    if (static_cast<int>(table_.size()) != t) throw Error("LinkingForm: table has wrong number of rows");
    for (int i = 0; i < t; ++i) {
        if (static_cast<int>(table_[i].size()) != u) throw Error("LinkingForm: table has wrong number of columns");
        for (int j = 0; j < u; ++j) {
            table_[i][j] = frac(table_[i][j]);
            if (denominator(Rational(table_[i][j] * left_.torsion_orders()[i])) != 1 ||
                denominator(Rational(table_[i][j] * right_.torsion_orders()[j])) != 1)
                throw Error("LinkingForm: value " + table_[i][j].str() + " at (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ") is inconsistent with the generator orders");
        }
    }
}

Rational LinkingForm::operator()(const GroupElement& z, const GroupElement& w) const {
    left_.validate(z);
    right_.validate(w);
    Rational s = 0;
    for (int i = 0; i < left_.num_torsion(); ++i)
        for (int j = 0; j < right_.num_torsion(); ++j)
            s += table_[i][j] * Int(z.torsion_part[i]) * Int(w.torsion_part[j]);
    return frac(s);
}

Int dot_pairing(const LinkingForm& L, const GroupElement& z, const GroupElement& zp, const Int& r) {
    auto [p, s] = prime_power(r);
    if (p == 0) throw Error("dot_pairing: r = " + to_string(r) + " is not a prime power");
    Rational value = L(z, zp);
    auto usable = [&](long long o) { return o >= 1 && is_power_of(o, to_ll(p)) && Int(o) >= r; };
    long long o = L.right().order_of(zp);
    if (!usable(o)) o = L.left().order_of(z);
    if (!usable(o))
        throw Error("dot_pairing: neither argument has order a power of " + to_string(p) + " at least " + to_string(r));
    Rational scaled = value * Int(o);
    if (denominator(scaled) != 1) throw Error("dot_pairing: pairing value is inconsistent with element orders");
    return reduce(numerator(scaled), r);
}

bool is_nondegenerate(const LinkingForm& L) {
    if (L.left().torsion_order() != L.right().torsion_order())
        throw Error("is_nondegenerate: torsion subgroups have different orders");
    const int t = L.left().num_torsion(), u = L.right().num_torsion();
    if (t == 0) return true;
    Int N = 1;
    for (auto d : L.right().torsion_orders()) N = lcm(N, Int(d));
    IntMatrix rows;
    for (int i = 0; i < t; ++i) {
        IntVector r(u);
        for (int j = 0; j < u; ++j) r[j] = numerator(Rational(L.table()[i][j] * N));
        rows.push_back(r);
    }
    for (int j = 0; j < u; ++j) {
        IntVector r(u, Int(0));
        r[j] = N;
        rows.push_back(r);
    }
    SmithForm s = smith_normal_form(rows);
    Int index = 1;
    for (int j = 0; j < u; ++j) index *= s.D[j][j];
    Int image = 1;
    for (int j = 0; j < u; ++j) image *= N;
    image /= index;
    return image == L.left().torsion_order();
}

}  // namespace torsionkit
