#include "torsionkit/groupring.hpp"

#include "torsionkit/cofactor.hpp"

#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace torsionkit {

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Int binomial(const Int& e, int a) {
    if (a < 0) throw Error("binomial: negative lower index");
    Int num = 1, den = 1;
    for (int i = 0; i < a; ++i) {
        num *= e - i;
        den *= i + 1;
    }
    return num / den;
}

// ---------------------------------------------------------------- GroupRingElement

GroupRingElement::GroupRingElement(AbelianGroup group, Int modulus)
    : group_(std::move(group)), modulus_(std::move(modulus)) {
    if (modulus_ < 0) throw Error("group ring: negative modulus");
}

GroupRingElement GroupRingElement::group_element(const AbelianGroup& H, const GroupElement& g, const Int& modulus) {
    GroupRingElement x(H, modulus);
    x.add_term(g, 1);
    return x;
}

GroupRingElement GroupRingElement::constant(const AbelianGroup& H, const Int& c, const Int& modulus) {
    GroupRingElement x(H, modulus);
    x.add_term(H.zero(), c);
    return x;
}

void GroupRingElement::add_term(const GroupElement& g, const Int& c) {
    group_.validate(g);
    auto it = terms_.find(g);
    Int v = reduce((it == terms_.end() ? Int(0) : it->second) + c, modulus_);
    if (v == 0) {
        if (it != terms_.end()) terms_.erase(it);
    } else if (it == terms_.end()) {
        terms_.emplace(g, v);
    } else {
        it->second = v;
    }
}

Int GroupRingElement::coefficient(const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Int(0) : it->second;
}

Int GroupRingElement::augmentation() const {
    Int s = 0;
    for (const auto& [g, c] : terms_) s += c;
    return reduce(s, modulus_);
}

void GroupRingElement::check_compatible(const GroupRingElement& o) const {
    if (modulus_ != o.modulus_ || !(group_ == o.group_)) throw Error("group ring elements over different rings");
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
    check_compatible(o);
    GroupRingElement r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, c);
    return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
    check_compatible(o);
    GroupRingElement r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, -c);
    return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
    check_compatible(o);
    GroupRingElement r(group_, modulus_);
    for (const auto& [g1, c1] : terms_)
        for (const auto& [g2, c2] : o.terms_) r.add_term(group_.add(g1, g2), c1 * c2);
    return r;
}

GroupRingElement GroupRingElement::operator-() const { return scaled(-1); }

GroupRingElement GroupRingElement::scaled(const Int& c) const {
    GroupRingElement r(group_, modulus_);
    for (const auto& [g, v] : terms_) r.add_term(g, v * c);
    return r;
}

bool GroupRingElement::operator==(const GroupRingElement& o) const {
    return modulus_ == o.modulus_ && group_ == o.group_ && terms_ == o.terms_;
}

GroupRingElement GroupRingElement::reduce_mod(const Int& r) const {
    GroupRingElement out(group_, r);
    for (const auto& [g, c] : terms_) out.add_term(g, c);
    return out;
}

std::string GroupRingElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c << "*[";
        bool sep = false;
        for (auto e : g.free_part) {
            os << (sep ? "," : "") << e;
            sep = true;
        }
        if (!g.torsion_part.empty()) os << "|";
        sep = false;
        for (auto e : g.torsion_part) {
            os << (sep ? "," : "") << e;
            sep = true;
        }
        os << "]";
    }
    return os.str();
}

GroupRingElement matrix_determinant(const GroupRingMatrix& A) {
    if (A.empty()) throw Error("matrix_determinant: empty matrix has no ring");
    const auto& e = A[0].empty() ? throw Error("matrix_determinant: non-square matrix") : A[0][0];
    return cofactor_determinant(A, GroupRingElement(e.group(), e.modulus()),
                                GroupRingElement::constant(e.group(), 1, e.modulus()));
}

// ---------------------------------------------------------------- TruncationContext

TruncationContext::TruncationContext(AbelianGroup group, int degree_bound, Int modulus)
    : group_(std::move(group)), k_(degree_bound), modulus_(std::move(modulus)) {
    if (k_ < 1) throw Error("truncation degree bound must be at least 1");
    if (modulus_ < 0) throw Error("truncation context: negative modulus");
    const int V = num_vars();
    // monomials by degree, lexicographically descending within a degree
    for (int d = 0; d < k_; ++d) {
        Monomial m(V, 0);
        auto rec = [&](auto&& self, int v, int left) -> void {
            if (v == V - 1 || V == 0) {
                if (V == 0) {
                    if (left == 0) {
                        monomials_.push_back(m);
                        degrees_.push_back(d);
                    }
                    return;
                }
                m[v] = left;
                monomials_.push_back(m);
                degrees_.push_back(d);
                m[v] = 0;
                return;
            }
            for (int e = left; e >= 0; --e) {
                m[v] = e;
                self(self, v + 1, left - e);
            }
            m[v] = 0;
        };
        rec(rec, 0, d);
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
    const std::size_t N = monomials_.size();
    product_index_.assign(N * N, -1);
    Monomial prod(V);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (degrees_[i] + degrees_[j] >= k_) continue;
            for (int v = 0; v < V; ++v) prod[v] = monomials_[i][v] + monomials_[j][v];
            product_index_[i * N + j] = static_cast<long>(index_.at(prod));
        }

    // generators: monomial multiples of (1 + y_j)^{d_j} - 1, plus r e_c over Z/r
    std::vector<IntVector> pool;
    const int n = group_.free_rank();
    for (int j = 0; j < group_.num_torsion(); ++j) {
        const long long d = group_.torsion_orders()[j];
        IntVector rho(N, Int(0));
        for (int a = 1; a < k_; ++a) {
            Monomial m(V, 0);
            m[n + j] = a;
            rho[index_.at(m)] = binomial(d, a);
        }
        for (std::size_t mu = 0; mu < N; ++mu) {
            if (degrees_[mu] + 1 >= k_) continue;
            IntVector row(N, Int(0));
            for (std::size_t c = 0; c < N; ++c) {
                if (rho[c] == 0) continue;
                long idx = product_index_[mu * N + c];
                if (idx >= 0) row[idx] += rho[c];
            }
            pool.push_back(std::move(row));
        }
    }
    if (modulus_ > 0)
        for (std::size_t c = 0; c < N; ++c) {
            IntVector row(N, Int(0));
            row[c] = modulus_;
            pool.push_back(std::move(row));
        }

    for (std::size_t c = 0; c < N; ++c) {
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (pool[i][c] != 0) active.push_back(i);
        if (active.empty()) continue;
        // Euclid among the active rows until one nonzero entry remains in column c
        for (;;) {
            std::size_t best = active[0];
            for (auto i : active)
                if (abs(pool[i][c]) < abs(pool[best][c])) best = i;
            std::vector<std::size_t> next{best};
            for (auto i : active) {
                if (i == best) continue;
                Int q = pool[i][c] / pool[best][c];
                for (std::size_t t = c; t < N; ++t) pool[i][t] -= q * pool[best][t];
                if (modulus_ > 0)
                    for (std::size_t t = c + 1; t < N; ++t) pool[i][t] = reduce(pool[i][t], modulus_);
                if (pool[i][c] != 0) next.push_back(i);
            }
            active = std::move(next);
            if (active.size() == 1) break;
        }
        IntVector row = std::move(pool[active[0]]);
        if (row[c] < 0)
            for (auto& x : row) x = -x;
        pool.erase(pool.begin() + static_cast<long>(active[0]));
        basis_.push_back(std::move(row));
        pivots_.push_back(c);
        std::erase_if(pool, [](const IntVector& r) {
            return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
        });
    }
}

std::optional<std::size_t> TruncationContext::index_of(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> TruncationContext::variable_names() const {
    std::vector<std::string> names;
    for (int i = 0; i < group_.free_rank(); ++i) names.push_back("x" + std::to_string(i + 1));
    for (int j = 0; j < group_.num_torsion(); ++j) names.push_back("y" + std::to_string(j + 1));
    return names;
}

IntVector TruncationContext::normalize(IntVector v) const {
    if (v.size() != monomials_.size()) throw Error("truncated coordinates have wrong length");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const std::size_t c = pivots_[i];
        if (v[c] == 0) continue;
        Int q = floor_div(v[c], basis_[i][c]);
        if (q == 0) continue;
        for (std::size_t t = c; t < v.size(); ++t) v[t] -= q * basis_[i][t];
    }
    return v;
}

IntVector TruncationContext::multiply(const IntVector& a, const IntVector& b) const {
    const std::size_t N = monomials_.size();
    IntVector out(N, Int(0));
    for (std::size_t i = 0; i < N; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < N; ++j) {
            if (b[j] == 0) continue;
            long idx = product_index_[i * N + j];
            if (idx >= 0) out[idx] += a[i] * b[j];
        }
    }
    return normalize(std::move(out));
}

IntVector TruncationContext::expand_group_element(const GroupElement& g) const {
    group_.validate(g);
    std::vector<long long> e = g.free_part;
    e.insert(e.end(), g.torsion_part.begin(), g.torsion_part.end());
    const int V = num_vars();
    std::vector<std::vector<Int>> binom(V, std::vector<Int>(k_));
    for (int v = 0; v < V; ++v)
        for (int a = 0; a < k_; ++a) binom[v][a] = binomial(e[v], a);
    IntVector out(monomials_.size());
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        Int c = 1;
        for (int v = 0; v < V && c != 0; ++v) c *= binom[v][monomials_[i][v]];
        out[i] = c;
    }
    return out;
}

ContextPtr build_truncation_context(const AbelianGroup& H, int k, const Int& modulus) {
    using Key = std::tuple<int, std::vector<long long>, int, std::string>;
    static std::mutex mtx;
    static std::map<Key, ContextPtr> cache;
    if (k < 1) throw Error("truncation degree bound must be at least 1");
    Key key{H.free_rank(), H.torsion_orders(), k, modulus.str()};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<const TruncationContext>(H, k, modulus);
    cache.emplace(key, ctx);
    return ctx;
}

// ---------------------------------------------------------------- TruncatedElement

TruncatedElement::TruncatedElement(ContextPtr ctx, IntVector coords) : ctx_(std::move(ctx)) {
    if (!ctx_) throw Error("truncated element without context");
    coords_ = ctx_->normalize(std::move(coords));
}

TruncatedElement TruncatedElement::zero(const ContextPtr& ctx) {
    return TruncatedElement(ctx, IntVector(ctx->dimension(), Int(0)));
}

TruncatedElement TruncatedElement::one(const ContextPtr& ctx) {
    IntVector v(ctx->dimension(), Int(0));
    v[0] = 1;
    return TruncatedElement(ctx, std::move(v));
}

void TruncatedElement::check_compatible(const TruncatedElement& o) const {
    if (ctx_ != o.ctx_) throw Error("truncated elements from different contexts");
}

TruncatedElement TruncatedElement::operator+(const TruncatedElement& o) const {
    check_compatible(o);
    IntVector v = coords_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.coords_[i];
    return TruncatedElement(ctx_, std::move(v));
}

TruncatedElement TruncatedElement::operator-(const TruncatedElement& o) const {
    check_compatible(o);
    IntVector v = coords_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.coords_[i];
    return TruncatedElement(ctx_, std::move(v));
}

TruncatedElement TruncatedElement::operator*(const TruncatedElement& o) const {
    check_compatible(o);
    TruncatedElement r = *this;
    r.coords_ = ctx_->multiply(coords_, o.coords_);
    return r;
}

TruncatedElement TruncatedElement::operator-() const { return scaled(-1); }

TruncatedElement TruncatedElement::scaled(const Int& c) const {
    IntVector v = coords_;
    for (auto& x : v) x *= c;
    return TruncatedElement(ctx_, std::move(v));
}

bool TruncatedElement::operator==(const TruncatedElement& o) const {
    return ctx_ == o.ctx_ && coords_ == o.coords_;
}

bool TruncatedElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Int& x) { return x == 0; });
}

bool TruncatedElement::in_ideal_power(int l) const {
    if (l >= ctx_->degree_bound())
        throw Error("in_ideal_power: exponent " + std::to_string(l) + " is not below the degree bound " +
                    std::to_string(ctx_->degree_bound()));
    return order() >= l;
}

int TruncatedElement::order() const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] != 0) return ctx_->degree_of(i);
    return ctx_->degree_bound();
}

std::map<std::string, std::string> TruncatedElement::table() const {
    std::map<std::string, std::string> out;
    auto names = ctx_->variable_names();
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] != 0) out.emplace(monomial_key(ctx_->monomials()[i], names), coords_[i].str());
    return out;
}

std::string TruncatedElement::to_string() const {
    auto names = ctx_->variable_names();
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << coords_[i] << "*" << monomial_key(ctx_->monomials()[i], names);
    }
    if (first) os << "0";
    os << " mod I^" << ctx_->degree_bound();
    return os.str();
}

TruncatedElement matrix_determinant(const TruncatedMatrix& A, const ContextPtr& ctx) {
    return cofactor_determinant(A, TruncatedElement::zero(ctx), TruncatedElement::one(ctx));
}

TruncatedElement truncate(const GroupElement& g, const ContextPtr& ctx) {
    return TruncatedElement(ctx, ctx->expand_group_element(g));
}

TruncatedElement truncate(const GroupRingElement& x, const ContextPtr& ctx) {
    if (!(x.group() == ctx->group())) throw Error("truncate: group does not match the context");
    if (x.modulus() != ctx->modulus() && !(ctx->modulus() > 0 && x.modulus() == 0))
        throw Error("truncate: coefficient ring does not match the context");
    IntVector v(ctx->dimension(), Int(0));
    for (const auto& [g, c] : x.terms()) {
        IntVector e = ctx->expand_group_element(g);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * e[i];
    }
    return TruncatedElement(ctx, std::move(v));
}

bool in_ideal_power(const GroupRingElement& x, int l, const ContextPtr& ctx) {
    return truncate(x, ctx).in_ideal_power(l);
}

namespace {

TruncatedElement evaluate_at_lifts(const MultiPoly& P, const ContextPtr& ctx,
                                   const std::vector<GroupElement>& lifts, const char* who) {
    if (!P.is_homogeneous()) throw Error(std::string(who) + ": polynomial is not homogeneous");
    if (static_cast<std::size_t>(P.num_vars()) != lifts.size())
        throw Error(std::string(who) + ": polynomial has " + std::to_string(P.num_vars()) +
                    " variables but there are " + std::to_string(lifts.size()) + " lifts");
    if (P.degree() >= ctx->degree_bound())
        throw Error(std::string(who) + ": degree bound too small for a degree " + std::to_string(P.degree()) +
                    " polynomial");
    std::vector<TruncatedElement> t;
    for (const auto& g : lifts) t.push_back(truncate(g, ctx) - TruncatedElement::one(ctx));
    TruncatedElement out = TruncatedElement::zero(ctx);
    for (const auto& [m, c] : P.terms()) {
        TruncatedElement term = TruncatedElement::one(ctx).scaled(c);
        for (std::size_t v = 0; v < m.size(); ++v)
            for (int e = 0; e < m[v]; ++e) term = term * t[v];
        out = out + term;
    }
    return out;
}

}  // namespace

TruncatedElement q_map(const MultiPoly& P, const ContextPtr& ctx) {
    std::vector<GroupElement> lifts;
    for (int i = 0; i < ctx->group().free_rank(); ++i) lifts.push_back(ctx->group().free_generator(i));
    return q_map(P, ctx, lifts);
}

TruncatedElement q_map(const MultiPoly& P, const ContextPtr& ctx, const std::vector<GroupElement>& lifts) {
    if (static_cast<int>(lifts.size()) != ctx->group().free_rank())
        throw Error("q_map: need one lift per free generator");
    return evaluate_at_lifts(P, ctx, lifts, "q_map").scaled(ctx->group().torsion_order());
}

std::vector<GroupElement> mod_r_basis(const AbelianGroup& H, const Int& r) {
    auto [p, s] = prime_power(r);
    if (p == 0) throw Error("r = " + to_string(r) + " is not a prime power");
    std::vector<GroupElement> out;
    for (int i = 0; i < H.free_rank(); ++i) out.push_back(H.free_generator(i));
    for (int j = 0; j < H.num_torsion(); ++j) {
        Int d = H.torsion_orders()[j];
        if (d % p != 0) continue;
        if (d % r != 0)
            throw Error("H/" + to_string(r) + " is not free: invariant factor " + to_string(d) + " is divisible by " +
                        to_string(p) + " but not by " + to_string(r));
        out.push_back(H.torsion_generator(j));
    }
    return out;
}

TruncatedElement q_r_map(const MultiPoly& P, const ContextPtr& ctx) {
    return q_r_map(P, ctx, mod_r_basis(ctx->group(), ctx->modulus()));
}

TruncatedElement q_r_map(const MultiPoly& P, const ContextPtr& ctx, const std::vector<GroupElement>& lifts) {
    if (ctx->modulus() == 0) throw Error("q_r_map: context must have coefficients in Z/r");
    auto basis = mod_r_basis(ctx->group(), ctx->modulus());
    if (lifts.size() != basis.size())
        throw Error("q_r_map: H/r has rank " + std::to_string(basis.size()) + " but " +
                    std::to_string(lifts.size()) + " lifts were given");
    return evaluate_at_lifts(P, ctx, lifts, "q_r_map");
}

}  // namespace torsionkit
