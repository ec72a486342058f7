#pragma once

#include "torsionkit/abelian.hpp"
#include "torsionkit/polynomial.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace torsionkit {

// Finitely supported element of Z[H] (modulus 0) or (Z/r)[H].
class GroupRingElement {
public:
    explicit GroupRingElement(AbelianGroup group = {}, Int modulus = 0);
    static GroupRingElement group_element(const AbelianGroup& H, const GroupElement& g, const Int& modulus = 0);
    static GroupRingElement constant(const AbelianGroup& H, const Int& c, const Int& modulus = 0);

    const AbelianGroup& group() const { return group_; }
    const Int& modulus() const { return modulus_; }
    const std::map<GroupElement, Int>& terms() const { return terms_; }

    void add_term(const GroupElement& g, const Int& c);
    Int coefficient(const GroupElement& g) const;
    Int augmentation() const;
    bool is_zero() const { return terms_.empty(); }

    GroupRingElement operator+(const GroupRingElement& o) const;
    GroupRingElement operator-(const GroupRingElement& o) const;
    GroupRingElement operator*(const GroupRingElement& o) const;
    GroupRingElement operator-() const;
    GroupRingElement scaled(const Int& c) const;
    bool operator==(const GroupRingElement& o) const;

    // Coefficient projection Z -> Z/r.
    GroupRingElement reduce_mod(const Int& r) const;
    std::string to_string() const;

private:
    void check_compatible(const GroupRingElement& o) const;

    AbelianGroup group_;
    Int modulus_;
    std::map<GroupElement, Int> terms_;
};

using GroupRingMatrix = std::vector<std::vector<GroupRingElement>>;
GroupRingElement matrix_determinant(const GroupRingMatrix& A);

// Z[H]/I^k (or (Z/r)[H]/I^k) in the coordinates h_i = 1 + x_i (free generators) and
// g_j = 1 + y_j (torsion generators). Coordinates are the monomials of total degree < k,
// ordered by degree; relations form an echelon lattice so that reduction is canonical.
class TruncationContext {
public:
    TruncationContext(AbelianGroup group, int degree_bound, Int modulus);

    const AbelianGroup& group() const { return group_; }
    int degree_bound() const { return k_; }
    const Int& modulus() const { return modulus_; }
    int num_vars() const { return group_.num_generators(); }
    std::size_t dimension() const { return monomials_.size(); }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    int degree_of(std::size_t idx) const { return degrees_[idx]; }
    std::optional<std::size_t> index_of(const Monomial& m) const;
    std::vector<std::string> variable_names() const;

    // Echelon basis of the relation lattice; pivots()[i] is the leading column of row i.
    const IntMatrix& lattice_basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    IntVector normalize(IntVector v) const;
    IntVector multiply(const IntVector& a, const IntVector& b) const;
    // Unreduced coordinates of a group element: the product of binomial series.
    IntVector expand_group_element(const GroupElement& g) const;

private:
    AbelianGroup group_;
    int k_;
    Int modulus_;
    std::vector<Monomial> monomials_;
    std::vector<int> degrees_;
    std::map<Monomial, std::size_t> index_;
    std::vector<long> product_index_;  // dimension^2 table, -1 when the degree overflows
    IntMatrix basis_;
    std::vector<std::size_t> pivots_;
};

using ContextPtr = std::shared_ptr<const TruncationContext>;

// Memoized: equal arguments return the same context object.
ContextPtr build_truncation_context(const AbelianGroup& H, int k, const Int& modulus = 0);

class TruncatedElement {
public:
    TruncatedElement(ContextPtr ctx, IntVector coords);
    static TruncatedElement zero(const ContextPtr& ctx);
    static TruncatedElement one(const ContextPtr& ctx);

    const ContextPtr& context() const { return ctx_; }
    const IntVector& coordinates() const { return coords_; }

    TruncatedElement operator+(const TruncatedElement& o) const;
    TruncatedElement operator-(const TruncatedElement& o) const;
    TruncatedElement operator*(const TruncatedElement& o) const;
    TruncatedElement operator-() const;
    TruncatedElement scaled(const Int& c) const;
    bool operator==(const TruncatedElement& o) const;

    bool is_zero() const;
    bool in_ideal_power(int l) const;
    // Smallest degree carrying a nonzero coordinate; the degree bound for zero.
    int order() const;
    // Nonzero coordinates keyed by monomial, e.g. "x1*y1^2" -> "3".
    std::map<std::string, std::string> table() const;
    std::string to_string() const;

private:
    void check_compatible(const TruncatedElement& o) const;

    ContextPtr ctx_;
    IntVector coords_;
};

using TruncatedMatrix = std::vector<std::vector<TruncatedElement>>;
TruncatedElement matrix_determinant(const TruncatedMatrix& A, const ContextPtr& ctx);

TruncatedElement truncate(const GroupRingElement& x, const ContextPtr& ctx);
TruncatedElement truncate(const GroupElement& g, const ContextPtr& ctx);
bool in_ideal_power(const GroupRingElement& x, int l, const ContextPtr& ctx);

// |T| * P(h_1 - 1, ..., h_n - 1) where h_i are the lifts (default: the free generators).
TruncatedElement q_map(const MultiPoly& P, const ContextPtr& ctx);
TruncatedElement q_map(const MultiPoly& P, const ContextPtr& ctx, const std::vector<GroupElement>& lifts);

// Basis of H/r lifted to H: free generators, then torsion generators of order divisible by p.
// Throws unless H/r is free over Z/r.
std::vector<GroupElement> mod_r_basis(const AbelianGroup& H, const Int& r);
// P(g_1 - 1, ..., g_b - 1) over Z/r for lifts g_i of a basis of H/r (default: mod_r_basis).
TruncatedElement q_r_map(const MultiPoly& P, const ContextPtr& ctx);
TruncatedElement q_r_map(const MultiPoly& P, const ContextPtr& ctx, const std::vector<GroupElement>& lifts);

// Generalized binomial coefficient C(e, a) for any integer e and a >= 0.
Int binomial(const Int& e, int a);

}  // namespace torsionkit
