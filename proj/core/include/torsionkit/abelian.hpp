#pragma once

#include "torsionkit/integer.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace torsionkit {

struct SmithForm {
    IntMatrix U, D, V;  // U * A * V == D
};

// Diagonal entries of D are nonnegative and divide successively (zeros last).
SmithForm smith_normal_form(const IntMatrix& A);

struct GroupElement {
    std::vector<long long> free_part;
    std::vector<long long> torsion_part;

    auto operator<=>(const GroupElement&) const = default;
    bool operator==(const GroupElement&) const = default;
};

class AbelianGroup {
public:
    AbelianGroup() = default;
    // Canonicalizes: any list of cyclic orders (entries 1 are dropped, 0 means Z).
    static AbelianGroup from_orders(int free_rank, const std::vector<long long>& cyclic_orders);
    // Invariant factors given directly; validated (each >= 2, divisibility chain).
    AbelianGroup(int free_rank, std::vector<long long> invariant_factors);

    int free_rank() const { return free_rank_; }
    const std::vector<long long>& torsion_orders() const { return torsion_; }
    int num_torsion() const { return static_cast<int>(torsion_.size()); }
    int num_generators() const { return free_rank_ + num_torsion(); }
    long long torsion_order() const;
    bool is_finite() const { return free_rank_ == 0; }

    GroupElement zero() const;
    GroupElement element(std::vector<long long> free_part, std::vector<long long> torsion_part) const;
    // i-th canonical generator: free generators first, then torsion generators.
    GroupElement generator(int i) const;
    GroupElement free_generator(int i) const;
    GroupElement torsion_generator(int j) const;
    GroupElement add(const GroupElement& a, const GroupElement& b) const;
    GroupElement negate(const GroupElement& a) const;
    GroupElement multiple(const GroupElement& a, long long k) const;
    bool is_zero(const GroupElement& a) const;
    // 0 for elements of infinite order.
    long long order_of(const GroupElement& a) const;
    void validate(const GroupElement& a) const;

    // All elements of a finite group, in lexicographic order of torsion exponents.
    std::vector<GroupElement> elements() const;

    bool operator==(const AbelianGroup&) const = default;
    auto operator<=>(const AbelianGroup&) const = default;
    std::string to_string() const;

private:
    int free_rank_ = 0;
    std::vector<long long> torsion_;
};

// Group Z^n / (row span of relations), with the images of the n standard generators.
struct PresentedGroup {
    AbelianGroup group;
    std::vector<GroupElement> generator_images;
};
PresentedGroup abelian_group_from_relations(const IntMatrix& relations, int num_generators);

// Order of the subgroup generated by the given elements of a finite group.
long long subgroup_order(const AbelianGroup& H, const std::vector<GroupElement>& generators);

struct PseudoBasis {
    std::vector<GroupElement> elements;
    std::vector<long long> orders;
};

struct PrimaryPart {
    Int prime;
    AbelianGroup group;  // the p-primary subgroup as an abstract group
    PseudoBasis basis;   // canonical pseudo-basis, elements of the ambient group
};

PrimaryPart primary_part(const AbelianGroup& H, long long p);
// Checks orders nondecreasing, p-power, and that the elements split H_(p) as a direct sum.
bool is_pseudo_basis(const AbelianGroup& H, long long p, const PseudoBasis& basis);
// Enumerates every pseudo-basis of H_(p); returns nullopt once more than `limit` exist.
std::optional<std::vector<PseudoBasis>> enumerate_pseudo_bases(const AbelianGroup& H, long long p,
                                                               std::size_t limit);
PseudoBasis random_pseudo_basis(const AbelianGroup& H, long long p, std::mt19937_64& rng);

using Rational = boost::multiprecision::cpp_rational;

// Q/Z valued bilinear pairing between the torsion subgroups of two groups.
class LinkingForm {
public:
    LinkingForm(AbelianGroup left, AbelianGroup right, std::vector<std::vector<Rational>> table);

    const AbelianGroup& left() const { return left_; }
    const AbelianGroup& right() const { return right_; }
    const std::vector<std::vector<Rational>>& table() const { return table_; }
    // Value in [0,1) on arbitrary elements (free parts are ignored).
    Rational operator()(const GroupElement& z, const GroupElement& w) const;

private:
    AbelianGroup left_, right_;
    std::vector<std::vector<Rational>> table_;
};

Rational frac(const Rational& q);

// p^k L(z, z') reduced into Z_r, where z' (or else z) has order p^k >= r.
Int dot_pairing(const LinkingForm& L, const GroupElement& z, const GroupElement& zp, const Int& r);
bool is_nondegenerate(const LinkingForm& L);

}  // namespace torsionkit
