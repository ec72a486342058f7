#pragma once

#include "torsionkit/integer.hpp"

#include <map>
#include <string>
#include <vector>

namespace torsionkit {

using Monomial = std::vector<int>;

// Polynomial in a fixed number of commuting variables over Z (modulus 0) or Z/r.
class MultiPoly {
public:
    explicit MultiPoly(int num_vars = 0, Int modulus = 0);
    static MultiPoly constant(int num_vars, const Int& c, const Int& modulus = 0);
    static MultiPoly variable(int num_vars, int i, const Int& modulus = 0);
    static MultiPoly monomial(const Monomial& exps, const Int& c, const Int& modulus = 0);

    int num_vars() const { return num_vars_; }
    const Int& modulus() const { return modulus_; }
    const std::map<Monomial, Int>& terms() const { return terms_; }

    void add_term(const Monomial& m, const Int& c);
    Int coefficient(const Monomial& m) const;
    bool is_zero() const { return terms_.empty(); }
    bool is_homogeneous() const;
    // Largest total degree; -1 for the zero polynomial.
    int degree() const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly scaled(const Int& c) const;
    bool operator==(const MultiPoly& o) const;

    // Exact division by the i-th variable; throws if some term is not divisible.
    MultiPoly divide_by_variable(int i) const;
    // Replaces variable v by images[v]; images share a variable count.
    MultiPoly substitute(const std::vector<MultiPoly>& images) const;
    MultiPoly reduce_mod(const Int& r) const;

    // Variables print as prefix1, prefix2, ...
    std::string to_string(const std::string& prefix = "a") const;

private:
    void check_compatible(const MultiPoly& o) const;

    int num_vars_;
    Int modulus_;
    std::map<Monomial, Int> terms_;
};

std::string monomial_key(const Monomial& m, const std::vector<std::string>& names);

}  // namespace torsionkit
