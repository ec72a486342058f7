#pragma once

#include "torsionkit/polynomial.hpp"

#include <vector>

namespace torsionkit {

// Square matrix whose columns express new basis vectors in the old basis; its determinant must be a unit.
class ChangeOfBasis {
public:
    explicit ChangeOfBasis(IntMatrix matrix, Int modulus = 0);
    const IntMatrix& matrix() const { return matrix_; }
    const Int& modulus() const { return modulus_; }
    std::size_t size() const { return matrix_.size(); }
    // Determinant reduced into the coefficient ring.
    const Int& determinant() const { return det_; }

private:
    IntMatrix matrix_;
    Int modulus_;
    Int det_;
};

// Trilinear table f[i][j][k] = f(b_i, a_j, a_k), i < n-1, j,k < n, skew in (j, k).
class AlternatingForm {
public:
    using Table = std::vector<std::vector<std::vector<Int>>>;
    AlternatingForm(int n, Table table, Int modulus = 0);
    static AlternatingForm zero(int n, const Int& modulus = 0);

    int n() const { return n_; }
    const Int& modulus() const { return modulus_; }
    const Table& table() const { return table_; }
    const Int& at(int i, int j, int k) const { return table_[i][j][k]; }

private:
    int n_;
    Int modulus_;
    Table table_;
};

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

// theta[i][j] = sum_k f[i][j][k] a_k*.
PolyMatrix theta_matrix(const AlternatingForm& f);
// (-1)^(c+1) det theta(c) / a_c* for a 0-based struck column c (exact division or Error).
MultiPoly strike_determinant(const PolyMatrix& theta, int column);
// Works in (Z/r)[a] / ((r/2) a_t^2 : t listed) for even r: coefficients of monomials containing
// some listed a_t^2 are reduced mod r/2.
MultiPoly reduce_half_squares(const MultiPoly& p, const std::vector<int>& vars);
// strike_determinant in that quotient; the struck column must not be listed.
MultiPoly strike_determinant(const PolyMatrix& theta, int column, const std::vector<int>& half_square_vars);
// The determinant d, verified against every struck column.
MultiPoly form_determinant(const AlternatingForm& f);
// Form expressed in new bases a'_j = sum_l Ca[l][j] a_l, b'_i = sum_k Cb[k][i] b_k.
AlternatingForm change_of_basis(const AlternatingForm& f, const ChangeOfBasis& Ca, const ChangeOfBasis& Cb);
// Rewrites a polynomial in the old dual variables through a_l* = sum_j Ca[l][j] a'_j*.
MultiPoly dual_substitution(const MultiPoly& d, const ChangeOfBasis& Ca);

// Raw table f[i][j][i_1..i_m] = f(b_i, a_j, a_{i_1}, ..., a_{i_m}); no validation.
struct MasseyTable {
    int order = 1;  // m
    int n = 2;
    Int modulus = 0;
    std::vector<Int> values;  // flat, size (n-1) * n^(m+1)

    static MasseyTable zero(int order, int n, const Int& modulus = 0);
    std::size_t index(int i, int j, const std::vector<int>& idx) const;
    const Int& at(int i, int j, const std::vector<int>& idx) const { return values[index(i, j, idx)]; }
    Int& at(int i, int j, const std::vector<int>& idx) { return values[index(i, j, idx)]; }
};

MultiPoly massey_f0(const MasseyTable& t, int i);

// Massey-order form; construction requires f0 = 0 for every row.
class MasseyForm {
public:
    explicit MasseyForm(MasseyTable table);
    static MasseyForm from_alternating(const AlternatingForm& f);

    int order() const { return table_.order; }
    int n() const { return table_.n; }
    const Int& modulus() const { return table_.modulus; }
    const MasseyTable& table() const { return table_; }
    const Int& at(int i, int j, const std::vector<int>& idx) const { return table_.at(i, j, idx); }

private:
    MasseyTable table_;
};

MultiPoly massey_g(const MasseyForm& f, int i, int j);
MultiPoly massey_f0(const MasseyForm& f, int i);
PolyMatrix massey_theta(const MasseyForm& f);
MultiPoly massey_determinant(const MasseyForm& f);
MasseyForm change_of_basis(const MasseyForm& f, const ChangeOfBasis& Ca, const ChangeOfBasis& Cb);

MultiPoly sign_refine(const MultiPoly& d, int orientation_sign);

}  // namespace torsionkit
