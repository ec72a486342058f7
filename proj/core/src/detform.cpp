#include "torsionkit/detform.hpp"

#include "torsionkit/cofactor.hpp"

namespace torsionkit {

ChangeOfBasis::ChangeOfBasis(IntMatrix matrix, Int modulus) : matrix_(std::move(matrix)), modulus_(std::move(modulus)) {
    for (const auto& row : matrix_)
        if (row.size() != matrix_.size()) throw Error("change of basis matrix must be square");
    det_ = reduce(torsionkit::determinant(matrix_), modulus_);
    if (modulus_ == 0 ? (det_ != 1 && det_ != -1) : !is_unit(det_, modulus_))
        throw Error("change of basis has non-unit determinant " + to_string(det_));
}

AlternatingForm::AlternatingForm(int n, Table table, Int modulus)
    : n_(n), modulus_(std::move(modulus)), table_(std::move(table)) {
    if (n_ < 1) throw Error("alternating form needs n >= 1");
    if (static_cast<int>(table_.size()) != n_ - 1) throw Error("alternating form table must have n-1 rows");
    for (int i = 0; i < n_ - 1; ++i) {
        if (static_cast<int>(table_[i].size()) != n_) throw Error("alternating form table has wrong shape");
        for (int j = 0; j < n_; ++j) {
            if (static_cast<int>(table_[i][j].size()) != n_) throw Error("alternating form table has wrong shape");
            for (auto& x : table_[i][j]) x = reduce(x, modulus_);
        }
    }
    for (int i = 0; i < n_ - 1; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = j; k < n_; ++k)
                if (reduce(table_[i][j][k] + table_[i][k][j], modulus_) != 0)
                    throw Error("form is not skew-symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                "," + std::to_string(k + 1) + ")");
}

AlternatingForm AlternatingForm::zero(int n, const Int& modulus) {
    return AlternatingForm(n, Table(n - 1, std::vector<std::vector<Int>>(n, std::vector<Int>(n, Int(0)))), modulus);
}

PolyMatrix theta_matrix(const AlternatingForm& f) {
    const int n = f.n();
    PolyMatrix theta(n - 1, std::vector<MultiPoly>(n, MultiPoly(n, f.modulus())));
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (f.at(i, j, k) != 0) theta[i][j] = theta[i][j] + MultiPoly::variable(n, k, f.modulus()).scaled(f.at(i, j, k));
    return theta;
}

MultiPoly strike_determinant(const PolyMatrix& theta, int column) {
    if (theta.empty()) throw Error("strike determinant needs at least one row");
    const int n = static_cast<int>(theta[0].size());
    if (static_cast<int>(theta.size()) != n - 1) throw Error("theta must have one fewer row than columns");
    if (column < 0 || column >= n) throw Error("struck column out of range");
    const MultiPoly& sample = theta[0][0];
    PolyMatrix minor;
    for (const auto& row : theta) {
        std::vector<MultiPoly> r;
        for (int j = 0; j < n; ++j)
            if (j != column) r.push_back(row[j]);
        minor.push_back(std::move(r));
    }
    MultiPoly det = cofactor_determinant(minor, MultiPoly(n, sample.modulus()), MultiPoly::constant(n, 1, sample.modulus()));
    if ((column + 1) % 2) det = -det;
    return det.divide_by_variable(column);
}

MultiPoly reduce_half_squares(const MultiPoly& p, const std::vector<int>& vars) {
    if (vars.empty()) return p;
    const Int& r = p.modulus();
    if (r == 0 || r % 2 != 0) throw Error("half-square reduction needs an even modulus");
    MultiPoly out(p.num_vars(), r);
    for (const auto& [m, c] : p.terms()) {
        bool square = false;
        for (int v : vars) square = square || m[v] >= 2;
        out.add_term(m, square ? reduce(c, r / 2) : c);
    }
    return out;
}

MultiPoly strike_determinant(const PolyMatrix& theta, int column, const std::vector<int>& half_square_vars) {
    for (int v : half_square_vars)
        if (v == column) throw Error("cannot strike a column whose variable squares to zero");
    if (half_square_vars.empty()) return strike_determinant(theta, column);
    // a_c is not a zero divisor in the quotient, so the division is well defined there
    const int n = static_cast<int>(theta[0].size());
    PolyMatrix minor;
    for (const auto& row : theta) {
        std::vector<MultiPoly> r;
        for (int j = 0; j < n; ++j)
            if (j != column) r.push_back(row[j]);
        minor.push_back(std::move(r));
    }
    const Int& mod = theta[0][0].modulus();
    MultiPoly det = cofactor_determinant(minor, MultiPoly(n, mod), MultiPoly::constant(n, 1, mod));
    if ((column + 1) % 2) det = -det;
    return reduce_half_squares(reduce_half_squares(det, half_square_vars).divide_by_variable(column),
                               half_square_vars);
}

namespace {

MultiPoly common_strike_determinant(const PolyMatrix& theta) {
    const int n = static_cast<int>(theta.empty() ? 0 : theta[0].size());
    if (n < 2) throw Error("determinant needs n >= 2");
    MultiPoly d = strike_determinant(theta, 0);
    for (int c = 1; c < n; ++c)
        if (!(strike_determinant(theta, c) == d))
            throw Error("struck-column determinants disagree at column " + std::to_string(c + 1));
    return d;
}

// new[..., x', ...] = sum_x C[x][x'] old[..., x, ...] along one axis of a flat tensor.
std::vector<Int> mode_product(const std::vector<Int>& t, const std::vector<int>& dims, int axis, const IntMatrix& C,
                              const Int& modulus) {
    std::size_t inner = 1;
    for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
    const std::size_t d = dims[axis];
    const std::size_t outer = t.size() / (inner * d);
    std::vector<Int> out(t.size(), Int(0));
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t xp = 0; xp < d; ++xp)
            for (std::size_t in = 0; in < inner; ++in) {
                Int s = 0;
                for (std::size_t x = 0; x < d; ++x) {
                    const Int& v = t[(o * d + x) * inner + in];
                    if (v != 0 && C[x][xp] != 0) s += C[x][xp] * v;
                }
                out[(o * d + xp) * inner + in] = reduce(s, modulus);
            }
    return out;
}

std::vector<Int> transform_tensor(std::vector<Int> t, int order, int n, const ChangeOfBasis& Ca,
                                  const ChangeOfBasis& Cb, const Int& modulus) {
    if (static_cast<int>(Ca.size()) != n || static_cast<int>(Cb.size()) != n - 1)
        throw Error("change of basis has the wrong size");
    std::vector<int> dims{n - 1};
    for (int a = 0; a <= order; ++a) dims.push_back(n);
    t = mode_product(t, dims, 0, Cb.matrix(), modulus);
    for (int a = 1; a <= order + 1; ++a) t = mode_product(t, dims, a, Ca.matrix(), modulus);
    return t;
}

}  // namespace

MultiPoly form_determinant(const AlternatingForm& f) { return common_strike_determinant(theta_matrix(f)); }

AlternatingForm change_of_basis(const AlternatingForm& f, const ChangeOfBasis& Ca, const ChangeOfBasis& Cb) {
    const int n = f.n();
    std::vector<Int> flat;
    for (const auto& a : f.table())
        for (const auto& b : a)
            for (const auto& c : b) flat.push_back(c);
    flat = transform_tensor(flat, 1, n, Ca, Cb, f.modulus());
    AlternatingForm::Table t(n - 1, std::vector<std::vector<Int>>(n, std::vector<Int>(n)));
    std::size_t idx = 0;
    for (auto& a : t)
        for (auto& b : a)
            for (auto& c : b) c = flat[idx++];
    return AlternatingForm(n, std::move(t), f.modulus());
}

MultiPoly dual_substitution(const MultiPoly& d, const ChangeOfBasis& Ca) {
    const int n = d.num_vars();
    if (static_cast<int>(Ca.size()) != n) throw Error("change of basis has the wrong size");
    std::vector<MultiPoly> images;
    for (int l = 0; l < n; ++l) {
        MultiPoly im(n, d.modulus());
        for (int j = 0; j < n; ++j)
            if (Ca.matrix()[l][j] != 0) im = im + MultiPoly::variable(n, j, d.modulus()).scaled(Ca.matrix()[l][j]);
        images.push_back(im);
    }
    return d.substitute(images);
}

// ---------------------------------------------------------------- Massey forms

MasseyTable MasseyTable::zero(int order, int n, const Int& modulus) {
    if (order < 1 || n < 1) throw Error("Massey table needs order >= 1 and n >= 1");
    MasseyTable t;
    t.order = order;
    t.n = n;
    t.modulus = modulus;
    std::size_t size = n - 1;
    for (int a = 0; a <= order; ++a) size *= n;
    t.values.assign(size, Int(0));
    return t;
}

std::size_t MasseyTable::index(int i, int j, const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order) throw Error("Massey multi-index has wrong length");
    if (i < 0 || i >= n - 1 || j < 0 || j >= n) throw Error("Massey index out of range");
    std::size_t k = static_cast<std::size_t>(i) * n + j;
    for (int x : idx) {
        if (x < 0 || x >= n) throw Error("Massey index out of range");
        k = k * n + x;
    }
    return k;
}

namespace {

// Calls fn(idx) for every multi-index of the given length over [0, n).
template <class Fn>
void for_each_index(int n, int length, Fn&& fn) {
    std::vector<int> idx(length, 0);
    for (;;) {
        fn(static_cast<const std::vector<int>&>(idx));
        int p = length - 1;
        while (p >= 0 && ++idx[p] == n) idx[p--] = 0;
        if (p < 0) return;
    }
}

MultiPoly monomial_of(const std::vector<int>& idx, int n, const Int& c, const Int& modulus) {
    Monomial m(n, 0);
    for (int x : idx) ++m[x];
    return MultiPoly::monomial(m, c, modulus);
}

}  // namespace

MultiPoly massey_f0(const MasseyTable& t, int i) {
    MultiPoly out(t.n, t.modulus);
    for_each_index(t.n, t.order + 1, [&](const std::vector<int>& idx) {
        std::vector<int> rest(idx.begin() + 1, idx.end());
        const Int& c = t.at(i, idx[0], rest);
        if (c != 0) out = out + monomial_of(idx, t.n, c, t.modulus);
    });
    return out;
}

MasseyForm::MasseyForm(MasseyTable table) : table_(std::move(table)) {
    std::size_t size = table_.n - 1;
    for (int a = 0; a <= table_.order; ++a) size *= table_.n;
    if (table_.values.size() != size) throw Error("Massey table has wrong size");
    for (auto& v : table_.values) v = reduce(v, table_.modulus);
    for (int i = 0; i < table_.n - 1; ++i)
        if (!massey_f0(table_, i).is_zero())
            throw Error("Massey form has nonzero f0 on row " + std::to_string(i + 1) + ": " +
                        massey_f0(table_, i).to_string());
}

MasseyForm MasseyForm::from_alternating(const AlternatingForm& f) {
    MasseyTable t = MasseyTable::zero(1, f.n(), f.modulus());
    for (int i = 0; i < f.n() - 1; ++i)
        for (int j = 0; j < f.n(); ++j)
            for (int k = 0; k < f.n(); ++k) t.at(i, j, {k}) = f.at(i, j, k);
    return MasseyForm(std::move(t));
}

MultiPoly massey_g(const MasseyForm& f, int i, int j) {
    const MasseyTable& t = f.table();
    MultiPoly out(t.n, t.modulus);
    for_each_index(t.n, t.order, [&](const std::vector<int>& idx) {
        const Int& c = t.at(i, j, idx);
        if (c != 0) out = out + monomial_of(idx, t.n, c, t.modulus);
    });
    return out;
}

MultiPoly massey_f0(const MasseyForm& f, int i) { return massey_f0(f.table(), i); }

PolyMatrix massey_theta(const MasseyForm& f) {
    PolyMatrix theta;
    for (int i = 0; i < f.n() - 1; ++i) {
        std::vector<MultiPoly> row;
        for (int j = 0; j < f.n(); ++j) row.push_back(massey_g(f, i, j));
        theta.push_back(std::move(row));
    }
    return theta;
}

MultiPoly massey_determinant(const MasseyForm& f) { return common_strike_determinant(massey_theta(f)); }

MasseyForm change_of_basis(const MasseyForm& f, const ChangeOfBasis& Ca, const ChangeOfBasis& Cb) {
    MasseyTable t = f.table();
    t.values = transform_tensor(t.values, t.order, t.n, Ca, Cb, t.modulus);
    return MasseyForm(std::move(t));
}

MultiPoly sign_refine(const MultiPoly& d, int orientation_sign) {
    if (orientation_sign != 1 && orientation_sign != -1) throw Error("orientation sign must be +1 or -1");
    return orientation_sign > 0 ? d : -d;
}

}  // namespace torsionkit
