#include "torsionkit/volform.hpp"

namespace torsionkit {

PairedVolumeForm::PairedVolumeForm(int rank_K, int rank_L, Int modulus, Int value)
    : rank_K_(rank_K), rank_L_(rank_L), modulus_(std::move(modulus)) {
    if (rank_K_ < 0 || rank_L_ < 0) throw Error("volume form ranks must be nonnegative");
    if (modulus_ < 0) throw Error("volume form: negative modulus");
    value_ = reduce(value, modulus_);
}

bool PairedVolumeForm::is_nondegenerate() const {
    return modulus_ == 0 ? (value_ == 1 || value_ == -1) : is_unit(value_, modulus_);
}

Int PairedVolumeForm::evaluate(const IntMatrix& a, const IntMatrix& b) const {
    if (static_cast<int>(a.size()) != rank_K_ || static_cast<int>(b.size()) != rank_L_)
        throw Error("volume form evaluated on bases of the wrong rank");
    return reduce(determinant(a) * determinant(b) * value_, modulus_);
}

PairedVolumeForm from_distinguished(int rank_K, int rank_L, const Int& modulus) {
    return PairedVolumeForm(rank_K, rank_L, modulus, 1);
}

PairedVolumeForm from_orientation(int rank_K, int rank_L, int orientation_sign) {
    if (orientation_sign != 1 && orientation_sign != -1) throw Error("orientation sign must be +1 or -1");
    return PairedVolumeForm(rank_K, rank_L, 0, orientation_sign);
}

namespace {

Int extension_determinant(const ExtensionData& e, int rank, int rank1, int rank2, const Int& modulus) {
    if (rank1 + rank2 != rank) throw Error("combine_exact: ranks of the exact sequence do not add up");
    auto check = [&](const IntMatrix& m, int cols) {
        if (static_cast<int>(m.size()) != rank) throw Error("combine_exact: extension data has wrong row count");
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != cols) throw Error("combine_exact: extension data has wrong column count");
    };
    check(e.sub_embedding, rank1);
    check(e.quotient_lifts, rank2);
    IntMatrix E(rank, IntVector(rank));
    for (int i = 0; i < rank; ++i) {
        for (int j = 0; j < rank1; ++j) E[i][j] = e.sub_embedding[i][j];
        for (int j = 0; j < rank2; ++j) E[i][rank1 + j] = e.quotient_lifts[i][j];
    }
    Int det = reduce(determinant(E), modulus);
    bool unit = modulus == 0 ? (det == 1 || det == -1) : is_unit(det, modulus);
    if (!unit) throw Error("combine_exact: concatenated bases do not form a basis");
    return det;
}

}  // namespace

PairedVolumeForm combine_exact(const PairedVolumeForm& mu1, const PairedVolumeForm& mu2, const ExtensionData& ext_K,
                               const ExtensionData& ext_L) {
    if (mu1.modulus() != mu2.modulus()) throw Error("combine_exact: forms over different rings");
    const Int& r = mu1.modulus();
    const int rk = mu1.rank_K() + mu2.rank_K(), rl = mu1.rank_L() + mu2.rank_L();
    Int dk = extension_determinant(ext_K, rk, mu1.rank_K(), mu2.rank_K(), r);
    Int dl = extension_determinant(ext_L, rl, mu1.rank_L(), mu2.rank_L(), r);
    Int v = mu1.value() * mu2.value();
    // [a/a1a2] is the inverse of det E
    if (r == 0)
        v *= dk * dl;
    else
        v *= inverse(dk * dl, r);
    return PairedVolumeForm(rk, rl, r, v);
}

PairedVolumeForm dual_form(const PairedVolumeForm& mu) {
    if (!mu.is_nondegenerate()) throw Error("dual of a degenerate volume form");
    Int v = mu.modulus() == 0 ? mu.value() : inverse(mu.value(), mu.modulus());
    return PairedVolumeForm(mu.rank_K(), mu.rank_L(), mu.modulus(), v);
}

PairedVolumeForm reduce_mod_r(const PairedVolumeForm& mu, const Int& r) {
    if (mu.modulus() != 0) throw Error("reduce_mod_r expects a form over Z");
    if (!mu.is_nondegenerate()) throw Error("reduce_mod_r of a degenerate volume form");
    if (r < 2) throw Error("reduce_mod_r needs r >= 2");
    return PairedVolumeForm(mu.rank_K(), mu.rank_L(), r, mu.value());
}

void require_free_mod_r(const AbelianGroup& H, const Int& r) {
    auto [p, s] = prime_power(r);
    if (p == 0) throw Error("r = " + to_string(r) + " is not a prime power");
    for (auto d : H.torsion_orders())
        if (Int(d) % p == 0 && Int(d) % r != 0)
            throw Error(H.to_string() + " modulo " + to_string(r) + " is not free");
}

Int linking_volume_value(const LinkingForm& L, const Int& r, const PseudoBasis& x, const PseudoBasis& y) {
    if (x.elements.size() != y.elements.size()) throw Error("pseudo-bases of different lengths");
    const std::size_t k = x.elements.size();
    IntMatrix M(k, IntVector(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M[i][j] = dot_pairing(L, x.elements[i], y.elements[j], r);
    return determinant_mod(M, r);
}

Int pseudo_basis_change_determinant(const AbelianGroup& H, const Int& r, const PseudoBasis& x) {
    auto [p, s] = prime_power(r);
    if (p == 0) throw Error("r = " + to_string(r) + " is not a prime power");
    PrimaryPart pp = primary_part(H, to_ll(p));
    const std::size_t k = pp.basis.elements.size();
    if (x.elements.size() != k) throw Error("pseudo-basis has the wrong length");
    // canonical element j is (d_t / p^v) e_t for a single torsion index t
    std::vector<std::pair<int, long long>> slot;
    for (const auto& h : pp.basis.elements)
        for (int t = 0; t < H.num_torsion(); ++t)
            if (h.torsion_part[t] != 0) slot.emplace_back(t, h.torsion_part[t]);
    IntMatrix M(k, IntVector(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            auto [t, step] = slot[j];
            long long c = x.elements[i].torsion_part[t];
            if (c % step != 0) throw Error("element is not in the p-primary part");
            M[i][j] = c / step;
        }
    return determinant_mod(M, r);
}

PairedVolumeForm linking_volume_form(const LinkingForm& L, const Int& r) {
    require_free_mod_r(L.left(), r);
    require_free_mod_r(L.right(), r);
    auto [p, s] = prime_power(r);
    PrimaryPart hp = primary_part(L.left(), to_ll(p));
    PrimaryPart kp = primary_part(L.right(), to_ll(p));
    if (hp.basis.elements.size() != kp.basis.elements.size())
        throw Error("linking volume form: p-primary parts have different ranks");
    const int rank = static_cast<int>(hp.basis.elements.size());
    return PairedVolumeForm(rank, rank, r, linking_volume_value(L, r, hp.basis, kp.basis));
}

PairedVolumeForm canonical_cohomology_form(int free_rank_K, int free_rank_L, int orientation_sign,
                                           const LinkingForm& L, const Int& r) {
    PairedVolumeForm free = reduce_mod_r(from_orientation(free_rank_K, free_rank_L, orientation_sign), r);
    PairedVolumeForm tors = linking_volume_form(L, r);
    // the chosen free lifts span a complement of the torsion, so they serve as the sub-module
    auto split = [](int a, int b) {
        ExtensionData e;
        e.sub_embedding.assign(a + b, IntVector(a, Int(0)));
        e.quotient_lifts.assign(a + b, IntVector(b, Int(0)));
        for (int i = 0; i < a; ++i) e.sub_embedding[i][i] = 1;
        for (int j = 0; j < b; ++j) e.quotient_lifts[a + j][j] = 1;
        return e;
    };
    PairedVolumeForm homology = combine_exact(free, tors, split(free_rank_K, tors.rank_K()),
                                              split(free_rank_L, tors.rank_L()));
    return dual_form(homology);
}

MultiPoly refined_determinant(const MultiPoly& d, const PairedVolumeForm& mu) {
    PairedVolumeForm dual = dual_form(mu);
    if (d.modulus() != mu.modulus()) throw Error("refined determinant: form and polynomial over different rings");
    return d.scaled(dual.value());
}

}  // namespace torsionkit
