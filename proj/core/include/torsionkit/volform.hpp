#pragma once

#include "torsionkit/abelian.hpp"
#include "torsionkit/polynomial.hpp"

namespace torsionkit {

// Paired volume form on K x L stored by its value on a distinguished basis pair.
class PairedVolumeForm {
public:
    PairedVolumeForm(int rank_K, int rank_L, Int modulus, Int value);

    int rank_K() const { return rank_K_; }
    int rank_L() const { return rank_L_; }
    const Int& modulus() const { return modulus_; }
    const Int& value() const { return value_; }
    bool is_nondegenerate() const;
    // Value on bases given as column matrices in the distinguished bases.
    Int evaluate(const IntMatrix& a, const IntMatrix& b) const;

private:
    int rank_K_, rank_L_;
    Int modulus_, value_;
};

PairedVolumeForm from_distinguished(int rank_K, int rank_L, const Int& modulus = 0);
PairedVolumeForm from_orientation(int rank_K, int rank_L, int orientation_sign);

// Sub-module basis images and quotient lifts, as columns in the distinguished basis of the middle module.
struct ExtensionData {
    IntMatrix sub_embedding;
    IntMatrix quotient_lifts;
};

// Form on K x L from forms on K1 x L1 (sub-modules) and K2 x L2 (quotients).
PairedVolumeForm combine_exact(const PairedVolumeForm& mu1, const PairedVolumeForm& mu2, const ExtensionData& ext_K,
                               const ExtensionData& ext_L);
PairedVolumeForm dual_form(const PairedVolumeForm& mu);
PairedVolumeForm reduce_mod_r(const PairedVolumeForm& mu, const Int& r);

// Throws unless every p-primary invariant factor of H is divisible by r = p^s.
void require_free_mod_r(const AbelianGroup& H, const Int& r);
// det(x_i . y_j) in Z/r for pseudo-bases x of H_(p) and y of H'_(p).
Int linking_volume_value(const LinkingForm& L, const Int& r, const PseudoBasis& x, const PseudoBasis& y);
// Determinant in Z/r of the change from the canonical pseudo-basis of H_(p) to x, after reduction mod r.
Int pseudo_basis_change_determinant(const AbelianGroup& H, const Int& r, const PseudoBasis& x);
// The form on H/r x H'/r (torsion parts) with value det(h_i . k_j) on the canonical pseudo-bases.
PairedVolumeForm linking_volume_form(const LinkingForm& L, const Int& r);

// Orientation form on the free parts combined with the linking form on the torsion parts, dualized.
// Working bases list the free part first, then the torsion pseudo-basis.
PairedVolumeForm canonical_cohomology_form(int free_rank_K, int free_rank_L, int orientation_sign,
                                           const LinkingForm& L, const Int& r);

// mu*(a*, b*) d, the determinant refined by a nondegenerate form.
MultiPoly refined_determinant(const MultiPoly& d, const PairedVolumeForm& mu);

}  // namespace torsionkit
