#pragma once

#include "torsionkit/detform.hpp"
#include "torsionkit/presentation_io.hpp"
#include "torsionkit/volform.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace torsionkit {

// A deficiency-one presentation whose abelianized matrix is (0 0; 0 v), with the derived homology data.
class NicePresentation {
public:
    // Validates the input; presentations that are not nice are normalized first, which drops
    // expansions and linking entries since they refer to the original generators.
    static NicePresentation from_file(const PresentationFile& file);

    const Presentation& presentation() const { return presentation_; }
    int num_generators() const { return presentation_.num_generators; }
    int rank() const { return presentation_.rank; }
    const AbelianGroup& homology() const { return homology_.group; }
    // Images of x_1, ..., x_m in the homology group.
    const std::vector<GroupElement>& generator_images() const { return homology_.generator_images; }
    const IntMatrix& torsion_matrix() const { return v_; }
    const std::optional<CommutatorExpansion>& expansion(int relator) const { return expansions_[relator]; }
    const std::vector<LinkingEntry>& linking() const { return linking_; }
    const std::optional<NielsenResult>& normalization() const { return normalization_; }
    Int torsion_order() const;

private:
    Presentation presentation_;
    std::vector<std::optional<CommutatorExpansion>> expansions_;
    std::vector<LinkingEntry> linking_;
    std::optional<NielsenResult> normalization_;
    PresentedGroup homology_;
    IntMatrix v_;
};

NicePresentation load_nice_presentation(const std::string& path);
NicePresentation parse_nice_presentation(const std::string& text);

// One row f[j][p] of the cup form read off an expansion; over Z/r (r > 0) the power block contributes,
// with the extra (r/2) gamma_j gamma_p term for even r unless disabled.
std::vector<std::vector<Int>> cup_form_row(const CommutatorExpansion& e, int n, const Int& r = 0,
                                           bool include_even_term = true);

// Cup form over Z from the expansions of relators 1..n-1, or from second Fox derivatives when any is missing.
AlternatingForm cup_form(const NicePresentation& P);
AlternatingForm cup_form_from_expansions(const NicePresentation& P);

// The form of order m: f[i][j][i_1..i_m] = augmented derivative of r_i along (j, i_m, ..., i_1).
// Throws unless every augmented derivative of order <= m of relators 1..n-1 vanishes.
MasseyForm massey_form_from_higher_fox(const NicePresentation& P, int order);

struct ModRStructure {
    Int r;
    Int p;
    int block_size = 0;  // number of torsion generators in the diagonal p-block
    int b = 0;           // rank + block_size, the rank of H/r
    Int coprime_torsion; // |det v'| for the complementary block
};

// Locates the diagonal p-block at the top of v; throws if the torsion is not in that shape.
ModRStructure mod_r_structure(const NicePresentation& P, const Int& r);
AlternatingForm mod_r_cup_form(const NicePresentation& P, const Int& r, bool include_even_term = true);
// Linking form restricted to the p-block, from explicit entries or the default diagonal 1/p^s.
LinkingForm block_linking_form(const NicePresentation& P, const ModRStructure& s);

// (-1)^(m+s) tau0 det Delta(s) in the group ring, tau0 = (-1)^m sign(det v), s 1-based.
GroupRingElement torsion_numerator(const NicePresentation& P, int strike, const Int& modulus = 0);

enum class Mode { integral, mod_r, massey };
enum class Verdict { equal, equal_up_to_sign, unequal };

std::string to_string(Mode m);
std::string to_string(Verdict v);
Verdict compare(const TruncatedElement& lhs, const TruncatedElement& rhs);

struct CheckOptions {
    int strike = 1;                 // 1-based column
    int orientation_sign = 1;
    Int r = 0;                      // mod-r checks
    int massey_order = 2;           // Massey checks
    bool include_even_term = true;  // mod-r checks with even r
};

struct TheoremReport {
    Mode mode = Mode::integral;
    int strike = 1;
    Int r = 0;
    int massey_order = 1;
    int truncation_degree = 0;   // comparison in the augmentation ideal power I^k
    Int torsion_factor = 1;      // |T| (integral, Massey) or the coprime part (mod r)
    MultiPoly determinant;       // refined determinant substituted on the right side
    std::optional<TruncatedElement> lhs;
    std::optional<TruncatedElement> rhs;
    Verdict verdict = Verdict::unequal;
    std::optional<TruncatedElement> lhs_full;  // from the full torsion numerator
    bool full_consistent = false;
    bool degree_bound_holds = true;  // Massey: det a(s) lies in I^(m(n-1))
    std::optional<Int> linking_volume;  // mod r with a nonempty p-block
    std::vector<std::string> notes;
    double seconds = 0;
};

TheoremReport check_integral_theorem(const NicePresentation& P, const CheckOptions& opt = {});
TheoremReport check_massey_theorem(const NicePresentation& P, const CheckOptions& opt = {});
TheoremReport check_mod_r_theorem(const NicePresentation& P, const CheckOptions& opt);

// The truncated image of the Fox derivative of expand(e) along x_j compared with sum_p f[j][p](h_p - 1)
// in (Z or Z/r)[Z^n]/I^2. Throws unless the expansion abelianizes to zero in the coefficient ring.
bool check_fox_cup_congruence(const CommutatorExpansion& e, int j, int n, const Int& r = 0,
                              bool include_even_term = true);

}  // namespace torsionkit
