#pragma once

#include "torsionkit/detform.hpp"
#include "torsionkit/presentation_io.hpp"

#include <random>
#include <vector>

namespace torsionkit {

// Reduced word of length in [min_length, max_length] over the first num_generators generators.
FreeWord random_word(std::mt19937_64& rng, int num_generators, int min_length, int max_length);

struct ExpansionOptions {
    int min_genus = 1;
    int max_genus = 3;
    int max_word_length = 3;  // for each alpha, beta, gamma
    int max_gammas = 0;
    long long exponent = 0;   // power block exponent, 0 for none
    bool balanced_gammas = false;  // force sum of gamma abelianizations to vanish
    int max_expanded_length = 20;
};

CommutatorExpansion random_expansion(std::mt19937_64& rng, int num_generators, const ExpansionOptions& opt);

// Nice presentations with m = n + torsion.size() generators; torsion entries are the diagonal of v.
PresentationFile sample_integral_presentation(std::mt19937_64& rng, int n, const std::vector<long long>& torsion);
// Relators 1..n-1 are products of triple commutators, so second-order Massey data is defined.
PresentationFile sample_massey_presentation(std::mt19937_64& rng, int n, const std::vector<long long>& torsion);
// block_size torsion generators of order r followed by coprime torsion; relators carry r-th power blocks.
PresentationFile sample_mod_r_presentation(std::mt19937_64& rng, const Int& r, int n, int block_size,
                                           const std::vector<long long>& coprime_torsion);

AlternatingForm random_alternating_form(std::mt19937_64& rng, int n, int bound, const Int& modulus = 0);
// Random integer table with f0 = 0 enforced by correcting one entry per symmetric class.
MasseyForm random_massey_form(std::mt19937_64& rng, int order, int n, int bound);
// Product of random elementary operations; determinant +-1 (a unit mod modulus).
IntMatrix random_unimodular(std::mt19937_64& rng, int n, const Int& modulus = 0);

}  // namespace torsionkit
