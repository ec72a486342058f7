#pragma once

#include "torsionkit/groupring.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace torsionkit {

// Generator indices are 0-based in code; the token syntax is 1-based (x1, X1 = x1^-1).
struct Letter {
    int gen;
    int sign;  // +1 or -1

    auto operator<=>(const Letter&) const = default;
};

class FreeWord {
public:
    FreeWord() = default;
    explicit FreeWord(std::vector<Letter> letters);
    static FreeWord generator(int gen, int sign = 1);
    // Whitespace separated tokens; "1" or an empty string is the empty word.
    static FreeWord parse(const std::string& text);
    static FreeWord commutator(const FreeWord& a, const FreeWord& b);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    // Largest generator index used plus one.
    int span() const;

    FreeWord operator*(const FreeWord& o) const;
    FreeWord inverse() const;
    FreeWord power(long long k) const;
    FreeWord reduced() const;
    long long exponent_sum(int gen) const;
    // Replaces generator g by images[g].
    FreeWord substitute(const std::vector<FreeWord>& images) const;
    std::string to_string() const;

    auto operator<=>(const FreeWord&) const = default;
    bool operator==(const FreeWord&) const = default;

private:
    std::vector<Letter> letters_;
};

// Element of Z[F]: integer combination of freely reduced words.
class FreeGroupRingElement {
public:
    FreeGroupRingElement() = default;
    static FreeGroupRingElement word(const FreeWord& w, const Int& c = 1);

    const std::map<FreeWord, Int>& terms() const { return terms_; }
    void add_term(const FreeWord& w, const Int& c);
    bool is_zero() const { return terms_.empty(); }
    Int augmentation() const;

    FreeGroupRingElement operator+(const FreeGroupRingElement& o) const;
    FreeGroupRingElement operator-(const FreeGroupRingElement& o) const;
    FreeGroupRingElement operator*(const FreeGroupRingElement& o) const;
    FreeGroupRingElement scaled(const Int& c) const;
    bool operator==(const FreeGroupRingElement& o) const = default;
    std::string to_string() const;

private:
    std::map<FreeWord, Int> terms_;
};

FreeGroupRingElement fox_derivative(const FreeWord& w, int j);
FreeGroupRingElement fox_derivative(const FreeGroupRingElement& c, int j);
// Applies the derivative for indices[0] first, then indices[1], and so on.
FreeGroupRingElement higher_fox_derivative(const FreeWord& w, const std::vector<int>& indices);
// Coefficient of X_{s_1} ... X_{s_k} in the Magnus expansion x -> 1 + X.
Int magnus_coefficient(const FreeWord& w, const std::vector<int>& sequence);
// Augmentation of higher_fox_derivative(w, indices), computed through the Magnus expansion.
Int augmented_fox_derivative(const FreeWord& w, const std::vector<int>& indices);

// Ring map Z[F] -> Z[H] (or (Z/r)[H]) sending x_g to assignment[g].
GroupRingElement abelianize(const FreeGroupRingElement& c, const AbelianGroup& H,
                            const std::vector<GroupElement>& assignment, const Int& modulus = 0);
GroupElement abelianize_word(const FreeWord& w, const AbelianGroup& H, const std::vector<GroupElement>& assignment);

struct Presentation {
    int num_generators = 0;
    std::vector<FreeWord> relators;
    int rank = 0;
    std::optional<std::vector<long long>> torsion_orders;

    // Exponent sums: rows are relators, columns generators.
    IntMatrix abelianized_matrix() const;
    // Deficiency one, letters in range, 1 <= rank <= num_generators.
    void validate() const;
};

// H_1 of the presentation with the images of the generators.
PresentedGroup presented_homology(const Presentation& P);

GroupRingMatrix alexander_matrix(const Presentation& P, const AbelianGroup& H,
                                 const std::vector<GroupElement>& assignment, const Int& modulus = 0);

struct CommutatorExpansion {
    std::vector<std::pair<FreeWord, FreeWord>> pairs;
    std::vector<FreeWord> power_words;
    long long power_exponent = 0;  // 0 means no power block
};

// prod [alpha, beta] * prod gamma^r, freely reduced.
FreeWord expand(const CommutatorExpansion& e);

struct NielsenResult {
    Presentation presentation;
    // New generators as words in the old generators.
    std::vector<FreeWord> new_in_old;
    // Old generators as words in the new generators.
    std::vector<FreeWord> old_in_new;
    std::vector<std::string> moves;
    bool identity = true;
};

// Moves the presentation into the block form (0 0; 0 v) with v square and upper triangular.
NielsenResult nielsen_normalize(const Presentation& P);
// True if the first rank columns and the first rank-1 rows of the abelianized matrix vanish.
bool is_nice(const Presentation& P);

}  // namespace torsionkit
