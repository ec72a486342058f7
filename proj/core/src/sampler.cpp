#include "torsionkit/sampler.hpp"

#include <algorithm>
#include <map>

namespace torsionkit {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// A word with the same abelianization as w: its letters in random order, reduced.
FreeWord shuffled(std::mt19937_64& rng, const FreeWord& w) {
    std::vector<Letter> l = w.letters();
    std::shuffle(l.begin(), l.end(), rng);
    return FreeWord(l).reduced();
}

PresentationFile torsion_file(int n, const std::vector<long long>& torsion) {
    PresentationFile f;
    f.presentation.num_generators = n + static_cast<int>(torsion.size());
    f.presentation.rank = n;
    f.presentation.torsion_orders = AbelianGroup::from_orders(0, torsion).torsion_orders();
    return f;
}

// [alpha, beta] x_c^d, with a short random commutator.
FreeWord torsion_relator(std::mt19937_64& rng, int m, int c, long long d) {
    FreeWord w = FreeWord::generator(c).power(d);
    if (uniform(rng, 0, 2) > 0) w = FreeWord::commutator(random_word(rng, m, 1, 2), random_word(rng, m, 1, 2)) * w;
    return w;
}

}  // namespace

FreeWord random_word(std::mt19937_64& rng, int num_generators, int min_length, int max_length) {
    const int len = uniform(rng, min_length, max_length);
    std::vector<Letter> l;
    while (static_cast<int>(l.size()) < len) {
        Letter x{uniform(rng, 0, num_generators - 1), uniform(rng, 0, 1) ? 1 : -1};
        if (!l.empty() && l.back().gen == x.gen && l.back().sign == -x.sign) continue;
        l.push_back(x);
    }
    return FreeWord(l);
}

CommutatorExpansion random_expansion(std::mt19937_64& rng, int num_generators, const ExpansionOptions& opt) {
    for (;;) {
        CommutatorExpansion e;
        const int genus = uniform(rng, opt.min_genus, opt.max_genus);
        for (int g = 0; g < genus; ++g)
            e.pairs.emplace_back(random_word(rng, num_generators, 1, opt.max_word_length),
                                 random_word(rng, num_generators, 1, opt.max_word_length));
        if (opt.exponent != 0 && opt.max_gammas > 0) {
            e.power_exponent = opt.exponent;
            if (opt.balanced_gammas) {
                if (uniform(rng, 0, 1)) {
                    FreeWord g = random_word(rng, num_generators, 1, opt.max_word_length);
                    e.power_words = {g, shuffled(rng, g).inverse()};
                }
            } else {
                const int k = uniform(rng, 1, opt.max_gammas);
                for (int i = 0; i < k; ++i) e.power_words.push_back(random_word(rng, num_generators, 1, opt.max_word_length));
            }
        }
        if (static_cast<int>(expand(e).length()) <= opt.max_expanded_length) return e;
    }
}

PresentationFile sample_integral_presentation(std::mt19937_64& rng, int n, const std::vector<long long>& torsion) {
    PresentationFile f = torsion_file(n, torsion);
    const int m = f.presentation.num_generators;
    ExpansionOptions opt;
    for (int i = 0; i < n - 1; ++i) {
        CommutatorExpansion e = random_expansion(rng, m, opt);
        f.presentation.relators.push_back(expand(e));
        f.expansions.emplace(i, e);
    }
    for (std::size_t k = 0; k < torsion.size(); ++k)
        f.presentation.relators.push_back(torsion_relator(rng, m, n + static_cast<int>(k), torsion[k]));
    return f;
}

PresentationFile sample_massey_presentation(std::mt19937_64& rng, int n, const std::vector<long long>& torsion) {
    PresentationFile f = torsion_file(n, torsion);
    const int m = f.presentation.num_generators;
    for (int i = 0; i < n - 1; ++i) {
        for (;;) {
            CommutatorExpansion e;
            const int count = uniform(rng, 1, 2);
            for (int c = 0; c < count; ++c) {
                FreeWord inner = FreeWord::commutator(random_word(rng, m, 1, 1), random_word(rng, m, 1, 2));
                e.pairs.emplace_back(inner, random_word(rng, m, 1, 1));
            }
            FreeWord w = expand(e);
            if (w.empty() || w.length() > 20) continue;
            f.presentation.relators.push_back(w);
            f.expansions.emplace(i, e);
            break;
        }
    }
    for (std::size_t k = 0; k < torsion.size(); ++k)
        f.presentation.relators.push_back(torsion_relator(rng, m, n + static_cast<int>(k), torsion[k]));
    return f;
}

PresentationFile sample_mod_r_presentation(std::mt19937_64& rng, const Int& r, int n, int block_size,
                                           const std::vector<long long>& coprime_torsion) {
    const long long rr = to_ll(r);
    std::vector<long long> torsion(block_size, rr);
    torsion.insert(torsion.end(), coprime_torsion.begin(), coprime_torsion.end());
    PresentationFile f = torsion_file(n, torsion);
    const int m = f.presentation.num_generators;

    ExpansionOptions opt;
    opt.max_genus = 2;
    opt.max_gammas = 2;
    opt.exponent = rr;
    opt.balanced_gammas = true;
    opt.max_word_length = 2;
    for (int i = 0; i < n - 1; ++i) {
        CommutatorExpansion e = random_expansion(rng, m, opt);
        f.presentation.relators.push_back(expand(e));
        f.expansions.emplace(i, e);
    }
    for (int k = 0; k < block_size; ++k) {
        const int c = n + k;
        for (;;) {
            CommutatorExpansion e;
            if (uniform(rng, 0, 1))
                e.pairs.emplace_back(random_word(rng, m, 1, 2), random_word(rng, m, 1, 2));
            e.power_exponent = rr;
            if (uniform(rng, 0, 1)) {
                e.power_words = {FreeWord::generator(c)};
            } else {
                FreeWord u = random_word(rng, m, 1, 2);
                e.power_words = {(FreeWord::generator(c) * u).reduced(), shuffled(rng, u).inverse()};
            }
            FreeWord w = expand(e);
            if (w.length() > 20 + static_cast<std::size_t>(2 * rr)) continue;
            f.presentation.relators.push_back(w);
            f.expansions.emplace(n - 1 + k, e);
            break;
        }
    }
    for (std::size_t k = 0; k < coprime_torsion.size(); ++k)
        f.presentation.relators.push_back(
            torsion_relator(rng, m, n + block_size + static_cast<int>(k), coprime_torsion[k]));
    return f;
}

AlternatingForm random_alternating_form(std::mt19937_64& rng, int n, int bound, const Int& modulus) {
    AlternatingForm::Table t(n - 1, std::vector<std::vector<Int>>(n, std::vector<Int>(n, Int(0))));
    for (auto& row : t)
        for (int j = 0; j < n; ++j)
            for (int p = j + 1; p < n; ++p) {
                Int c = uniform(rng, -bound, bound);
                row[j][p] = reduce(c, modulus);
                row[p][j] = reduce(-c, modulus);
            }
    return AlternatingForm(n, std::move(t), modulus);
}

MasseyForm random_massey_form(std::mt19937_64& rng, int order, int n, int bound) {
    MasseyTable t = MasseyTable::zero(order, n);
    for (auto& v : t.values) v = uniform(rng, -bound, bound);
    std::vector<int> idx(order, 0);
    for (int i = 0; i < n - 1; ++i) {
        std::map<std::vector<int>, Int> sums;
        std::vector<int> tuple(order + 1, 0);
        for (;;) {
            std::vector<int> key = tuple;
            std::sort(key.begin(), key.end());
            sums[key] += t.at(i, tuple[0], {tuple.begin() + 1, tuple.end()});
            int k = order;
            while (k >= 0 && ++tuple[k] == n) tuple[k--] = 0;
            if (k < 0) break;
        }
        for (const auto& [key, s] : sums) t.at(i, key[0], {key.begin() + 1, key.end()}) -= s;
    }
    return MasseyForm(std::move(t));
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n, const Int& modulus) {
    IntMatrix a = identity_matrix(n);
    const int steps = 3 * n;
    for (int s = 0; s < steps; ++s) {
        const int kind = uniform(rng, 0, 5);
        const int i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 1);
        if (kind == 0) {
            std::swap(a[i], a[j]);
        } else if (kind == 1) {
            for (auto& x : a[i]) x = -x;
        } else if (i != j) {
            const int c = uniform(rng, -2, 2);
            for (int k = 0; k < n; ++k) a[i][k] += c * a[j][k];
        }
    }
    for (auto& row : a)
        for (auto& x : row) x = reduce(x, modulus);
    return a;
}

}  // namespace torsionkit
