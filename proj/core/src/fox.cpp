#include "torsionkit/fox.hpp"

#include <algorithm>
#include <sstream>

namespace torsionkit {

// ---------------------------------------------------------------- FreeWord

FreeWord::FreeWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (const auto& l : letters_)
        if (l.gen < 0 || (l.sign != 1 && l.sign != -1)) throw Error("invalid letter in word");
}

FreeWord FreeWord::generator(int gen, int sign) { return FreeWord({Letter{gen, sign}}); }

FreeWord FreeWord::parse(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    std::vector<Letter> letters;
    while (is >> tok) {
        if (tok == "1") continue;
        if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'X'))
            throw Error("bad word token '" + tok + "' (expected x<k> or X<k>)");
        int g = 0;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(tok[i])))
                throw Error("bad word token '" + tok + "' (expected x<k> or X<k>)");
            g = g * 10 + (tok[i] - '0');
            if (g > 1000000) throw Error("generator index too large in '" + tok + "'");
        }
        if (g < 1) throw Error("generator indices start at 1: '" + tok + "'");
        letters.push_back(Letter{g - 1, tok[0] == 'x' ? 1 : -1});
    }
    return FreeWord(std::move(letters));
}

FreeWord FreeWord::commutator(const FreeWord& a, const FreeWord& b) {
    return (a * b * a.inverse() * b.inverse()).reduced();
}

int FreeWord::span() const {
    int s = 0;
    for (const auto& l : letters_) s = std::max(s, l.gen + 1);
    return s;
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
    std::vector<Letter> out = letters_;
    for (const auto& l : o.letters_) {
        if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return FreeWord(std::move(out));
}

FreeWord FreeWord::inverse() const {
    std::vector<Letter> out;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(Letter{it->gen, -it->sign});
    return FreeWord(std::move(out));
}

FreeWord FreeWord::power(long long k) const {
    FreeWord base = k < 0 ? inverse() : *this;
    FreeWord out;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) out = out * base;
    return out;
}

FreeWord FreeWord::reduced() const { return FreeWord() * *this; }

long long FreeWord::exponent_sum(int gen) const {
    long long s = 0;
    for (const auto& l : letters_)
        if (l.gen == gen) s += l.sign;
    return s;
}

FreeWord FreeWord::substitute(const std::vector<FreeWord>& images) const {
    FreeWord out;
    for (const auto& l : letters_) {
        if (l.gen >= static_cast<int>(images.size())) throw Error("substitution does not cover x" + std::to_string(l.gen + 1));
        out = out * (l.sign > 0 ? images[l.gen] : images[l.gen].inverse());
    }
    return out;
}

std::string FreeWord::to_string() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << ' ';
        os << (letters_[i].sign > 0 ? 'x' : 'X') << letters_[i].gen + 1;
    }
    return os.str();
}

// ---------------------------------------------------------------- Z[F]

FreeGroupRingElement FreeGroupRingElement::word(const FreeWord& w, const Int& c) {
    FreeGroupRingElement e;
    e.add_term(w, c);
    return e;
}

void FreeGroupRingElement::add_term(const FreeWord& w, const Int& c) {
    if (c == 0) return;
    FreeWord key = w.reduced();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Int FreeGroupRingElement::augmentation() const {
    Int s = 0;
    for (const auto& [w, c] : terms_) s += c;
    return s;
}

FreeGroupRingElement FreeGroupRingElement::operator+(const FreeGroupRingElement& o) const {
    FreeGroupRingElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(w, c);
    return r;
}

FreeGroupRingElement FreeGroupRingElement::operator-(const FreeGroupRingElement& o) const {
    FreeGroupRingElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
    return r;
}

FreeGroupRingElement FreeGroupRingElement::operator*(const FreeGroupRingElement& o) const {
    FreeGroupRingElement r;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) r.add_term(w1 * w2, c1 * c2);
    return r;
}

FreeGroupRingElement FreeGroupRingElement::scaled(const Int& c) const {
    FreeGroupRingElement r;
    for (const auto& [w, v] : terms_) r.add_term(w, v * c);
    return r;
}

std::string FreeGroupRingElement::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c << "*(" << w.to_string() << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------- derivatives

FreeGroupRingElement fox_derivative(const FreeWord& w, int j) {
    if (j < 0) throw Error("Fox derivative index out of range");
    FreeGroupRingElement out;
    std::vector<Letter> prefix;
    for (const auto& l : w.letters()) {
        if (l.gen == j) {
            if (l.sign > 0) {
                out.add_term(FreeWord(prefix), 1);
            } else {
                std::vector<Letter> with = prefix;
                with.push_back(l);
                out.add_term(FreeWord(std::move(with)), -1);
            }
        }
        prefix.push_back(l);
    }
    return out;
}

FreeGroupRingElement fox_derivative(const FreeGroupRingElement& c, int j) {
    FreeGroupRingElement out;
    for (const auto& [w, v] : c.terms()) out = out + fox_derivative(w, j).scaled(v);
    return out;
}

FreeGroupRingElement higher_fox_derivative(const FreeWord& w, const std::vector<int>& indices) {
    if (indices.empty()) throw Error("higher Fox derivative needs a nonempty multi-index");
    FreeGroupRingElement c = FreeGroupRingElement::word(w);
    for (int j : indices) c = fox_derivative(c, j);
    return c;
}

Int magnus_coefficient(const FreeWord& w, const std::vector<int>& sequence) {
    const std::size_t k = sequence.size();
    std::vector<Int> c(k + 1, Int(0));
    c[0] = 1;
    for (const auto& l : w.letters()) {
        std::vector<Int> next(k + 1, Int(0));
        for (std::size_t j = 0; j <= k; ++j) {
            next[j] += c[j];
            // extend by a run of X_gen of length j - i taken from this letter's series
            for (std::size_t i = j; i-- > 0;) {
                if (sequence[i] != l.gen) break;
                const std::size_t len = j - i;
                if (l.sign > 0) {
                    if (len == 1) next[j] += c[i];
                } else {
                    next[j] += (len % 2 ? -c[i] : c[i]);
                }
            }
        }
        c = std::move(next);
    }
    return c[k];
}

Int augmented_fox_derivative(const FreeWord& w, const std::vector<int>& indices) {
    if (indices.empty()) throw Error("higher Fox derivative needs a nonempty multi-index");
    for (int j : indices)
        if (j < 0) throw Error("Fox derivative index out of range");
    return magnus_coefficient(w, std::vector<int>(indices.rbegin(), indices.rend()));
}

GroupElement abelianize_word(const FreeWord& w, const AbelianGroup& H, const std::vector<GroupElement>& assignment) {
    GroupElement g = H.zero();
    for (const auto& l : w.letters()) {
        if (l.gen >= static_cast<int>(assignment.size()))
            throw Error("no image assigned to generator x" + std::to_string(l.gen + 1));
        g = H.add(g, l.sign > 0 ? assignment[l.gen] : H.negate(assignment[l.gen]));
    }
    return g;
}

GroupRingElement abelianize(const FreeGroupRingElement& c, const AbelianGroup& H,
                            const std::vector<GroupElement>& assignment, const Int& modulus) {
    GroupRingElement out(H, modulus);
    for (const auto& [w, v] : c.terms()) out.add_term(abelianize_word(w, H, assignment), v);
    return out;
}

// ---------------------------------------------------------------- presentations

IntMatrix Presentation::abelianized_matrix() const {
    IntMatrix A;
    for (const auto& r : relators) {
        IntVector row(num_generators, Int(0));
        for (const auto& l : r.letters()) {
            if (l.gen >= num_generators) throw Error("relator uses x" + std::to_string(l.gen + 1) + " beyond the generators");
            row[l.gen] += l.sign;
        }
        A.push_back(std::move(row));
    }
    return A;
}

void Presentation::validate() const {
    if (num_generators < 1) throw Error("presentation needs at least one generator");
    if (static_cast<int>(relators.size()) != num_generators - 1)
        throw Error("presentation must have deficiency one: " + std::to_string(num_generators) + " generators but " +
                    std::to_string(relators.size()) + " relators");
    for (std::size_t i = 0; i < relators.size(); ++i)
        if (relators[i].span() > num_generators)
            throw Error("relator " + std::to_string(i + 1) + " uses a generator beyond x" + std::to_string(num_generators));
    if (rank < 1 || rank > num_generators)
        throw Error("rank " + std::to_string(rank) + " out of range 1.." + std::to_string(num_generators));
}

PresentedGroup presented_homology(const Presentation& P) {
    return abelian_group_from_relations(P.abelianized_matrix(), P.num_generators);
}

GroupRingMatrix alexander_matrix(const Presentation& P, const AbelianGroup& H,
                                 const std::vector<GroupElement>& assignment, const Int& modulus) {
    GroupRingMatrix D;
    for (const auto& r : P.relators) {
        std::vector<GroupRingElement> row;
        for (int j = 0; j < P.num_generators; ++j)
            row.push_back(abelianize(fox_derivative(r, j), H, assignment, modulus));
        D.push_back(std::move(row));
    }
    return D;
}

FreeWord expand(const CommutatorExpansion& e) {
    FreeWord w;
    for (const auto& [a, b] : e.pairs) w = w * FreeWord::commutator(a, b);
    if (e.power_exponent != 0)
        for (const auto& g : e.power_words) w = w * g.power(e.power_exponent);
    return w;
}

bool is_nice(const Presentation& P) {
    IntMatrix A = P.abelianized_matrix();
    for (std::size_t i = 0; i < A.size(); ++i)
        for (int c = 0; c < P.num_generators; ++c)
            if (A[i][c] != 0 && (c < P.rank || static_cast<int>(i) < P.rank - 1)) return false;
    return true;
}

namespace {

std::string gen_name(int g) { return "x" + std::to_string(g + 1); }

struct NielsenState {
    int m;
    std::vector<FreeWord> rels;
    std::vector<FreeWord> new_in_old, old_in_new;
    std::vector<std::string> moves;

    long long entry(std::size_t r, int c) const { return rels[r].exponent_sum(c); }

    void substitute_generators(const std::vector<FreeWord>& images) {
        for (auto& r : rels) r = r.substitute(images);
        for (auto& w : old_in_new) w = w.substitute(images);
    }
    std::vector<FreeWord> identity_images() const {
        std::vector<FreeWord> im;
        for (int g = 0; g < m; ++g) im.push_back(FreeWord::generator(g));
        return im;
    }
    // column j += c * column i, realized by x_i -> x_i x_j^c
    void add_column(int j, int i, long long c) {
        if (c == 0) return;
        auto im = identity_images();
        im[i] = FreeWord::generator(i) * FreeWord::generator(j).power(c);
        substitute_generators(im);
        new_in_old[i] = new_in_old[i] * new_in_old[j].power(-c);
        moves.push_back(gen_name(i) + " -> " + im[i].to_string());
    }
    void invert_column(int i) {
        auto im = identity_images();
        im[i] = FreeWord::generator(i, -1);
        substitute_generators(im);
        new_in_old[i] = new_in_old[i].inverse();
        moves.push_back(gen_name(i) + " -> " + im[i].to_string());
    }
    void swap_columns(int i, int j) {
        if (i == j) return;
        auto im = identity_images();
        std::swap(im[i], im[j]);
        substitute_generators(im);
        std::swap(new_in_old[i], new_in_old[j]);
        moves.push_back("swap " + gen_name(i) + " " + gen_name(j));
    }
    // relator i -> relator i * relator k^q
    void add_row(std::size_t i, std::size_t k, long long q) {
        if (q == 0) return;
        rels[i] = rels[i] * rels[k].power(q);
        moves.push_back("r" + std::to_string(i + 1) + " -> r" + std::to_string(i + 1) + " r" + std::to_string(k + 1) +
                        "^" + std::to_string(q));
    }
    void invert_row(std::size_t i) {
        rels[i] = rels[i].inverse();
        moves.push_back("r" + std::to_string(i + 1) + " -> r" + std::to_string(i + 1) + "^-1");
    }
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap(rels[i], rels[j]);
        moves.push_back("swap r" + std::to_string(i + 1) + " r" + std::to_string(j + 1));
    }
};

}  // namespace

NielsenResult nielsen_normalize(const Presentation& P) {
    P.validate();
    const int m = P.num_generators, n = P.rank;
    NielsenState s{m, P.relators, {}, {}, {}};
    for (auto& r : s.rels) r = r.reduced();
    s.new_in_old = s.identity_images();
    s.old_in_new = s.identity_images();
    {
        auto snf = smith_normal_form(P.abelianized_matrix());
        int matrix_rank = 0;
        for (std::size_t i = 0; i < snf.D.size() && i < snf.D[i].size(); ++i)
            if (snf.D[i][i] != 0) ++matrix_rank;
        if (matrix_rank != m - n)
            throw Error("rank deficiency: abelianized relator matrix has rank " + std::to_string(matrix_rank) +
                        " but rank " + std::to_string(n) + " requires " + std::to_string(m - n));
    }
    if (is_nice(P)) {
        NielsenResult out{P, s.new_in_old, s.old_in_new, {}, true};
        return out;
    }
    const std::size_t rows = s.rels.size();

    // column stage: each row gets a single nonzero entry among the unassigned columns
    std::vector<int> pivot_cols;
    std::vector<bool> assigned(m, false);
    for (std::size_t r = 0; r < rows; ++r) {
        for (;;) {
            std::vector<int> nz;
            for (int c = 0; c < m; ++c)
                if (!assigned[c] && s.entry(r, c) != 0) nz.push_back(c);
            if (nz.empty()) break;
            int c0 = nz[0];
            for (int c : nz)
                if (std::llabs(s.entry(r, c)) < std::llabs(s.entry(r, c0))) c0 = c;
            if (nz.size() == 1) {
                assigned[c0] = true;
                pivot_cols.push_back(c0);
                break;
            }
            const long long p = s.entry(r, c0);
            for (int c : nz)
                if (c != c0) s.add_column(c, c0, -(s.entry(r, c) / p));
        }
    }
    if (static_cast<int>(pivot_cols.size()) != m - n)
        throw Error("rank deficiency: abelianized relator matrix has rank " + std::to_string(pivot_cols.size()) +
                    " but rank " + std::to_string(n) + " requires " + std::to_string(m - n));

    // free columns first, pivot columns last in row order
    std::vector<int> order;
    for (int c = 0; c < m; ++c)
        if (!assigned[c]) order.push_back(c);
    order.insert(order.end(), pivot_cols.begin(), pivot_cols.end());
    std::vector<int> pos(m), at(m);
    for (int c = 0; c < m; ++c) pos[c] = at[c] = c;
    for (int t = 0; t < m; ++t) {
        int cur = pos[order[t]];
        if (cur == t) continue;
        s.swap_columns(t, cur);
        int other = at[t];
        std::swap(at[t], at[cur]);
        pos[order[t]] = t;
        pos[other] = cur;
    }

    // row stage: echelon form of the last m-n columns with pivots in rows n-1, n, ...
    std::vector<bool> row_done(rows, false);
    for (int c = 0; c < m - n; ++c) {
        const int col = n + c;
        const std::size_t target = static_cast<std::size_t>(n - 1 + c);
        for (;;) {
            std::vector<std::size_t> nz;
            for (std::size_t r = 0; r < rows; ++r)
                if (!row_done[r] && s.entry(r, col) != 0) nz.push_back(r);
            if (nz.empty()) throw Error("rank deficiency while normalizing relators");
            std::size_t r0 = nz[0];
            for (auto r : nz)
                if (std::llabs(s.entry(r, col)) < std::llabs(s.entry(r0, col))) r0 = r;
            if (nz.size() == 1) {
                s.swap_rows(target, r0);
                if (s.entry(target, col) < 0) s.invert_row(target);
                row_done[target] = true;
                break;
            }
            const long long p = s.entry(r0, col);
            for (auto r : nz)
                if (r != r0) s.add_row(r, r0, -(s.entry(r, col) / p));
        }
    }

    NielsenResult out;
    out.presentation = P;
    out.presentation.relators = s.rels;
    out.presentation.torsion_orders.reset();
    out.new_in_old = s.new_in_old;
    out.old_in_new = s.old_in_new;
    out.moves = s.moves;
    out.identity = s.moves.empty();
    if (!is_nice(out.presentation)) throw Error("internal error: normalization did not reach block form");
    return out;
}

}  // namespace torsionkit
