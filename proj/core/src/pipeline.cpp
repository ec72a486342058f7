#include "torsionkit/pipeline.hpp"

#include <chrono>
#include <functional>

namespace torsionkit {

namespace {

int sign_of(const Int& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

Int parity_sign(int e) { return e % 2 == 0 ? Int(1) : Int(-1); }

void check_strike(int strike, int limit) {
    if (strike < 1 || strike > limit)
        throw Error("strike column " + std::to_string(strike) + " out of range 1.." + std::to_string(limit));
}

void require_rank_two(const NicePresentation& P) {
    if (P.rank() < 2) throw Error("first Betti number 1 is not supported");
}

TruncatedMatrix fox_block(const NicePresentation& P, int rows, int cols, const ContextPtr& ctx) {
    const Int& r = ctx->modulus();
    TruncatedMatrix a;
    for (int i = 0; i < rows; ++i) {
        std::vector<TruncatedElement> row;
        for (int j = 0; j < cols; ++j)
            row.push_back(truncate(abelianize(fox_derivative(P.presentation().relators[i], j), P.homology(),
                                              P.generator_images(), r),
                                   ctx));
        a.push_back(std::move(row));
    }
    return a;
}

TruncatedMatrix strike_column(const TruncatedMatrix& a, int col) {
    TruncatedMatrix out;
    for (const auto& row : a) {
        std::vector<TruncatedElement> r;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (static_cast<int>(j) != col) r.push_back(row[j]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<GroupElement> first_images(const NicePresentation& P, int count) {
    return {P.generator_images().begin(), P.generator_images().begin() + count};
}

TruncatedElement h_minus_one(const NicePresentation& P, int strike, const ContextPtr& ctx) {
    return truncate(P.generator_images()[strike - 1], ctx) - TruncatedElement::one(ctx);
}

void fill_full(TheoremReport& rep, const NicePresentation& P, const ContextPtr& ctx) {
    rep.lhs_full = truncate(torsion_numerator(P, rep.strike, ctx->modulus()), ctx);
    rep.full_consistent = *rep.lhs_full == *rep.lhs;
}

void add_normalization_note(TheoremReport& rep, const NicePresentation& P) {
    if (P.normalization() && !P.normalization()->identity)
        rep.notes.push_back("presentation normalized by " + std::to_string(P.normalization()->moves.size()) +
                            " Nielsen moves");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_expansion(const Presentation& P, int idx, const CommutatorExpansion& e) {
    if (!(expand(e) == P.relators[idx].reduced()))
        throw Error("expansion does not reduce to relator " + std::to_string(idx + 1));
}

}  // namespace

NicePresentation NicePresentation::from_file(const PresentationFile& file) {
    NicePresentation out;
    const Presentation& in = file.presentation;
    in.validate();
    out.expansions_.assign(in.relators.size(), std::nullopt);
    if (is_nice(in)) {
        out.presentation_ = in;
        for (const auto& [idx, e] : file.expansions) {
            if (idx < 0 || idx >= static_cast<int>(in.relators.size())) throw Error("expansion index out of range");
            check_expansion(in, idx, e);
            out.expansions_[idx] = e;
        }
        out.linking_ = file.linking;
    } else {
        NielsenResult N = nielsen_normalize(in);
        out.presentation_ = N.presentation;
        out.normalization_ = std::move(N);
    }
    const int m = out.presentation_.num_generators, n = out.presentation_.rank;
    out.homology_ = presented_homology(out.presentation_);
    IntMatrix A = out.presentation_.abelianized_matrix();
    out.v_.assign(m - n, IntVector(m - n));
    for (int i = 0; i < m - n; ++i)
        for (int j = 0; j < m - n; ++j) out.v_[i][j] = A[n - 1 + i][n + j];
    if (out.homology_.group.free_rank() != n)
        throw Error("declared rank " + std::to_string(n) + " but H_1 has free rank " +
                    std::to_string(out.homology_.group.free_rank()));
    if (in.torsion_orders) {
        AbelianGroup declared = AbelianGroup::from_orders(0, *in.torsion_orders);
        if (declared.torsion_orders() != out.homology_.group.torsion_orders())
            throw Error("declared torsion " + declared.to_string() + " differs from the computed torsion " +
                        AbelianGroup(0, out.homology_.group.torsion_orders()).to_string());
    }
    for (const auto& l : out.linking_)
        if (l.generator < n || l.relative < n - 1)
            throw Error("linking entries must pair torsion generators with relative classes");
    return out;
}

Int NicePresentation::torsion_order() const { return abs(determinant(v_)); }

NicePresentation load_nice_presentation(const std::string& path) {
    return NicePresentation::from_file(load_presentation(path));
}

NicePresentation parse_nice_presentation(const std::string& text) {
    return NicePresentation::from_file(parse_presentation(text));
}

std::vector<std::vector<Int>> cup_form_row(const CommutatorExpansion& e, int n, const Int& r, bool include_even_term) {
    std::vector<std::vector<Int>> row(n, std::vector<Int>(n, Int(0)));
    for (const auto& [a, b] : e.pairs)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                row[j][p] += Int(a.exponent_sum(p)) * b.exponent_sum(j) - Int(b.exponent_sum(p)) * a.exponent_sum(j);
    if (e.power_exponent != 0 && !e.power_words.empty()) {
        if (r == 0) throw Error("a power block needs coefficients in Z/r");
        if (e.power_exponent % r != 0)
            throw Error("expansion exponent " + std::to_string(e.power_exponent) + " is not a multiple of r = " +
                        to_string(r));
        if (r % 2 == 0 && include_even_term) {
            const Int q = e.power_exponent / r;
            for (const auto& g : e.power_words)
                for (int j = 0; j < n; ++j)
                    for (int p = 0; p < n; ++p)
                        row[j][p] += (r / 2) * q * g.exponent_sum(j) * q * g.exponent_sum(p);
        }
    }
    for (auto& rr : row)
        for (auto& c : rr) c = reduce(c, r);
    return row;
}

AlternatingForm cup_form_from_expansions(const NicePresentation& P) {
    const int n = P.rank();
    AlternatingForm::Table t;
    for (int i = 0; i < n - 1; ++i) {
        if (!P.expansion(i)) throw Error("missing expansion for relator " + std::to_string(i + 1));
        t.push_back(cup_form_row(*P.expansion(i), n));
    }
    return AlternatingForm(n, std::move(t));
}

AlternatingForm cup_form(const NicePresentation& P) {
    require_rank_two(P);
    for (int i = 0; i < P.rank() - 1; ++i)
        if (!P.expansion(i)) {
            MasseyForm f = massey_form_from_higher_fox(P, 1);
            const int n = P.rank();
            AlternatingForm::Table t(n - 1, std::vector<std::vector<Int>>(n, std::vector<Int>(n)));
            for (int a = 0; a < n - 1; ++a)
                for (int j = 0; j < n; ++j)
                    for (int p = 0; p < n; ++p) t[a][j][p] = f.at(a, j, {p});
            return AlternatingForm(n, std::move(t));
        }
    return cup_form_from_expansions(P);
}

MasseyForm massey_form_from_higher_fox(const NicePresentation& P, int order) {
    require_rank_two(P);
    if (order < 1) throw Error("Massey order must be at least 1");
    const int n = P.rank(), m = P.num_generators();
    const auto& rels = P.presentation().relators;
    std::vector<int> seq;
    std::function<void(int, int)> vanish = [&](int i, int len) {
        if (!seq.empty() && magnus_coefficient(rels[i], seq) != 0)
            throw Error("relator " + std::to_string(i + 1) + " has a nonzero augmented derivative of order " +
                        std::to_string(seq.size()) + "; the order " + std::to_string(order) +
                        " hypothesis fails");
        if (static_cast<int>(seq.size()) == len) return;
        for (int g = 0; g < m; ++g) {
            seq.push_back(g);
            vanish(i, len);
            seq.pop_back();
        }
    };
    for (int i = 0; i < n - 1; ++i) vanish(i, order);

    MasseyTable t = MasseyTable::zero(order, n);
    std::vector<int> idx(order, 0);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n; ++j) {
            std::fill(idx.begin(), idx.end(), 0);
            for (;;) {
                std::vector<int> path{j};
                path.insert(path.end(), idx.rbegin(), idx.rend());
                t.at(i, j, idx) = augmented_fox_derivative(rels[i], path);
                int k = order - 1;
                while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
                if (k < 0) break;
            }
        }
    return MasseyForm(std::move(t));
}

ModRStructure mod_r_structure(const NicePresentation& P, const Int& r) {
    auto [p, s] = prime_power(r);
    if (p == 0) throw Error("r = " + to_string(r) + " is not a prime power");
    ModRStructure out{r, p, 0, P.rank(), 1};
    const IntMatrix& v = P.torsion_matrix();
    const int t = static_cast<int>(v.size());
    int k = 0;
    for (; k < t; ++k) {
        bool isolated = true;
        for (int l = 0; l < t; ++l)
            if (l != k && (v[k][l] != 0 || v[l][k] != 0)) isolated = false;
        const Int& d = v[k][k];
        if (!isolated || d % p != 0) break;
        if (d <= 0 || prime_power(d).first != p || d % r != 0 || (k > 0 && d < v[k - 1][k - 1]))
            throw Error("torsion generator x" + std::to_string(P.rank() + k + 1) + " of order " + to_string(d) +
                        " does not fit a nondecreasing diagonal block of powers of " + to_string(p) +
                        " divisible by " + to_string(r));
    }
    IntMatrix rest(t - k, IntVector(t - k));
    for (int i = k; i < t; ++i)
        for (int j = k; j < t; ++j) rest[i - k][j - k] = v[i][j];
    Int dr = abs(determinant(rest));
    if (dr % p == 0)
        throw Error("the " + to_string(p) + "-torsion is not a diagonal block at the top of v; normalize the "
                    "presentation for r = " + to_string(r));
    out.block_size = k;
    out.b = P.rank() + k;
    out.coprime_torsion = dr;
    return out;
}

AlternatingForm mod_r_cup_form(const NicePresentation& P, const Int& r, bool include_even_term) {
    ModRStructure s = mod_r_structure(P, r);
    if (s.b < 2) throw Error("H/r has rank 1");
    AlternatingForm::Table t;
    for (int i = 0; i < s.b - 1; ++i) {
        if (!P.expansion(i)) throw Error("missing expansion for relator " + std::to_string(i + 1));
        t.push_back(cup_form_row(*P.expansion(i), s.b, r, include_even_term));
    }
    return AlternatingForm(s.b, std::move(t), r);
}

LinkingForm block_linking_form(const NicePresentation& P, const ModRStructure& s) {
    const int n = P.rank(), t = s.block_size;
    std::vector<long long> orders;
    for (int k = 0; k < t; ++k) orders.push_back(to_ll(P.torsion_matrix()[k][k]));
    AbelianGroup G(0, orders);
    std::vector<std::vector<Rational>> table(t, std::vector<Rational>(t, Rational(0)));
    bool explicit_entries = false;
    for (const auto& l : P.linking()) {
        const int k = l.generator - n, j = l.relative - (n - 1);
        if (k < 0 || k >= t || j < 0 || j >= t) continue;
        explicit_entries = true;
        table[k][j] = l.value;
    }
    if (!explicit_entries)
        for (int k = 0; k < t; ++k) table[k][k] = Rational(Int(1), Int(orders[k]));
    return LinkingForm(G, G, table);
}

GroupRingElement torsion_numerator(const NicePresentation& P, int strike, const Int& modulus) {
    const int m = P.num_generators();
    check_strike(strike, m);
    GroupRingMatrix D = alexander_matrix(P.presentation(), P.homology(), P.generator_images(), modulus);
    for (auto& row : D) row.erase(row.begin() + (strike - 1));
    const Int sign = parity_sign(strike) * sign_of(determinant(P.torsion_matrix()));
    return matrix_determinant(D).scaled(sign);
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::integral: return "integral";
        case Mode::mod_r: return "modr";
        case Mode::massey: return "massey";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::equal: return "equal";
        case Verdict::equal_up_to_sign: return "equal up to sign";
        case Verdict::unequal: return "unequal";
    }
    return "?";
}

Verdict compare(const TruncatedElement& lhs, const TruncatedElement& rhs) {
    if (lhs == rhs) return Verdict::equal;
    if (lhs == -rhs) return Verdict::equal_up_to_sign;
    return Verdict::unequal;
}

TheoremReport check_integral_theorem(const NicePresentation& P, const CheckOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    require_rank_two(P);
    const int n = P.rank();
    check_strike(opt.strike, n);
    TheoremReport rep;
    rep.mode = Mode::integral;
    rep.strike = opt.strike;
    rep.truncation_degree = n;
    rep.torsion_factor = P.torsion_order();
    ContextPtr ctx = build_truncation_context(P.homology(), n, 0);

    TruncatedMatrix a = strike_column(fox_block(P, n - 1, n, ctx), opt.strike - 1);
    rep.lhs = matrix_determinant(a, ctx).scaled(parity_sign(opt.strike) * rep.torsion_factor);

    rep.determinant = sign_refine(form_determinant(cup_form(P)), opt.orientation_sign);
    rep.rhs = h_minus_one(P, opt.strike, ctx) * q_map(rep.determinant, ctx, first_images(P, n));
    rep.verdict = compare(*rep.lhs, *rep.rhs);
    fill_full(rep, P, ctx);
    add_normalization_note(rep, P);
    rep.seconds = seconds_since(t0);
    return rep;
}

TheoremReport check_massey_theorem(const NicePresentation& P, const CheckOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    require_rank_two(P);
    const int n = P.rank(), m = opt.massey_order;
    check_strike(opt.strike, n);
    TheoremReport rep;
    rep.mode = Mode::massey;
    rep.strike = opt.strike;
    rep.massey_order = m;
    rep.truncation_degree = m * (n - 1) + 1;
    rep.torsion_factor = P.torsion_order();
    MasseyForm f = massey_form_from_higher_fox(P, m);
    ContextPtr ctx = build_truncation_context(P.homology(), rep.truncation_degree, 0);

    TruncatedMatrix a = strike_column(fox_block(P, n - 1, n, ctx), opt.strike - 1);
    TruncatedElement det_a = matrix_determinant(a, ctx);
    rep.degree_bound_holds = det_a.in_ideal_power(m * (n - 1));
    if (!rep.degree_bound_holds) rep.notes.push_back("det a(s) is not in the expected augmentation ideal power");
    rep.lhs = det_a.scaled(parity_sign(opt.strike) * rep.torsion_factor);

    rep.determinant = sign_refine(massey_determinant(f), opt.orientation_sign);
    rep.rhs = h_minus_one(P, opt.strike, ctx) * q_map(rep.determinant, ctx, first_images(P, n));
    rep.verdict = compare(*rep.lhs, *rep.rhs);
    fill_full(rep, P, ctx);
    add_normalization_note(rep, P);
    rep.seconds = seconds_since(t0);
    return rep;
}

TheoremReport check_mod_r_theorem(const NicePresentation& P, const CheckOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    require_rank_two(P);
    if (opt.r < 2) throw Error("mod-r check needs r >= 2");
    ModRStructure s = mod_r_structure(P, opt.r);
    const bool even = opt.r % 2 == 0 && opt.include_even_term;
    check_strike(opt.strike, even ? P.rank() : s.b);
    TheoremReport rep;
    rep.mode = Mode::mod_r;
    rep.strike = opt.strike;
    rep.r = opt.r;
    rep.truncation_degree = s.b;
    rep.torsion_factor = s.coprime_torsion;
    ContextPtr ctx = build_truncation_context(P.homology(), s.b, opt.r);

    TruncatedMatrix a = strike_column(fox_block(P, s.b - 1, s.b, ctx), opt.strike - 1);
    rep.lhs = matrix_determinant(a, ctx).scaled(parity_sign(opt.strike) * rep.torsion_factor);

    AlternatingForm f = mod_r_cup_form(P, opt.r, opt.include_even_term);
    // for even r the form is skew but not alternate; its determinant lives modulo (r/2) a_t^2 on the block
    std::vector<int> half_squares;
    if (even)
        for (int k = 0; k < s.block_size; ++k)
            if (P.torsion_matrix()[k][k] == opt.r) half_squares.push_back(P.rank() + k);
    MultiPoly d = strike_determinant(theta_matrix(f), opt.strike - 1, half_squares);
    LinkingForm L = block_linking_form(P, s);
    if (s.block_size > 0) rep.linking_volume = linking_volume_form(L, opt.r).value();
    PairedVolumeForm mu = canonical_cohomology_form(P.rank(), P.rank() - 1, opt.orientation_sign, L, opt.r);
    if (!mu.is_nondegenerate()) throw Error("the linking form on the p-block is degenerate mod r");
    rep.determinant = refined_determinant(d, mu);
    rep.rhs = (h_minus_one(P, opt.strike, ctx) * q_r_map(rep.determinant, ctx, first_images(P, s.b)))
                  .scaled(rep.torsion_factor);
    rep.verdict = compare(*rep.lhs, *rep.rhs);
    fill_full(rep, P, ctx);
    add_normalization_note(rep, P);
    if (opt.r % 2 == 0 && !opt.include_even_term) rep.notes.push_back("even-r correction term disabled");
    rep.seconds = seconds_since(t0);
    return rep;
}

bool check_fox_cup_congruence(const CommutatorExpansion& e, int j, int n, const Int& r, bool include_even_term) {
    if (j < 0 || j >= n) throw Error("generator index out of range");
    const FreeWord w = expand(e);
    if (w.span() > n) throw Error("expansion uses more than " + std::to_string(n) + " generators");
    for (int c = 0; c < n; ++c)
        if (reduce(Int(w.exponent_sum(c)), r) != 0)
            throw Error("expansion does not abelianize to zero in the coefficient ring");
    AbelianGroup G(n, {});
    std::vector<GroupElement> images;
    for (int c = 0; c < n; ++c) images.push_back(G.free_generator(c));
    ContextPtr ctx = build_truncation_context(G, 2, r);
    TruncatedElement lhs = truncate(abelianize(fox_derivative(w, j), G, images, r), ctx);
    auto row = cup_form_row(e, n, r, include_even_term);
    TruncatedElement rhs = TruncatedElement::zero(ctx);
    for (int p = 0; p < n; ++p)
        rhs = rhs + (truncate(images[p], ctx) - TruncatedElement::one(ctx)).scaled(row[j][p]);
    return lhs == rhs;
}

}  // namespace torsionkit
