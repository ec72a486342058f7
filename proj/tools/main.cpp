#include "torsionkit/fixtures.hpp"
#include "torsionkit/pipeline.hpp"
#include "torsionkit/report.hpp"
#include "torsionkit/sampler.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace torsionkit;

namespace {

constexpr int kExitEqual = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUnequal = 2;

struct CheckArgs {
    std::string input;
    std::string mode;
    long long r = 0;
    int m = 2;
    int strike = 1;
    std::string json;
    bool omit_even_term = false;
};

int run_check(const CheckArgs& a) {
    NicePresentation P = load_nice_presentation(a.input);
    CheckOptions opt;
    opt.strike = a.strike;
    opt.r = a.r;
    opt.massey_order = a.m;
    opt.include_even_term = !a.omit_even_term;
    TheoremReport rep;
    if (a.mode == "integral") {
        rep = check_integral_theorem(P, opt);
    } else if (a.mode == "modr") {
        if (a.r < 2) throw Error("--mode modr needs --r");
        rep = check_mod_r_theorem(P, opt);
    } else {
        rep = check_massey_theorem(P, opt);
    }
    const std::string json = report_to_json(rep);
    if (a.json.empty() || a.json == "-") {
        std::cout << json << "\n";
    } else {
        std::ofstream out(a.json);
        if (!out) throw Error("cannot write " + a.json);
        out << json << "\n";
        std::cout << report_summary(rep);
    }
    return rep.verdict == Verdict::equal ? kExitEqual : kExitUnequal;
}

void print_table(const PolyMatrix& theta) {
    for (const auto& row : theta) {
        std::cout << " ";
        for (const auto& e : row) std::cout << "  " << e.to_string("a");
        std::cout << "\n";
    }
}

int run_det_form(const std::string& input, int order) {
    NicePresentation P = load_nice_presentation(input);
    if (order <= 1) {
        AlternatingForm f = cup_form(P);
        std::cout << "theta:\n";
        print_table(theta_matrix(f));
        std::cout << "d = " << form_determinant(f).to_string("a") << "\n";
    } else {
        MasseyForm f = massey_form_from_higher_fox(P, order);
        std::cout << "theta (order " << order << "):\n";
        print_table(massey_theta(f));
        std::cout << "d = " << massey_determinant(f).to_string("a") << "\n";
    }
    return kExitEqual;
}

int run_fox(const std::string& input, int relator, int var) {
    NicePresentation P = load_nice_presentation(input);
    const auto& rels = P.presentation().relators;
    if (relator < 1 || relator > static_cast<int>(rels.size())) throw Error("relator index out of range");
    if (var < 1 || var > P.num_generators()) throw Error("generator index out of range");
    FreeGroupRingElement d = fox_derivative(rels[relator - 1], var - 1);
    std::cout << "free:       " << d.to_string() << "\n";
    std::cout << "abelianized: " << abelianize(d, P.homology(), P.generator_images()).to_string() << "\n";
    return kExitEqual;
}

int run_selftest() {
    int failures = 0;
    auto line = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    NicePresentation hopf = parse_nice_presentation(hopf_fixture());
    line("hopf integral", check_integral_theorem(hopf).verdict == Verdict::equal);
    NicePresentation borromean = parse_nice_presentation(borromean_fixture());
    CheckOptions massey;
    massey.massey_order = 2;
    line("borromean massey order 2", check_massey_theorem(borromean, massey).verdict == Verdict::equal);

    std::mt19937_64 rng(20261016);
    bool ok = true;
    for (int k = 0; k < 5; ++k)
        ok = ok && check_integral_theorem(NicePresentation::from_file(sample_integral_presentation(rng, 3, {2})))
                           .verdict == Verdict::equal;
    line("synthetic integral", ok);
    ok = true;
    for (long long r : {2, 3}) {
        CheckOptions o;
        o.r = r;
        ok = ok && check_mod_r_theorem(NicePresentation::from_file(sample_mod_r_presentation(rng, r, 2, 1, {})), o)
                           .verdict == Verdict::equal;
    }
    line("synthetic mod r", ok);
    return failures == 0 ? kExitEqual : kExitUnequal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Torsion versus cohomology determinant checks for nice presentations"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "compare the Fox-side torsion with the form determinant");
    c->add_option("--input", check.input, "presentation file")->required()->check(CLI::ExistingFile);
    c->add_option("--mode", check.mode, "integral, modr or massey")
        ->required()
        ->check(CLI::IsMember({"integral", "modr", "massey"}));
    c->add_option("--r", check.r, "coefficient modulus for modr (a prime power)");
    c->add_option("--m", check.m, "Massey order")->check(CLI::PositiveNumber);
    c->add_option("--strike", check.strike, "struck column, 1-based");
    c->add_option("--json", check.json, "write the JSON report here ('-' for stdout)");
    c->add_flag("--omit-even-term", check.omit_even_term, "drop the r/2 correction for even r");

    std::string det_input;
    int det_order = 1;
    auto* d = app.add_subcommand("det-form", "print the form and its determinant");
    d->add_option("--input", det_input, "presentation file")->required()->check(CLI::ExistingFile);
    d->add_option("--m", det_order, "Massey order (1 for the cup form)")->check(CLI::PositiveNumber);

    std::string fox_input;
    int fox_relator = 1, fox_var = 1;
    auto* f = app.add_subcommand("fox", "print a Fox derivative of a relator");
    f->add_option("--input", fox_input, "presentation file")->required()->check(CLI::ExistingFile);
    f->add_option("--relator", fox_relator, "relator index, 1-based")->required();
    f->add_option("--var", fox_var, "generator index, 1-based")->required();

    auto* s = app.add_subcommand("selftest", "run the bundled examples and a few synthetic checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (c->parsed()) return run_check(check);
        if (d->parsed()) return run_det_form(det_input, det_order);
        if (f->parsed()) return run_fox(fox_input, fox_relator, fox_var);
        if (s->parsed()) return run_selftest();
    } catch (const ParseError& e) {
        std::string file = c->parsed() ? check.input : d->parsed() ? det_input : fox_input;
        std::cerr << "error: " << file << ": " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
