#include "torsionkit/polynomial.hpp"

#include <numeric>
#include <sstream>

namespace torsionkit {

MultiPoly::MultiPoly(int num_vars, Int modulus) : num_vars_(num_vars), modulus_(std::move(modulus)) {
    if (num_vars_ < 0) throw Error("MultiPoly: negative variable count");
    if (modulus_ < 0) throw Error("MultiPoly: negative modulus");
}

MultiPoly MultiPoly::constant(int num_vars, const Int& c, const Int& modulus) {
    MultiPoly p(num_vars, modulus);
    p.add_term(Monomial(num_vars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int num_vars, int i, const Int& modulus) {
    if (i < 0 || i >= num_vars) throw Error("MultiPoly: variable index out of range");
    Monomial m(num_vars, 0);
    m[i] = 1;
    MultiPoly p(num_vars, modulus);
    p.add_term(m, 1);
    return p;
}

MultiPoly MultiPoly::monomial(const Monomial& exps, const Int& c, const Int& modulus) {
    MultiPoly p(static_cast<int>(exps.size()), modulus);
    p.add_term(exps, c);
    return p;
}

void MultiPoly::add_term(const Monomial& m, const Int& c) {
    if (static_cast<int>(m.size()) != num_vars_) throw Error("MultiPoly: monomial has wrong length");
    for (int e : m)
        if (e < 0) throw Error("MultiPoly: negative exponent");
    auto it = terms_.find(m);
    Int v = reduce((it == terms_.end() ? Int(0) : it->second) + c, modulus_);
    if (v == 0) {
        if (it != terms_.end()) terms_.erase(it);
    } else if (it == terms_.end()) {
        terms_.emplace(m, v);
    } else {
        it->second = v;
    }
}

Int MultiPoly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Int(0) : it->second;
}

bool MultiPoly::is_homogeneous() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        int dm = std::accumulate(m.begin(), m.end(), 0);
        if (d >= 0 && dm != d) return false;
        d = dm;
    }
    return true;
}

int MultiPoly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
    return d;
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
    if (num_vars_ != o.num_vars_ || modulus_ != o.modulus_)
        throw Error("MultiPoly: incompatible operands");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r(num_vars_, modulus_);
    Monomial prod(num_vars_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            for (int v = 0; v < num_vars_; ++v) prod[v] = m1[v] + m2[v];
            r.add_term(prod, c1 * c2);
        }
    return r;
}

MultiPoly MultiPoly::operator-() const { return scaled(-1); }

MultiPoly MultiPoly::scaled(const Int& c) const {
    MultiPoly r(num_vars_, modulus_);
    for (const auto& [m, v] : terms_) r.add_term(m, v * c);
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    return num_vars_ == o.num_vars_ && modulus_ == o.modulus_ && terms_ == o.terms_;
}

MultiPoly MultiPoly::divide_by_variable(int i) const {
    if (i < 0 || i >= num_vars_) throw Error("MultiPoly: variable index out of range");
    MultiPoly r(num_vars_, modulus_);
    for (const auto& [m, c] : terms_) {
        if (m[i] == 0)
            throw Error("inexact division by a" + std::to_string(i + 1) + "*: remainder term " +
                        monomial_key(m, {}) + " with coefficient " + torsionkit::to_string(c));
        Monomial q = m;
        --q[i];
        r.add_term(q, c);
    }
    return r;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
    if (static_cast<int>(images.size()) != num_vars_) throw Error("MultiPoly: substitution has wrong arity");
    if (images.empty()) return *this;
    const int nv = images[0].num_vars();
    MultiPoly result(nv, modulus_);
    for (const auto& [m, c] : terms_) {
        MultiPoly term = constant(nv, c, modulus_);
        for (int v = 0; v < num_vars_; ++v)
            for (int e = 0; e < m[v]; ++e) term = term * images[v];
        result = result + term;
    }
    return result;
}

MultiPoly MultiPoly::reduce_mod(const Int& r) const {
    MultiPoly out(num_vars_, r);
    for (const auto& [m, c] : terms_) out.add_term(m, c);
    return out;
}

std::string monomial_key(const Monomial& m, const std::vector<std::string>& names) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t v = 0; v < m.size(); ++v) {
        if (m[v] == 0) continue;
        if (any) os << "*";
        os << (v < names.size() ? names[v] : "v" + std::to_string(v + 1));
        if (m[v] > 1) os << "^" << m[v];
        any = true;
    }
    return any ? os.str() : "1";
}

std::string MultiPoly::to_string(const std::string& prefix) const {
    if (terms_.empty()) return "0";
    std::vector<std::string> names;
    for (int v = 0; v < num_vars_; ++v) names.push_back(prefix + std::to_string(v + 1));
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Int a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        } else if (a < 0) {
            os << "-";
            a = -a;
        }
        std::string key = monomial_key(m, names);
        if (key == "1")
            os << a;
        else if (a == 1)
            os << key;
        else
            os << a << "*" << key;
        first = false;
    }
    return os.str();
}

}  // namespace torsionkit
