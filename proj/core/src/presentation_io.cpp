#include "torsionkit/presentation_io.hpp"

#include <fstream>
#include <sstream>

namespace torsionkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long long parse_integer(const std::string& tok, int line, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer for " + what + ", got '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line, "expected an integer for " + what + ", got '" + tok + "'");
    return v;
}

FreeWord parse_word(const std::string& text, int line) {
    try {
        return FreeWord::parse(text);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

// Contents of key=[...] in s, or nullopt when the key is absent.
std::optional<std::string> bracket_field(const std::string& s, const std::string& key, int line) {
    auto pos = s.find(key + "=");
    if (pos == std::string::npos) return std::nullopt;
    auto open = pos + key.size() + 1;
    if (open >= s.size() || s[open] != '[') throw ParseError(line, key + "= must be followed by '['");
    auto close = s.find(']', open);
    if (close == std::string::npos) throw ParseError(line, "missing ']' after " + key + "=");
    return s.substr(open + 1, close - open - 1);
}

CommutatorExpansion parse_expansion_body(const std::string& body, int line) {
    CommutatorExpansion e;
    if (auto pairs = bracket_field(body, "pairs", line)) {
        for (const auto& raw : split(*pairs, ';')) {
            std::string item = trim(raw);
            if (item.empty()) continue;
            if (item.front() != '(' || item.back() != ')')
                throw ParseError(line, "commutator pair must look like (word,word): '" + item + "'");
            auto parts = split(item.substr(1, item.size() - 2), ',');
            if (parts.size() != 2) throw ParseError(line, "commutator pair needs exactly two words: '" + item + "'");
            e.pairs.emplace_back(parse_word(parts[0], line), parse_word(parts[1], line));
        }
    }
    if (auto powers = bracket_field(body, "powers", line)) {
        for (const auto& raw : split(*powers, ';')) {
            std::string item = trim(raw);
            if (item.empty()) continue;
            e.power_words.push_back(parse_word(item, line));
        }
    }
    auto pos = body.find("exponent=");
    if (pos != std::string::npos) {
        std::istringstream is(body.substr(pos + 9));
        std::string tok;
        is >> tok;
        e.power_exponent = parse_integer(tok, line, "exponent");
        if (e.power_exponent < 0) throw ParseError(line, "exponent must be nonnegative");
    }
    std::string rest = body;
    for (const char* key : {"pairs", "powers"})
        if (auto p = rest.find(std::string(key) + "=["); p != std::string::npos) rest.erase(p, rest.find(']', p) - p + 1);
    if (auto p = rest.find("exponent="); p != std::string::npos) {
        auto end = rest.find_first_of(" \t", p);
        rest.erase(p, end == std::string::npos ? std::string::npos : end - p);
    }
    if (!trim(rest).empty()) throw ParseError(line, "unexpected text in expansion: '" + trim(rest) + "'");
    return e;
}

}  // namespace

PresentationFile parse_presentation(const std::string& text) {
    PresentationFile out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    int generators_line = 0, rank_line = 0;
    std::vector<std::pair<int, FreeWord>> relators;
    std::vector<std::pair<int, std::pair<int, CommutatorExpansion>>> expansions;
    std::vector<std::pair<int, LinkingEntry>> linking;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;
        std::istringstream ls(s);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);
        if (key == "generators") {
            if (generators_line) throw ParseError(line, "duplicate 'generators' line");
            out.presentation.num_generators = static_cast<int>(parse_integer(rest, line, "generators"));
            if (out.presentation.num_generators < 1) throw ParseError(line, "need at least one generator");
            generators_line = line;
        } else if (key == "rank") {
            if (rank_line) throw ParseError(line, "duplicate 'rank' line");
            out.presentation.rank = static_cast<int>(parse_integer(rest, line, "rank"));
            rank_line = line;
        } else if (key == "torsion") {
            std::vector<long long> t;
            std::istringstream ts(rest);
            std::string tok;
            while (ts >> tok) {
                long long d = parse_integer(tok, line, "torsion order");
                if (d < 2) throw ParseError(line, "torsion orders must be at least 2");
                t.push_back(d);
            }
            out.presentation.torsion_orders = t;
        } else if (key == "relator") {
            relators.emplace_back(line, parse_word(rest, line));
        } else if (key == "expansion") {
            auto colon = rest.find(':');
            if (colon == std::string::npos) throw ParseError(line, "expansion needs '<index>:'");
            int idx = static_cast<int>(parse_integer(trim(rest.substr(0, colon)), line, "expansion index"));
            expansions.emplace_back(line, std::make_pair(idx, parse_expansion_body(rest.substr(colon + 1), line)));
        } else if (key == "linking") {
            std::istringstream ts(rest);
            std::string a, b, q, extra;
            if (!(ts >> a >> b >> q) || (ts >> extra)) throw ParseError(line, "linking needs '<i> <j> <num>/<den>'");
            int i = static_cast<int>(parse_integer(a, line, "linking generator index"));
            int j = static_cast<int>(parse_integer(b, line, "linking relative index"));
            auto slash = q.find('/');
            Int num = parse_integer(q.substr(0, slash), line, "linking numerator");
            Int den = slash == std::string::npos ? Int(1) : Int(parse_integer(q.substr(slash + 1), line, "linking denominator"));
            if (den == 0) throw ParseError(line, "linking denominator is zero");
            linking.emplace_back(line, LinkingEntry{i - 1, j - 1, Rational(num, den)});
        } else {
            throw ParseError(line, "unknown directive '" + key + "'");
        }
    }
    if (!generators_line) throw ParseError(line, "missing 'generators' line");
    if (!rank_line) throw ParseError(line, "missing 'rank' line");
    const int m = out.presentation.num_generators;
    if (out.presentation.rank < 1 || out.presentation.rank > m)
        throw ParseError(rank_line, "rank must lie between 1 and the number of generators");
    for (const auto& [l, w] : relators) {
        if (w.span() > m) throw ParseError(l, "relator uses a generator beyond x" + std::to_string(m));
        out.presentation.relators.push_back(w);
    }
    if (static_cast<int>(relators.size()) != m - 1)
        throw ParseError(relators.empty() ? generators_line : relators.back().first,
                         "expected " + std::to_string(m - 1) + " relators, found " + std::to_string(relators.size()));
    for (auto& [l, ie] : expansions) {
        auto& [idx, e] = ie;
        if (idx < 1 || idx > m - 1) throw ParseError(l, "expansion index out of range");
        if (out.expansions.count(idx - 1)) throw ParseError(l, "duplicate expansion for relator " + std::to_string(idx));
        FreeWord ex = expand(e);
        for (const auto& [a, b] : e.pairs)
            if (a.span() > m || b.span() > m) throw ParseError(l, "expansion uses a generator beyond x" + std::to_string(m));
        for (const auto& g : e.power_words)
            if (g.span() > m) throw ParseError(l, "expansion uses a generator beyond x" + std::to_string(m));
        if (!(ex == out.presentation.relators[idx - 1].reduced()))
            throw ParseError(l, "expansion does not reduce to relator " + std::to_string(idx) + " (got " + ex.to_string() + ")");
        out.expansions.emplace(idx - 1, e);
    }
    for (const auto& [l, e] : linking) {
        if (e.generator < 0 || e.generator >= m) throw ParseError(l, "linking generator index out of range");
        if (e.relative < 0 || e.relative >= m - 1) throw ParseError(l, "linking relative index out of range");
        out.linking.push_back(e);
    }
    return out;
}

PresentationFile load_presentation(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_presentation(ss.str());
}

std::string format_presentation(const PresentationFile& file) {
    std::ostringstream os;
    const auto& P = file.presentation;
    os << "generators " << P.num_generators << "\n";
    os << "rank " << P.rank << "\n";
    if (P.torsion_orders && !P.torsion_orders->empty()) {
        os << "torsion";
        for (auto d : *P.torsion_orders) os << ' ' << d;
        os << "\n";
    }
    for (const auto& r : P.relators) os << "relator " << r.to_string() << "\n";
    for (const auto& [idx, e] : file.expansions) {
        os << "expansion " << idx + 1 << ": pairs=[";
        for (std::size_t k = 0; k < e.pairs.size(); ++k)
            os << (k ? ";" : "") << "(" << e.pairs[k].first.to_string() << "," << e.pairs[k].second.to_string() << ")";
        os << "] powers=[";
        for (std::size_t k = 0; k < e.power_words.size(); ++k) os << (k ? ";" : "") << e.power_words[k].to_string();
        os << "] exponent=" << e.power_exponent << "\n";
    }
    for (const auto& l : file.linking)
        os << "linking " << l.generator + 1 << ' ' << l.relative + 1 << ' ' << numerator(l.value) << '/'
           << denominator(l.value) << "\n";
    return os.str();
}

}  // namespace torsionkit
