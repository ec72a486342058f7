#include "torsionkit/report.hpp"

#include <json.hpp>

#include <sstream>

namespace torsionkit {

namespace {

nlohmann::json table_json(const std::optional<TruncatedElement>& x) {
    nlohmann::json t = nlohmann::json::object();
    if (x)
        for (const auto& [k, v] : x->table()) t[k] = v;
    return t;
}

std::vector<std::string> names(const TheoremReport& r) {
    if (r.lhs) return r.lhs->context()->variable_names();
    return {};
}

}  // namespace

std::string report_to_json(const TheoremReport& r, int indent) {
    nlohmann::json j;
    j["mode"] = to_string(r.mode);
    j["truncation_degree"] = r.truncation_degree;
    j["strike"] = r.strike;
    if (r.mode == Mode::mod_r) j["r"] = to_string(r.r);
    if (r.mode == Mode::massey) j["massey_order"] = r.massey_order;
    j["torsion_factor"] = to_string(r.torsion_factor);
    j["determinant"] = r.determinant.to_string("a");
    j["variables"] = names(r);
    j["lhs"] = table_json(r.lhs);
    j["rhs"] = table_json(r.rhs);
    j["verdict"] = to_string(r.verdict);
    j["full_numerator_consistent"] = r.full_consistent;
    if (r.mode == Mode::massey) j["degree_bound_holds"] = r.degree_bound_holds;
    if (r.linking_volume) j["linking_volume"] = to_string(*r.linking_volume);
    j["notes"] = r.notes;
    j["seconds"] = r.seconds;
    return j.dump(indent);
}

std::string report_summary(const TheoremReport& r) {
    std::ostringstream os;
    os << "mode " << to_string(r.mode);
    if (r.mode == Mode::mod_r) os << " (r = " << r.r << ")";
    if (r.mode == Mode::massey) os << " (order " << r.massey_order << ")";
    os << ", strike " << r.strike << ", modulo I^" << r.truncation_degree << "\n";
    os << "determinant: " << r.determinant.to_string("a") << "\n";
    if (r.lhs) os << "fox side:  " << r.lhs->to_string() << "\n";
    if (r.rhs) os << "form side: " << r.rhs->to_string() << "\n";
    os << "verdict: " << to_string(r.verdict) << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace torsionkit
