#pragma once

#include <string>

namespace torsionkit {

// Bundled presentations: Hopf link (closure of s1^2) and Borromean rings (closure of (s1 s2^-1)^3).
const std::string& hopf_fixture();
const std::string& borromean_fixture();

}  // namespace torsionkit
