#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace torsionkit {

using Int = boost::multiprecision::cpp_int;
using IntVector = std::vector<Int>;
using IntMatrix = std::vector<IntVector>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for malformed textual input; carries a 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

// Modulus 0 means the integers; otherwise coefficients live in Z/modulus.
Int reduce(const Int& x, const Int& modulus);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
// Returns g = gcd(a, b) >= 0 and sets s, t with s*a + t*b = g.
Int extended_gcd(const Int& a, const Int& b, Int& s, Int& t);
// Throws if x is not a unit.
Int inverse(const Int& x, const Int& modulus);
bool is_unit(const Int& x, const Int& modulus);
bool is_prime(const Int& p);
// Returns (p, s) when n = p^s with s >= 1, otherwise p = 0.
std::pair<Int, int> prime_power(const Int& n);
int valuation(Int n, const Int& p);
long long to_ll(const Int& x);
std::string to_string(const Int& x);

IntMatrix identity_matrix(std::size_t n);
IntMatrix zero_matrix(std::size_t rows, std::size_t cols);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& a);
Int determinant(const IntMatrix& a);
Int determinant_mod(const IntMatrix& a, const Int& modulus);

}  // namespace torsionkit
