#include "torsionkit/integer.hpp"

#include <boost/multiprecision/integer.hpp>

namespace torsionkit {

ParseError::ParseError(int line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Int reduce(const Int& x, const Int& modulus) {
    if (modulus == 0) return x;
    Int r = x % modulus;
    if (r < 0) r += modulus;
    return r;
}

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(abs(a), abs(b)); }

Int lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return abs(a / gcd(a, b) * b);
}

Int extended_gcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s1;
        old_s = s1;
        s1 = tmp;
        tmp = old_t - q * t1;
        old_t = t1;
        t1 = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

bool is_unit(const Int& x, const Int& modulus) {
    if (modulus == 0) return x == 1 || x == -1;
    return gcd(reduce(x, modulus), modulus) == 1;
}

Int inverse(const Int& x, const Int& modulus) {
    if (modulus == 0) {
        if (x == 1 || x == -1) return x;
        throw Error("inverse: " + to_string(x) + " is not a unit in Z");
    }
    Int s, t;
    Int g = extended_gcd(reduce(x, modulus), modulus, s, t);
    if (g != 1) throw Error("inverse: " + to_string(x) + " is not a unit mod " + to_string(modulus));
    return reduce(s, modulus);
}

bool is_prime(const Int& p) {
    if (p < 2) return false;
    for (Int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::pair<Int, int> prime_power(const Int& n) {
    if (n < 2) return {0, 0};
    Int p = 2;
    while (p * p <= n && n % p != 0) ++p;
    if (n % p != 0) p = n;
    Int m = n;
    int s = 0;
    while (m % p == 0) {
        m /= p;
        ++s;
    }
    if (m != 1) return {0, 0};
    return {p, s};
}

int valuation(Int n, const Int& p) {
    if (n == 0) throw Error("valuation of zero");
    int v = 0;
    n = abs(n);
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

long long to_ll(const Int& x) {
    if (x > Int(std::numeric_limits<long long>::max()) || x < Int(std::numeric_limits<long long>::min()))
        throw Error("integer " + to_string(x) + " does not fit in 64 bits");
    return static_cast<long long>(x);
}

std::string to_string(const Int& x) { return x.str(); }

IntMatrix identity_matrix(std::size_t n) {
    IntMatrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMatrix zero_matrix(std::size_t rows, std::size_t cols) { return IntMatrix(rows, IntVector(cols, Int(0))); }

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    std::size_t inner = b.size();
    std::size_t cols = inner ? b[0].size() : 0;
    IntMatrix c = zero_matrix(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != inner) throw Error("multiply: shape mismatch");
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    }
    return c;
}

IntMatrix transpose(const IntMatrix& a) {
    if (a.empty()) return {};
    IntMatrix t = zero_matrix(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// Bareiss fraction-free elimination.
Int determinant(const IntMatrix& a) {
    std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw Error("determinant: matrix is not square");
    if (n == 0) return 1;
    IntMatrix m = a;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Int determinant_mod(const IntMatrix& a, const Int& modulus) { return reduce(determinant(a), modulus); }

}  // namespace torsionkit
