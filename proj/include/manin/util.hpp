#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manin {

using Int = mpz_class;
using Rat = mpq_class;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "123", "-4/7", "2.5" (exact decimal) into a rational.
std::optional<Rat> parse_exact_rational(const std::string& s);

// floor(sqrt(n)) for n >= 0.
Int isqrt(const Int& n);

// Exact cube root: returns r with r^3 == n, if one exists.
std::optional<Int> exact_cbrt(const Int& n);

inline Int ipow(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Rat rpow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = e > 0 ? base : Rat(1) / base;
    unsigned long n = e > 0 ? e : -e;
    Rat r(1);
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// Kronecker symbol (a|n) for n > 0.
int kronecker(const Int& a, const Int& n);

// Trial-division factorization (p, e) pairs, p ascending. Intended for the
// desk scale of this project; refuses inputs whose cofactor exceeds the
// trial bound squared.
std::vector<std::pair<Int, int>> factor_int(Int n);

bool is_squarefree(const Int& n);

// Primes <= limit, via sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace manin
