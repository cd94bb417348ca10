#include "manin/util.hpp"

#include <cctype>

namespace manin {

std::optional<Rat> parse_exact_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (num.empty() || den.empty()) return std::nullopt;
        Rat r;
        if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) return std::nullopt;
        if (mpq_sgn(r.get_mpq_t()) != 0 && mpz_sgn(mpq_denref(r.get_mpq_t())) == 0) return std::nullopt;
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (fp.empty()) return std::nullopt;
        for (char c : fp)
            if (!std::isdigit((unsigned char)c)) return std::nullopt;
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip = ip.substr(1);
        if (!ip.empty() && ip[0] == '+') ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        for (char c : ip)
            if (!std::isdigit((unsigned char)c)) return std::nullopt;
        Int whole(ip), frac(fp), scale = ipow(Int(10), (unsigned)fp.size());
        Rat r = Rat(whole) + make_rat(frac, scale);
        if (neg) r = -r;
        return r;
    }
    // plain integer
    std::string t = s;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t = t.substr(1);
    if (t.empty()) return std::nullopt;
    for (char c : t)
        if (!std::isdigit((unsigned char)c)) return std::nullopt;
    return Rat(Int(s));
}

Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<Int> exact_cbrt(const Int& n) {
    Int r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
    if (exact) return r;
    return std::nullopt;
}

int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::vector<std::pair<Int, int>> factor_int(Int n) {
    if (n < 0) n = -n;
    if (n == 0) throw std::invalid_argument("factor_int(0)");
    std::vector<std::pair<Int, int>> out;
    auto strip = [&](const Int& p) {
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (Int p = 5; p * p <= n; p += (mpz_fdiv_ui(p.get_mpz_t(), 6) == 5 ? 2 : 4)) {
        strip(p);
        if (p > 10'000'000) throw std::runtime_error("factor_int: operand beyond trial-division scale");
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool is_squarefree(const Int& n) {
    for (auto& [p, e] : factor_int(n))
        if (e >= 2) return false;
    return true;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i * i <= limit; ++i)
        if (!comp[i])
            for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    for (u64 i = 2; i <= limit; ++i)
        if (!comp[i]) primes.push_back(i);
    return primes;
}

}  // namespace manin
