#include "manin/ideals.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace manin {

static void require_field(const FieldDescriptor* K) {
    if (!K) throw std::invalid_argument("ideal without field");
}

// --------------------------------------------------------------------------
// HNF core: the Z-module spanned by pairs (u, v) = u + v*omega.

FractionalIdeal FractionalIdeal::hnf_from_pairs(const FieldDescriptor* K,
                                                std::vector<std::pair<Int, Int>> gens,
                                                const Int& den) {
    require_field(K);
    if (K->is_rational()) {
        Int a = 0;
        for (auto& [u, v] : gens) {
            if (v != 0) throw std::logic_error("omega coordinate over Q");
            a = gcd(a, u);
        }
        if (a == 0) throw std::invalid_argument("zero ideal");
        FractionalIdeal r;
        r.K_ = K;
        r.a_ = abs(a);
        r.b_ = 0;
        r.c_ = 0;
        r.den_ = den;
        r.reduce();
        return r;
    }
    Int c = 0;
    for (auto& [u, v] : gens) c = gcd(c, v);
    if (c == 0) throw std::invalid_argument("zero ideal (rank deficient)");
    // combine generators to an element with omega-coordinate c
    Int B = 0, C = 0;
    for (auto& [u, v] : gens) {
        if (v == 0) continue;
        Int g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), C.get_mpz_t(), v.get_mpz_t());
        B = x * B + y * u;
        C = g;
    }
    assert(abs(C) == c);
    if (C < 0) {  // keep the omega-coordinate positive
        B = -B;
        C = -C;
    }
    Int a = 0;
    for (auto& [u, v] : gens) a = gcd(a, u - (v / c) * B);
    if (a == 0) throw std::invalid_argument("zero ideal (no rational part)");
    a = abs(a);
    Int b = B % a;
    if (b < 0) b += a;
    FractionalIdeal r;
    r.K_ = K;
    r.a_ = a;
    r.b_ = b;
    r.c_ = c;
    r.den_ = den;
    r.reduce();
    return r;
}

static bool module_contains(const Int& a, const Int& b, const Int& c, const Int& u, const Int& v) {
    if (c == 0) return v == 0 && mpz_divisible_p(u.get_mpz_t(), a.get_mpz_t());
    if (!mpz_divisible_p(v.get_mpz_t(), c.get_mpz_t())) return false;
    Int t = u - (v / c) * b;
    return mpz_divisible_p(t.get_mpz_t(), a.get_mpz_t());
}

void FractionalIdeal::reduce() {
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    if (den_ < 0) den_ = -den_;
    if (K_->is_rational()) {
        Int g = gcd(a_, den_);
        a_ /= g;
        den_ /= g;
        return;
    }
    // O_K-module check: omega*basis must stay inside
    if (!module_contains(a_, b_, c_, 0, a_) ||
        !module_contains(a_, b_, c_, c_ * K_->wn, b_ + c_ * K_->wt))
        throw std::logic_error("normal form is not an O_K module");
    Int content = gcd(gcd(a_, b_), c_);
    Int g = gcd(content, den_);
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
        den_ /= g;
    }
    if (!mpz_divisible_p(a_.get_mpz_t(), c_.get_mpz_t()) ||
        !mpz_divisible_p(b_.get_mpz_t(), c_.get_mpz_t()))
        throw std::logic_error("normal form lacks c | a, c | b");
}

FractionalIdeal FractionalIdeal::ring_of_integers(const FieldDescriptor* K) {
    require_field(K);
    FractionalIdeal r;
    r.K_ = K;
    r.a_ = 1;
    r.b_ = 0;
    r.c_ = K->is_rational() ? 0 : 1;
    r.den_ = 1;
    return r;
}

FractionalIdeal FractionalIdeal::from_integral_basis(const FieldDescriptor* K, const Int& a,
                                                     const Int& b, const Int& c, const Int& den) {
    return hnf_from_pairs(K, {{a, Int(0)}, {b, c}}, den);
}

static std::pair<Rat, Rat> omega_coords(const FieldElement& x) {
    const FieldDescriptor* K = x.field();
    if (K->is_rational()) return {x.a(), Rat(0)};
    if (!K->half_basis) return {x.a(), x.b()};
    return {x.a() - x.b(), 2 * x.b()};
}

FractionalIdeal FractionalIdeal::from_generators(const FieldDescriptor* K,
                                                 const std::vector<FieldElement>& gens) {
    require_field(K);
    std::vector<std::pair<Rat, Rat>> coords;
    FieldElement w = K->omega();
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        coords.push_back(omega_coords(g));
        if (!K->is_rational()) coords.push_back(omega_coords(g * w));
    }
    if (coords.empty()) throw std::invalid_argument("zero ideal");
    Int den = 1;
    for (auto& [u, v] : coords) den = lcm(lcm(den, u.get_den()), v.get_den());
    std::vector<std::pair<Int, Int>> igens;
    for (auto& [u, v] : coords) {
        Rat su = u * den, sv = v * den;
        igens.emplace_back(su.get_num(), sv.get_num());
    }
    return hnf_from_pairs(K, std::move(igens), den);
}

FractionalIdeal FractionalIdeal::principal(const FieldElement& x) {
    if (x.is_zero()) throw std::invalid_argument("principal ideal of zero");
    return from_generators(x.field(), {x});
}

bool FractionalIdeal::is_ring() const {
    return den_ == 1 && a_ == 1 && (K_->is_rational() || (b_ == 0 && c_ == 1));
}

Rat FractionalIdeal::norm() const {
    if (K_->is_rational()) return make_rat(a_, den_);
    return make_rat(a_ * c_, den_ * den_);
}

FieldElement FractionalIdeal::basis1() const { return K_->elem(make_rat(a_, den_)); }

FieldElement FractionalIdeal::basis2() const {
    if (K_->is_rational()) return K_->zero();
    FieldElement e = K_->elem(Rat(b_)) + K_->elem(Rat(c_)) * K_->omega();
    return e * K_->elem(make_rat(Int(1), den_));
}

FractionalIdeal FractionalIdeal::operator+(const FractionalIdeal& o) const {
    require_field(K_);
    if (K_ != o.K_) throw std::invalid_argument("mixed-field ideals");
    Int den = den_ * o.den_;
    if (K_->is_rational())
        return hnf_from_pairs(K_, {{a_ * o.den_, Int(0)}, {o.a_ * den_, Int(0)}}, den);
    return hnf_from_pairs(K_,
                          {{a_ * o.den_, Int(0)},
                           {b_ * o.den_, c_ * o.den_},
                           {o.a_ * den_, Int(0)},
                           {o.b_ * den_, o.c_ * den_}},
                          den);
}

FractionalIdeal FractionalIdeal::operator*(const FractionalIdeal& o) const {
    require_field(K_);
    if (K_ != o.K_) throw std::invalid_argument("mixed-field ideals");
    Int den = den_ * o.den_;
    if (K_->is_rational()) return hnf_from_pairs(K_, {{a_ * o.a_, Int(0)}}, den);
    const Int &wt = K_->wt, &wn = K_->wn;
    auto mul_pair = [&](const Int& u1, const Int& v1, const Int& u2,
                        const Int& v2) -> std::pair<Int, Int> {
        return {u1 * u2 + wn * v1 * v2, u1 * v2 + u2 * v1 + wt * v1 * v2};
    };
    std::vector<std::pair<Int, Int>> gens = {
        mul_pair(a_, 0, o.a_, 0),
        mul_pair(a_, 0, o.b_, o.c_),
        mul_pair(b_, c_, o.a_, 0),
        mul_pair(b_, c_, o.b_, o.c_),
    };
    return hnf_from_pairs(K_, std::move(gens), den);
}

FractionalIdeal FractionalIdeal::operator*(const FieldElement& x) const {
    return *this * principal(x);
}

FractionalIdeal FractionalIdeal::conj() const {
    require_field(K_);
    if (K_->is_rational()) return *this;
    // conj(b + c*omega) = b + c*wt - c*omega
    return hnf_from_pairs(K_, {{a_, Int(0)}, {b_ + c_ * K_->wt, -c_}}, den_);
}

FractionalIdeal FractionalIdeal::inverse() const {
    require_field(K_);
    if (K_->is_rational()) {
        FractionalIdeal r;
        r.K_ = K_;
        r.a_ = den_;
        r.b_ = 0;
        r.c_ = 0;
        r.den_ = a_;
        r.reduce();
        return r;
    }
    // (num/den)^{-1} = den * conj(num) / N(num), with N(num) = a*c
    FractionalIdeal cj = hnf_from_pairs(K_, {{a_, Int(0)}, {b_ + c_ * K_->wt, -c_}}, Int(1));
    FractionalIdeal r;
    r.K_ = K_;
    r.a_ = cj.a_ * den_;
    r.b_ = cj.b_ * den_;
    r.c_ = cj.c_ * den_;
    r.den_ = a_ * c_;
    r.reduce();
    return r;
}

FractionalIdeal FractionalIdeal::operator/(const FractionalIdeal& o) const {
    return *this * o.inverse();
}

FractionalIdeal FractionalIdeal::intersect(const FractionalIdeal& o) const {
    return (*this * o) / (*this + o);
}

FractionalIdeal FractionalIdeal::pow(long e) const {
    if (e == 0) return ring_of_integers(K_);
    FractionalIdeal base = e > 0 ? *this : inverse();
    unsigned long n = e > 0 ? e : -e;
    FractionalIdeal acc = ring_of_integers(K_);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool FractionalIdeal::contains(const FieldElement& x) const {
    require_field(K_);
    if (x.is_zero()) return true;
    auto [u, v] = omega_coords(x);
    Rat su = u * den_, sv = v * den_;
    if (su.get_den() != 1 || sv.get_den() != 1) return false;
    if (K_->is_rational()) return sv == 0 && mpz_divisible_p(su.get_num().get_mpz_t(), a_.get_mpz_t());
    return module_contains(a_, b_, c_, su.get_num(), sv.get_num());
}

bool FractionalIdeal::contains(const FractionalIdeal& o) const {
    return contains(o.basis1()) && (K_->is_rational() || contains(o.basis2()));
}

bool FractionalIdeal::operator==(const FractionalIdeal& o) const {
    return K_ == o.K_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && den_ == o.den_;
}

bool FractionalIdeal::operator<(const FractionalIdeal& o) const {
    int c0 = cmp(norm(), o.norm());
    if (c0 != 0) return c0 < 0;
    if (a_ != o.a_) return a_ < o.a_;
    if (b_ != o.b_) return b_ < o.b_;
    if (c_ != o.c_) return c_ < o.c_;
    return den_ < o.den_;
}

std::string FractionalIdeal::str() const {
    std::ostringstream os;
    if (K_->is_rational()) {
        os << "(" << a_;
        if (den_ != 1) os << "/" << den_;
        os << ")";
        return os.str();
    }
    os << "[" << a_ << ", " << b_ << "+" << c_ << "w";
    if (den_ != 1) os << "; /" << den_;
    os << "]";
    return os.str();
}

// --------------------------------------------------------------------------
// Prime ideals

SplitType splitting_type(const FieldDescriptor* K, const Int& p) {
    if (K->is_rational()) return SplitType::Split;  // degenerate; unused over Q
    int chi = kronecker(K->discriminant, p);
    if (chi == 1) return SplitType::Split;
    if (chi == -1) return SplitType::Inert;
    return SplitType::Ramified;
}

std::vector<PrimeIdeal> primes_above(const FieldDescriptor* K, const Int& p) {
    require_field(K);
    if (p < 2) throw std::invalid_argument("not a prime");
    if (K->is_rational()) {
        PrimeIdeal P;
        P.ideal = FractionalIdeal::from_integral_basis(K, p, 0, 0);
        P.p = p;
        P.residue_degree = 1;
        P.ramified = false;
        return {P};
    }
    // roots of x^2 - wt x - wn mod p
    std::vector<Int> roots;
    for (Int t = 0; t < p; ++t) {
        Int val = ((t * t - K->wt * t - K->wn) % p + p) % p;
        if (val == 0) roots.push_back(t);
    }
    SplitType st = splitting_type(K, p);
    std::vector<PrimeIdeal> out;
    if (st == SplitType::Inert) {
        assert(roots.empty());
        PrimeIdeal P;
        P.ideal = FractionalIdeal::from_integral_basis(K, p, 0, p);
        P.p = p;
        P.residue_degree = 2;
        P.ramified = false;
        out.push_back(P);
        return out;
    }
    assert(!roots.empty());
    size_t expect = (st == SplitType::Split) ? 2 : 1;
    if (roots.size() != expect) throw std::logic_error("splitting inconsistent with Kronecker symbol");
    for (const Int& rt : roots) {
        PrimeIdeal P;
        Int b = ((-rt) % p + p) % p;  // omega - rt has pair (-rt, 1)
        P.ideal = FractionalIdeal::from_integral_basis(K, p, b, 1);
        P.p = p;
        P.residue_degree = 1;
        P.ramified = (st == SplitType::Ramified);
        out.push_back(P);
    }
    std::sort(out.begin(), out.end(),
              [](const PrimeIdeal& x, const PrimeIdeal& y) { return x.ideal < y.ideal; });
    return out;
}

static int valuation_at(FractionalIdeal a, const FractionalIdeal& P) {
    // a integral; counts the exact power of P dividing a
    int v = 0;
    while (P.contains(a)) {
        a = a / P;
        ++v;
        if (v > 4096) throw std::logic_error("runaway valuation");
    }
    return v;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const FractionalIdeal& a) {
    const FieldDescriptor* K = a.field();
    require_field(K);
    std::vector<std::pair<PrimeIdeal, int>> out;
    // numerator part
    FractionalIdeal num = FractionalIdeal::from_integral_basis(K, a.a(), a.b(), a.c());
    Rat nn = num.norm();
    assert(nn.get_den() == 1);
    std::map<Int, int> exps;  // keyed by prime index in a flat list
    std::vector<PrimeIdeal> plist;
    auto add = [&](const PrimeIdeal& P, int e) {
        if (e == 0) return;
        for (size_t i = 0; i < plist.size(); ++i)
            if (plist[i].ideal == P.ideal) {
                exps[i] += e;
                return;
            }
        plist.push_back(P);
        exps[Int(plist.size() - 1)] += e;
    };
    if (nn.get_num() != 1) {
        for (auto& [p, e] : factor_int(nn.get_num())) {
            for (const auto& P : primes_above(K, p)) add(P, valuation_at(num, P.ideal));
        }
    }
    if (a.den() != 1) {
        for (auto& [p, e] : factor_int(a.den())) {
            for (const auto& P : primes_above(K, p)) {
                int vp;  // valuation of (p) at P
                if (K->is_rational())
                    vp = 1;
                else if (P.residue_degree == 2)
                    vp = 1;
                else if (P.ramified)
                    vp = 2;
                else
                    vp = 1;
                add(P, -e * vp);
            }
        }
    }
    for (auto& [i, e] : exps)
        if (e != 0) out.emplace_back(plist[i.get_si()], e);
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first.ideal < y.first.ideal; });
    return out;
}

std::pair<int, Int> moebius_divisor(const FractionalIdeal& a) {
    if (!a.is_integral()) throw std::invalid_argument("moebius_divisor needs an integral ideal");
    int mu = 1;
    Int d = 1;
    for (auto& [P, e] : factor_ideal(a)) {
        if (e >= 2) mu = 0;
        if (e == 1) mu = -mu;
        d *= (e + 1);
    }
    return {mu, d};
}

std::vector<FractionalIdeal> ideals_of_norm(const FieldDescriptor* K, const Int& n) {
    require_field(K);
    if (n <= 0) throw std::invalid_argument("norm must be positive");
    std::vector<FractionalIdeal> out = {FractionalIdeal::ring_of_integers(K)};
    if (n == 1) return out;
    if (K->is_rational()) return {FractionalIdeal::from_integral_basis(K, n, 0, 0)};
    for (auto& [p, e] : factor_int(n)) {
        std::vector<FractionalIdeal> layer;
        auto P = primes_above(K, p);
        SplitType st = splitting_type(K, p);
        if (st == SplitType::Split) {
            for (int i = 0; i <= e; ++i) layer.push_back(P[0].ideal.pow(i) * P[1].ideal.pow(e - i));
        } else if (st == SplitType::Ramified) {
            layer.push_back(P[0].ideal.pow(e));
        } else {
            if (e % 2 != 0) return {};
            layer.push_back(P[0].ideal.pow(e / 2));
        }
        std::vector<FractionalIdeal> next;
        for (const auto& x : out)
            for (const auto& y : layer) next.push_back(x * y);
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FractionalIdeal> ideals_up_to(const FieldDescriptor* K, const Int& n) {
    std::vector<FractionalIdeal> out;
    for (Int m = 1; m <= n; ++m)
        for (auto& a : ideals_of_norm(K, m)) out.push_back(a);
    return out;
}

std::vector<FractionalIdeal> divisors_of(const FractionalIdeal& a) {
    if (!a.is_integral()) throw std::invalid_argument("divisors of a non-integral ideal");
    std::vector<FractionalIdeal> out = {FractionalIdeal::ring_of_integers(a.field())};
    for (auto& [P, e] : factor_ideal(a)) {
        std::vector<FractionalIdeal> next;
        for (const auto& x : out) {
            FractionalIdeal acc = x;
            next.push_back(acc);
            for (int i = 1; i <= e; ++i) {
                acc = acc * P.ideal;
                next.push_back(acc);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --------------------------------------------------------------------------
// Principality

static std::optional<FieldElement> generator_imaginary(const FractionalIdeal& A) {
    const FieldDescriptor* K = A.field();
    // integral numerator lattice: m*(a,0) + n*(b,c); N(u,v) = u^2 + wt uv - wn v^2
    Int a = A.a(), b = A.b(), c = A.c();
    Int target = a * c;
    // N(u,v) >= (|Delta|/4) v^2
    Int absD = abs(K->discriminant);
    // v = n*c; n bound: (|D|/4)(nc)^2 <= target
    Int nmax = isqrt(4 * target / (absD * c * c)) + 1;
    for (Int n = -nmax; n <= nmax; ++n) {
        // u = m*a + n*b; |u + wt*v/2| <= sqrt(target + ...) -> |u| <= sqrt(target)+|wt*v/2|+1
        Int v = n * c;
        Int ubound = isqrt(target) + abs(K->wt * v) / 2 + 2;
        // m range so that u in [-ubound, ubound]
        Int mlo = (-ubound - n * b - (a - 1)) / a, mhi = (ubound - n * b + (a - 1)) / a;
        for (Int m = mlo; m <= mhi; ++m) {
            if (m == 0 && n == 0) continue;
            Int u = m * a + n * b;
            Int N = u * u + K->wt * u * v - K->wn * v * v;
            if (N == target) {
                // element (u + v*omega)/den
                FieldElement g = (K->elem(Rat(u)) + K->elem(Rat(v)) * K->omega()) *
                                 K->elem(make_rat(Int(1), A.den()));
                return g;
            }
        }
    }
    return std::nullopt;
}

static std::optional<FieldElement> generator_real(const FractionalIdeal& A) {
    const FieldDescriptor* K = A.field();
    Int a = A.a(), b = A.b(), c = A.c();
    Int target = a * c;
    double eps = 1.0;
    if (K->fundamental_unit) {
        const FieldElement& e = *K->fundamental_unit;
        eps = e.a().get_d() + e.b().get_d() * std::sqrt(K->d.get_d());
    }
    double sn = std::sqrt(target.get_d());
    double S1 = eps * sn * 1.001 + 1, S2 = sn * 1.001 + 1;
    double w1 = (K->half_basis ? (1 + std::sqrt(K->d.get_d())) / 2 : std::sqrt(K->d.get_d()));
    double w2 = (K->half_basis ? (1 - std::sqrt(K->d.get_d())) / 2 : -std::sqrt(K->d.get_d()));
    double sep = c.get_d() * (w1 - w2);
    long nmax = (long)((S1 + S2) / sep) + 2;
    for (long n = -nmax; n <= nmax; ++n) {
        double t1 = n * (b.get_d() + c.get_d() * w1), t2 = n * (b.get_d() + c.get_d() * w2);
        double lo = std::max((-S1 - t1), (-S2 - t2)) / a.get_d();
        double hi = std::min((S1 - t1), (S2 - t2)) / a.get_d();
        if (lo > hi) continue;
        for (long m = (long)std::floor(lo) - 1; m <= (long)std::ceil(hi) + 1; ++m) {
            if (m == 0 && n == 0) continue;
            Int u = Int(m) * a + Int(n) * b;
            Int v = Int(n) * c;
            Int N = u * u + K->wt * u * v - K->wn * v * v;
            if (N == target || N == -target) {
                FieldElement g = (K->elem(Rat(u)) + K->elem(Rat(v)) * K->omega()) *
                                 K->elem(make_rat(Int(1), A.den()));
                return g;
            }
        }
    }
    return std::nullopt;
}

std::optional<FieldElement> principal_generator(const FractionalIdeal& a) {
    const FieldDescriptor* K = a.field();
    require_field(K);
    if (K->is_rational()) return K->elem(make_rat(a.a(), a.den()));
    std::optional<FieldElement> g =
        K->is_imaginary() ? generator_imaginary(a) : generator_real(a);
    if (g) {
        // sanity: the element generates exactly a
        if (FractionalIdeal::principal(*g) != a) throw std::logic_error("generator mismatch");
    }
    return g;
}

// --------------------------------------------------------------------------
// Class group

static Int minkowski_bound(const FieldDescriptor* K) {
    if (K->is_rational()) return 1;
    double ad = std::abs(K->discriminant.get_d());
    double mb = std::sqrt(ad) * (K->s == 1 ? 2.0 / 3.14159265358979 : 0.5);
    return Int((long)std::floor(mb)) + 1;
}

ClassGroup compute_class_group(const FieldDescriptor* K) {
    ClassGroup G;
    G.K = K;
    if (K->is_rational()) {
        G.h = 1;
        G.reps = {FractionalIdeal::ring_of_integers(K)};
        return G;
    }
    Int bound = minkowski_bound(K);
    bool lex_largest = K->options.tie_break == TieBreak::MinNormLexLargest;
    std::vector<FractionalIdeal> reps;
    auto same_class = [&](const FractionalIdeal& x, const FractionalIdeal& y) {
        return principal_generator(x / y).has_value();
    };
    for (Int n = 1; n <= bound; ++n) {
        std::vector<FractionalIdeal> level = ideals_of_norm(K, n);
        // group this norm level into classes, join with existing reps
        std::vector<std::vector<FractionalIdeal>> fresh;  // new classes found on this level
        for (const auto& a : level) {
            bool seen = false;
            for (const auto& r : reps)
                if (same_class(a, r)) {
                    seen = true;
                    break;
                }
            if (seen) continue;
            bool grouped = false;
            for (auto& grp : fresh)
                if (same_class(a, grp.front())) {
                    grp.push_back(a);
                    grouped = true;
                    break;
                }
            if (!grouped) fresh.push_back({a});
        }
        for (auto& grp : fresh) {
            std::sort(grp.begin(), grp.end());
            reps.push_back(lex_largest ? grp.back() : grp.front());
        }
    }
    std::sort(reps.begin() + 1, reps.end());  // reps[0] is O_K (norm 1 found first)
    assert(reps.front().is_ring());
    G.reps = std::move(reps);
    G.h = Int((long)G.reps.size());
    return G;
}

int ClassGroup::class_of(const FractionalIdeal& a) const {
    for (size_t i = 0; i < reps.size(); ++i)
        if (principal_generator(a / reps[i])) return (int)i;
    throw std::logic_error("ideal class not represented");
}

FractionalIdeal content_ideal(const std::vector<FieldElement>& x) {
    std::vector<FieldElement> nz;
    for (const auto& e : x)
        if (!e.is_zero()) nz.push_back(e);
    if (nz.empty()) throw std::invalid_argument("content of the zero vector");
    FractionalIdeal acc = FractionalIdeal::principal(nz[0]);
    for (size_t i = 1; i < nz.size(); ++i) acc = acc + FractionalIdeal::principal(nz[i]);
    return acc;
}

// --------------------------------------------------------------------------
// SmallIdeal kernel

SmallCtx SmallCtx::of(const FieldDescriptor* K) {
    SmallCtx F;
    F.degree = K->degree;
    F.wt = K->wt.get_si();
    F.wn = K->wn.get_si();
    return F;
}

SmallIdeal small_ring() { return SmallIdeal{1, 0, 1}; }

i64 small_norm(const SmallCtx& F, const SmallIdeal& x) {
    return F.degree == 1 ? x.a : x.a * x.c;
}

bool small_is_ring(const SmallIdeal& x) { return x.a == 1 && x.b == 0 && x.c == 1; }

static i64 small_gcd(i64 a, i64 b) {
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// extended gcd returning (g, x, y) with g = x*a + y*b, g >= 0
static void small_xgcd(i64 a, i64 b, i64& g, i64& x, i64& y) {
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 qu = old_r / r;
        i64 tmp = old_r - qu * r; old_r = r; r = tmp;
        tmp = old_s - qu * s; old_s = s; s = tmp;
        tmp = old_t - qu * t; old_t = t; t = tmp;
    }
    g = old_r; x = old_s; y = old_t;
    if (g < 0) { g = -g; x = -x; y = -y; }
}

static SmallIdeal small_hnf(const SmallCtx& F, const std::pair<i64, i64>* gens, int ngens) {
    if (F.degree == 1) {
        i64 a = 0;
        for (int i = 0; i < ngens; ++i) a = small_gcd(a, gens[i].first);
        return SmallIdeal{a, 0, 1};
    }
    i64 c = 0;
    for (int i = 0; i < ngens; ++i) c = small_gcd(c, gens[i].second);
    i64 B = 0, C = 0;
    for (int i = 0; i < ngens; ++i) {
        if (gens[i].second == 0) continue;
        i64 g, x, y;
        small_xgcd(C, gens[i].second, g, x, y);
        B = x * B + y * gens[i].first;
        C = g;
    }
    i64 a = 0;
    for (int i = 0; i < ngens; ++i) a = small_gcd(a, gens[i].first - (gens[i].second / c) * B);
    i64 b = B % a;
    if (b < 0) b += a;
    return SmallIdeal{a, b, c};
}

SmallIdeal small_mul(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y) {
    if (F.degree == 1) return SmallIdeal{x.a * y.a, 0, 1};
    auto mp = [&](i64 u1, i64 v1, i64 u2, i64 v2) -> std::pair<i64, i64> {
        return {u1 * u2 + F.wn * v1 * v2, u1 * v2 + u2 * v1 + F.wt * v1 * v2};
    };
    std::pair<i64, i64> gens[4] = {mp(x.a, 0, y.a, 0), mp(x.a, 0, y.b, y.c), mp(x.b, x.c, y.a, 0),
                                   mp(x.b, x.c, y.b, y.c)};
    return small_hnf(F, gens, 4);
}

SmallIdeal small_sum(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y) {
    if (F.degree == 1) return SmallIdeal{small_gcd(x.a, y.a), 0, 1};
    std::pair<i64, i64> gens[4] = {{x.a, 0}, {x.b, x.c}, {y.a, 0}, {y.b, y.c}};
    return small_hnf(F, gens, 4);
}

SmallIdeal small_div(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y) {
    if (F.degree == 1) {
        if (x.a % y.a != 0) throw std::logic_error("small_div: not divisible");
        return SmallIdeal{x.a / y.a, 0, 1};
    }
    // x * conj(y) / N(y)
    SmallIdeal cj{y.a, y.b + y.c * F.wt, -y.c};
    // conj normal form: run through hnf to fix sign of c
    std::pair<i64, i64> cg[2] = {{cj.a, 0}, {cj.b, cj.c}};
    cj = small_hnf(F, cg, 2);
    SmallIdeal prod = small_mul(F, x, cj);
    i64 N = y.a * y.c;
    if (prod.a % N || prod.b % N || prod.c % N) throw std::logic_error("small_div: not divisible");
    return SmallIdeal{prod.a / N, prod.b / N, prod.c / N};
}

SmallIdeal small_of(const FractionalIdeal& a) {
    if (!a.is_integral()) throw std::invalid_argument("small_of needs an integral ideal");
    if (!a.a().fits_slong_p()) throw std::overflow_error("ideal too large for SmallIdeal");
    if (a.field()->is_rational()) return SmallIdeal{a.a().get_si(), 0, 1};
    return SmallIdeal{a.a().get_si(), a.b().get_si(), a.c().get_si()};
}

FractionalIdeal small_to_ideal(const FieldDescriptor* K, const SmallIdeal& x) {
    if (K->is_rational()) return FractionalIdeal::from_integral_basis(K, x.a, 0, 0);
    return FractionalIdeal::from_integral_basis(K, x.a, x.b, x.c);
}

}  // namespace manin
