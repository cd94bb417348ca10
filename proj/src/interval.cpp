#include "manin/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manin {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.prec_);
        mpfr_set_prec(hi_, o.prec_);
        prec_ = o.prec_;
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact(const Rat& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::exact(const Int& n, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, n.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, n.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::exact(long n, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, n, MPFR_RNDD);
    mpfr_set_si(r.hi_, n, MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Rat& lo, const Rat& hi, mpfr_prec_t prec) {
    if (lo > hi) throw std::invalid_argument("Interval::hull: lo > hi");
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::operator+(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator*(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_t c[4];
    for (auto& t : c) mpfr_init2(t, r.prec_);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, c[0], c[1], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[2], MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, c[3], MPFR_RNDD);
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, c[0], c[1], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[2], MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, c[3], MPFR_RNDU);
    for (auto& t : c) mpfr_clear(t);
    return r;
}

Interval Interval::operator/(const Interval& o) const {
    if (mpfr_sgn(o.lo_) <= 0 && mpfr_sgn(o.hi_) >= 0)
        throw std::domain_error("Interval division by interval containing 0");
    Interval inv(o.prec_);
    mpfr_t one;
    mpfr_init2(one, o.prec_);
    mpfr_set_si(one, 1, MPFR_RNDN);
    mpfr_div(inv.lo_, one, o.hi_, MPFR_RNDD);
    mpfr_div(inv.hi_, one, o.lo_, MPFR_RNDU);
    mpfr_clear(one);
    return *this * inv;
}

Interval Interval::neg() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::log() const {
    if (mpfr_sgn(lo_) <= 0) throw std::domain_error("Interval::log of nonpositive");
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp() const {
    Interval r(prec_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw std::domain_error("Interval::sqrt of negative");
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pow(long e) const {
    if (e == 0) return Interval::exact(1L, prec_);
    bool invert = e < 0;
    unsigned long n = invert ? -e : e;
    Interval acc = Interval::exact(1L, prec_), base = *this;
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    if (invert) return Interval::exact(1L, prec_) / acc;
    return acc;
}

double Interval::width_d() const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

double Interval::rel_width_d() const {
    double m = std::abs(mid_d());
    if (m == 0) return width_d();
    return width_d() / m;
}

bool Interval::contains(const Rat& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
}

bool Interval::intersects(const Interval& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
}

static std::string mpfr_str(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
    char buf[512];
    std::string fmt = "%." + std::to_string(digits) + "R*g";
    mpfr_snprintf(buf, sizeof buf, fmt.c_str(), rnd, x);
    return buf;
}

std::string Interval::lo_str(int digits) const { return mpfr_str(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_str(int digits) const { return mpfr_str(hi_, digits, MPFR_RNDU); }

}  // namespace manin
