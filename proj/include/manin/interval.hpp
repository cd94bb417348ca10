#pragma once

#include <mpfr.h>

#include <string>

#include "manin/util.hpp"

namespace manin {

// Outward-rounded real interval [lo, hi] on MPFR endpoints. Used for
// logarithms, volumes, and report output only; no branching decision in the
// exact layer depends on one.
class Interval {
  public:
    explicit Interval(mpfr_prec_t prec = 128);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval exact(const Rat& q, mpfr_prec_t prec = 128);
    static Interval exact(const Int& n, mpfr_prec_t prec = 128);
    static Interval exact(long n, mpfr_prec_t prec = 128);
    static Interval pi(mpfr_prec_t prec = 128);
    // [lo, hi] from rationals
    static Interval hull(const Rat& lo, const Rat& hi, mpfr_prec_t prec = 128);

    mpfr_prec_t prec() const { return prec_; }

    Interval operator+(const Interval& o) const;
    Interval operator-(const Interval& o) const;
    Interval operator*(const Interval& o) const;
    Interval operator/(const Interval& o) const;
    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    Interval neg() const;
    Interval log() const;   // requires lo > 0
    Interval exp() const;
    Interval sqrt() const;  // requires lo >= 0
    Interval pow(long e) const;

    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return (lo_d() + hi_d()) / 2; }
    // hi - lo, rounded up
    double width_d() const;
    // (hi - lo) / |mid|
    double rel_width_d() const;

    bool contains(const Rat& q) const;
    bool contains(const Interval& o) const;   // o subset of *this
    bool intersects(const Interval& o) const;
    bool is_positive() const { return mpfr_sgn(lo_) > 0; }

    // decimal strings, outward-rounded, `digits` significant digits
    std::string lo_str(int digits = 25) const;
    std::string hi_str(int digits = 25) const;

  private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
};

}  // namespace manin
