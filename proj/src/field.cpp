#include "manin/field.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace manin {

FieldElement::FieldElement(const FieldDescriptor* K, Rat a, Rat b)
    : K_(K), a_(std::move(a)), b_(std::move(b)) {
    if (!K_) throw std::invalid_argument("FieldElement without field");
    if (K_->is_rational() && b_ != 0)
        throw std::invalid_argument("nonzero sqrt part in a rational-field element");
}

void FieldElement::check_same(const FieldElement& o) const {
    if (K_ != o.K_) throw std::invalid_argument("mixed-field arithmetic");
}

bool FieldElement::is_integral() const {
    if (K_->is_rational()) return a_.get_den() == 1;
    if (!K_->half_basis) return a_.get_den() == 1 && b_.get_den() == 1;
    // basis {1, (1+sqrt d)/2}: x = u + v*omega with u = a-b, v = 2b
    Rat u = a_ - b_, v = 2 * b_;
    return u.get_den() == 1 && v.get_den() == 1;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(o);
    return FieldElement(K_, a_ + o.a_, b_ + o.b_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same(o);
    return FieldElement(K_, a_ - o.a_, b_ - o.b_);
}

FieldElement FieldElement::operator-() const { return FieldElement(K_, -a_, -b_); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(o);
    Rat d(K_->d);
    return FieldElement(K_, a_ * o.a_ + d * b_ * o.b_, a_ * o.b_ + o.a_ * b_);
}

FieldElement FieldElement::conj() const { return FieldElement(K_, a_, -b_); }

FieldElement FieldElement::inv() const {
    if (is_zero()) throw std::domain_error("division by zero field element");
    Rat n = norm();
    if (K_->is_rational()) return FieldElement(K_, Rat(1) / a_, Rat(0));
    return FieldElement(K_, a_ / n, -b_ / n);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same(o);
    return *this * o.inv();
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    FieldElement acc = K_->one(), base = *this;
    unsigned long n = e;
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

Rat FieldElement::norm() const {
    if (K_->is_rational()) return a_;
    return a_ * a_ - Rat(K_->d) * b_ * b_;
}

Rat FieldElement::trace() const {
    if (K_->is_rational()) return a_;
    return 2 * a_;
}

int FieldElement::sign_sigma1() const {
    if (K_->d < 0) throw std::domain_error("sign_sigma1 on a complex embedding");
    if (b_ == 0) return sgn(a_);
    if (a_ == 0) return sgn(b_);
    int sa = sgn(a_), sb = sgn(b_);
    if (sa == sb) return sa;
    // a and b*sqrt(d) compete; d squarefree > 1, so a^2 != d b^2
    int c = cmp(a_ * a_, Rat(K_->d) * b_ * b_);
    assert(c != 0);
    return c > 0 ? sa : sb;
}

Interval FieldElement::abs_embedding(int place, mpfr_prec_t prec) const {
    if (place < 0 || place >= K_->places()) throw std::invalid_argument("bad place index");
    if (K_->is_rational()) {
        Rat v = a_ < 0 ? Rat(-a_) : a_;
        return Interval::exact(v, prec);
    }
    if (K_->is_imaginary()) {
        Rat n = norm();  // = |sigma(x)|^2 >= 0
        return Interval::exact(n, prec).sqrt();
    }
    FieldElement x = (place == 0) ? *this : conj();
    if (x.sign_sigma1() < 0) x = -x;
    Interval sq = Interval::exact(K_->d, prec).sqrt();
    return Interval::exact(x.a_, prec) + Interval::exact(x.b_, prec) * sq;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    if (K_->is_rational() || b_ == 0) {
        os << a_;
    } else {
        os << a_ << (b_ > 0 ? "+" : "") << b_ << "*sqrt(" << K_->d << ")";
    }
    return os.str();
}

FieldElement FieldDescriptor::omega() const {
    if (is_rational()) return zero();
    if (half_basis) return elem(Rat(1, 2), Rat(1, 2));
    return elem(Rat(0), Rat(1));
}

FieldElement FieldDescriptor::sqrt_d() const {
    if (is_rational()) return zero();
    return elem(Rat(0), Rat(1));
}

FieldElement field_arith(ArithOp op, const FieldElement& x, const FieldElement& y) {
    switch (op) {
        case ArithOp::Add: return x + y;
        case ArithOp::Sub: return x - y;
        case ArithOp::Mul: return x * y;
        case ArithOp::Div: return x / y;
        case ArithOp::Conj: return x.conj();
    }
    throw std::logic_error("unreachable");
}

std::pair<Rat, Rat> norm_trace(const FieldElement& x) { return {x.norm(), x.trace()}; }

int embed_compare(const FieldElement& x, const FieldElement& y, int place) {
    const FieldDescriptor* K = x.field();
    if (place < 0 || place >= K->places()) throw std::invalid_argument("bad place index");
    if (K->is_rational()) {
        Rat ax = x.a() < 0 ? Rat(-x.a()) : x.a();
        Rat ay = y.a() < 0 ? Rat(-y.a()) : y.a();
        return cmp(ax, ay);
    }
    if (K->is_imaginary()) return cmp(x.norm(), y.norm());  // squared moduli
    FieldElement u = (place == 0) ? x : x.conj();
    FieldElement v = (place == 0) ? y : y.conj();
    // compare u^2 vs v^2 under sigma_1
    return (u * u - v * v).sign_sigma1();
}

int embed_compare_rat(const FieldElement& x, const Rat& bound, int place) {
    const FieldDescriptor* K = x.field();
    if (bound < 0) throw std::invalid_argument("negative bound");
    if (K->is_rational()) {
        Rat ax = x.a() < 0 ? Rat(-x.a()) : x.a();
        return cmp(ax, bound);
    }
    if (K->is_imaginary()) return cmp(x.norm(), bound * bound);
    FieldElement u = (place == 0) ? x : x.conj();
    return (u * u - K->elem(bound * bound)).sign_sigma1();
}

int archimedean_product_compare(const FieldElement& max1, const FieldElement& max2, const Rat& t) {
    const FieldDescriptor* K = max1.field();
    if (t < 0) throw std::invalid_argument("negative bound");
    if (K->is_rational()) {
        Rat ax = max1.a() < 0 ? Rat(-max1.a()) : max1.a();
        return cmp(ax, t);
    }
    if (K->is_imaginary()) {
        // single place of local degree 2: |sigma(m1)|^2 = N(m1)
        return cmp(max1.norm(), t);
    }
    // |sigma_1(m1)| * |sigma_2(m2)| = |sigma_1(m1 * conj(m2))|
    return embed_compare_rat(max1 * max2.conj(), t, 0);
}

std::vector<Interval> log_embedding(const FieldElement& x, int precision_bits) {
    if (x.is_zero()) throw std::domain_error("log_embedding of zero");
    const FieldDescriptor* K = x.field();
    for (mpfr_prec_t prec = std::max<mpfr_prec_t>(64, precision_bits + 32);; prec *= 2) {
        std::vector<Interval> out;
        bool ok = true;
        for (int i = 0; i < K->places() && ok; ++i) {
            Interval ai = x.abs_embedding(i, prec);
            if (!ai.is_positive()) {
                ok = false;  // cancellation at this precision; retry wider
                break;
            }
            Interval li = ai.log() * Interval::exact((long)K->local_degree(i), prec);
            if (li.width_d() > std::ldexp(1.0, -precision_bits)) ok = false;
            out.push_back(std::move(li));
        }
        if (ok) return out;
        if (prec > 1 << 20) throw std::runtime_error("log_embedding failed to converge");
    }
}

}  // namespace manin
