#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "manin/interval.hpp"
#include "manin/util.hpp"

namespace manin {

struct FieldDescriptor;
class FractionalIdeal;

// Element of Q or Q(sqrt d), stored as a + b*sqrt(d) with exact rationals.
// For Q (d = 0) the b part is identically zero. All arithmetic is exact.
class FieldElement {
  public:
    FieldElement() : K_(nullptr) {}
    FieldElement(const FieldDescriptor* K, Rat a, Rat b);

    const FieldDescriptor* field() const { return K_; }
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    bool is_integral() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;  // o != 0
    FieldElement conj() const;
    FieldElement inv() const;
    FieldElement pow(long e) const;

    Rat norm() const;   // product over all embeddings
    Rat trace() const;

    bool operator==(const FieldElement& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // Exact sign of sigma_1(x) (the embedding with sigma_1(sqrt d) > 0).
    // Only meaningful for totally real fields and Q.
    int sign_sigma1() const;

    // |sigma_place(x)| as a certified interval.
    Interval abs_embedding(int place, mpfr_prec_t prec = 128) const;

    std::string str() const;

  private:
    const FieldDescriptor* K_;
    Rat a_, b_;
    void check_same(const FieldElement& o) const;
};

enum class TieBreak { MinNormLexSmallest, MinNormLexLargest };

struct FieldOptions {
    TieBreak tie_break = TieBreak::MinNormLexSmallest;
    bool inverse_unit = false;  // use 1/eps as the fundamental generator
    bool operator==(const FieldOptions&) const = default;
};

// A quadratic field (or Q) together with its computed invariants. Immutable
// after construction; obtained through parse_field_spec which interns
// descriptors per (spec, options).
struct FieldDescriptor {
    Int d = 0;             // squarefree, 0 for Q
    Int discriminant = 1;  // field discriminant
    int degree = 1;
    int r = 1, s = 0, q = 0;
    bool half_basis = false;  // omega = (1+sqrt d)/2 instead of sqrt d
    // omega satisfies omega^2 = wt*omega + wn
    Int wt = 0, wn = 0;

    Int h = 1;                         // class number
    int omega_roots = 2;               // number of roots of unity
    std::vector<FieldElement> torsion; // all roots of unity, starting with 1
    std::optional<FieldElement> fundamental_unit;  // q = 1 only; > 1 under sigma_1
    Interval regulator;                // log sigma_1(eps); exact 1 for q = 0
    std::vector<FractionalIdeal> class_reps;  // |class_reps| = h, first is O_K

    FieldOptions options;
    std::string spec;

    bool is_rational() const { return degree == 1; }
    bool is_imaginary() const { return s == 1; }
    bool is_real_quadratic() const { return degree == 2 && r == 2; }
    int places() const { return r + s; }
    int local_degree(int place) const { return (place < r) ? 1 : 2; }

    FieldElement elem(Rat a, Rat b = Rat(0)) const { return FieldElement(this, std::move(a), std::move(b)); }
    FieldElement elem_int(long a, long b = 0) const { return FieldElement(this, Rat(a), Rat(b)); }
    FieldElement zero() const { return elem_int(0); }
    FieldElement one() const { return elem_int(1); }
    FieldElement omega() const;   // the basis generator (0 for Q)
    FieldElement sqrt_d() const;  // sqrt(d) as an element (0 for Q)

    const FractionalIdeal& ring() const { return class_reps.front(); }

    FieldDescriptor() = default;
    FieldDescriptor(const FieldDescriptor&) = delete;
    FieldDescriptor& operator=(const FieldDescriptor&) = delete;
    ~FieldDescriptor();
};

// Grammar: "Q" or "Q(sqrt:<m>)" with m squarefree, m != 0, 1. Descriptors are
// interned: repeated calls with the same spec and options return the same
// object. Construction fills h, class representatives, unit data.
const FieldDescriptor* parse_field_spec(const std::string& spec, const FieldOptions& options = {});

enum class ArithOp { Add, Sub, Mul, Div, Conj };
FieldElement field_arith(ArithOp op, const FieldElement& x, const FieldElement& y);

std::pair<Rat, Rat> norm_trace(const FieldElement& x);

// Exact comparison of |sigma_place(x)| against |sigma_place(y)|.
// Returns -1, 0, +1.
int embed_compare(const FieldElement& x, const FieldElement& y, int place);

// Exact comparison of |sigma_place(x)| against a nonnegative rational bound.
int embed_compare_rat(const FieldElement& x, const Rat& bound, int place);

// Compare |sigma_1(x)*sigma_2(y)| (real quadratic) or the appropriate
// degree-weighted archimedean product against t, exactly. Used by the height
// and Schanuel tests. x, y nonzero.
int archimedean_product_compare(const FieldElement& max1, const FieldElement& max2, const Rat& t);

// (d_i log|sigma_i(x)|)_i as intervals of width <= 2^-precision each.
std::vector<Interval> log_embedding(const FieldElement& x, int precision_bits);

}  // namespace manin
