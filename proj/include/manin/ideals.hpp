#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "manin/field.hpp"
#include "manin/util.hpp"

namespace manin {

// Nonzero fractional ideal in HNF: numerator is the integral ideal
// Z*a + Z*(b + c*omega) with c | a, c | b, 0 <= b < a; denominator a positive
// integer coprime to the rational content of the numerator. For Q the
// numerator is the single integer a (b = c = 0). Equality is structural.
class FractionalIdeal {
  public:
    FractionalIdeal() : K_(nullptr) {}

    static FractionalIdeal ring_of_integers(const FieldDescriptor* K);
    static FractionalIdeal from_integral_basis(const FieldDescriptor* K, const Int& a, const Int& b,
                                               const Int& c, const Int& den = Int(1));
    // Z-module generated by the given elements and their omega-multiples.
    static FractionalIdeal from_generators(const FieldDescriptor* K,
                                           const std::vector<FieldElement>& gens);
    static FractionalIdeal principal(const FieldElement& x);  // x != 0

    const FieldDescriptor* field() const { return K_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& den() const { return den_; }

    bool is_integral() const { return den_ == 1; }
    bool is_ring() const;
    Rat norm() const;

    FieldElement basis1() const;  // a / den
    FieldElement basis2() const;  // (b + c*omega) / den

    FractionalIdeal operator+(const FractionalIdeal& o) const;  // gcd ideal
    FractionalIdeal operator*(const FractionalIdeal& o) const;
    FractionalIdeal operator*(const FieldElement& x) const;
    FractionalIdeal intersect(const FractionalIdeal& o) const;
    FractionalIdeal inverse() const;
    FractionalIdeal conj() const;
    FractionalIdeal pow(long e) const;
    // exact quotient *this * o^{-1}; by_integral asserts the result integral
    FractionalIdeal operator/(const FractionalIdeal& o) const;

    bool contains(const FieldElement& x) const;
    bool contains(const FractionalIdeal& o) const;  // o subset of *this, i.e. *this | o
    bool divides(const FractionalIdeal& o) const { return contains(o); }

    bool operator==(const FractionalIdeal& o) const;
    bool operator!=(const FractionalIdeal& o) const { return !(*this == o); }
    // lexicographic on (norm, a, b, c, den); total order used for canonical choices
    bool operator<(const FractionalIdeal& o) const;

    std::string str() const;

  private:
    const FieldDescriptor* K_;
    Int a_, b_, c_, den_;
    static FractionalIdeal hnf_from_pairs(const FieldDescriptor* K,
                                          std::vector<std::pair<Int, Int>> gens, const Int& den);
    void reduce();
};

struct PrimeIdeal {
    FractionalIdeal ideal;
    Int p;              // rational prime below
    int residue_degree; // 1 or 2
    bool ramified;
    Rat norm() const { return ideal.norm(); }
};

enum class SplitType { Split, Inert, Ramified };
SplitType splitting_type(const FieldDescriptor* K, const Int& p);

// The prime ideals above p (two if split, one otherwise).
std::vector<PrimeIdeal> primes_above(const FieldDescriptor* K, const Int& p);

// Exact factorization a = prod p_i^{e_i}, e_i in Z.
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const FractionalIdeal& a);

// Moebius and divisor-count functions for integral ideals.
std::pair<int, Int> moebius_divisor(const FractionalIdeal& a);

// All integral ideals of norm exactly n / at most n.
std::vector<FractionalIdeal> ideals_of_norm(const FieldDescriptor* K, const Int& n);
std::vector<FractionalIdeal> ideals_up_to(const FieldDescriptor* K, const Int& n);

// All integral ideals dividing a.
std::vector<FractionalIdeal> divisors_of(const FractionalIdeal& a);

// Principality: a generator if the ideal is principal. Exact.
std::optional<FieldElement> principal_generator(const FractionalIdeal& a);

struct ClassGroup {
    Int h;
    std::vector<FractionalIdeal> reps;  // deterministic; reps[0] = O_K
    // index into reps of the class of a
    int class_of(const FractionalIdeal& a) const;
    const FieldDescriptor* K;
};

// Computed by Minkowski-bound enumeration; deterministic representative
// choice: minimal norm, ties broken lexicographically on the normal form
// (reversed under TieBreak::MinNormLexLargest).
ClassGroup compute_class_group(const FieldDescriptor* K);

// Sum ideal of the coordinates (the content ideal). x must contain a nonzero
// entry.
FractionalIdeal content_ideal(const std::vector<FieldElement>& x);

// ---------------------------------------------------------------------------
// Small integral ideals over int64, the hot kernel behind the combinatorial
// scans. Semantics match FractionalIdeal restricted to integral ideals;
// validated against it in tests. Norm products must stay within int64.
struct SmallIdeal {
    i64 a = 1, b = 0, c = 1;  // Z*a + Z*(b + c*omega); degree 1 uses a only (c = 1, b = 0)

    bool operator==(const SmallIdeal&) const = default;
    auto operator<=>(const SmallIdeal&) const = default;
};

struct SmallCtx {
    int degree;
    i64 wt, wn;  // omega^2 = wt*omega + wn
    static SmallCtx of(const FieldDescriptor* K);
};

SmallIdeal small_ring();
i64 small_norm(const SmallCtx& F, const SmallIdeal& x);
SmallIdeal small_mul(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y);
SmallIdeal small_sum(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y);
// exact quotient; requires y | x
SmallIdeal small_div(const SmallCtx& F, const SmallIdeal& x, const SmallIdeal& y);
bool small_is_ring(const SmallIdeal& x);
SmallIdeal small_of(const FractionalIdeal& a);        // a integral, entries in range
FractionalIdeal small_to_ideal(const FieldDescriptor* K, const SmallIdeal& x);

}  // namespace manin
