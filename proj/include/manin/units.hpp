#pragma once

#include <optional>
#include <vector>

#include "manin/field.hpp"
#include "manin/util.hpp"

namespace manin {

// Unit group data of O_K: torsion size, fundamental unit (rank q = 1 only),
// certified regulator.
struct UnitGroupData {
    int omega;                              // number of roots of unity
    std::optional<FieldElement> eps;        // smallest unit > 1 under sigma_1
    Interval regulator;                     // log sigma_1(eps); exact 1 if q = 0
    std::vector<FieldElement> torsion;      // all roots of unity
};

UnitGroupData unit_group_data(const FieldDescriptor* K);

// eps^k honoring the inverse_unit option (generator of the free part F).
FieldElement unit_power(const FieldDescriptor* K, long k);

// Minimal positive (x, y) with x^2 - d y^2 = +-4, found by continued
// fractions plus a bounded scan. Returns the unit (x + y sqrt d)/2.
FieldElement solve_pell(const FieldDescriptor* K);

// The logarithmic fundamental domain F for l(O_K^x) inside the trace-zero
// hyperplane, together with the local-degree weights. Membership tests are
// exact multiplicative comparisons; no logarithm is ever consulted for a
// decision.
struct SchanuelDomain {
    const FieldDescriptor* K;

    // Does (d_i log max_j |sigma_i(w_i z_j)|)_i lie in F(T)?  z is the tuple
    // (z_1..z_n) in K^n; weights w_{ij} > 0 scale coordinate j at place i
    // (empty weights = 1). T absent means F(infinity). starred additionally
    // requires every z_j nonzero.
    bool member(const std::vector<FieldElement>& z, const std::optional<Rat>& T,
                bool starred = false,
                const std::vector<std::vector<Rat>>& weights = {}) const;

    // Per-place maxima of the weighted tuple, folded into elements whose
    // sigma_i-absolute values are the maxima.
    std::vector<FieldElement> place_maxima(const std::vector<FieldElement>& z,
                                           const std::vector<std::vector<Rat>>& weights = {}) const;

    // prod_i max_i^{d_i} <= T^d, exactly (maxima as produced by place_maxima).
    static int product_compare(const std::vector<FieldElement>& maxima, const Rat& T);

    // n^q 2^{nr} pi^{ns} R_K
    Interval volume_formula(int n, mpfr_prec_t prec = 128) const;

    // Monte-Carlo estimate of Vol S_F^n(1) with a binomial 3-sigma band.
    struct McEstimate {
        double estimate;
        double sigma;   // one standard deviation of the estimate
        u64 hits, samples;
    };
    McEstimate volume_mc(int n, u64 samples, u64 seed, bool parallel = true) const;
};

SchanuelDomain schanuel_domain(const FieldDescriptor* K);

// The unique k with eps^k * x in the S_F^1(infinity) representative set;
// returns (eps^k, eps^k * x). Identity for q = 0 fields. Torsion is not
// quotiented.
std::pair<FieldElement, FieldElement> reduce_mod_units(const FieldElement& x);

// Same, scaling a whole tuple by one unit (the S_F^n(infinity) reduction).
// Returns the exponent k and the reduced tuple.
std::pair<long, std::vector<FieldElement>> reduce_tuple_mod_units(
    const std::vector<FieldElement>& z, const std::vector<std::vector<Rat>>& weights = {});

}  // namespace manin
