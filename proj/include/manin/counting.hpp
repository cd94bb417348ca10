#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "manin/heights.hpp"
#include "manin/ideals.hpp"
#include "manin/torsor.hpp"
#include "manin/util.hpp"

namespace manin {

enum class Strategy { TorsorParametrized, DirectBox };

struct EnumerationResult {
    Int count = 0;
    // normalized representatives, sorted; filled when count <= point_limit
    std::vector<ProjectivePoint> points;
    bool points_complete = false;
};

struct EnumerationOptions {
    u64 budget = 1'000'000'000;   // candidate limit; beyond it the run is refused
    bool parallel = true;
    u64 point_limit = 1'000'000;  // stream instead of store above this
};

// Exact count of points of U(K) = {x0^3 = x1 x2 x3, off the lines} of Weil
// height <= B. The two strategies are independent routes to the same number:
// DirectBox enumerates bounded coordinate boxes in P^3 and solves the cube;
// TorsorParametrized enumerates coprime ideal 9-tuples (plus unit-exponent
// windows when the unit group is infinite) and maps them down.
EnumerationResult enumerate_NB(const FieldDescriptor* K, const Rat& B, Strategy strategy,
                               const EnumerationOptions& opt = {});

struct TorsorCheckResult {
    Int n_points;       // N(B) by direct enumeration
    Int lhs;            // omega_K^7 * N(B)
    Int rhs;            // fiber-union count, each fiber verified inside M_C x R(u_C B)
    Int rhs_ideal_side; // omega_K^9 * (number of admissible ideal tuples)
    bool equal;
    bool fibers_disjoint;
};

// Verifies the torsor counting identity at bound B by constructing every
// fiber and checking membership, sizes, and disjointness.
TorsorCheckResult torsor_count_check(const FieldDescriptor* K, const Rat& B,
                                     const EnumerationOptions& opt = {});

struct LatticeData {
    Rat det_sq;            // exact squared determinant of the embedded basis
    bool formula_matches;  // det_sq == (t1^d1...t^d * 2^-s * Na * sqrt|Delta|)^2 exactly
    Interval det;          // certified value
    Rat lambda_sq_low;     // exact lower-bound certificate (t1^d1... * Na)^{2/d}
    Interval lambda;       // certified first minimum (exact square when rational)
    bool minimum_ok;       // lambda >= the stated lower bound, exactly
};

// Determinant and first successive minimum of the weighted embedded ideal
// lattice tau(sigma(a)), weights t_i > 0 rational, one per place.
LatticeData lattice_det_and_minimum(const FractionalIdeal& a, const std::vector<Rat>& t);

struct M1Result {
    Int count;
    Interval main_term;
    double relative_error;
};

// |M_1(T)|: triples (y_1,y_2,y_3) in a_1 x a_2 x a_3 intersected with the
// weighted orbit representative set, subject to
// prod_i max_j {C_ij |sigma_i(y_j)|}^{d_i} <= T^d. weights[i][j] > 0; empty
// weights mean all 1. Exact count plus the predicted main term.
M1Result count_M1(const FieldDescriptor* K, const Rat& T,
                  const std::vector<std::vector<Rat>>& weights,
                  const std::array<FractionalIdeal, 3>& ideals,
                  const EnumerationOptions& opt = {});

// Serial reference for the same set, generic arithmetic; used to validate the
// int64 kernels on small inputs.
Int count_M1_reference(const FieldDescriptor* K, const Rat& T,
                       const std::vector<std::vector<Rat>>& weights,
                       const std::array<FractionalIdeal, 3>& ideals);

struct LadderRung {
    Rat T;
    Int count;
    Interval main;
    double relative_error;
    double absolute_error;
};

struct LadderResult {
    std::vector<LadderRung> rungs;
    bool relative_errors_nonincreasing;
    // OLS slope of log|abs error| vs log T over rungs with nonzero error;
    // -infinity when fewer than two such rungs.
    double fitted_exponent;
};

LadderResult m1_ladder(const FieldDescriptor* K, const std::vector<Rat>& Ts,
                       const std::vector<std::vector<Rat>>& weights,
                       const std::array<FractionalIdeal, 3>& ideals,
                       const EnumerationOptions& opt = {});

// All integral elements x with |sigma_i(x)| <= bounds[i] (exact comparisons
// against the rational bounds), zero excluded.
std::vector<FieldElement> elements_in_box(const FieldDescriptor* K,
                                          const std::vector<Rat>& bounds);

}  // namespace manin
