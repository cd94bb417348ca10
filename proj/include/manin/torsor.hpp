#pragma once

#include <array>
#include <optional>
#include <vector>

#include "manin/heights.hpp"
#include "manin/ideals.hpp"
#include "manin/util.hpp"

namespace manin {

// Vertex labels of the coprimality graph. Single indices first, then the
// ordered pairs in the fixed order used throughout.
enum Vertex : int { V1 = 0, V2, V3, V12, V21, V23, V32, V31, V13 };
constexpr int kNumVertices = 9;
extern const char* const kVertexNames[kNumVertices];

// The 9-vertex graph whose NON-edges carry coprimality constraints:
//   E = {{k, jk}, {k, lk}, {kl, lk}} over the cyclic triples (j,k,l).
// E is a 9-cycle; its complement E' has 27 edges.
struct CoprimalityGraph {
    std::array<std::pair<int, int>, 9> edges;
    std::vector<std::pair<int, int>> complement;  // E', 27 pairs v < w
    bool adj[kNumVertices][kNumVertices] = {};

    static const CoprimalityGraph& get();
    bool adjacent(int v, int w) const { return adj[v][w]; }
};

// Decomposition b_j = c * a_jk * a_k^2 * a_lk * a_j * a_kj with the nine
// parts pairwise coprime along E'.
struct IdealDecomposition {
    FractionalIdeal c;
    std::array<FractionalIdeal, kNumVertices> a;
};

IdealDecomposition decompose_ideals(const FractionalIdeal& b1, const FractionalIdeal& b2,
                                    const FractionalIdeal& b3);
std::array<FractionalIdeal, 3> recompose(const IdealDecomposition& dec);

// int64 kernel versions for the exhaustive scans
struct SmallDecomposition {
    SmallIdeal c;
    std::array<SmallIdeal, kNumVertices> a;
};
SmallDecomposition small_decompose(const SmallCtx& F, const SmallIdeal& b1, const SmallIdeal& b2,
                                   const SmallIdeal& b3);
std::array<SmallIdeal, 3> small_recompose(const SmallCtx& F, const SmallDecomposition& dec);
bool small_coprime_on_complement(const SmallCtx& F, const std::array<SmallIdeal, kNumVertices>& a);

// A point of the torsor: nine nonzero coordinates y_v together with the
// class tuple (C, C1, C2, C3, C21, C32, C13) as indices into K->class_reps.
// The remaining class ideals are derived: C_jk = C C_k^-2 C_lk^-1 C_j^-1 C_kj^-1.
struct TorsorTuple {
    const FieldDescriptor* K = nullptr;
    std::array<FieldElement, kNumVertices> y;
    std::array<int, 7> cls = {};  // (C, C1, C2, C3, C21, C32, C13)

    FractionalIdeal class_ideal(int v) const;
    FractionalIdeal coprime_part(int v) const;  // a_v = y_v C_v^{-1}
    Rat u_factor() const;  // N(C^3 C1^-2 C2^-2 C3^-2 C21^-1 C32^-1 C13^-1)
    FieldElement psi(int j) const;  // j in {0,1,2,3}
    bool valid() const;
    std::string str() const;
};

// x_jk = y_jk y_k^2 y_lk y_j y_kj; the image point is (x23 : x31 : x12).
ProjectivePoint torsor_to_point(const TorsorTuple& t);

// Inverse construction: integral representative with content equal to its
// class representative, ideal decomposition, generator choices, unit
// reduction into the representative system R. Requires all coordinates of x
// nonzero.
TorsorTuple parametrize_point(const ProjectivePoint& x);

// zeta = (z, z1, z2, z3, z21, z32, z13), all units of O_K.
TorsorTuple unit_action(const std::array<FieldElement, 7>& zeta, const TorsorTuple& t);

// Exponent solution of z z_k^{-2} z_j^{-1} = alpha_j over the free unit part,
// for (j,k) in {(1,2),(2,3),(3,1)}; alpha_v as exponents of the generator.
// No solution unless alpha_1 alpha_2 alpha_3 is a cube.
struct UnitSystemSolution {
    long xi;       // cube root exponent
    long k2, k3;   // cached alpha_2, alpha_3
    // family member at parameter delta
    std::array<long, 4> zetas(long delta) const {
        return {3 * delta + xi - k2 + k3, delta, delta - xi + k3, delta + xi - k2};
    }
};
std::optional<UnitSystemSolution> solve_unit_system(long a1, long a2, long a3);

// Reduce a tuple into the orbit representative system R = R1 x R2:
// components 21,23,32,31,13 into R, component 12 into U rho R over cube-class
// representatives, then the unique diagonal shift placing (y1,y2,y3) in the
// S^3(infinity) window. Identity for q = 0.
TorsorTuple fundamental_rep(const TorsorTuple& t);

// Height-side membership test of the representative set at bound B.
bool membership_R_B(const TorsorTuple& t, const Rat& B);

// The full preimage of x inside the representative system: the omega_K^7
// torsion translates of the canonical tuple.
std::vector<TorsorTuple> fiber_of_point(const ProjectivePoint& x);

// Torsion-index bookkeeping for large fibers: multiplier exponents (mod
// omega_K) applied to each vertex coordinate for the torsion tuple with
// exponents zeta_exp.
std::array<int, kNumVertices> torsion_multiplier_exponents(const std::array<int, 7>& zeta_exp,
                                                           int omega);

}  // namespace manin
