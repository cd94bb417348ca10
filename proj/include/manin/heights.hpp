#pragma once

#include <vector>

#include "manin/field.hpp"
#include "manin/ideals.hpp"
#include "manin/util.hpp"

namespace manin {

// Point of P^2(K) or P^3(K) with exact coordinates. `normalized` marks the
// canonical representative produced by normalize(): integral coordinates
// whose content is the fixed class representative, unit-reduced and rotated
// into the torsion sector. Canonical representatives are unique, so they
// serve as dictionary keys for point sets.
struct ProjectivePoint {
    std::vector<FieldElement> coords;
    bool normalized = false;

    const FieldDescriptor* field() const { return coords.front().field(); }
    static ProjectivePoint make(std::vector<FieldElement> coords);

    bool operator==(const ProjectivePoint& o) const;  // exact projective equality
};

// Strict ordering on coordinate tuples (not projective); meaningful for
// normalized representatives.
struct PointKeyLess {
    bool operator()(const ProjectivePoint& x, const ProjectivePoint& y) const;
};

// Canonical representative described above.
ProjectivePoint normalize_point(const ProjectivePoint& p);

// Rotate x by the torsion unit that puts it in the canonical sector
// (first: sigma_1 > 0 / complex argument in [0, 2 pi / omega_K)).
// Returns the torsion unit used.
FieldElement torsion_canonical_unit(const FieldElement& x);

// The parametrization of the surface x0^3 = x1 x2 x3:
//   psi0(x23, x31, x12) = (x12 x23 x31, x12 x31^2, x23 x12^2, x31 x23^2),
// a bijection W(K) -> U(K), where W is the locus x12 x23 x31 != 0 in P^2 and
// U the complement of the three lines in the surface.
ProjectivePoint psi0(const ProjectivePoint& x);
ProjectivePoint psi0_inverse(const ProjectivePoint& y);

bool on_surface(const ProjectivePoint& y);  // y0^3 = y1 y2 y3
bool on_open_subset_U(const ProjectivePoint& y);

// Exact Weil height test H(y) <= B and certified height value.
bool weil_height_leq(const ProjectivePoint& y, const Rat& B);
Interval weil_height(const ProjectivePoint& y, mpfr_prec_t prec = 128);

// prod_i (max_j |sigma_i(y_j)|)^{d_i} compared to the rational t, exactly.
int archimedean_sup_product_compare(const std::vector<FieldElement>& coords, const Rat& t);

}  // namespace manin
