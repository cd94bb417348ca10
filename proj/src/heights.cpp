#include "manin/heights.hpp"

#include <stdexcept>

#include "manin/units.hpp"

namespace manin {

ProjectivePoint ProjectivePoint::make(std::vector<FieldElement> coords) {
    if (coords.size() != 3 && coords.size() != 4)
        throw std::invalid_argument("projective point needs 3 or 4 coordinates");
    bool nonzero = false;
    for (const auto& c : coords) nonzero = nonzero || !c.is_zero();
    if (!nonzero) throw std::invalid_argument("zero vector is not a projective point");
    return ProjectivePoint{std::move(coords), false};
}

bool ProjectivePoint::operator==(const ProjectivePoint& o) const {
    if (coords.size() != o.coords.size()) return false;
    // cross ratios: x_i y_j = x_j y_i for all i < j
    for (size_t i = 0; i < coords.size(); ++i)
        for (size_t j = i + 1; j < coords.size(); ++j)
            if (coords[i] * o.coords[j] != coords[j] * o.coords[i]) return false;
    return true;
}

bool PointKeyLess::operator()(const ProjectivePoint& x, const ProjectivePoint& y) const {
    if (x.coords.size() != y.coords.size()) return x.coords.size() < y.coords.size();
    for (size_t i = 0; i < x.coords.size(); ++i) {
        const FieldElement &a = x.coords[i], &b = y.coords[i];
        int c = cmp(a.a(), b.a());
        if (c != 0) return c < 0;
        c = cmp(a.b(), b.b());
        if (c != 0) return c < 0;
    }
    return false;
}

FieldElement torsion_canonical_unit(const FieldElement& x) {
    if (x.is_zero()) throw std::invalid_argument("torsion normalization of zero");
    const FieldDescriptor* K = x.field();
    for (const FieldElement& z : K->torsion) {
        FieldElement y = z * x;
        if (K->s == 0) {
            if (y.sign_sigma1() > 0) return z;
        } else if (K->d == -1) {
            // quadrant Re > 0, Im >= 0
            if (y.a() > 0 && y.b() >= 0) return z;
        } else if (K->d == -3) {
            // sector of angle pi/3: b >= 0 and a > b
            if (y.b() >= 0 && y.a() > y.b()) return z;
        } else {
            // omega_K = 2 imaginary: upper half plane, positive real axis included
            if (y.b() > 0 || (y.b() == 0 && y.a() > 0)) return z;
        }
    }
    throw std::logic_error("no torsion unit reaches the canonical sector");
}

ProjectivePoint normalize_point(const ProjectivePoint& p) {
    const FieldDescriptor* K = p.field();
    FractionalIdeal c = content_ideal(p.coords);
    // lambda with (lambda) = C * c^{-1}, C the class representative of [c]
    ClassGroup G{K->h, K->class_reps, K};
    const FractionalIdeal& C = K->class_reps[G.class_of(c)];
    auto lambda = principal_generator(C / c);
    if (!lambda) throw std::logic_error("class representative mismatch");
    std::vector<FieldElement> v;
    v.reserve(p.coords.size());
    for (const auto& x : p.coords) v.push_back(*lambda * x);
    auto [k, reduced] = reduce_tuple_mod_units(v);
    (void)k;
    const FieldElement* first = nullptr;
    for (const auto& x : reduced)
        if (!x.is_zero()) {
            first = &x;
            break;
        }
    FieldElement rot = torsion_canonical_unit(*first);
    for (auto& x : reduced) x = rot * x;
    return ProjectivePoint{std::move(reduced), true};
}

ProjectivePoint psi0(const ProjectivePoint& x) {
    if (x.coords.size() != 3) throw std::invalid_argument("psi0 domain is P^2");
    const FieldElement &x23 = x.coords[0], &x31 = x.coords[1], &x12 = x.coords[2];
    if (x23.is_zero() || x31.is_zero() || x12.is_zero())
        throw std::invalid_argument("psi0 needs all coordinates nonzero");
    return ProjectivePoint::make(
        {x12 * x23 * x31, x12 * x31 * x31, x23 * x12 * x12, x31 * x23 * x23});
}

bool on_surface(const ProjectivePoint& y) {
    if (y.coords.size() != 4) return false;
    const auto& c = y.coords;
    return c[0] * c[0] * c[0] == c[1] * c[2] * c[3];
}

bool on_open_subset_U(const ProjectivePoint& y) {
    if (!on_surface(y)) return false;
    for (const auto& c : y.coords)
        if (c.is_zero()) return false;
    return true;
}

ProjectivePoint psi0_inverse(const ProjectivePoint& y) {
    if (!on_open_subset_U(y)) throw std::invalid_argument("point not on U");
    const auto& c = y.coords;
    return ProjectivePoint::make({c[0] * c[0], c[0] * c[1], c[1] * c[2]});
}

int archimedean_sup_product_compare(const std::vector<FieldElement>& coords, const Rat& t) {
    const FieldDescriptor* K = coords.front().field();
    SchanuelDomain D{K};
    std::vector<FieldElement> m = D.place_maxima(coords);
    if (K->is_rational()) return embed_compare_rat(m[0], t, 0);
    if (K->is_imaginary()) return cmp(m[0].norm(), t);
    return archimedean_product_compare(m[0], m[1], t);
}

bool weil_height_leq(const ProjectivePoint& y, const Rat& B) {
    FractionalIdeal c = content_ideal(y.coords);
    return archimedean_sup_product_compare(y.coords, B * c.norm()) <= 0;
}

Interval weil_height(const ProjectivePoint& y, mpfr_prec_t prec) {
    const FieldDescriptor* K = y.field();
    FractionalIdeal c = content_ideal(y.coords);
    SchanuelDomain D{K};
    std::vector<FieldElement> m = D.place_maxima(y.coords);
    Interval prod = Interval::exact(1L, prec);
    for (int i = 0; i < K->places(); ++i)
        prod = prod * m[i].abs_embedding(i, prec).pow(K->local_degree(i));
    return prod / Interval::exact(c.norm(), prec);
}

}  // namespace manin
