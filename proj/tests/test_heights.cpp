#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "manin/heights.hpp"
#include "manin/units.hpp"

using namespace manin;

static ProjectivePoint pt(const FieldDescriptor* K, std::vector<long> v) {
    std::vector<FieldElement> c;
    for (long x : v) c.push_back(K->elem_int(x));
    return ProjectivePoint::make(std::move(c));
}

TEST_CASE("psi0 and its inverse") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    CHECK(psi0(pt(Q, {1, 1, 1})) == pt(Q, {1, 1, 1, 1}));

    ProjectivePoint y = psi0(pt(Q, {1, 2, 3}));
    CHECK(y == pt(Q, {6, 12, 9, 2}));
    CHECK(on_surface(y));  // 6^3 = 216 = 12*9*2
    ProjectivePoint back = psi0_inverse(y);
    CHECK(back == pt(Q, {1, 2, 3}));  // (36:72:108)

    CHECK_THROWS_AS(psi0(pt(Q, {0, 1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(psi0_inverse(pt(Q, {0, 1, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(psi0_inverse(pt(Q, {1, 1, 1, 2})), std::invalid_argument);
}

TEST_CASE("psi0 round trip on random W points") {
    std::mt19937_64 rng(51);
    for (const char* spec : {"Q", "Q(sqrt:-1)", "Q(sqrt:5)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        for (int it = 0; it < 200; ++it) {
            std::vector<FieldElement> c;
            for (int j = 0; j < 3; ++j)
                c.push_back(K->elem_int((long)(rng() % 15) - 7,
                                        K->is_rational() ? 0 : (long)(rng() % 15) - 7));
            bool bad = false;
            for (auto& x : c) bad = bad || x.is_zero() || x.norm() == 0;
            if (bad) continue;
            ProjectivePoint x = ProjectivePoint::make(c);
            ProjectivePoint y = psi0(x);
            CHECK(on_open_subset_U(y));
            CHECK(psi0_inverse(y) == x);
        }
    }
}

TEST_CASE("weil height over Q") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    ProjectivePoint ones = pt(Q, {1, 1, 1, 1});
    CHECK(weil_height_leq(ones, Rat(1)));
    CHECK(weil_height(ones).contains(Rat(1)));

    ProjectivePoint y = pt(Q, {6, 12, 9, 2});
    CHECK(weil_height(y).contains(Rat(12)));  // content 1, max 12
    CHECK(weil_height_leq(y, Rat(12)));
    CHECK(!weil_height_leq(y, Rat(11)));

    // content division: (2:4:6:8) has H = 4
    ProjectivePoint z = pt(Q, {2, 4, 6, 8});
    CHECK(weil_height(z).contains(Rat(4)));
}

TEST_CASE("weil height over Q(i), squared-modulus place") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    // (1+i : 2 : 2 : 2i): content (1+i) of norm 2, max |sigma|^2 = 4 -> H = 2
    ProjectivePoint y = ProjectivePoint::make(
        {Qi->elem_int(1, 1), Qi->elem_int(2), Qi->elem_int(2), Qi->elem_int(0, 2)});
    CHECK(weil_height(y).contains(Rat(2)));
    CHECK(weil_height_leq(y, Rat(2)));
    CHECK(!weil_height_leq(y, make_rat(Int(19), Int(10))));
}

TEST_CASE("height is scale invariant (rational certificate)") {
    std::mt19937_64 rng(53);
    for (const char* spec : {"Q", "Q(sqrt:-1)", "Q(sqrt:5)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        for (int it = 0; it < 100; ++it) {
            std::vector<FieldElement> c;
            for (int j = 0; j < 4; ++j)
                c.push_back(K->elem_int((long)(rng() % 9) - 4,
                                        K->is_rational() ? 0 : (long)(rng() % 9) - 4));
            bool all0 = true;
            for (auto& x : c) all0 = all0 && x.is_zero();
            if (all0) continue;
            ProjectivePoint y = ProjectivePoint::make(c);
            FieldElement lam = K->elem_int((long)(rng() % 7) - 3,
                                           K->is_rational() ? 0 : (long)(rng() % 7) - 3);
            if (lam.is_zero() || lam.norm() == 0) continue;
            std::vector<FieldElement> sc;
            for (auto& x : c) sc.push_back(lam * x);
            ProjectivePoint z = ProjectivePoint::make(sc);
            // same exact <= decisions on a grid of bounds
            for (long B : {1L, 2L, 3L, 5L, 10L, 100L})
                CHECK(weil_height_leq(y, Rat(B)) == weil_height_leq(z, Rat(B)));
        }
    }
}

TEST_CASE("H >= 1 on normalized points") {
    std::mt19937_64 rng(59);
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    for (int it = 0; it < 200; ++it) {
        std::vector<FieldElement> c;
        for (int j = 0; j < 4; ++j)
            c.push_back(Qi->elem_int((long)(rng() % 9) - 4, (long)(rng() % 9) - 4));
        bool all0 = true;
        for (auto& x : c) all0 = all0 && x.is_zero();
        if (all0) continue;
        ProjectivePoint y = ProjectivePoint::make(c);
        CHECK(!weil_height_leq(y, make_rat(Int(99), Int(100))));
    }
}

TEST_CASE("normalization produces a unique representative") {
    std::mt19937_64 rng(61);
    for (const char* spec : {"Q", "Q(sqrt:-1)", "Q(sqrt:5)", "Q(sqrt:-5)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        for (int it = 0; it < 60; ++it) {
            std::vector<FieldElement> c;
            for (int j = 0; j < 4; ++j)
                c.push_back(K->elem_int((long)(rng() % 9) - 4,
                                        K->is_rational() ? 0 : (long)(rng() % 9) - 4));
            bool all0 = true;
            for (auto& x : c) all0 = all0 && x.is_zero();
            if (all0) continue;
            ProjectivePoint y = ProjectivePoint::make(c);
            FieldElement lam = K->elem(make_rat(Int((long)(rng() % 7) - 3), Int(1 + rng() % 4)),
                                       K->is_rational()
                                           ? Rat(0)
                                           : make_rat(Int((long)(rng() % 7) - 3), Int(1 + rng() % 4)));
            if (lam.is_zero() || lam.norm() == 0) continue;
            std::vector<FieldElement> sc;
            for (auto& x : c) sc.push_back(lam * x);
            ProjectivePoint z = ProjectivePoint::make(sc);
            ProjectivePoint ny = normalize_point(y), nz = normalize_point(z);
            // identical coordinates, not merely projectively equal
            PointKeyLess less;
            CHECK(!less(ny, nz));
            CHECK(!less(nz, ny));
            // representative is integral with content equal to a class rep
            FractionalIdeal cont = content_ideal(ny.coords);
            bool is_rep = false;
            for (const auto& r : K->class_reps) is_rep = is_rep || cont == r;
            CHECK(is_rep);
        }
    }
}

TEST_CASE("torsion sector uniqueness") {
    for (const char* spec : {"Q(sqrt:-1)", "Q(sqrt:-3)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        std::mt19937_64 rng(67);
        for (int it = 0; it < 100; ++it) {
            FieldElement x = K->elem_int((long)(rng() % 9) - 4, (long)(rng() % 9) - 4);
            if (x.is_zero() || x.norm() == 0) continue;
            int in_sector = 0;
            for (const auto& z : K->torsion) {
                FieldElement y = z * x;
                FieldElement u = torsion_canonical_unit(y);
                if (u == K->one()) ++in_sector;
            }
            CHECK(in_sector == 1);  // exactly one torsion translate is canonical
        }
    }
}
