#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "manin/field.hpp"
#include "manin/units.hpp"

using namespace manin;

TEST_CASE("unit group data") {
    const FieldDescriptor* K3 = parse_field_spec("Q(sqrt:-3)");
    CHECK(K3->omega_roots == 6);
    CHECK(!K3->fundamental_unit.has_value());
    CHECK(K3->torsion.size() == 6);
    for (const auto& z : K3->torsion) CHECK(abs(z.norm()) == 1);

    const FieldDescriptor* K2 = parse_field_spec("Q(sqrt:2)");
    REQUIRE(K2->fundamental_unit.has_value());
    CHECK(*K2->fundamental_unit == K2->elem_int(1, 1));  // 1 + sqrt 2
    CHECK(K2->regulator.mid_d() == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-12));

    const FieldDescriptor* Q = parse_field_spec("Q");
    CHECK(Q->omega_roots == 2);
    CHECK(Q->regulator.contains(Rat(1)));  // empty regulator convention

    // eps is a unit of infinite order with |N| = 1 and positive regulator
    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    CHECK(abs(Q5->fundamental_unit->norm()) == 1);
    CHECK(Q5->regulator.is_positive());
}

TEST_CASE("pell solver on several fields") {
    // frozen classical fundamental units
    struct Row { const char* spec; long a2, b2; };  // eps = (a2 + b2 sqrt d)/2
    for (Row row : {Row{"Q(sqrt:2)", 2, 2}, Row{"Q(sqrt:3)", 4, 2}, Row{"Q(sqrt:5)", 1, 1},
                    Row{"Q(sqrt:13)", 3, 1}, Row{"Q(sqrt:10)", 6, 2}}) {
        const FieldDescriptor* K = parse_field_spec(row.spec);
        REQUIRE(K->fundamental_unit.has_value());
        CHECK(K->fundamental_unit->a() * 2 == row.a2);
        CHECK(K->fundamental_unit->b() * 2 == row.b2);
    }
}

TEST_CASE("schanuel membership, q = 0") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    SchanuelDomain D = schanuel_domain(Qi);
    // any tuple with prod max^{d_i} <= T^d is in F(T)
    CHECK(D.member({Qi->elem_int(1, 0)}, Rat(1)));
    CHECK(D.member({Qi->elem_int(1, 1)}, Rat(2)));   // N = 2 <= 4
    CHECK(!D.member({Qi->elem_int(1, 1)}, Rat(1)));  // N = 2 > 1
    CHECK(D.member({Qi->elem_int(5, 3)}, std::nullopt));
}

TEST_CASE("schanuel membership, q = 1") {
    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    SchanuelDomain D = schanuel_domain(Q5);
    // all-ones tuple: log vector 0 is in F(T) for T >= 1
    std::vector<FieldElement> ones = {Q5->one(), Q5->one(), Q5->one()};
    CHECK(D.member(ones, Rat(1)));
    CHECK(!D.member(ones, Rat(1, 2)));

    // scaling by eps moves out of the window: exactly one of z, eps z is in
    FieldElement eps = *Q5->fundamental_unit;
    std::mt19937_64 rng(37);
    for (int it = 0; it < 1000; ++it) {
        FieldElement z = Q5->elem_int((long)(rng() % 21) - 10, (long)(rng() % 21) - 10);
        if (z.is_zero() || z.norm() == 0) continue;
        int count = 0;
        // exactly one k in a window puts eps^k z inside F(infinity)
        for (long k = -8; k <= 8; ++k) {
            if (D.member({eps.pow(k) * z}, std::nullopt)) ++count;
        }
        CHECK(count == 1);
    }
}

TEST_CASE("tiling: exactly one unit translate lands inside (tuples)") {
    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    SchanuelDomain D = schanuel_domain(Q5);
    FieldElement eps = *Q5->fundamental_unit;
    std::mt19937_64 rng(41);
    for (int it = 0; it < 300; ++it) {
        std::vector<FieldElement> z;
        for (int j = 0; j < 3; ++j)
            z.push_back(Q5->elem_int((long)(rng() % 13) - 6, (long)(rng() % 13) - 6));
        bool zero = false;
        for (auto& y : z) zero = zero || y.is_zero() || y.norm() == 0;
        if (zero) continue;
        int count = 0;
        for (long k = -8; k <= 8; ++k) {
            std::vector<FieldElement> w;
            for (auto& y : z) w.push_back(eps.pow(k) * y);
            if (D.member(w, std::nullopt)) ++count;
        }
        CHECK(count == 1);
    }
}

TEST_CASE("homogeneity: member(z, T) iff member(z/T, 1)") {
    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    SchanuelDomain D = schanuel_domain(Q5);
    std::mt19937_64 rng(43);
    for (int it = 0; it < 300; ++it) {
        std::vector<FieldElement> z;
        for (int j = 0; j < 2; ++j)
            z.push_back(Q5->elem_int((long)(rng() % 9) - 4, (long)(rng() % 9) - 4));
        bool zero = false;
        for (auto& y : z) zero = zero || y.is_zero() || y.norm() == 0;
        if (zero) continue;
        Rat T(1 + (long)(rng() % 7), 1 + (long)(rng() % 3));
        std::vector<FieldElement> zT;
        for (auto& y : z) zT.push_back(y * Q5->elem(Rat(1) / T));
        CHECK(D.member(z, T) == D.member(zT, Rat(1)));
    }
}

TEST_CASE("reduce_mod_units") {
    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    FieldElement eps = *Q5->fundamental_unit;
    // x = eps^3 reduces to 1 with u = eps^-3
    auto [u, red] = reduce_mod_units(eps.pow(3));
    CHECK(u * eps.pow(3) == red);
    CHECK(red == Q5->one());
    auto [u1, red1] = reduce_mod_units(Q5->one());
    CHECK(u1 == Q5->one());

    // x = 7 + 5 sqrt2 over Q(sqrt:2): the reduced element is unique; verify
    // by exhaustive scan over unit exponents
    const FieldDescriptor* K2 = parse_field_spec("Q(sqrt:2)");
    FieldElement x = K2->elem_int(7, 5);
    auto [u2, red2] = reduce_mod_units(x);
    SchanuelDomain D2 = schanuel_domain(K2);
    CHECK(D2.member({red2}, std::nullopt));
    int hits = 0;
    for (long k = -12; k <= 12; ++k)
        if (D2.member({K2->fundamental_unit->pow(k) * x}, std::nullopt)) ++hits;
    CHECK(hits == 1);

    // q = 0: identity
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    auto [u3, red3] = reduce_mod_units(Qi->elem_int(3, 4));
    CHECK(u3 == Qi->one());
    CHECK(red3 == Qi->elem_int(3, 4));

    CHECK_THROWS_AS(reduce_mod_units(Q5->zero()), std::invalid_argument);
}

TEST_CASE("inverse-unit convention still tiles and reduces") {
    FieldOptions opt;
    opt.inverse_unit = true;
    const FieldDescriptor* K = parse_field_spec("Q(sqrt:5)", opt);
    SchanuelDomain D = schanuel_domain(K);
    FieldElement g = unit_power(K, 1);
    CHECK(g == K->fundamental_unit->inv());
    std::mt19937_64 rng(47);
    for (int it = 0; it < 300; ++it) {
        FieldElement z = K->elem_int((long)(rng() % 21) - 10, (long)(rng() % 21) - 10);
        if (z.is_zero() || z.norm() == 0) continue;
        int count = 0;
        for (long k = -8; k <= 8; ++k)
            if (D.member({g.pow(k) * z}, std::nullopt)) ++count;
        CHECK(count == 1);
        auto [kk, red] = reduce_tuple_mod_units({z});
        CHECK(D.member(red, std::nullopt));
    }
}

TEST_CASE("schanuel volume formula values") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    SchanuelDomain Di = schanuel_domain(Qi);
    // n^0 2^0 pi^n R: n = 1 -> pi, n = 3 -> pi^3
    CHECK(Di.volume_formula(1).mid_d() == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(Di.volume_formula(3).mid_d() == doctest::Approx(M_PI * M_PI * M_PI).epsilon(1e-12));

    const FieldDescriptor* Q5 = parse_field_spec("Q(sqrt:5)");
    SchanuelDomain D5 = schanuel_domain(Q5);
    double R = std::log((1 + std::sqrt(5.0)) / 2);
    CHECK(D5.volume_formula(1).mid_d() == doctest::Approx(4 * R).epsilon(1e-12));
    CHECK(D5.volume_formula(3).mid_d() == doctest::Approx(3 * 64 * R).epsilon(1e-12));
}

TEST_CASE("monte carlo volume matches the formula at modest samples") {
    for (const char* spec : {"Q(sqrt:-1)", "Q(sqrt:5)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        SchanuelDomain D = schanuel_domain(K);
        for (int n : {1, 3}) {
            auto est = D.volume_mc(n, 400000, 12345);
            double target = D.volume_formula(n).mid_d();
            CHECK(std::abs(est.estimate - target) < 5 * est.sigma + 1e-9);
            // serial reference gives the identical count
            auto est_serial = D.volume_mc(n, 400000, 12345, /*parallel=*/false);
            CHECK(est.hits == est_serial.hits);
        }
    }
}
