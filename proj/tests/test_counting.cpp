#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "manin/counting.hpp"
#include "manin/units.hpp"

using namespace manin;

TEST_CASE("N(1) over Q is 4") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    auto direct = enumerate_NB(Q, Rat(1), Strategy::DirectBox);
    CHECK(direct.count == 4);
    auto torsor = enumerate_NB(Q, Rat(1), Strategy::TorsorParametrized);
    CHECK(torsor.count == 4);
    // the four points have coordinates +-1 with x0 = 1
    REQUIRE(direct.points.size() == 4);
    for (const auto& p : direct.points) {
        CHECK(on_open_subset_U(p));
        for (const auto& c : p.coords) CHECK(abs(c.norm()) == 1);
    }
}

TEST_CASE("N(1) over Q(i) is 16") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    auto direct = enumerate_NB(Qi, Rat(1), Strategy::DirectBox);
    CHECK(direct.count == 16);
    auto torsor = enumerate_NB(Qi, Rat(1), Strategy::TorsorParametrized);
    CHECK(torsor.count == 16);
}

TEST_CASE("dual-strategy equality and identical point sets over Q") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    for (long B : {1L, 2L, 5L, 10L, 20L}) {
        auto a = enumerate_NB(Q, Rat(B), Strategy::DirectBox);
        auto b = enumerate_NB(Q, Rat(B), Strategy::TorsorParametrized);
        CAPTURE(B);
        CHECK(a.count == b.count);
        REQUIRE(a.points.size() == b.points.size());
        PointKeyLess less;
        for (size_t i = 0; i < a.points.size(); ++i) {
            CHECK(!less(a.points[i], b.points[i]));
            CHECK(!less(b.points[i], a.points[i]));
        }
    }
}

TEST_CASE("dual-strategy equality over Q(i)") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    for (long B : {1L, 2L, 5L}) {
        auto a = enumerate_NB(Qi, Rat(B), Strategy::DirectBox);
        auto b = enumerate_NB(Qi, Rat(B), Strategy::TorsorParametrized);
        CAPTURE(B);
        CHECK(a.count == b.count);
    }
}

TEST_CASE("dual-strategy equality over Q(sqrt 5), infinite units") {
    const FieldDescriptor* K = parse_field_spec("Q(sqrt:5)");
    for (long B : {1L, 2L}) {
        auto a = enumerate_NB(K, Rat(B), Strategy::DirectBox);
        auto b = enumerate_NB(K, Rat(B), Strategy::TorsorParametrized);
        CAPTURE(B);
        CHECK(a.count == b.count);
        CHECK(a.count > 0);
    }
}

TEST_CASE("dual-strategy equality over Q(sqrt -5), class number 2") {
    const FieldDescriptor* K = parse_field_spec("Q(sqrt:-5)");
    for (long B : {1L, 3L}) {
        auto a = enumerate_NB(K, Rat(B), Strategy::DirectBox);
        auto b = enumerate_NB(K, Rat(B), Strategy::TorsorParametrized);
        CAPTURE(B);
        CHECK(a.count == b.count);
    }
}

TEST_CASE("every enumerated point is on U with height <= B") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    auto res = enumerate_NB(Q, Rat(30), Strategy::DirectBox);
    for (const auto& x : res.points) {
        CHECK(on_open_subset_U(x));
        CHECK(weil_height_leq(x, Rat(30)));
    }
    // strictly more points at the next height with new ones above 30
    auto res2 = enumerate_NB(Q, Rat(60), Strategy::DirectBox);
    CHECK(res2.count > res.count);
    int above = 0;
    for (const auto& x : res2.points)
        if (!weil_height_leq(x, Rat(30))) ++above;
    CHECK(res2.count - res.count == above);
}

TEST_CASE("budget guard refuses oversized runs") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    EnumerationOptions opt;
    opt.budget = 1000;
    CHECK_THROWS_AS(enumerate_NB(Q, Rat(100), Strategy::DirectBox, opt), budget_exceeded);
    CHECK_THROWS_AS(enumerate_NB(Q, Rat(1, 2), Strategy::DirectBox), std::invalid_argument);
}

TEST_CASE("serial and parallel direct box agree") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    EnumerationOptions ser;
    ser.parallel = false;
    auto a = enumerate_NB(Q, Rat(40), Strategy::DirectBox, ser);
    auto b = enumerate_NB(Q, Rat(40), Strategy::DirectBox);
    CHECK(a.count == b.count);
}

TEST_CASE("torsor count check at small bounds") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    auto r = torsor_count_check(Q, Rat(1));
    CHECK(r.n_points == 4);
    CHECK(r.lhs == 512);
    CHECK(r.rhs == 512);
    CHECK(r.rhs_ideal_side == 512);
    CHECK(r.equal);
    CHECK(r.fibers_disjoint);

    auto r10 = torsor_count_check(Q, Rat(10));
    CHECK(r10.equal);

    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    auto ri = torsor_count_check(Qi, Rat(2));
    CHECK(ri.equal);
    CHECK(ri.lhs == Int(16384) * ri.n_points);
}

TEST_CASE("lattice determinant and minimum: pinned examples") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    auto r = lattice_det_and_minimum(FractionalIdeal::ring_of_integers(Q), {Rat(1)});
    CHECK(r.det_sq == 1);
    CHECK(r.formula_matches);
    CHECK(r.minimum_ok);
    CHECK(r.lambda.contains(Rat(1)));

    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    auto ri = lattice_det_and_minimum(FractionalIdeal::ring_of_integers(Qi), {Rat(1)});
    CHECK(ri.det_sq == 1);  // det = 2^{-1} * 1 * sqrt(4) = 1
    CHECK(ri.formula_matches);
    CHECK(ri.lambda.contains(Rat(1)));
    CHECK(ri.minimum_ok);

    auto rp = lattice_det_and_minimum(FractionalIdeal::principal(Qi->elem_int(1, 1)), {Rat(1)});
    CHECK(rp.det_sq == 4);  // det = 2
    CHECK(rp.formula_matches);
    // lambda = sqrt(2) >= sqrt(2) bound
    CHECK(rp.minimum_ok);
    CHECK(rp.lambda.contains(Rat(0)) == false);
    CHECK(rp.lambda_sq_low == 2);
}

TEST_CASE("lattice determinant formula matches Gram on random inputs") {
    std::mt19937_64 rng(101);
    for (const char* spec : {"Q", "Q(sqrt:-1)", "Q(sqrt:5)", "Q(sqrt:-5)", "Q(sqrt:2)"}) {
        const FieldDescriptor* K = parse_field_spec(spec);
        auto pool = ideals_up_to(K, 40);
        for (int it = 0; it < 100; ++it) {
            const auto& a = pool[rng() % pool.size()];
            std::vector<Rat> t;
            for (int i = 0; i < K->places(); ++i)
                t.push_back(make_rat(Int(1 + rng() % 12), Int(1 + rng() % 7)));
            auto r = lattice_det_and_minimum(a, t);
            CAPTURE(spec);
            CHECK(r.formula_matches);
            CHECK(r.minimum_ok);
        }
    }
}

TEST_CASE("M1 counts: box count over Q") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    std::array<FractionalIdeal, 3> ideals = {FractionalIdeal::ring_of_integers(Q),
                                             FractionalIdeal::ring_of_integers(Q),
                                             FractionalIdeal::ring_of_integers(Q)};
    auto r = count_M1(Q, Rat(10), {}, ideals);
    CHECK(r.count == 8000);  // (2*10)^3
    CHECK(r.main_term.contains(Rat(8000)));
    CHECK(r.relative_error < 1e-12);
    // empty region below the smallest attainable value
    auto r0 = count_M1(Q, make_rat(Int(1), Int(2)), {}, ideals);
    CHECK(r0.count == 0);
    // reference kernel agrees
    CHECK(count_M1_reference(Q, Rat(7), {}, ideals) == 2744);
}

TEST_CASE("M1 counts with weights and ideals over Q") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    std::array<FractionalIdeal, 3> ideals = {FractionalIdeal::principal(Q->elem_int(2)),
                                             FractionalIdeal::principal(Q->elem_int(3)),
                                             FractionalIdeal::principal(Q->elem_int(5))};
    auto r = count_M1(Q, Rat(10), {}, ideals);
    CHECK(r.count == 8 * 5 * 3 * 2);  // 2 floor(10/2) * 2 floor(10/3) * 2 floor(10/5)
    CHECK(count_M1_reference(Q, Rat(10), {}, ideals) == r.count);
    // rational weights
    std::vector<std::vector<Rat>> w = {{make_rat(Int(1), Int(2)), Rat(1), Rat(2)}};
    std::array<FractionalIdeal, 3> ok = {FractionalIdeal::ring_of_integers(Q),
                                         FractionalIdeal::ring_of_integers(Q),
                                         FractionalIdeal::ring_of_integers(Q)};
    auto rw = count_M1(Q, Rat(5), w, ok);
    CHECK(rw.count == (2 * 10) * (2 * 5) * (2 * 2));
    CHECK(count_M1_reference(Q, Rat(5), w, ok) == rw.count);
}

TEST_CASE("M1 over Q(i): disk products, reference agreement") {
    const FieldDescriptor* Qi = parse_field_spec("Q(sqrt:-1)");
    std::array<FractionalIdeal, 3> ideals = {FractionalIdeal::ring_of_integers(Qi),
                                             FractionalIdeal::ring_of_integers(Qi),
                                             FractionalIdeal::principal(Qi->elem_int(1, 1))};
    auto r = count_M1(Qi, Rat(4), {}, ideals);
    CHECK(r.count == count_M1_reference(Qi, Rat(4), {}, ideals));
    CHECK(r.count > 0);
}

TEST_CASE("M1 over Q(sqrt 5): fast kernel vs reference") {
    const FieldDescriptor* K = parse_field_spec("Q(sqrt:5)");
    std::array<FractionalIdeal, 3> ideals = {FractionalIdeal::ring_of_integers(K),
                                             FractionalIdeal::ring_of_integers(K),
                                             FractionalIdeal::ring_of_integers(K)};
    for (long T : {1L, 2L, 3L}) {
        auto fast = count_M1(K, Rat(T), {}, ideals);
        Int ref = count_M1_reference(K, Rat(T), {}, ideals);
        CAPTURE(T);
        CHECK(fast.count == ref);
    }
    // serial/parallel agreement
    EnumerationOptions ser;
    ser.parallel = false;
    auto a = count_M1(K, Rat(4), {}, ideals, ser);
    auto b = count_M1(K, Rat(4), {}, ideals);
    CHECK(a.count == b.count);
    // count invariance under the inverse-unit convention
    FieldOptions inv;
    inv.inverse_unit = true;
    const FieldDescriptor* Ki = parse_field_spec("Q(sqrt:5)", inv);
    std::array<FractionalIdeal, 3> ideals_i = {FractionalIdeal::ring_of_integers(Ki),
                                               FractionalIdeal::ring_of_integers(Ki),
                                               FractionalIdeal::ring_of_integers(Ki)};
    for (long T : {2L, 4L}) {
        auto x = count_M1(K, Rat(T), {}, ideals);
        auto y = count_M1(Ki, Rat(T), {}, ideals_i);
        CHECK(x.count == y.count);
    }
}

TEST_CASE("M1 ladder over Q with non-unit ideals: frozen values") {
    const FieldDescriptor* Q = parse_field_spec("Q");
    std::array<FractionalIdeal, 3> ideals = {FractionalIdeal::principal(Q->elem_int(2)),
                                             FractionalIdeal::principal(Q->elem_int(3)),
                                             FractionalIdeal::principal(Q->elem_int(5))};
    std::vector<Rat> Ts = {Rat(10), Rat(20), Rat(40), Rat(80), Rat(160)};
    auto lad = m1_ladder(Q, Ts, {}, ideals);
    REQUIRE(lad.rungs.size() == 5);
    CHECK(lad.rungs[0].count == 240);
    CHECK(lad.rungs[1].count == 1920);
    CHECK(lad.rungs[2].count == 16640);
    CHECK(lad.rungs[3].count == 133120);
    CHECK(lad.rungs[4].count == 1085440);
    CHECK(lad.relative_errors_nonincreasing);
    CHECK(lad.fitted_exponent <= 2.3);
}

TEST_CASE("N(B) torsor count invariant under unit and tie-break conventions") {
    FieldOptions inv;
    inv.inverse_unit = true;
    const FieldDescriptor* K = parse_field_spec("Q(sqrt:5)");
    const FieldDescriptor* Ki = parse_field_spec("Q(sqrt:5)", inv);
    auto a = enumerate_NB(K, Rat(2), Strategy::TorsorParametrized);
    auto b = enumerate_NB(Ki, Rat(2), Strategy::TorsorParametrized);
    CHECK(a.count == b.count);

    FieldOptions alt;
    alt.tie_break = TieBreak::MinNormLexLargest;
    const FieldDescriptor* K5 = parse_field_spec("Q(sqrt:-5)");
    const FieldDescriptor* K5a = parse_field_spec("Q(sqrt:-5)", alt);
    auto c = enumerate_NB(K5, Rat(3), Strategy::TorsorParametrized);
    auto d = enumerate_NB(K5a, Rat(3), Strategy::TorsorParametrized);
    CHECK(c.count == d.count);
}
