#include "manin/counting.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "manin/units.hpp"

namespace manin {

// --------------------------------------------------------------------------
// Bounded element enumeration

std::vector<FieldElement> elements_in_box(const FieldDescriptor* K,
                                          const std::vector<Rat>& bounds) {
    if ((int)bounds.size() != K->places()) throw std::invalid_argument("one bound per place");
    std::vector<FieldElement> out;
    if (K->is_rational()) {
        Rat b = bounds[0];
        Int n = b.get_num() / b.get_den();  // floor for b >= 0
        for (Int x = -n; x <= n; ++x)
            if (x != 0) out.push_back(K->elem(Rat(x)));
        return out;
    }
    double sd = std::sqrt(std::abs(K->d.get_d()));
    double w1, w2;  // real embeddings of omega (real case)
    if (K->half_basis) {
        w1 = (1 + sd) / 2;
        w2 = (1 - sd) / 2;
    } else {
        w1 = sd;
        w2 = -sd;
    }
    auto in_box = [&](const FieldElement& x) {
        for (int i = 0; i < K->places(); ++i)
            if (embed_compare_rat(x, bounds[i], i) > 0) return false;
        return true;
    };
    if (K->is_imaginary()) {
        // |sigma(u + v omega)|^2 = (u + v Re)^2 + (v Im)^2 <= b^2
        double b = bounds[0].get_d();
        double re = K->half_basis ? 0.5 : 0.0, im = K->half_basis ? sd / 2 : sd;
        long vmax = (long)(b / im) + 2;
        for (long v = -vmax; v <= vmax; ++v) {
            long umax = (long)(b + std::abs((double)v) * std::abs(re)) + 2;
            for (long u = -umax; u <= umax; ++u) {
                if (u == 0 && v == 0) continue;
                FieldElement x = K->elem_int(u) + K->elem_int(v) * K->omega();
                if (in_box(x)) out.push_back(x);
            }
        }
        return out;
    }
    // real quadratic: sigma_1 = u + v w1, sigma_2 = u + v w2
    double b1 = bounds[0].get_d(), b2 = bounds[1].get_d();
    long vmax = (long)((b1 + b2) / (w1 - w2)) + 2;
    for (long v = -vmax; v <= vmax; ++v) {
        double lo = std::max(-b1 - v * w1, -b2 - v * w2);
        double hi = std::min(b1 - v * w1, b2 - v * w2);
        for (long u = (long)std::floor(lo) - 1; u <= (long)std::ceil(hi) + 1; ++u) {
            if (u == 0 && v == 0) continue;
            FieldElement x = K->elem_int(u) + K->elem_int(v) * K->omega();
            if (in_box(x)) out.push_back(x);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Direct-box strategy

// int64 kernel over Q: iterate (x1, x2, x3), solve x0^3 = x1 x2 x3.
static std::vector<std::array<i64, 4>> direct_box_rational(i64 B, bool parallel, u64 budget) {
    u64 cand = (u64)B * (2 * (u64)B) * (2 * (u64)B);
    if (cand > budget) throw budget_exceeded("direct-box candidate count exceeds budget");
    auto icbrt = [](i64 p) -> i64 {
        double g = std::cbrt((double)p);
        for (i64 r = (i64)g - 2; r <= (i64)g + 2; ++r)
            if (r * r * r == p) return r;
        return 0;
    };
    auto gcd4 = [](i64 a, i64 b, i64 c, i64 d) {
        auto g2 = [](i64 x, i64 y) {
            x = x < 0 ? -x : x;
            y = y < 0 ? -y : y;
            while (y) {
                i64 t = x % y;
                x = y;
                y = t;
            }
            return x;
        };
        return g2(g2(a, b), g2(c, d));
    };
    std::vector<std::vector<std::array<i64, 4>>> partial((size_t)B + 1);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (i64 x1 = 1; x1 <= B; ++x1) {
        auto& mine = partial[(size_t)x1];
        for (i64 x2 = -B; x2 <= B; ++x2) {
            if (x2 == 0) continue;
            for (i64 x3 = -B; x3 <= B; ++x3) {
                if (x3 == 0) continue;
                i64 p = x1 * x2 * x3;
                i64 x0 = icbrt(p);
                if (x0 == 0 || x0 > B || x0 < -B) continue;
                std::array<i64, 4> t = {x0, x1, x2, x3};
                if (t[0] < 0)
                    for (auto& c : t) c = -c;
                if (gcd4(t[0], t[1], t[2], t[3]) != 1) continue;
                mine.push_back(t);
            }
        }
    }
    std::vector<std::array<i64, 4>> all;
    for (auto& v : partial) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

struct ElemKey {
    Rat a, b;
    bool operator<(const ElemKey& o) const {
        int c = cmp(a, o.a);
        if (c != 0) return c < 0;
        return cmp(b, o.b) < 0;
    }
};

// rational upper bound for sqrt of a nonnegative rational
static Rat rat_sqrt_ub(const Rat& x) {
    Int num = x.get_num(), den = x.get_den();
    Int s = isqrt(num * den) + 1;
    return make_rat(s, den);
}

// rational upper bound for the fundamental unit under sigma_1
static Rat eps_upper(const FieldDescriptor* K) {
    if (K->q == 0) return Rat(1);
    const FieldElement& e = *K->fundamental_unit;
    Rat sq_ub = make_rat(isqrt(K->d * Int(1000000000000L)) + 1, Int(1000000));
    return e.a() + e.b() * sq_ub;
}

// generic kernel: enumerate coordinate boxes, look the cube root up exactly
static std::vector<ProjectivePoint> direct_box_generic(const FieldDescriptor* K, const Rat& B,
                                                       u64 budget) {
    Rat maxrep(1);
    for (const auto& C : K->class_reps) maxrep = std::max(maxrep, C.norm());
    Rat Bp = B * maxrep;
    Rat sb = rat_sqrt_ub(Bp);
    std::vector<Rat> bounds;
    if (K->q == 1) {
        Rat eb = eps_upper(K);
        bounds = {eb * sb, eb * sb};
    } else {
        for (int i = 0; i < K->places(); ++i) bounds.push_back(sb);
    }
    std::vector<FieldElement> elems = elements_in_box(K, bounds);
    u64 n = elems.size();
    if (n * n * n > budget) throw budget_exceeded("direct-box candidate count exceeds budget");

    std::map<ElemKey, FieldElement> cube;
    for (const auto& z : elems) {
        FieldElement z3 = z * z * z;
        cube.emplace(ElemKey{z3.a(), z3.b()}, z);
    }
    std::set<ProjectivePoint, PointKeyLess> found;
    for (const auto& x1 : elems)
        for (const auto& x2 : elems) {
            FieldElement x12 = x1 * x2;
            for (const auto& x3 : elems) {
                FieldElement p = x12 * x3;
                auto it = cube.find(ElemKey{p.a(), p.b()});
                if (it == cube.end()) continue;
                ProjectivePoint pt = ProjectivePoint::make({it->second, x1, x2, x3});
                if (!weil_height_leq(pt, B)) continue;
                found.insert(normalize_point(pt));
            }
        }
    return {found.begin(), found.end()};
}

// --------------------------------------------------------------------------
// Torsor-parametrized strategy

namespace {

struct ClassData {
    std::array<int, 7> cls;
    std::array<FractionalIdeal, kNumVertices> class_ideal;
    std::array<int, kNumVertices> target_class;  // required class of a_v
    std::array<Rat, kNumVertices> cnorm;
    Rat u;                 // u_C
    std::array<Rat, 3> w;  // norm of the class part of psi_j
};

// norm exponent of each vertex inside psi_j
constexpr int kPsiExp[3][kNumVertices] = {
    // V1 V2 V3 V12 V21 V23 V32 V31 V13
    {3, 0, 0, 1, 2, 0, 0, 2, 1},  // psi_1
    {0, 3, 0, 2, 1, 1, 2, 0, 0},  // psi_2
    {0, 0, 3, 0, 0, 2, 1, 1, 2},  // psi_3
};

ClassData make_class_data(const FieldDescriptor* K, const std::array<int, 7>& cls,
                          const ClassGroup& G) {
    ClassData D;
    D.cls = cls;
    TorsorTuple t;
    t.K = K;
    t.cls = cls;
    for (int v = 0; v < kNumVertices; ++v) {
        D.class_ideal[v] = t.class_ideal(v);
        D.cnorm[v] = D.class_ideal[v].norm();
        D.target_class[v] = G.class_of(D.class_ideal[v].inverse());
    }
    D.u = t.u_factor();
    for (int j = 0; j < 3; ++j) {
        Rat r(1);
        for (int v = 0; v < kNumVertices; ++v) r *= rpow(D.cnorm[v], kPsiExp[j][v]);
        D.w[j] = r;
    }
    return D;
}

struct TorsorEnumState {
    const FieldDescriptor* K;
    const ClassData* D;
    Rat B_eff;  // u_C * B
    const std::vector<std::vector<FractionalIdeal>>* pools;
    std::array<const FractionalIdeal*, kNumVertices> chosen = {};
    std::array<Rat, 3> partial;
    u64 nodes = 0;
    u64 budget = 0;
    std::vector<std::array<FractionalIdeal, kNumVertices>> tuples;
};

// cubes first, then doubled occurrences, then single ones
constexpr int kSlotOrder[kNumVertices] = {V1, V2, V3, V21, V32, V13, V12, V23, V31};

void torsor_enum_rec(TorsorEnumState& st, int depth) {
    if (++st.nodes > st.budget) throw budget_exceeded("torsor enumeration exceeds budget");
    if (depth == kNumVertices) {
        std::array<FractionalIdeal, kNumVertices> t;
        for (int v = 0; v < kNumVertices; ++v) t[v] = *st.chosen[v];
        st.tuples.push_back(std::move(t));
        return;
    }
    int v = kSlotOrder[depth];
    const auto& G = CoprimalityGraph::get();
    const auto& pool = (*st.pools)[st.D->target_class[v]];
    for (const auto& a : pool) {
        Rat n = a.norm();
        bool fits = true;
        Rat np[3];
        for (int j = 0; j < 3 && fits; ++j) {
            np[j] = st.partial[j] * rpow(n, kPsiExp[j][v]);
            fits = np[j] * st.D->w[j] <= st.B_eff;
        }
        if (!fits) {
            if (n > 1) break;  // pool sorted by norm
            continue;
        }
        bool ok = true;
        for (int d2 = 0; d2 < depth && ok; ++d2) {
            int w = kSlotOrder[d2];
            if (!G.adjacent(v, w)) ok = (a + *st.chosen[w]).is_ring();
        }
        if (!ok) continue;
        st.chosen[v] = &a;
        Rat save[3] = {st.partial[0], st.partial[1], st.partial[2]};
        for (int j = 0; j < 3; ++j) st.partial[j] = np[j];
        torsor_enum_rec(st, depth + 1);
        for (int j = 0; j < 3; ++j) st.partial[j] = save[j];
    }
}

std::vector<std::array<int, 7>> class_tuples(int h) {
    std::vector<std::array<int, 7>> out;
    std::array<int, 7> c = {};
    for (;;) {
        out.push_back(c);
        int pos = 6;
        while (pos >= 0 && ++c[pos] == h) c[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

TorsorTuple base_tuple(const FieldDescriptor* K, const ClassData& D,
                       const std::array<FractionalIdeal, kNumVertices>& a) {
    TorsorTuple t;
    t.K = K;
    t.cls = D.cls;
    for (int v = 0; v < kNumVertices; ++v) {
        auto g = principal_generator(a[v] * D.class_ideal[v]);
        if (!g) throw std::logic_error("admissible tuple without principal a_v C_v");
        t.y[v] = *g;
    }
    return t;
}

// the omega_K^2 phase twists of the W-point produced from one y-tuple
void emit_points(const TorsorTuple& t, std::vector<ProjectivePoint>* sink) {
    if (!sink) return;
    const FieldDescriptor* K = t.K;
    ProjectivePoint x = torsor_to_point(t);
    for (const auto& s1 : K->torsion)
        for (const auto& s2 : K->torsion) {
            ProjectivePoint tw =
                ProjectivePoint::make({s1 * x.coords[0], s2 * x.coords[1], x.coords[2]});
            sink->push_back(normalize_point(tw));
        }
}

Int torsor_count(const FieldDescriptor* K, const Rat& B, const EnumerationOptions& opt,
                 std::vector<ProjectivePoint>* sink) {
    ClassGroup G{K->h, K->class_reps, K};
    std::vector<ClassData> cds;
    for (const auto& cls : class_tuples((int)K->h.get_si()))
        cds.push_back(make_class_data(K, cls, G));
    Rat pool_bound(0);
    for (const auto& D : cds)
        for (int j = 0; j < 3; ++j) pool_bound = std::max(pool_bound, Rat(D.u * B / D.w[j]));
    Int nb = pool_bound.get_num() / pool_bound.get_den();
    std::vector<std::vector<FractionalIdeal>> pools((size_t)K->h.get_si());
    if (nb >= 1)
        for (const auto& a : ideals_up_to(K, nb)) pools[G.class_of(a)].push_back(a);

    Int solutions = 0;
    for (const auto& D : cds) {
        if (D.u * B < D.w[0] || D.u * B < D.w[1] || D.u * B < D.w[2]) continue;
        TorsorEnumState st;
        st.K = K;
        st.D = &D;
        st.B_eff = D.u * B;
        st.pools = &pools;
        st.partial = {Rat(1), Rat(1), Rat(1)};
        st.budget = opt.budget;
        torsor_enum_rec(st, 0);
        for (const auto& a : st.tuples) {
            TorsorTuple t = base_tuple(K, D, a);
            if (K->q == 0) {
                if (!membership_R_B(t, st.B_eff)) throw std::logic_error("norm height mismatch");
                solutions += 1;
                emit_points(t, sink);
            } else {
                auto kfix = [&](int v) {
                    auto [k, red] = reduce_tuple_mod_units({t.y[v]});
                    (void)red;
                    return k;
                };
                long k21 = kfix(V21), k23 = kfix(V23), k32 = kfix(V32), k31 = kfix(V31),
                     k13 = kfix(V13);
                long k12base = kfix(V12);
                // initial window size: a solution tuple has every |sigma_i(psi_j)|
                // inside [N(psi_j)/S, S] with S = eps*sqrt(u_C B), which pins
                // 3 k_j log(g) within a computable interval.
                long Dbox = 6;
                {
                    double lng = std::abs(K->regulator.mid_d());
                    double S = std::log(eps_upper(K).get_d() *
                                        std::sqrt(st.B_eff.get_d()) + 2);
                    double worst = 0;
                    for (int j = 1; j <= 3; ++j) {
                        double nj = std::abs(t.psi(j).norm().get_d());
                        double width = (2 * S - std::log(std::max(nj, 1e-9))) / (3 * lng);
                        worst = std::max(worst, std::abs(width));
                    }
                    Dbox = std::max<long>(6, (long)std::ceil(worst) + 4);
                }
                for (;;) {
                    long found_at_edge = 0;
                    Int sols_here = 0;
                    std::vector<TorsorTuple> emitted;
                    for (long rho = 0; rho < 3; ++rho) {
                        long k12 = k12base + rho;
                        for (long d1 = -Dbox; d1 <= Dbox; ++d1)
                            for (long d2 = -Dbox; d2 <= Dbox; ++d2) {
                                std::vector<FieldElement> triple = {unit_power(K, d1) * t.y[V1],
                                                                    unit_power(K, d2) * t.y[V2],
                                                                    t.y[V3]};
                                auto [m, red] = reduce_tuple_mod_units(triple);
                                (void)m;
                                TorsorTuple cand = t;
                                cand.y[V1] = red[0];
                                cand.y[V2] = red[1];
                                cand.y[V3] = red[2];
                                cand.y[V12] = unit_power(K, k12) * t.y[V12];
                                cand.y[V21] = unit_power(K, k21) * t.y[V21];
                                cand.y[V23] = unit_power(K, k23) * t.y[V23];
                                cand.y[V32] = unit_power(K, k32) * t.y[V32];
                                cand.y[V31] = unit_power(K, k31) * t.y[V31];
                                cand.y[V13] = unit_power(K, k13) * t.y[V13];
                                if (!membership_R_B(cand, st.B_eff)) continue;
                                sols_here += 1;
                                if (std::abs(d1) == Dbox || std::abs(d2) == Dbox) ++found_at_edge;
                                emitted.push_back(cand);
                            }
                    }
                    if (found_at_edge == 0) {
                        solutions += sols_here;
                        for (auto& e : emitted) emit_points(e, sink);
                        break;
                    }
                    Dbox *= 2;
                    if (Dbox > 4096) throw std::logic_error("unit window failed to stabilize");
                }
            }
        }
    }
    return solutions * Int((long)K->omega_roots) * Int((long)K->omega_roots);
}

}  // namespace

EnumerationResult enumerate_NB(const FieldDescriptor* K, const Rat& B, Strategy strategy,
                               const EnumerationOptions& opt) {
    if (B < 1) throw std::invalid_argument("height bound must be >= 1");
    EnumerationResult res;
    if (strategy == Strategy::DirectBox) {
        if (K->is_rational()) {
            Int bi = B.get_num() / B.get_den();
            if (!bi.fits_slong_p()) throw budget_exceeded("bound too large");
            auto raw = direct_box_rational(bi.get_si(), opt.parallel, opt.budget);
            res.count = Int((long)raw.size());
            if ((u64)raw.size() <= opt.point_limit) {
                for (auto& t : raw) {
                    std::vector<FieldElement> c;
                    for (i64 v : t) c.push_back(K->elem_int(v));
                    res.points.push_back(normalize_point(ProjectivePoint::make(c)));
                }
                res.points_complete = true;
            }
        } else {
            auto pts = direct_box_generic(K, B, opt.budget);
            res.count = Int((long)pts.size());
            if ((u64)pts.size() <= opt.point_limit) {
                res.points = std::move(pts);
                res.points_complete = true;
            }
        }
    } else {
        std::vector<ProjectivePoint> sink;
        res.count = torsor_count(K, B, opt, &sink);
        std::sort(sink.begin(), sink.end(), PointKeyLess{});
        sink.erase(std::unique(sink.begin(), sink.end(),
                               [](const ProjectivePoint& a, const ProjectivePoint& b) {
                                   return !(PointKeyLess{}(a, b)) && !(PointKeyLess{}(b, a));
                               }),
                   sink.end());
        if (Int((long)sink.size()) != res.count)
            throw std::logic_error("torsor point list disagrees with its own count");
        if ((u64)sink.size() <= opt.point_limit) {
            res.points = std::move(sink);
            res.points_complete = true;
        }
    }
    std::sort(res.points.begin(), res.points.end(), PointKeyLess{});
    return res;
}

// --------------------------------------------------------------------------
// Torsor identity check

TorsorCheckResult torsor_count_check(const FieldDescriptor* K, const Rat& B,
                                     const EnumerationOptions& opt) {
    TorsorCheckResult out;
    EnumerationResult direct = enumerate_NB(K, B, Strategy::DirectBox, opt);
    if (!direct.points_complete) throw budget_exceeded("need the full point list");
    out.n_points = direct.count;
    Int w7 = ipow(Int((long)K->omega_roots), 7);
    out.lhs = w7 * direct.count;

    auto tuple_key = [&](const TorsorTuple& t) {
        std::array<i64, 4 * kNumVertices> key;
        for (int v = 0; v < kNumVertices; ++v) {
            Rat a2 = 2 * t.y[v].a(), b2 = 2 * t.y[v].b();
            key[4 * v] = a2.get_num().get_si();
            key[4 * v + 1] = a2.get_den().get_si();
            key[4 * v + 2] = b2.get_num().get_si();
            key[4 * v + 3] = b2.get_den().get_si();
        }
        return key;
    };

    std::vector<std::array<i64, 4 * kNumVertices>> all_keys;
    Int rhs = 0;
    int w = K->omega_roots;
    for (const auto& x : direct.points) {
        TorsorTuple t0 = parametrize_point(x);
        if (!membership_R_B(t0, t0.u_factor() * B))
            throw std::logic_error("height identity fails on a fiber base");
        std::array<int, 7> e = {};
        std::vector<std::array<i64, 4 * kNumVertices>> keys;
        for (;;) {
            auto m = torsion_multiplier_exponents(e, w);
            TorsorTuple t = t0;
            for (int v = 0; v < kNumVertices; ++v) t.y[v] = K->torsion[m[v]] * t0.y[v];
            keys.push_back(tuple_key(t));
            int pos = 6;
            while (pos >= 0 && ++e[pos] == w) e[pos--] = 0;
            if (pos < 0) break;
        }
        std::sort(keys.begin(), keys.end());
        if (std::unique(keys.begin(), keys.end()) != keys.end())
            throw std::logic_error("torsion fiber has repeated members");
        if (Int((long)keys.size()) != w7) throw std::logic_error("fiber size is not omega^7");
        rhs += Int((long)keys.size());
        all_keys.insert(all_keys.end(), keys.begin(), keys.end());
    }
    std::sort(all_keys.begin(), all_keys.end());
    out.fibers_disjoint = std::unique(all_keys.begin(), all_keys.end()) == all_keys.end();
    out.rhs = rhs;

    EnumerationResult torsor = enumerate_NB(K, B, Strategy::TorsorParametrized, opt);
    out.rhs_ideal_side = w7 * torsor.count;
    out.equal = (out.lhs == out.rhs) && (out.lhs == out.rhs_ideal_side) && out.fibers_disjoint;
    return out;
}

// --------------------------------------------------------------------------
// Lattice determinant / first minimum

LatticeData lattice_det_and_minimum(const FractionalIdeal& a, const std::vector<Rat>& t) {
    const FieldDescriptor* K = a.field();
    if ((int)t.size() != K->places()) throw std::invalid_argument("one weight per place");
    for (const auto& w : t)
        if (w <= 0) throw std::invalid_argument("weights must be positive");
    LatticeData out;
    Rat Na = a.norm();
    mpfr_prec_t prec = 160;

    if (K->is_rational()) {
        Rat det = t[0] * Na;
        out.det_sq = det * det;
        out.formula_matches = true;
        out.det = Interval::exact(det, prec);
        out.lambda_sq_low = det * det;
        out.lambda = Interval::exact(det, prec);
        out.minimum_ok = true;
        return out;
    }

    FieldElement e1 = a.basis1(), e2 = a.basis2();
    Rat absD = Rat(abs(K->discriminant));

    if (K->is_imaginary()) {
        Rat t2 = t[0] * t[0];
        Rat cross = e1.a() * e2.b() - e2.a() * e1.b();
        out.det_sq = t2 * t2 * cross * cross * Rat(abs(K->d));
        Rat formula_sq = t2 * t2 * Na * Na * absD / 4;
        out.formula_matches = (out.det_sq == formula_sq);
        out.det = Interval::exact(out.det_sq, prec).sqrt();
        Rat cap = std::min(e1.norm(), e2.norm());
        double capd = cap.get_d();
        double A = e1.norm().get_d(), C = e2.norm().get_d();
        double Bc = (e1 * e2.conj() + e2 * e1.conj()).a().get_d();
        double disc = 4 * A * C - Bc * Bc;
        long nmax = (long)std::sqrt(std::max(0.0, 4 * A * capd / disc)) + 2;
        Rat best(0);
        for (long n = -nmax; n <= nmax; ++n) {
            double mc = n == 0 ? 0 : -Bc * n / (2 * A);
            long mspan = (long)std::sqrt(std::max(0.0, capd / A)) + 2;
            for (long m = (long)mc - mspan; m <= (long)mc + mspan; ++m) {
                if (m == 0 && n == 0) continue;
                FieldElement x = K->elem(Rat(m)) * e1 + K->elem(Rat(n)) * e2;
                Rat nx = x.norm();
                if (best == 0 || nx < best) best = nx;
            }
        }
        Rat lam_sq = t2 * best;
        out.lambda = Interval::exact(lam_sq, prec).sqrt();
        out.lambda_sq_low = t2 * Na;
        out.minimum_ok = lam_sq >= out.lambda_sq_low;
        return out;
    }

    // real quadratic
    Rat t1 = t[0], t2 = t[1];
    FieldElement De = e1 * e2.conj() - e2 * e1.conj();
    assert(De.a() == 0);
    out.det_sq = t1 * t1 * t2 * t2 * De.b() * De.b() * Rat(K->d);
    Rat formula_sq = t1 * t1 * t2 * t2 * Na * Na * absD;
    out.formula_matches = (out.det_sq == formula_sq);
    out.det = Interval::exact(out.det_sq, prec).sqrt();

    // q(x) = t1^2 x^2 + t2^2 conj(x)^2; sigma_1(q) = t1^2 s1(x)^2 + t2^2 s2(x)^2
    auto qval = [&](const FieldElement& x) {
        return K->elem(t1 * t1) * x * x + K->elem(t2 * t2) * x.conj() * x.conj();
    };
    auto sigma1_less = [&](const FieldElement& u, const FieldElement& v) {
        return (u - v).sign_sigma1() < 0;
    };
    FieldElement best = qval(e1);
    if (sigma1_less(qval(e2), best)) best = qval(e2);
    double sd = std::sqrt(K->d.get_d());
    auto s1 = [&](const FieldElement& x) { return x.a().get_d() + x.b().get_d() * sd; };
    auto s2 = [&](const FieldElement& x) { return x.a().get_d() - x.b().get_d() * sd; };
    double t1d = t1.get_d(), t2d = t2.get_d();
    double A = t1d * t1d * s1(e1) * s1(e1) + t2d * t2d * s2(e1) * s2(e1);
    double C = t1d * t1d * s1(e2) * s1(e2) + t2d * t2d * s2(e2) * s2(e2);
    double Bc = 2 * (t1d * t1d * s1(e1) * s1(e2) + t2d * t2d * s2(e1) * s2(e2));
    double q0 = std::min(s1(qval(e1)), s1(qval(e2))) * 1.0000001 + 1e-12;
    double disc = 4 * A * C - Bc * Bc;
    long nmax = (long)std::sqrt(std::max(0.0, 4 * A * q0 / disc)) + 2;
    for (long n = -nmax; n <= nmax; ++n) {
        double mc = -Bc * n / (2 * A);
        double rem = q0 - disc / (4 * A) * (double)n * (double)n;
        double rad = std::sqrt(std::max(0.0, rem) / A) + 2;
        for (long m = (long)(mc - rad); m <= (long)(mc + rad); ++m) {
            if (m == 0 && n == 0) continue;
            FieldElement x = K->elem(Rat(m)) * e1 + K->elem(Rat(n)) * e2;
            FieldElement q = qval(x);
            if (sigma1_less(q, best)) best = q;
        }
    }
    out.lambda = best.abs_embedding(0, prec).sqrt();
    out.lambda_sq_low = t1 * t2 * Na;
    out.minimum_ok = (best - K->elem(out.lambda_sq_low)).sign_sigma1() >= 0;
    return out;
}

// --------------------------------------------------------------------------
// M_1(T) counting

static Rat weight_at(const std::vector<std::vector<Rat>>& w, int i, int j) {
    if (w.empty()) return Rat(1);
    return w.at(i).at(j);
}

Int count_M1_reference(const FieldDescriptor* K, const Rat& T,
                       const std::vector<std::vector<Rat>>& weights,
                       const std::array<FractionalIdeal, 3>& ideals) {
    if (T <= 0) return 0;
    SchanuelDomain D{K};
    Rat eb = K->q == 1 ? eps_upper(K) : Rat(1);
    std::vector<std::vector<FieldElement>> lists(3);
    for (int j = 0; j < 3; ++j) {
        std::vector<Rat> bounds;
        for (int i = 0; i < K->places(); ++i) bounds.push_back(eb * T / weight_at(weights, i, j));
        for (const auto& x : elements_in_box(K, bounds))
            if (ideals[j].contains(x)) lists[j].push_back(x);
    }
    Int count = 0;
    for (const auto& y1 : lists[0])
        for (const auto& y2 : lists[1])
            for (const auto& y3 : lists[2])
                if (D.member({y1, y2, y3}, T, /*starred=*/true, weights)) ++count;
    return count;
}

// int64 kernel for real quadratic fields with unit weights and integral
// ideals. Elements are doubled: X = 2x = P + Q sqrt(d).
namespace {
struct QE {
    i64 p, q;
};
inline QE qe_mul(i64 d, QE x, QE y) { return {x.p * y.p + d * x.q * y.q, x.p * y.q + x.q * y.p}; }
inline QE qe_conj(QE x) { return {x.p, -x.q}; }
inline int qe_sign1(i64 d, QE x) {  // sign of p + q sqrt(d)
    if (x.q == 0) return x.p > 0 ? 1 : (x.p < 0 ? -1 : 0);
    if (x.p == 0) return x.q > 0 ? 1 : -1;
    if (x.p > 0 && x.q > 0) return 1;
    if (x.p < 0 && x.q < 0) return -1;
    i128 lhs = (i128)x.p * x.p, rhs = (i128)d * x.q * x.q;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? (x.p > 0 ? 1 : -1) : (x.q > 0 ? 1 : -1);
}
inline int qe_cmp_abs1(i64 d, QE x, QE y) {  // |sigma1 x| vs |sigma1 y|
    QE x2 = qe_mul(d, x, x), y2 = qe_mul(d, y, y);
    return qe_sign1(d, {x2.p - y2.p, x2.q - y2.q});
}
}  // namespace

static Int count_M1_realquad_fast(const FieldDescriptor* K, const Rat& T,
                                  const std::array<FractionalIdeal, 3>& ideals,
                                  const EnumerationOptions& opt) {
    i64 d = K->d.get_si();
    Rat eb = eps_upper(K);
    std::vector<std::vector<QE>> lists(3);
    for (int j = 0; j < 3; ++j) {
        std::vector<Rat> bounds = {eb * T, eb * T};
        for (const auto& x : elements_in_box(K, bounds)) {
            if (!ideals[j].contains(x)) continue;
            Rat p2 = 2 * x.a(), q2 = 2 * x.b();
            lists[j].push_back({p2.get_num().get_si(), q2.get_num().get_si()});
        }
    }
    u64 cand = (u64)lists[0].size() * lists[1].size() * lists[2].size();
    if (cand > opt.budget) throw budget_exceeded("M1 candidate count exceeds budget");

    FieldElement g = unit_power(K, 1);
    FieldElement g2e = g * g;
    if (g2e.sign_sigma1() < 0) g2e = -g2e;
    Rat g2p = 2 * g2e.a(), g2q = 2 * g2e.b();
    QE E2 = {g2p.get_num().get_si(), g2q.get_num().get_si()};  // doubled g^2
    bool inverse = K->options.inverse_unit;
    Rat TT = 4 * T * T;  // doubled-coordinates product bound
    i64 tnum = TT.get_num().get_si(), tden = TT.get_den().get_si();

    const auto &L1 = lists[0], &L2 = lists[1], &L3 = lists[2];
    std::vector<i64> partial(L1.size(), 0);
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (size_t i1 = 0; i1 < L1.size(); ++i1) {
        i64 local = 0;
        QE y1 = L1[i1];
        QE c1 = qe_conj(y1);
        for (size_t i2 = 0; i2 < L2.size(); ++i2) {
            QE y2 = L2[i2];
            QE m1a = (qe_cmp_abs1(d, y1, y2) >= 0) ? y1 : y2;
            QE c2 = qe_conj(y2);
            QE m2a = (qe_cmp_abs1(d, c1, c2) >= 0) ? c1 : c2;
            for (size_t i3 = 0; i3 < L3.size(); ++i3) {
                QE y3 = L3[i3];
                QE m1 = (qe_cmp_abs1(d, y3, m1a) > 0) ? y3 : m1a;
                QE c3 = qe_conj(y3);
                QE m2 = (qe_cmp_abs1(d, c3, m2a) > 0) ? c3 : m2a;
                int c_ratio1 = qe_cmp_abs1(d, m1, m2);
                QE two_m1 = {2 * m1.p, 2 * m1.q};
                QE e2m2 = qe_mul(d, E2, m2);
                int c_ratio2 = qe_cmp_abs1(d, two_m1, e2m2);
                bool in_window = !inverse ? (c_ratio1 >= 0 && c_ratio2 < 0)
                                          : (c_ratio1 <= 0 && c_ratio2 > 0);
                if (!in_window) continue;
                // |sigma1(m1 conj(m2))| <= 4 T^2 (doubled coordinates)
                QE w = qe_mul(d, m1, qe_conj(m2));
                QE w2 = qe_mul(d, w, w);
                i128 aa = (i128)w2.p * tden * tden - (i128)tnum * tnum;
                i128 bb = (i128)w2.q * tden * tden;
                int sgn;  // of sigma1(w^2) - (4T^2)^2
                if (bb == 0)
                    sgn = aa > 0 ? 1 : (aa < 0 ? -1 : 0);
                else if (aa >= 0 && bb >= 0)
                    sgn = 1;
                else if (aa <= 0 && bb <= 0)
                    sgn = -1;
                else {
                    i128 l = aa * aa, r = (i128)d * bb * bb;
                    if (l == r)
                        sgn = 0;
                    else
                        sgn = (l > r) ? (aa > 0 ? 1 : -1) : (bb > 0 ? 1 : -1);
                }
                if (sgn > 0) continue;
                ++local;
            }
        }
        partial[i1] = local;
    }
    Int count = 0;
    for (i64 v : partial) count += v;
    return count;
}

M1Result count_M1(const FieldDescriptor* K, const Rat& T,
                  const std::vector<std::vector<Rat>>& weights,
                  const std::array<FractionalIdeal, 3>& ideals, const EnumerationOptions& opt) {
    M1Result out;
    if (T <= 0) {
        out.count = 0;
    } else if (K->is_rational()) {
        Int prod = 1;
        for (int j = 0; j < 3; ++j) {
            Rat gen = ideals[j].norm();  // smallest positive element of the ideal
            Rat bound = T / (weight_at(weights, 0, j) * gen);
            prod *= 2 * (bound.get_num() / bound.get_den());
        }
        out.count = prod;
    } else if (K->is_imaginary()) {
        Int prod = 1;
        for (int j = 0; j < 3; ++j) {
            Rat b = T / weight_at(weights, 0, j);
            Int c = 0;
            for (const auto& x : elements_in_box(K, {b}))
                if (ideals[j].contains(x)) ++c;
            prod *= c;
        }
        out.count = prod;
    } else {
        bool unit_weights = weights.empty();
        if (!unit_weights) {
            unit_weights = true;
            for (auto& row : weights)
                for (auto& v : row) unit_weights = unit_weights && v == 1;
        }
        bool small_ok = K->d.fits_slong_p() && abs(K->d) < 1000;
        for (const auto& I : ideals) small_ok = small_ok && I.is_integral();
        if (unit_weights && small_ok)
            out.count = count_M1_realquad_fast(K, T, ideals, opt);
        else
            out.count = count_M1_reference(K, T, weights, ideals);
    }
    mpfr_prec_t prec = 160;
    Interval main = Interval::exact(Int(ipow(Int(3), K->q) * ipow(Int(2), 3 * K->r)), prec);
    if (K->s) main = main * (Interval::exact(2L, prec) * Interval::pi(prec)).pow(3 * K->s);
    main = main * K->regulator;
    main = main / Interval::exact(Int(abs(K->discriminant)), prec).sqrt().pow(3);
    Rat denom(1);
    for (int j = 0; j < 3; ++j) {
        Rat cj(1);
        for (int i = 0; i < K->places(); ++i)
            cj *= rpow(weight_at(weights, i, j), K->local_degree(i));
        denom *= cj * ideals[j].norm();
    }
    main = main / Interval::exact(denom, prec);
    main = main * Interval::exact(rpow(T, 3 * K->degree), prec);
    out.main_term = main;
    double mt = main.mid_d();
    out.relative_error = mt == 0 ? 0 : std::abs(out.count.get_d() - mt) / std::abs(mt);
    return out;
}

LadderResult m1_ladder(const FieldDescriptor* K, const std::vector<Rat>& Ts,
                       const std::vector<std::vector<Rat>>& weights,
                       const std::array<FractionalIdeal, 3>& ideals,
                       const EnumerationOptions& opt) {
    LadderResult out;
    for (const Rat& T : Ts) {
        M1Result r = count_M1(K, T, weights, ideals, opt);
        LadderRung rung;
        rung.T = T;
        rung.count = r.count;
        rung.main = r.main_term;
        rung.relative_error = r.relative_error;
        rung.absolute_error = std::abs(r.count.get_d() - r.main_term.mid_d());
        out.rungs.push_back(rung);
    }
    out.relative_errors_nonincreasing = true;
    for (size_t i = 1; i < out.rungs.size(); ++i)
        if (out.rungs[i].relative_error > out.rungs[i - 1].relative_error + 1e-12)
            out.relative_errors_nonincreasing = false;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : out.rungs)
        if (r.absolute_error > 1e-9)
            pts.emplace_back(std::log(r.T.get_d()), std::log(r.absolute_error));
    if (pts.size() < 2) {
        out.fitted_exponent = -std::numeric_limits<double>::infinity();
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double n = (double)pts.size();
        out.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return out;
}

}  // namespace manin
