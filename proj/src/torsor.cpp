#include "manin/torsor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "manin/units.hpp"

namespace manin {

const char* const kVertexNames[kNumVertices] = {"1", "2", "3", "12", "21", "23", "32", "31", "13"};

// cyclic triples (j,k,l), 1-based labels
static constexpr int kTriples[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};

static int pair_vertex(int j, int k) {
    if (j == 1 && k == 2) return V12;
    if (j == 2 && k == 1) return V21;
    if (j == 2 && k == 3) return V23;
    if (j == 3 && k == 2) return V32;
    if (j == 3 && k == 1) return V31;
    if (j == 1 && k == 3) return V13;
    throw std::logic_error("bad vertex pair");
}

static int single_vertex(int j) { return j - 1; }

const CoprimalityGraph& CoprimalityGraph::get() {
    static CoprimalityGraph G = [] {
        CoprimalityGraph g;
        int at = 0;
        for (auto& t : kTriples) {
            int j = t[0], k = t[1], l = t[2];
            g.edges[at++] = {single_vertex(k), pair_vertex(j, k)};
            g.edges[at++] = {single_vertex(k), pair_vertex(l, k)};
            g.edges[at++] = {pair_vertex(k, l), pair_vertex(l, k)};
        }
        assert(at == 9);
        for (auto& [v, w] : g.edges) g.adj[v][w] = g.adj[w][v] = true;
        for (int v = 0; v < kNumVertices; ++v)
            for (int w = v + 1; w < kNumVertices; ++w)
                if (!g.adj[v][w]) g.complement.emplace_back(v, w);
        assert(g.complement.size() == 27);
        return g;
    }();
    return G;
}

// --------------------------------------------------------------------------
// Ideal decomposition

IdealDecomposition decompose_ideals(const FractionalIdeal& b1, const FractionalIdeal& b2,
                                    const FractionalIdeal& b3) {
    const FieldDescriptor* K = b1.field();
    if (!K) throw std::invalid_argument("zero ideal");
    IdealDecomposition dec;
    dec.c = b1 + b2 + b3;
    std::array<FractionalIdeal, 3> b = {b1 / dec.c, b2 / dec.c, b3 / dec.c};
    auto B = [&](int j) -> const FractionalIdeal& { return b[j - 1]; };
    for (auto& t : kTriples) {
        int j = t[0], k = t[1], l = t[2];
        FractionalIdeal gjk = B(j) + B(k);            // (b_j, b_k)
        FractionalIdeal gjk2 = B(j) + (B(k) * B(k));  // (b_j, b_k^2)
        FractionalIdeal glj = B(l) + B(j);            // (b_l, b_j)
        dec.a[pair_vertex(j, k)] = B(j) / (gjk2 * glj);
        FractionalIdeal ak = (B(j) / gjk) + B(k);
        dec.a[single_vertex(k)] = ak;
        dec.a[pair_vertex(l, k)] = gjk / ak;
    }
    auto rec = recompose(dec);
    if (!(rec[0] == b1 && rec[1] == b2 && rec[2] == b3))
        throw std::logic_error("decomposition does not recompose");
    return dec;
}

static bool coprime_on_complement(const std::array<FractionalIdeal, kNumVertices>& a) {
    const auto& G = CoprimalityGraph::get();
    const FieldDescriptor* K = a[0].field();
    FractionalIdeal R = FractionalIdeal::ring_of_integers(K);
    for (auto& [v, w] : G.complement)
        if (!((a[v] + a[w]) == R)) return false;
    return true;
}

std::array<FractionalIdeal, 3> recompose(const IdealDecomposition& dec) {
    if (!coprime_on_complement(dec.a)) throw std::invalid_argument("coprimality violated");
    std::array<FractionalIdeal, 3> b;
    for (auto& t : kTriples) {
        int j = t[0], k = t[1], l = t[2];
        const auto& a = dec.a;
        b[j - 1] = dec.c * a[pair_vertex(j, k)] * a[single_vertex(k)] * a[single_vertex(k)] *
                   a[pair_vertex(l, k)] * a[single_vertex(j)] * a[pair_vertex(k, j)];
    }
    return b;
}

SmallDecomposition small_decompose(const SmallCtx& F, const SmallIdeal& b1o, const SmallIdeal& b2o,
                                   const SmallIdeal& b3o) {
    SmallDecomposition dec;
    dec.c = small_sum(F, small_sum(F, b1o, b2o), b3o);
    SmallIdeal b[3] = {small_div(F, b1o, dec.c), small_div(F, b2o, dec.c),
                       small_div(F, b3o, dec.c)};
    auto B = [&](int j) -> const SmallIdeal& { return b[j - 1]; };
    for (auto& t : kTriples) {
        int j = t[0], k = t[1], l = t[2];
        SmallIdeal gjk = small_sum(F, B(j), B(k));
        SmallIdeal gjk2 = small_sum(F, B(j), small_mul(F, B(k), B(k)));
        SmallIdeal glj = small_sum(F, B(l), B(j));
        dec.a[pair_vertex(j, k)] = small_div(F, B(j), small_mul(F, gjk2, glj));
        SmallIdeal ak = small_sum(F, small_div(F, B(j), gjk), B(k));
        dec.a[single_vertex(k)] = ak;
        dec.a[pair_vertex(l, k)] = small_div(F, gjk, ak);
    }
    return dec;
}

std::array<SmallIdeal, 3> small_recompose(const SmallCtx& F, const SmallDecomposition& dec) {
    std::array<SmallIdeal, 3> b;
    for (auto& t : kTriples) {
        int j = t[0], k = t[1], l = t[2];
        const auto& a = dec.a;
        SmallIdeal x = small_mul(F, dec.c, a[pair_vertex(j, k)]);
        x = small_mul(F, x, small_mul(F, a[single_vertex(k)], a[single_vertex(k)]));
        x = small_mul(F, x, a[pair_vertex(l, k)]);
        x = small_mul(F, x, a[single_vertex(j)]);
        x = small_mul(F, x, a[pair_vertex(k, j)]);
        b[j - 1] = x;
    }
    return b;
}

bool small_coprime_on_complement(const SmallCtx& F, const std::array<SmallIdeal, kNumVertices>& a) {
    const auto& G = CoprimalityGraph::get();
    for (auto& [v, w] : G.complement)
        if (!small_is_ring(small_sum(F, a[v], a[w]))) return false;
    return true;
}

// --------------------------------------------------------------------------
// TorsorTuple

FractionalIdeal TorsorTuple::class_ideal(int v) const {
    const auto& reps = K->class_reps;
    switch (v) {
        case V1: return reps[cls[1]];
        case V2: return reps[cls[2]];
        case V3: return reps[cls[3]];
        case V21: return reps[cls[4]];
        case V32: return reps[cls[5]];
        case V13: return reps[cls[6]];
        default: break;
    }
    const FractionalIdeal& C = reps[cls[0]];
    auto inv2 = [&](const FractionalIdeal& x) { return (x * x).inverse(); };
    if (v == V12)  // j=1,k=2: C C2^-2 C32^-1 C1^-1 C21^-1
        return C * inv2(reps[cls[2]]) * reps[cls[5]].inverse() * reps[cls[1]].inverse() *
               reps[cls[4]].inverse();
    if (v == V23)  // j=2,k=3: C C3^-2 C13^-1 C2^-1 C32^-1
        return C * inv2(reps[cls[3]]) * reps[cls[6]].inverse() * reps[cls[2]].inverse() *
               reps[cls[5]].inverse();
    if (v == V31)  // j=3,k=1: C C1^-2 C21^-1 C3^-1 C13^-1
        return C * inv2(reps[cls[1]]) * reps[cls[4]].inverse() * reps[cls[3]].inverse() *
               reps[cls[6]].inverse();
    throw std::invalid_argument("bad vertex");
}

FractionalIdeal TorsorTuple::coprime_part(int v) const {
    return FractionalIdeal::principal(y[v]) * class_ideal(v).inverse();
}

Rat TorsorTuple::u_factor() const {
    const auto& reps = K->class_reps;
    Rat n = rpow(reps[cls[0]].norm(), 3);
    n /= rpow(reps[cls[1]].norm(), 2);
    n /= rpow(reps[cls[2]].norm(), 2);
    n /= rpow(reps[cls[3]].norm(), 2);
    n /= reps[cls[4]].norm() * reps[cls[5]].norm() * reps[cls[6]].norm();
    return n;
}

FieldElement TorsorTuple::psi(int j) const {
    if (j == 0) {
        FieldElement p = K->one();
        for (const auto& v : y) p = p * v;
        return p;
    }
    int k = (j % 3) + 1, l = (k % 3) + 1;
    const FieldElement& yj = y[single_vertex(j)];
    FieldElement p = yj * yj * yj;
    p = p * y[pair_vertex(j, k)] * y[pair_vertex(j, l)];
    FieldElement q = y[pair_vertex(k, j)] * y[pair_vertex(l, j)];
    return p * q * q;
}

bool TorsorTuple::valid() const {
    for (const auto& v : y)
        if (v.is_zero()) return false;
    std::array<FractionalIdeal, kNumVertices> a;
    for (int v = 0; v < kNumVertices; ++v) {
        a[v] = coprime_part(v);
        if (!a[v].is_integral()) return false;  // equivalently: y_v in C_v
    }
    return coprime_on_complement(a);
}

std::string TorsorTuple::str() const {
    std::ostringstream os;
    os << "(";
    for (int v = 0; v < kNumVertices; ++v)
        os << kVertexNames[v] << ":" << y[v].str() << (v + 1 < kNumVertices ? ", " : ")");
    return os.str();
}

ProjectivePoint torsor_to_point(const TorsorTuple& t) {
    auto x = [&](int j, int k) {
        int l = 6 - j - k;
        return t.y[pair_vertex(j, k)] * t.y[single_vertex(k)] * t.y[single_vertex(k)] *
               t.y[pair_vertex(l, k)] * t.y[single_vertex(j)] * t.y[pair_vertex(k, j)];
    };
    return ProjectivePoint::make({x(2, 3), x(3, 1), x(1, 2)});
}

// --------------------------------------------------------------------------
// parametrize_point

TorsorTuple parametrize_point(const ProjectivePoint& xin) {
    if (xin.coords.size() != 3) throw std::invalid_argument("torsor parametrization needs P^2");
    for (const auto& c : xin.coords)
        if (c.is_zero()) throw std::invalid_argument("point not in W");
    const FieldDescriptor* K = xin.field();
    ProjectivePoint x = normalize_point(xin);
    ClassGroup G{K->h, K->class_reps, K};

    // b_j = x_jk O_K: b1 = (x12), b2 = (x23), b3 = (x31)
    const FieldElement &x23 = x.coords[0], &x31 = x.coords[1], &x12 = x.coords[2];
    FractionalIdeal b1 = FractionalIdeal::principal(x12);
    FractionalIdeal b2 = FractionalIdeal::principal(x23);
    FractionalIdeal b3 = FractionalIdeal::principal(x31);
    IdealDecomposition dec = decompose_ideals(b1, b2, b3);

    TorsorTuple t;
    t.K = K;
    t.cls[0] = G.class_of(dec.c);
    if (!(K->class_reps[t.cls[0]] == dec.c))
        throw std::logic_error("content of the normalized point is not the class representative");

    struct Slot {
        int vertex;
        int cls_index;
    };
    const Slot slots[6] = {{V1, 1}, {V2, 2}, {V3, 3}, {V21, 4}, {V32, 5}, {V13, 6}};
    for (const auto& s : slots) {
        int ci = G.class_of(dec.a[s.vertex].inverse());
        t.cls[s.cls_index] = ci;
        auto g = principal_generator(dec.a[s.vertex] * K->class_reps[ci]);
        if (!g) throw std::logic_error("a_v C_v is not principal");
        t.y[s.vertex] = *g;
    }
    t.y[V12] = x12 / (t.y[V2] * t.y[V2] * t.y[V32] * t.y[V1] * t.y[V21]);
    t.y[V23] = x23 / (t.y[V3] * t.y[V3] * t.y[V13] * t.y[V2] * t.y[V32]);
    t.y[V31] = x31 / (t.y[V1] * t.y[V1] * t.y[V21] * t.y[V3] * t.y[V13]);

    t = fundamental_rep(t);
    if (!t.valid()) throw std::logic_error("parametrization produced an invalid tuple");
    if (!(torsor_to_point(t) == xin)) throw std::logic_error("parametrization does not invert");
    return t;
}

TorsorTuple unit_action(const std::array<FieldElement, 7>& zeta, const TorsorTuple& t) {
    for (const auto& z : zeta)
        if (!(z.is_integral() && abs(z.norm()) == 1))
            throw std::invalid_argument("unit action needs units");
    // zeta order: (z, z1, z2, z3, z21, z32, z13)
    TorsorTuple out = t;
    out.y[V1] = zeta[1] * t.y[V1];
    out.y[V2] = zeta[2] * t.y[V2];
    out.y[V3] = zeta[3] * t.y[V3];
    out.y[V21] = zeta[4] * t.y[V21];
    out.y[V32] = zeta[5] * t.y[V32];
    out.y[V13] = zeta[6] * t.y[V13];
    auto dep = [&](const FieldElement& zk, const FieldElement& zlk, const FieldElement& zj,
                   const FieldElement& zkj) {
        return zeta[0] * (zk * zk * zlk * zj * zkj).inv();
    };
    out.y[V12] = dep(zeta[2], zeta[5], zeta[1], zeta[4]) * t.y[V12];
    out.y[V23] = dep(zeta[3], zeta[6], zeta[2], zeta[5]) * t.y[V23];
    out.y[V31] = dep(zeta[1], zeta[4], zeta[3], zeta[6]) * t.y[V31];
    return out;
}

std::optional<UnitSystemSolution> solve_unit_system(long a1, long a2, long a3) {
    long s = a1 + a2 + a3;
    if (((s % 3) + 3) % 3 != 0) return std::nullopt;
    UnitSystemSolution sol;
    sol.xi = s / 3;
    sol.k2 = a2;
    sol.k3 = a3;
    return sol;
}

// --------------------------------------------------------------------------
// fundamental_rep

// exponent k with g^k x in R (the S^1(infinity) representative set)
static long r_exponent(const FieldElement& x) {
    auto [k, red] = reduce_tuple_mod_units({x});
    (void)red;
    return k;
}

TorsorTuple fundamental_rep(const TorsorTuple& t) {
    const FieldDescriptor* K = t.K;
    for (const auto& v : t.y)
        if (v.is_zero()) throw std::invalid_argument("zero component");
    if (K->q == 0) return t;

    long a21 = r_exponent(t.y[V21]);
    long a23 = r_exponent(t.y[V23]);
    long a32 = r_exponent(t.y[V32]);
    long a31 = r_exponent(t.y[V31]);
    long a13 = r_exponent(t.y[V13]);
    // alpha_12 = (a21^2 a23 a32^2 a31 a13^2)^{-1} xi^3, the unique cube shift
    // landing y12 in one of rho R, rho in {g^0, g^1, g^2}
    long base = -(2 * a21 + a23 + 2 * a32 + a31 + 2 * a13);
    long kstar = r_exponent(t.y[V12]);
    long xi0 = 0;
    while (base + 3 * xi0 - kstar < 0) ++xi0;
    while (base + 3 * xi0 - kstar > 2) --xi0;
    long a12 = base + 3 * xi0;
    assert(a12 - kstar >= 0 && a12 - kstar <= 2);

    // alpha_j := alpha_jk alpha_kj alpha_lk
    long al1 = a12 + a21 + a32;
    long al2 = a23 + a32 + a13;
    long al3 = a31 + a13 + a21;
    auto sol = solve_unit_system(al1, al2, al3);
    if (!sol) throw std::logic_error("cube condition violated in fundamental_rep");

    // unique delta placing (z1 y1, z2 y2, z3 y3) in the S^3(infinity) window
    auto z0 = sol->zetas(0);
    std::vector<FieldElement> triple = {unit_power(K, z0[1]) * t.y[V1],
                                        unit_power(K, z0[2]) * t.y[V2],
                                        unit_power(K, z0[3]) * t.y[V3]};
    auto [delta, reduced] = reduce_tuple_mod_units(triple);
    (void)reduced;
    auto z = sol->zetas(delta);
    std::array<FieldElement, 7> zeta = {unit_power(K, z[0]), unit_power(K, z[1]),
                                        unit_power(K, z[2]), unit_power(K, z[3]),
                                        unit_power(K, a21),  unit_power(K, a32),
                                        unit_power(K, a13)};
    return unit_action(zeta, t);
}

bool membership_R_B(const TorsorTuple& t, const Rat& B) {
    std::vector<FieldElement> psis = {t.psi(1), t.psi(2), t.psi(3)};
    return archimedean_sup_product_compare(psis, B) <= 0;
}

std::array<int, kNumVertices> torsion_multiplier_exponents(const std::array<int, 7>& e, int omega) {
    auto md = [&](int x) { return ((x % omega) + omega) % omega; };
    std::array<int, kNumVertices> m;
    m[V1] = md(e[1]);
    m[V2] = md(e[2]);
    m[V3] = md(e[3]);
    m[V21] = md(e[4]);
    m[V32] = md(e[5]);
    m[V13] = md(e[6]);
    m[V12] = md(e[0] - 2 * e[2] - e[5] - e[1] - e[4]);
    m[V23] = md(e[0] - 2 * e[3] - e[6] - e[2] - e[5]);
    m[V31] = md(e[0] - 2 * e[1] - e[4] - e[3] - e[6]);
    return m;
}

std::vector<TorsorTuple> fiber_of_point(const ProjectivePoint& x) {
    TorsorTuple t0 = parametrize_point(x);
    const FieldDescriptor* K = t0.K;
    int w = K->omega_roots;
    size_t total = 1;
    for (int i = 0; i < 7; ++i) total *= (size_t)w;
    std::vector<TorsorTuple> fiber;
    fiber.reserve(total);
    std::array<int, 7> e = {};
    for (;;) {
        auto m = torsion_multiplier_exponents(e, w);
        TorsorTuple t = t0;
        for (int v = 0; v < kNumVertices; ++v) t.y[v] = K->torsion[m[v]] * t0.y[v];
        fiber.push_back(std::move(t));
        int pos = 6;
        while (pos >= 0 && ++e[pos] == w) e[pos--] = 0;
        if (pos < 0) break;
    }
    return fiber;
}

}  // namespace manin
