#include "manin/units.hpp"

#include <omp.h>

#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace manin {

FieldElement solve_pell(const FieldDescriptor* K) {
    if (K->d <= 1) throw std::invalid_argument("Pell solver needs a real quadratic field");
    const Int& d = K->d;
    // continued fraction of sqrt(d): yields a solution of x^2 - d y^2 = +-1
    Int a0 = isqrt(d);
    Int m = 0, dd = 1, a = a0;
    Int p_prev = 1, p = a0, q_prev = 0, q = 1;
    Int x1 = 0, y1 = 0;
    for (int it = 0; it < 100000; ++it) {
        if (p * p - d * q * q == 1 || p * p - d * q * q == -1) {
            x1 = p;
            y1 = q;
            break;
        }
        m = dd * a - m;
        dd = (d - m * m) / dd;
        a = (a0 + m) / dd;
        Int pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        p = pn;
        q_prev = q;
        q = qn;
    }
    if (y1 == 0) throw std::runtime_error("continued fraction did not terminate");
    // minimal unit of O_K: minimal y in x^2 - d y^2 = +-4 with y <= 2*y1 + 2
    for (Int y = 1; y <= 2 * y1 + 2; ++y) {
        for (int s : {-1, 1}) {
            Int rhs = d * y * y + 4 * s;
            if (rhs <= 0) continue;
            Int x = isqrt(rhs);
            if (x * x == rhs) {
                FieldElement eps = K->elem(make_rat(x, Int(2)), make_rat(y, Int(2)));
                if (!eps.is_integral()) continue;  // needs x = y mod 2 compatibility with O_K
                assert(abs(eps.norm()) == 1);
                return eps;
            }
        }
    }
    throw std::runtime_error("no fundamental unit found");
}

UnitGroupData unit_group_data(const FieldDescriptor* K) {
    UnitGroupData U;
    if (K->d == -1) {
        U.omega = 4;
        FieldElement i = K->sqrt_d();
        U.torsion = {K->one(), i, -K->one(), -i};
    } else if (K->d == -3) {
        U.omega = 6;
        FieldElement z = K->elem(Rat(1, 2), Rat(1, 2));  // primitive 6th root (1+sqrt-3)/2
        U.torsion = {K->one()};
        for (int k = 1; k < 6; ++k) U.torsion.push_back(U.torsion.back() * z);
    } else {
        U.omega = 2;
        U.torsion = {K->one(), -K->one()};
    }
    if (K->q == 1) {
        U.eps = solve_pell(K);
        Interval s1 = U.eps->abs_embedding(0, 192);
        U.regulator = s1.log();
    } else {
        U.regulator = Interval::exact(1L);  // empty-regulator convention
    }
    return U;
}

FieldElement unit_power(const FieldDescriptor* K, long k) {
    if (K->q == 0) {
        if (k != 0) throw std::invalid_argument("free unit part is trivial");
        return K->one();
    }
    FieldElement eps = *K->fundamental_unit;
    if (K->options.inverse_unit) eps = eps.inv();
    return eps.pow(k);
}

SchanuelDomain schanuel_domain(const FieldDescriptor* K) { return SchanuelDomain{K}; }

std::vector<FieldElement> SchanuelDomain::place_maxima(
    const std::vector<FieldElement>& z, const std::vector<std::vector<Rat>>& weights) const {
    if (z.empty()) throw std::invalid_argument("empty tuple");
    bool any = false;
    for (const auto& x : z) any = any || !x.is_zero();
    if (!any) throw std::invalid_argument("zero block");
    size_t n = z.size();
    auto weighted = [&](int place, size_t j) {
        FieldElement w = z[j];
        if (!weights.empty()) w = w * K->elem(weights.at(place).at(j));
        return w;
    };
    std::vector<FieldElement> maxima;
    for (int i = 0; i < K->places(); ++i) {
        size_t best = 0;
        FieldElement bw = weighted(i, 0);
        for (size_t j = 1; j < n; ++j) {
            FieldElement wj = weighted(i, j);
            if (embed_compare(wj, bw, i) > 0) {
                best = j;
                bw = wj;
            }
        }
        (void)best;
        maxima.push_back(bw);
    }
    return maxima;
}

int SchanuelDomain::product_compare(const std::vector<FieldElement>& maxima, const Rat& T) {
    const FieldDescriptor* K = maxima.front().field();
    if (K->is_rational()) return embed_compare_rat(maxima[0], T, 0);
    if (K->is_imaginary()) return cmp(maxima[0].norm(), T * T);
    return archimedean_product_compare(maxima[0], maxima[1], T * T);
}

// Half-open window for the ratio max1/max2 determined by the free generator
// g: [1, g_v^2) when |sigma_1(g)| > 1, and (g_v^2, 1] when it is < 1 (the
// inverse-unit convention). Returns -1 below the window, 0 inside, +1 above.
static int window_position(const FieldDescriptor* K, const std::vector<FieldElement>& m) {
    FieldElement g = unit_power(K, 1);
    FieldElement g2 = g * g;
    if (g2.sign_sigma1() < 0) g2 = -g2;  // positive sigma_1 scale
    FieldElement other = m[1].conj();    // |sigma_2(m2)| = |sigma_1(conj m2)|
    int c1 = embed_compare(m[0], other, 0);       // ratio vs 1
    int c2 = embed_compare(m[0], g2 * other, 0);  // ratio vs g_v^2
    if (!K->options.inverse_unit) {
        if (c1 < 0) return -1;
        if (c2 >= 0) return +1;
        return 0;
    }
    if (c1 > 0) return +1;
    if (c2 <= 0) return -1;
    return 0;
}

bool SchanuelDomain::member(const std::vector<FieldElement>& z, const std::optional<Rat>& T,
                            bool starred, const std::vector<std::vector<Rat>>& weights) const {
    if (starred)
        for (const auto& x : z)
            if (x.is_zero()) throw std::invalid_argument("starred membership with zero coordinate");
    std::vector<FieldElement> m = place_maxima(z, weights);
    if (K->q == 1 && window_position(K, m) != 0) return false;
    if (T) {
        if (*T < 0) return false;
        if (product_compare(m, *T) > 0) return false;
    }
    return true;
}

Interval SchanuelDomain::volume_formula(int n, mpfr_prec_t prec) const {
    Interval v = Interval::exact(1L, prec);
    for (int i = 0; i < K->q; ++i) v = v * Interval::exact((long)n, prec);
    v = v * Interval::exact(Int(ipow(Int(2), n * K->r)), prec);
    if (K->s) v = v * Interval::pi(prec).pow((long)n * K->s);
    v = v * K->regulator;
    return v;
}

SchanuelDomain::McEstimate SchanuelDomain::volume_mc(int n, u64 samples, u64 seed,
                                                     bool parallel) const {
    // Boxes: real place coordinates in [-L_i, L_i], complex coordinates in the
    // square [-1,1]^2 per coordinate. For q = 0, L = 1. For q = 1 (r = 2),
    // max1 <= eps and max2 <= 1, so L_1 = eps, L_2 = 1.
    double eps_v = 1.0;
    if (K->q == 1) {
        const FieldElement& e = *K->fundamental_unit;
        eps_v = e.a().get_d() + e.b().get_d() * std::sqrt(K->d.get_d());
    }
    int dim = n * K->degree;
    double box_vol;
    std::vector<double> half;  // half-width per real dimension
    if (K->is_rational()) {
        half.assign(n, 1.0);
    } else if (K->is_imaginary()) {
        half.assign(2 * n, 1.0);
    } else {
        half.assign(2 * n, 1.0);
        for (int j = 0; j < n; ++j) half[j] = eps_v;  // first block scaled
    }
    box_vol = 1.0;
    for (double h : half) box_vol *= 2 * h;

    const u64 kChunk = 1 << 16;
    u64 nchunks = (samples + kChunk - 1) / kChunk;
    std::vector<u64> chunk_hits(nchunks, 0);

    auto run_chunk = [&](u64 ci) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + ci + 1);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        u64 lo = ci * kChunk, hi = std::min<u64>(samples, lo + kChunk);
        u64 h = 0;
        std::vector<double> x(dim);
        for (u64 it = lo; it < hi; ++it) {
            for (int k = 0; k < dim; ++k) x[k] = U(rng) * half[k];
            bool in = true;
            if (K->is_rational()) {
                double mx = 0;
                for (int j = 0; j < n; ++j) mx = std::max(mx, std::abs(x[j]));
                in = mx <= 1.0 && mx > 0.0;
            } else if (K->is_imaginary()) {
                double mx = 0;
                for (int j = 0; j < n; ++j)
                    mx = std::max(mx, x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1]);
                in = mx <= 1.0 && mx > 0.0;
            } else {
                double m1 = 0, m2 = 0;
                for (int j = 0; j < n; ++j) m1 = std::max(m1, std::abs(x[j]));
                for (int j = 0; j < n; ++j) m2 = std::max(m2, std::abs(x[n + j]));
                in = m1 > 0 && m2 > 0 && m1 * m2 <= 1.0 && m1 >= m2 && m1 < eps_v * eps_v * m2;
            }
            if (in) ++h;
        }
        chunk_hits[ci] = h;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long ci = 0; ci < (long long)nchunks; ++ci) run_chunk(ci);
    } else {
        for (u64 ci = 0; ci < nchunks; ++ci) run_chunk(ci);
    }
    u64 hits = 0;
    for (u64 h : chunk_hits) hits += h;  // fixed order: schedule-independent
    double p = double(hits) / double(samples);
    McEstimate est;
    est.hits = hits;
    est.samples = samples;
    est.estimate = p * box_vol;
    est.sigma = std::sqrt(p * (1 - p) / double(samples)) * box_vol;
    return est;
}

std::pair<FieldElement, FieldElement> reduce_mod_units(const FieldElement& x) {
    if (x.is_zero()) throw std::invalid_argument("reduce_mod_units(0)");
    const FieldDescriptor* K = x.field();
    if (K->q == 0) return {K->one(), x};
    auto [k, red] = reduce_tuple_mod_units({x});
    return {unit_power(K, k), red[0]};
}

std::pair<long, std::vector<FieldElement>> reduce_tuple_mod_units(
    const std::vector<FieldElement>& z, const std::vector<std::vector<Rat>>& weights) {
    const FieldDescriptor* K = z.front().field();
    SchanuelDomain D{K};
    if (K->q == 0) return {0, z};
    auto scaled = [&](long k) {
        FieldElement u = unit_power(K, k);
        std::vector<FieldElement> out;
        out.reserve(z.size());
        for (const auto& y : z) out.push_back(u * y);
        return out;
    };
    // Walk k toward the window; each step by the generator g scales the
    // ratio max1/max2 by g_v^2, so "below window" always means one more g.
    long k = 0;
    for (long guard = 0; guard < 1000000; ++guard) {
        std::vector<FieldElement> cur = scaled(k);
        std::vector<FieldElement> m = D.place_maxima(cur, weights);
        int pos = window_position(K, m);
        if (pos == 0) return {k, cur};
        bool gen_expands = !K->options.inverse_unit;  // |sigma_1(g)| > 1
        if (pos < 0)
            k += gen_expands ? +1 : -1;
        else
            k += gen_expands ? -1 : +1;
    }
    throw std::runtime_error("unit reduction did not converge");
}

}  // namespace manin
