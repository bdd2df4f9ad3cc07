#pragma once

// Independent reference computations shared by unit and acceptance tests.
// Nothing here calls the library's LP or eigen solvers.

#include "concord/compatibility.hpp"
#include "concord/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using Vec3 = std::array<double, 3>;

// Half-space n . x <= c.
struct Facet {
    Vec3 normal;
    double offset;
};

// Vertices (x12, x13, x23) of the d = 3 cut polytope, written out by hand from
// the four sign patterns (+++), (++-), (+-+), (+--).
inline std::array<Vec3, 4> tetrahedron_vertices() {
    std::array<Vec3, 4> out{};
    const int signs[4][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
    for (int k = 0; k < 4; ++k) {
        const auto& s = signs[k];
        out[k] = {double(s[0] * s[1]), double(s[0] * s[2]), double(s[1] * s[2])};
    }
    return out;
}

// Facets by brute force: the plane through every vertex triple, oriented so the
// remaining vertex lies inside.
inline std::vector<Facet> tetrahedron_facets() {
    const auto v = tetrahedron_vertices();
    std::vector<Facet> out;
    for (int skip = 0; skip < 4; ++skip) {
        std::array<Vec3, 3> t{};
        int m = 0;
        for (int k = 0; k < 4; ++k)
            if (k != skip) t[m++] = v[k];
        const Vec3 a = {t[1][0] - t[0][0], t[1][1] - t[0][1], t[1][2] - t[0][2]};
        const Vec3 b = {t[2][0] - t[0][0], t[2][1] - t[0][1], t[2][2] - t[0][2]};
        Vec3 n = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
        double c = n[0] * t[0][0] + n[1] * t[0][1] + n[2] * t[0][2];
        const double other = n[0] * v[skip][0] + n[1] * v[skip][1] + n[2] * v[skip][2];
        if (other > c) {
            for (auto& x : n) x = -x;
            c = -c;
        }
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        out.push_back({{n[0] / len, n[1] / len, n[2] / len}, c / len});
    }
    return out;
}

// Smallest signed distance to the facets: positive inside, negative outside.
inline double facet_margin(const std::vector<Facet>& facets, const Vec3& x) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& f : facets)
        worst = std::min(worst, f.offset - (f.normal[0] * x[0] + f.normal[1] * x[1] + f.normal[2] * x[2]));
    return worst;
}

// Sign vector s with s_0 = +1 from the binary expansion of `code`.
inline std::vector<int> sign_pattern(std::size_t d, std::size_t code) {
    std::vector<int> s(d, 1);
    for (std::size_t i = 1; i < d; ++i) s[i] = (code >> (d - 1 - i)) & 1 ? 1 : -1;
    return s;
}

// Minimum of the mean off-diagonal entry over all vertices s s^T. By symmetry
// under coordinate permutations this is the smallest equicorrelation in the
// cut polytope.
inline double equicorrelation_cut_minimum(std::size_t d) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < (std::size_t{1} << (d - 1)); ++code) {
        const auto s = sign_pattern(d, code);
        double sum = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) sum += s[i] * s[j];
        best = std::min(best, sum / (static_cast<double>(d * (d - 1)) / 2.0));
    }
    return best;
}

struct CutPoint {
    concord::KappaMatrix matrix;
    std::vector<double> weights;  // indexed by sign-pattern code
};

// A random convex combination of a few random vertices.
inline CutPoint random_cut_point(std::size_t d, concord::RandomSource& rng) {
    const std::size_t count = std::size_t{1} << (d - 1);
    std::vector<double> w(count, 0.0);
    const std::size_t picks = 1 + rng.below(4);
    double total = 0.0;
    for (std::size_t k = 0; k < picks; ++k) {
        const double x = -std::log(rng.uniform());
        w[rng.below(count)] += x;
        total += x;
    }
    std::vector<double> m(d * d, 0.0);
    for (std::size_t code = 0; code < count; ++code) {
        w[code] /= total;
        if (w[code] == 0.0) continue;
        const auto s = sign_pattern(d, code);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] += w[code] * s[i] * s[j];
    }
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    for (auto& x : m) x = std::clamp(x, -1.0, 1.0);
    return {concord::KappaMatrix(d, std::move(m)), std::move(w)};
}

// Normalized Gram matrix of d random Gaussian vectors in dimension k.
inline concord::KappaMatrix random_correlation_matrix(std::size_t d, std::size_t k, concord::RandomSource& rng) {
    std::vector<double> a(d * k);
    for (auto& x : a) x = concord::normal_quantile(rng.uniform());
    for (std::size_t i = 0; i < d; ++i) {
        double norm = 0.0;
        for (std::size_t t = 0; t < k; ++t) norm += a[i * k + t] * a[i * k + t];
        norm = std::sqrt(norm);
        for (std::size_t t = 0; t < k; ++t) a[i * k + t] /= norm;
    }
    std::vector<double> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < k; ++t) dot += a[i * k + t] * a[j * k + t];
            m[i * d + j] = i == j ? 1.0 : std::clamp(dot, -1.0, 1.0);
        }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) m[i * d + j] = m[j * d + i];
    return concord::KappaMatrix(d, std::move(m));
}

// Off-diagonal entries uniform on [-1, 1].
inline concord::KappaMatrix random_symmetric_unit_diagonal(std::size_t d, concord::RandomSource& rng) {
    std::vector<double> m(d * d, 1.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) m[i * d + j] = m[j * d + i] = 2.0 * rng.uniform() - 1.0;
    return concord::KappaMatrix(d, std::move(m));
}

}  // namespace oracle
