// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "concord/compatibility.hpp"
#include "concord/concordance.hpp"
#include "concord/copulas.hpp"
#include "concord/distributions.hpp"
#include "concord/error.hpp"

#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace concord;

namespace {

struct Result {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<MeasureSpec> all_specs() {
    return {MeasureSpec::spearman(),
            MeasureSpec::blomqvist(),
            MeasureSpec::beta(0.2),
            MeasureSpec::gini(),
            MeasureSpec::generalized_gini(NuMeasure::atoms({{0.1, 0.3}, {0.4, 0.7}})),
            MeasureSpec::generalized_gini(NuMeasure::density_table({0.05, 0.25, 0.5}, {1.0, 3.0, 0.5})),
            MeasureSpec::g_transformed(Distribution::uniform()),
            MeasureSpec::g_transformed(Distribution::standard_gaussian()),
            MeasureSpec::g_transformed(Distribution::three_point(0.35))};
}

// 1. Gaussian Gini anchor.
void gaussian_gini_anchor(Result& r) {
    const auto start = std::chrono::steady_clock::now();
    const Copula c = Copula::gaussian(-0.5);
    const double quad = gini_gamma(c);
    const double closed = gaussian_gini_closed_form(-0.5);
    RandomSource rng(20240601);
    const Estimate est = estimate(pseudo_observations(sample(c, 1000000, rng)), MeasureSpec::gini());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.require(std::abs(quad + 0.379) <= 5e-4, "quadrature " + fmt(quad));
    r.require(std::abs(closed + 0.379) <= 5e-4, "closed form " + fmt(closed));
    r.require(est.std_error && std::abs(est.value - quad) <= 3.0 * *est.std_error,
              "plug-in " + fmt(est.value) + " outside 3 SE");
    r.require(seconds < 10.0, "runtime " + fmt(seconds) + " s");
    if (r.pass)
        r.detail << "quadrature " << quad << ", closed form " << closed << ", plug-in " << est.value << " (SE "
                 << *est.std_error << "), " << fmt(seconds) << " s";
}

// 2. Density 8p reproduces Gini's gamma.
void representation_identity(Result& r) {
    std::vector<Copula> copulas;
    for (int k = -9; k <= 9; ++k) copulas.push_back(Copula::gaussian(k / 10.0));
    RandomSource rng(77);
    for (int k = 0; k < 10; ++k) {
        const double t = rng.uniform();
        copulas.push_back(Copula::mixture({{t, Copula::gaussian(2.0 * rng.uniform() - 1.0)},
                                           {1.0 - t, Copula::gaussian(2.0 * rng.uniform() - 1.0)}}));
    }
    double worst = 0.0;
    for (const auto& c : copulas)
        worst = std::max(worst, std::abs(generalized_gini_gamma(c, NuMeasure::gini()) - gini_gamma(c)));
    r.require(worst <= 1e-8, "max deviation " + fmt(worst));
    if (r.pass) r.detail << copulas.size() << " copulas, max deviation " << fmt(worst);
}

double bisect(const std::function<bool(double)>& inside, double lo, double hi) {
    // inside(hi) holds, inside(lo) does not.
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// 3. Equicorrelation thresholds for d = 3.
void equicorrelation_thresholds_d3(Result& r) {
    auto ell = [](double rho) {
        return in_elliptope(KappaMatrix::equicorrelation(3, rho)).membership != Membership::NonMember;
    };
    auto cut = [](double rho) {
        return in_cut_polytope(KappaMatrix::equicorrelation(3, rho)).membership != Membership::NonMember;
    };
    r.require(in_elliptope(KappaMatrix::equicorrelation(3, -0.49)).membership == Membership::Member &&
                  in_elliptope(KappaMatrix::equicorrelation(3, -0.51)).membership == Membership::NonMember,
              "elliptope does not flip across -1/2");
    r.require(in_cut_polytope(KappaMatrix::equicorrelation(3, -0.32)).membership == Membership::Member &&
                  in_cut_polytope(KappaMatrix::equicorrelation(3, -0.34)).membership == Membership::NonMember,
              "cut polytope does not flip across -1/3");
    const double e = bisect(ell, -1.0, 0.0);
    const double c = bisect(cut, -1.0, 0.0);
    r.require(std::abs(e + 0.5) <= 1e-6, "elliptope flip at " + fmt(e));
    r.require(std::abs(c + 1.0 / 3.0) <= 1e-6, "cut polytope flip at " + fmt(c));
    const auto t = equicorrelation_thresholds(3);
    r.require(std::abs(t.elliptope_min + 0.5) <= 1e-6 && t.cut_polytope_min &&
                  std::abs(*t.cut_polytope_min + 1.0 / 3.0) <= 1e-6,
              "equicorrelation_thresholds disagrees");
    if (r.pass) r.detail << "elliptope flip " << e << ", cut polytope flip " << c;
}

// 4. The gap between the two tests.
void indeterminate_gap(Result& r) {
    const auto v = classify_gamma_matrix(KappaMatrix::equicorrelation(3, -0.379));
    r.require(v.gamma_class == GammaClass::Indeterminate, "class " + to_string(v.gamma_class));
    r.require(v.cut_polytope.membership == Membership::NonMember, "cut " + to_string(v.cut_polytope.membership));
    r.require(v.elliptope.membership == Membership::Member, "elliptope " + to_string(v.elliptope.membership));
    if (r.pass)
        r.detail << "Indeterminate; min eigenvalue " << v.elliptope.min_eigenvalue << ", LP residual "
                 << v.cut_polytope.residual;
}

// 5. Axioms of a measure of concordance.
void axiom_suite(Result& r) {
    RandomSource rng(55);
    const Copula mixed = Copula::mixture({{0.6, Copula::gaussian(0.7)}, {0.4, Copula::countermonotone()}});
    auto pts = sample(mixed, 2000, rng);
    auto swapped = pts;
    auto flipped = pts;
    for (auto& p : swapped) std::swap(p[0], p[1]);
    for (auto& p : flipped) p[1] = -p[1];
    const Copula base_data = pseudo_observations(pts);
    const Copula swapped_data = pseudo_observations(swapped);
    const Copula flipped_data = pseudo_observations(flipped);
    for (const auto& spec : all_specs()) {
        const std::string name = spec.name();
        r.require(std::abs(evaluate(Copula::comonotone(), spec).value - 1.0) <= 1e-9, name + ": kappa(M)");
        r.require(std::abs(evaluate(Copula::countermonotone(), spec).value + 1.0) <= 1e-9, name + ": kappa(W)");
        r.require(std::abs(evaluate(Copula::independence(), spec).value) <= 1e-8, name + ": kappa(Pi)");
        const double base = estimate(base_data, spec).value;
        r.require(std::abs(estimate(swapped_data, spec).value - base) <= 1e-12, name + ": permutation");
        r.require(std::abs(estimate(flipped_data, spec).value + base) <= 1e-12, name + ": reflection");
        double previous = -1.0 - 1e-12;
        for (int k = -5; k <= 5; ++k) {
            const double v = evaluate(Copula::gaussian(k / 5.0), spec).value;
            r.require(v >= previous - 1e-12, name + ": not monotone at rho = " + fmt(k / 5.0));
            previous = v;
        }
    }
    if (r.pass) r.detail << all_specs().size() << " measures";
}

// 6. Linearity over convex combinations.
void degree_one_linearity(Result& r) {
    RandomSource rng(8080);
    auto random_copula = [&]() {
        switch (rng.below(4)) {
            case 0: return Copula::comonotone();
            case 1: return Copula::countermonotone();
            case 2: return Copula::independence();
            default: return Copula::gaussian(2.0 * rng.uniform() - 1.0);
        }
    };
    const auto specs = all_specs();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double t = rng.uniform();
        const Copula a = random_copula();
        const Copula b = random_copula();
        const Copula mix = Copula::mixture({{t, a}, {1.0 - t, b}});
        for (const auto& spec : specs) {
            const double gap =
                std::abs(evaluate(mix, spec).value - t * evaluate(a, spec).value - (1.0 - t) * evaluate(b, spec).value);
            worst = std::max(worst, gap);
            r.require(gap <= 1e-9, spec.name() + " on " + mix.describe() + ": " + fmt(gap));
        }
    }
    if (r.pass) r.detail << "50 triples x " << specs.size() << " measures, max gap " << fmt(worst);
}

// 7. Certificates re-substitute and their witnesses reproduce the target.
void certificate_roundtrips(Result& r) {
    RandomSource rng(7007);
    double worst = 0.0;
    std::vector<oracle::CutPoint> targets;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 3 + static_cast<std::size_t>(trial % 3);
        auto target = oracle::random_cut_point(d, rng);
        const auto v = in_cut_polytope(target.matrix);
        if (v.membership != Membership::Member) {
            r.require(false, "combination " + std::to_string(trial) + " not Member");
            continue;
        }
        const KappaMatrix back = certificate_matrix(v.certificate);
        for (std::size_t i = 0; i < back.data().size(); ++i)
            worst = std::max(worst, std::abs(back.data()[i] - target.matrix.data()[i]));
        if (trial < 3) targets.push_back(std::move(target));
    }
    r.require(worst <= 1e-9, "re-substitution error " + fmt(worst));

    const std::vector<MeasureSpec> specs = {MeasureSpec::spearman(), MeasureSpec::beta(0.3), MeasureSpec::gini()};
    int entries = 0;
    double worst_z = 0.0;
    for (const auto& target : targets) {
        const auto certificate = in_cut_polytope(target.matrix).certificate;
        const std::size_t d = target.matrix.dim();
        for (const auto& spec : specs) {
            const auto m = witness_matrix_roundtrip(certificate, spec, 1000000, rng);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) {
                    const double gap = std::abs(m.values[i * d + j] - target.matrix.at(i, j));
                    const double se = m.std_errors[i * d + j];
                    ++entries;
                    if (se > 0.0) worst_z = std::max(worst_z, gap / se);
                    r.require(gap <= std::max(3.0 * se, 1e-9), "d = " + std::to_string(d) + ", " + spec.name() +
                                                                   ", entry (" + std::to_string(i + 1) + "," +
                                                                   std::to_string(j + 1) + "): gap " + fmt(gap) +
                                                                   ", SE " + fmt(se));
                }
        }
    }
    if (r.pass)
        r.detail << "100 certificates, max error " << fmt(worst) << "; " << entries
                 << " witness entries at n = 1e6, max |z| " << fmt(worst_z);
}

// 8. Transform checker.
void transform_checker(Result& r) {
    const auto grid = TabulatedFunction::midpoint_grid(200);
    auto check = [&](auto g1, auto g2) {
        return check_transform_pair(TransformPair(TabulatedFunction::from(grid, g1), TabulatedFunction::from(grid, g2)));
    };
    auto identity = [](double u) { return u; };
    auto gaussian = [](double u) { return normal_quantile(u); };
    auto three_point = [](double u) { return quantile(Distribution::three_point(0.25), u); };
    auto wrap = [](double u) {
        constexpr double b = 1.5, c = 4.0, q1 = 1.540793, q2 = 0.8622731;
        const double z = normal_quantile(u);
        const double a = std::abs(z);
        if (a <= b) return z;
        if (a <= c) return std::copysign(q1 * std::tanh(q2 * (c - a)), z);
        return 0.0;
    };
    r.require(check(identity, identity).kind == TransformVerdictKind::IsMeasureOfConcordance, "(id, id) rejected");
    r.require(check(gaussian, gaussian).kind == TransformVerdictKind::IsMeasureOfConcordance,
              "(normal quantile, normal quantile) rejected");
    r.require(check(three_point, three_point).kind == TransformVerdictKind::IsMeasureOfConcordance,
              "(three-point, three-point) rejected");
    const auto wrapped = check(wrap, wrap);
    r.require(wrapped.kind == TransformVerdictKind::NotMonotone, "wrapping function: " + to_string(wrapped.kind));
    const auto squared = check(identity, [](double u) { return u * u; });
    r.require(squared.kind == TransformVerdictKind::DistributionsDiffer ||
                  squared.kind == TransformVerdictKind::NotSymmetric,
              "(u, u^2): " + to_string(squared.kind));
    if (r.pass) r.detail << "wrapping: " << to_string(wrapped.kind) << "; (u, u^2): " << to_string(squared.kind);
}

// 9. LP against the hand-derived facets of the d = 3 polytope.
void lp_vs_facets(Result& r) {
    const auto facets = oracle::tetrahedron_facets();
    RandomSource rng(9009);
    int agree = 0, inside = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double x12 = 2.0 * rng.uniform() - 1.0;
        const double x13 = 2.0 * rng.uniform() - 1.0;
        const double x23 = 2.0 * rng.uniform() - 1.0;
        const bool facet_inside = oracle::facet_margin(facets, {x12, x13, x23}) >= 0.0;
        const bool lp_inside =
            in_cut_polytope(KappaMatrix(3, {1, x12, x13, x12, 1, x23, x13, x23, 1})).membership != Membership::NonMember;
        agree += facet_inside == lp_inside;
        inside += facet_inside;
    }
    r.require(agree == 1000, std::to_string(1000 - agree) + " disagreements");
    if (r.pass) r.detail << "1000/1000 agree (" << inside << " inside)";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, void (*)(Result&)>> criteria = {
        {"Gaussian Gini anchor", gaussian_gini_anchor},
        {"density 8p representation of Gini's gamma", representation_identity},
        {"equicorrelation thresholds, d = 3", equicorrelation_thresholds_d3},
        {"indeterminate gap at rho = -0.379", indeterminate_gap},
        {"axioms of concordance", axiom_suite},
        {"degree-one linearity", degree_one_linearity},
        {"certificate round trips", certificate_roundtrips},
        {"transform checker", transform_checker},
        {"d = 3 LP against facet oracle", lp_vs_facets},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Result r;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].second(r);
        } catch (const std::exception& e) {
            r.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !r.pass;
        std::printf("%s [%zu] %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    r.detail.str().c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
