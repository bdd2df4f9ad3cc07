#pragma once

// Bivariate copulas: the Frechet-Hoeffding bounds, independence, the
// Gaussian family, convex mixtures and empirical copulas built from ranks.

#include "concord/numerics.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace concord {

using Point = std::array<double, 2>;

class Copula;

struct Independence {};
struct Comonotone {};
struct Countermonotone {};
struct Gaussian {
    double rho = 0.0;
};
struct MixtureComponent {
    double weight = 0.0;
    std::shared_ptr<const Copula> copula;
};
struct Mixture {
    std::vector<MixtureComponent> components;
};
struct Empirical {
    std::vector<Point> points;  // pseudo-observations in (0,1)^2
};

class Copula {
public:
    using Variant = std::variant<Independence, Comonotone, Countermonotone, Gaussian, Mixture, Empirical>;

    static Copula independence();
    static Copula comonotone();
    static Copula countermonotone();
    static Copula gaussian(double rho);
    // Weights must be nonnegative and sum to 1 within 1e-12.
    static Copula mixture(std::vector<std::pair<double, Copula>> components);
    // Points must lie strictly inside the unit square.
    static Copula empirical(std::vector<Point> points);

    const Variant& variant() const { return variant_; }
    bool is_empirical() const { return std::holds_alternative<Empirical>(variant_); }
    std::string describe() const;

    double operator()(double u, double v) const;

private:
    explicit Copula(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// C(u, v); throws DomainError outside [0,1]^2. For Empirical this is the
// empirical distribution function of the stored points.
double eval(const Copula& c, double u, double v);

std::vector<Point> sample(const Copula& c, std::size_t n, RandomSource& rng);

// Ranks scaled by n + 1, ties averaged. Requires n >= 2.
Copula pseudo_observations(std::span<const Point> data);

// Average ranks (1-based, ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> values);

// A binary sign pattern with b[0] == 1; one vertex of the cut polytope.
class BVector {
public:
    explicit BVector(std::vector<std::uint8_t> bits);
    // Canonical representative: flips every bit when bits[0] == 0.
    static BVector canonical(std::vector<std::uint8_t> bits);

    std::size_t size() const { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    // (2b - 1)(2b - 1)^T entry.
    double sign_product(std::size_t i, std::size_t j) const { return bits_[i] == bits_[j] ? 1.0 : -1.0; }
    std::string str() const;

    friend bool operator==(const BVector&, const BVector&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// All 2^(d-1) canonical sign patterns, ordered by their binary value of
// bits 1..d-1 (bit i set means b[i] == 0).
std::vector<BVector> enumerate_bvectors(std::size_t d);

// Row-major n x d block of samples.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::vector<double> column(std::size_t j) const;
};

// Rows U b + (1 - U)(1 - b) with U ~ Unif(0,1).
SampleMatrix witness_component_sample(const BVector& b, std::size_t n, RandomSource& rng);

struct WeightedBVector {
    BVector b;
    double weight = 0.0;
};

// Draws from sum_b w_b C^(b): pick b by weight, then one witness row.
SampleMatrix witness_mixture_sample(std::span<const WeightedBVector> mixture, std::size_t n, RandomSource& rng);

}  // namespace concord
