#pragma once

// Command-line front end: measure, matrix, compat, check-transform, thresholds.

#include "concord/concordance.hpp"
#include "concord/copulas.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace concord::cli {

enum class Command { Measure, Matrix, Compat, CheckTransform, Thresholds };
enum class OutputFormat { Human, Machine };

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    Command command = Command::Measure;
    OutputFormat format = OutputFormat::Human;

    std::optional<std::string> copula;     // measure
    std::optional<std::string> data;       // measure, matrix: CSV with header
    std::vector<std::string> columns;      // measure, matrix: column names
    std::string spec = "spearman";         // measure, matrix
    std::optional<std::string> nu;         // ggini: inline JSON or a path
    std::optional<std::size_t> sample_n;   // measure: plug-in on a sampled copula
    std::optional<std::size_t> n_mc;       // measure: Monte Carlo route
    std::optional<std::uint64_t> seed;     // falls back to CONCORD_SEED
    std::optional<std::string> matrix;     // compat
    std::optional<std::string> output;     // matrix: also write the CSV here
    std::optional<std::string> g1, g2;     // check-transform
    std::size_t d = 3;                     // thresholds
    double tol = 1e-9;                     // compat
};

// "independence", "comonotone", "countermonotone", "gaussian:<rho>",
// "mixture:<w>*<copula>+<w>*<copula>..." (aliases pi, M, W).
Copula parse_copula(const std::string& text);

// "spearman", "blomqvist", "beta:<p>", "gini", "ggini" (needs nu),
// "g:uniform", "g:gaussian", "g:three-point:<p>", "g:table:<csv>".
MeasureSpec parse_spec(const std::string& text, const std::optional<std::string>& nu_json);

// {"atoms":[[p,w],...]}, {"density":"gini"} or {"density_table":"<csv>"};
// text starting with '{' is parsed inline, anything else is a file path.
NuMeasure parse_nu(const std::string& text);

// Throws DomainError when sampling is requested without a seed.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (without the program name) and runs; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace concord::cli
