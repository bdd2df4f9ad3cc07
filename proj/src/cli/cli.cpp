#include "concord/cli.hpp"

#include "concord/compatibility.hpp"
#include "concord/csv.hpp"
#include "concord/distributions.hpp"
#include "concord/error.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace concord::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double parse_number(const std::string& text, const std::string& what) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || !std::isfinite(x))
        throw DomainError(what + ": expected a number, got '" + text + "'");
    return x;
}

std::string full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

// Minimal JSON emitter: keys in insertion order, numbers at 17 significant digits.
class Json {
public:
    explicit Json(std::ostream& os) : os_(os) {}

    Json& begin_object() { return open('{'); }
    Json& end_object() { return close('}'); }
    Json& begin_array() { return open('['); }
    Json& end_array() { return close(']'); }

    Json& key(const std::string& k) {
        separator();
        os_ << quote(k) << ':';
        after_key_ = true;
        return *this;
    }
    Json& value(double x) {
        separator();
        if (std::isfinite(x))
            os_ << full(x);
        else
            os_ << "null";
        return *this;
    }
    Json& value(std::size_t x) {
        separator();
        os_ << x;
        return *this;
    }
    Json& value(const std::string& s) {
        separator();
        os_ << quote(s);
        return *this;
    }
    Json& value(const char* s) { return value(std::string(s)); }
    Json& null() {
        separator();
        os_ << "null";
        return *this;
    }

private:
    Json& open(char c) {
        separator();
        os_ << c;
        first_.push_back(true);
        return *this;
    }
    Json& close(char c) {
        os_ << c;
        first_.pop_back();
        if (first_.empty()) os_ << '\n';
        return *this;
    }
    void separator() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (first_.empty()) return;
        if (!first_.back()) os_ << ',';
        first_.back() = false;
    }
    static std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

    std::ostream& os_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Splits a mixture body on '+' separators, leaving signs of numbers alone
// ("0.5*gaussian:+0.3", "1e+0*pi").
std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const char prev = cur.empty() ? '\0' : cur.back();
        if (c == '+' && !cur.empty() && prev != ':' && prev != 'e' && prev != 'E' && prev != '*') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::uint64_t resolve_seed(const RunConfig& config) {
    if (config.seed) return *config.seed;
    if (const char* env = std::getenv("CONCORD_SEED")) {
        std::uint64_t s = 0;
        const std::string text = env;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), s);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            throw DomainError("CONCORD_SEED: expected an unsigned 64-bit integer, got '" + text + "'");
        return s;
    }
    throw DomainError("sampling requested but no seed given (use --seed or set CONCORD_SEED)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Selected columns of a data CSV (header required); defaults to all columns.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> load_columns(
    const std::string& path, const std::vector<std::string>& names) {
    const NumericTable table = read_numeric_csv(std::filesystem::path(path), HeaderMode::Required);
    std::vector<std::string> chosen = names.empty() ? table.header : names;
    std::vector<std::vector<double>> cols;
    for (const auto& name : chosen) cols.push_back(table.column(table.column_index(name)));
    return {chosen, cols};
}

// ---------------------------------------------------------------- measure

int run_measure(const RunConfig& config, std::ostream& out) {
    const MeasureSpec spec = parse_spec(config.spec, config.nu);
    if (config.copula.has_value() == config.data.has_value())
        throw DomainError("measure: give exactly one of --copula or --data");
    if (config.sample_n && config.n_mc) throw DomainError("measure: --sample and --mc are mutually exclusive");

    std::string source;
    Estimate est;
    std::optional<std::uint64_t> seed;
    if (config.data) {
        if (config.sample_n || config.n_mc) throw DomainError("measure: --sample/--mc apply to --copula only");
        if (!config.columns.empty() && config.columns.size() != 2)
            throw DomainError("measure: --columns must name exactly two columns");
        auto [names, cols] = load_columns(*config.data, config.columns);
        if (cols.size() != 2)
            throw DomainError("measure: data must have exactly two columns (select them with --columns)");
        std::vector<Point> pts(cols[0].size());
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {cols[0][i], cols[1][i]};
        source = *config.data + "[" + names[0] + "," + names[1] + "]";
        est = estimate(pseudo_observations(pts), spec);
    } else {
        const Copula c = parse_copula(*config.copula);
        source = c.describe();
        if (config.sample_n) {
            seed = resolve_seed(config);
            RandomSource rng(*seed);
            const auto draws = sample(c, *config.sample_n, rng);
            est = estimate(pseudo_observations(draws), spec);
        } else if (config.n_mc) {
            seed = resolve_seed(config);
            RandomSource rng(*seed);
            const auto g = std::visit(
                overloaded{
                    [](const measure::Spearman&) { return Distribution::uniform(); },
                    [](const measure::Blomqvist&) { return Distribution::three_point(0.5); },
                    [](const measure::BetaP& b) { return Distribution::three_point(b.p); },
                    [](const measure::GTransformed& g) { return g.g; },
                    [](const auto&) -> Distribution {
                        throw DomainError("measure: --mc applies to G-transformed rank correlations only");
                    },
                },
                spec.variant());
            est = g_transformed_rho_monte_carlo(c, g, *config.n_mc, rng);
        } else {
            est = evaluate(c, spec);
        }
    }

    if (config.format == OutputFormat::Machine) {
        Json j(out);
        j.begin_object().key("command").value("measure");
        j.key("measure").value(spec.name());
        j.key("source").value(source);
        j.key("value").value(est.value);
        j.key("std_error");
        est.std_error ? j.value(*est.std_error) : j.null();
        j.key("n");
        est.n ? j.value(*est.n) : j.null();
        j.key("method").value(to_string(est.method));
        j.key("seed");
        seed ? j.value(std::to_string(*seed)) : j.null();
        j.end_object();
    } else {
        out << "measure:   " << spec.name() << '\n';
        out << "source:    " << source << '\n';
        out << "value:     " << fixed4(est.value) << '\n';
        if (est.std_error) out << "std error: " << fixed4(*est.std_error) << '\n';
        if (est.n) out << "n:         " << *est.n << '\n';
        out << "method:    " << to_string(est.method) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- matrix

void write_matrix_csv(std::ostream& os, std::size_t d, const std::vector<double>& values) {
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) os << (j ? "," : "") << full(values[i * d + j]);
        os << '\n';
    }
}

int run_matrix(const RunConfig& config, std::ostream& out) {
    if (!config.data) throw DomainError("matrix: --data is required");
    const MeasureSpec spec = parse_spec(config.spec, config.nu);
    const auto [names, cols] = load_columns(*config.data, config.columns);
    const EstimatedMatrix m = estimate_kappa_matrix(cols, spec);

    if (config.output) {
        std::ofstream f(*config.output);
        if (!f) throw DomainError(*config.output + ": cannot open for writing");
        write_matrix_csv(f, m.d, m.values);
    }
    if (config.format == OutputFormat::Machine) {
        write_matrix_csv(out, m.d, m.values);
        return kExitOk;
    }
    std::size_t width = 8;
    for (const auto& n : names) width = std::max(width, n.size() + 1);
    auto table = [&](const std::string& title, const std::vector<double>& v) {
        out << title << '\n' << std::setw(static_cast<int>(width)) << "";
        for (const auto& n : names) out << std::setw(static_cast<int>(width)) << n;
        out << '\n';
        for (std::size_t i = 0; i < m.d; ++i) {
            out << std::setw(static_cast<int>(width)) << names[i];
            for (std::size_t j = 0; j < m.d; ++j) out << std::setw(static_cast<int>(width)) << fixed4(v[i * m.d + j]);
            out << '\n';
        }
    };
    out << "measure: " << spec.name() << " (n = " << cols.front().size() << ")\n";
    table("estimate", m.values);
    table("std error", m.std_errors);
    return kExitOk;
}

// ---------------------------------------------------------------- compat

int run_compat(const RunConfig& config, std::ostream& out) {
    if (!config.matrix) throw DomainError("compat: --matrix is required");
    const NumericTable t = read_numeric_csv(std::filesystem::path(*config.matrix), HeaderMode::None);
    const std::size_t d = t.rows.size();
    if (d == 0) throw DomainError(*config.matrix + ": empty matrix");
    if (t.columns() != d) {
        std::ostringstream os;
        os << *config.matrix << ": matrix is " << d << " x " << t.columns() << ", expected square";
        throw DomainError(os.str());
    }
    std::vector<double> flat;
    for (const auto& r : t.rows) flat.insert(flat.end(), r.begin(), r.end());
    const KappaMatrix p(d, std::move(flat));
    const CompatibilityVerdict v = classify_gamma_matrix(p, config.tol);

    if (config.format == OutputFormat::Machine) {
        Json j(out);
        j.begin_object().key("command").value("compat");
        j.key("d").value(d);
        j.key("gamma_class").value(to_string(v.gamma_class));
        j.key("elliptope").begin_object();
        j.key("membership").value(to_string(v.elliptope.membership));
        j.key("min_eigenvalue").value(v.elliptope.min_eigenvalue);
        j.end_object();
        j.key("cut_polytope").begin_object();
        j.key("membership").value(to_string(v.cut_polytope.membership));
        j.key("residual").value(v.cut_polytope.residual);
        j.key("certificate").begin_array();
        for (const auto& w : v.cut_polytope.certificate) {
            j.begin_object().key("b").value(w.b.str()).key("weight").value(w.weight).end_object();
        }
        j.end_array();
        j.end_object();
        j.key("note").value(v.note);
        j.end_object();
    } else {
        out << to_string(v.gamma_class) << '\n';
        out << "elliptope:    " << to_string(v.elliptope.membership)
            << " (min eigenvalue " << fixed4(v.elliptope.min_eigenvalue) << ")\n";
        out << "cut polytope: " << to_string(v.cut_polytope.membership);
        if (v.cut_polytope.membership != Membership::Member)
            out << " (LP infeasibility " << fixed4(v.cut_polytope.residual) << ")";
        out << '\n';
        if (!v.cut_polytope.certificate.empty()) {
            out << "certificate:\n";
            for (const auto& w : v.cut_polytope.certificate) out << "  b = " << w.b.str() << "  weight " << fixed4(w.weight) << '\n';
        }
        if (!v.note.empty()) out << "note: " << v.note << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- check-transform

int run_check_transform(const RunConfig& config, std::ostream& out) {
    if (!config.g1 || !config.g2) throw DomainError("check-transform: --g1 and --g2 are required");
    const TransformPair pair(load_tabulated_csv(*config.g1), load_tabulated_csv(*config.g2));
    const TransformVerdict v = check_transform_pair(pair);
    if (config.format == OutputFormat::Machine) {
        Json j(out);
        j.begin_object().key("command").value("check-transform");
        j.key("verdict").value(to_string(v.kind));
        j.key("recognized");
        v.recognized ? j.value(*v.recognized) : j.null();
        j.key("detail").value(v.detail);
        j.end_object();
    } else {
        out << to_string(v.kind) << '\n';
        if (v.recognized) out << "induced distribution: " << *v.recognized << '\n';
        else if (v.inducer) out << "induced distribution: " << v.inducer->name() << '\n';
        if (!v.detail.empty()) out << v.detail << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- thresholds

int run_thresholds(const RunConfig& config, std::ostream& out) {
    const EquicorrelationThresholds t = equicorrelation_thresholds(config.d);
    if (config.format == OutputFormat::Machine) {
        Json j(out);
        j.begin_object().key("command").value("thresholds");
        j.key("d").value(config.d);
        j.key("elliptope_min").value(t.elliptope_min);
        j.key("cut_polytope_min");
        t.cut_polytope_min ? j.value(*t.cut_polytope_min) : j.null();
        j.end_object();
    } else {
        out << "d:                " << config.d << '\n';
        out << "elliptope min:    " << fixed4(t.elliptope_min) << '\n';
        out << "cut polytope min: " << (t.cut_polytope_min ? fixed4(*t.cut_polytope_min) : std::string("unknown (d > 16)"))
            << '\n';
    }
    return kExitOk;
}

}  // namespace

Copula parse_copula(const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "independence" || text == "pi") return Copula::independence();
    if (text == "comonotone" || text == "M") return Copula::comonotone();
    if (text == "countermonotone" || text == "W") return Copula::countermonotone();
    if (text.rfind("gaussian:", 0) == 0) return Copula::gaussian(parse_number(text.substr(9), "gaussian copula rho"));
    if (text.rfind("mixture:", 0) == 0) {
        std::vector<std::pair<double, Copula>> parts;
        for (const auto& term : split_terms(text.substr(8))) {
            const auto star = term.find('*');
            if (star == std::string::npos)
                throw DomainError("mixture term '" + term + "': expected <weight>*<copula>");
            parts.emplace_back(parse_number(trim(term.substr(0, star)), "mixture weight"),
                               parse_copula(term.substr(star + 1)));
        }
        return Copula::mixture(std::move(parts));
    }
    throw DomainError("unknown copula '" + text +
                      "' (expected independence, comonotone, countermonotone, gaussian:<rho> or mixture:...)");
}

NuMeasure parse_nu(const std::string& raw) {
    const std::string text = trim(raw);
    const std::string body = !text.empty() && text.front() == '{' ? text : read_file(text);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("nu: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || j.size() != 1)
        throw DomainError("nu: expected one of {\"atoms\":...}, {\"density\":...}, {\"density_table\":...}");
    try {
        if (j.contains("atoms")) {
            std::vector<NuAtom> atoms;
            for (const auto& a : j.at("atoms")) {
                if (!a.is_array() || a.size() != 2) throw DomainError("nu: each atom must be [p, weight]");
                atoms.push_back({a[0].get<double>(), a[1].get<double>()});
            }
            return NuMeasure::atoms(std::move(atoms));
        }
        if (j.contains("density")) {
            const auto name = j.at("density").get<std::string>();
            if (name != "gini") throw DomainError("nu: unknown builtin density '" + name + "' (known: gini)");
            return NuMeasure::gini();
        }
        if (j.contains("density_table")) {
            const auto path = j.at("density_table").get<std::string>();
            const NumericTable t = read_numeric_csv(std::filesystem::path(path), HeaderMode::Optional);
            if (t.columns() != 2) throw DomainError(path + ": expected two columns (p, density)");
            return NuMeasure::density_table(t.column(0), t.column(1));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("nu: ") + e.what());
    }
    throw DomainError("nu: expected one of {\"atoms\":...}, {\"density\":...}, {\"density_table\":...}");
}

MeasureSpec parse_spec(const std::string& raw, const std::optional<std::string>& nu_json) {
    const std::string text = trim(raw);
    if (text == "spearman") return MeasureSpec::spearman();
    if (text == "blomqvist") return MeasureSpec::blomqvist();
    if (text == "gini") return MeasureSpec::gini();
    if (text == "ggini") {
        if (!nu_json) throw DomainError("spec ggini requires --nu");
        return MeasureSpec::generalized_gini(parse_nu(*nu_json));
    }
    if (text.rfind("beta:", 0) == 0) return MeasureSpec::beta(parse_number(text.substr(5), "beta p"));
    if (text == "g:uniform") return MeasureSpec::g_transformed(Distribution::uniform());
    if (text == "g:gaussian") return MeasureSpec::g_transformed(Distribution::standard_gaussian());
    if (text.rfind("g:three-point:", 0) == 0)
        return MeasureSpec::g_transformed(Distribution::three_point(parse_number(text.substr(14), "three-point p")));
    if (text.rfind("g:table:", 0) == 0)
        return MeasureSpec::g_transformed(Distribution::tabulated(load_tabulated_csv(text.substr(8))));
    throw DomainError("unknown spec '" + text +
                      "' (expected spearman, blomqvist, beta:<p>, gini, ggini, g:uniform, g:gaussian, "
                      "g:three-point:<p> or g:table:<csv>)");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case Command::Measure: return run_measure(config, out);
            case Command::Matrix: return run_matrix(config, out);
            case Command::Compat: return run_compat(config, out);
            case Command::CheckTransform: return run_check_transform(config, out);
            case Command::Thresholds: return run_thresholds(config, out);
        }
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitDomain;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Measures of concordance and compatibility of concordance matrices", "concord"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    app.add_option("--seed", config.seed, "seed for sampling (default: CONCORD_SEED)");

    auto* measure_cmd = app.add_subcommand("measure", "compute a measure on a copula or a data file");
    measure_cmd->add_option("--copula", config.copula, "independence | comonotone | countermonotone | gaussian:<rho> | mixture:<w>*<c>+...");
    measure_cmd->add_option("--data", config.data, "CSV with a header row");
    measure_cmd->add_option("--columns", config.columns, "two column names")->delimiter(',');
    measure_cmd->add_option("--spec", config.spec, "measure specification")->capture_default_str();
    measure_cmd->add_option("--nu", config.nu, "mixing measure as JSON or a JSON file");
    measure_cmd->add_option("--sample", config.sample_n, "estimate on N draws from the copula")->check(CLI::PositiveNumber);
    measure_cmd->add_option("--mc", config.n_mc, "Monte Carlo with N draws")->check(CLI::PositiveNumber);
    measure_cmd->add_option("--seed", config.seed, "seed for sampling (default: CONCORD_SEED)");
    measure_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

    auto* matrix_cmd = app.add_subcommand("matrix", "pairwise measure matrix of a data file");
    matrix_cmd->add_option("--data", config.data, "CSV with a header row")->required();
    matrix_cmd->add_option("--columns", config.columns, "column names")->delimiter(',');
    matrix_cmd->add_option("--spec", config.spec, "measure specification")->capture_default_str();
    matrix_cmd->add_option("--nu", config.nu, "mixing measure as JSON or a JSON file");
    matrix_cmd->add_option("--output", config.output, "also write the matrix as CSV");
    matrix_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

    auto* compat_cmd = app.add_subcommand("compat", "classify a matrix against the elliptope and cut polytope");
    compat_cmd->add_option("--matrix", config.matrix, "square matrix CSV without header")->required();
    compat_cmd->add_option("--tol", config.tol, "membership tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    compat_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

    auto* transform_cmd = app.add_subcommand("check-transform", "decide whether rho(g1(U), g2(V)) is a measure of concordance");
    transform_cmd->add_option("--g1", config.g1, "two-column CSV: probability node, value")->required();
    transform_cmd->add_option("--g2", config.g2, "two-column CSV on the same nodes")->required();
    transform_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

    auto* thresholds_cmd = app.add_subcommand("thresholds", "equicorrelation thresholds of the elliptope and cut polytope");
    thresholds_cmd->add_option("--d", config.d, "dimension")->required()->check(CLI::Range(2, 64));
    thresholds_cmd->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitDomain;
    }

    if (measure_cmd->parsed()) config.command = Command::Measure;
    else if (matrix_cmd->parsed()) config.command = Command::Matrix;
    else if (compat_cmd->parsed()) config.command = Command::Compat;
    else if (transform_cmd->parsed()) config.command = Command::CheckTransform;
    else config.command = Command::Thresholds;
    config.format = format == "machine" ? OutputFormat::Machine : OutputFormat::Human;
    return run(config, out, err);
}

}  // namespace concord::cli
