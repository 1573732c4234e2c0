#include "wigmap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigmap/error.hpp"
#include "wigmap/moments.hpp"
#include "wigmap/states.hpp"
#include "wigmap/transform.hpp"

namespace wigmap::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string cell_text(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double x) const { return format_double(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

Json cell_json(const Cell& cell) {
    struct Visitor {
        Json operator()(std::monostate) const { return nullptr; }
        Json operator()(double x) const { return std::isfinite(x) ? Json(x) : Json(nullptr); }
        Json operator()(std::int64_t x) const { return x; }
        Json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

Cell int_cell(long long x) { return static_cast<std::int64_t>(x); }

std::string join(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + format_double(xs[i]);
    }
    return s;
}

std::string join(const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + std::to_string(xs[i]);
    }
    return s;
}

void common_meta(Table& t, const RunConfig& c) {
    t.meta.emplace_back("tool", std::string("wigmap ") + kVersion);
    t.meta.emplace_back("subcommand", c.subcommand);
}

// -- figure ----------------------------------------------------------------------

Table figure_table(const RunConfig& c) {
    if (c.index < 1 || c.index > 6) {
        throw std::invalid_argument("figure index must be 1..6");
    }
    static constexpr int kDefaultN[] = {10, 20, 40};
    const int n = c.n.empty() ? kDefaultN[(c.index - 1) % 3] : c.n.front();
    if (n < 0) {
        throw std::invalid_argument("figure needs n >= 0");
    }
    if (!(c.r_max > 0.0) || c.samples < 2) {
        throw std::invalid_argument("figure needs r_max > 0 and at least 2 samples");
    }
    const bool weighted = c.index >= 4;
    Table t;
    common_meta(t, c);
    t.meta.emplace_back("figure", int_cell(c.index));
    t.meta.emplace_back("n", int_cell(n));
    t.meta.emplace_back("hbar", scaled_fock_hbar(n));
    t.meta.emplace_back("r_max", c.r_max);
    t.meta.emplace_back("samples", int_cell(static_cast<long long>(c.samples)));
    t.columns = {"r", weighted ? "2piRW" : "W"};

    const UniformAxis axis(0.0, c.r_max, c.samples);
    std::vector<double> column(c.samples);
    long long sign_changes = 0;
    for (std::size_t i = 0; i < c.samples; ++i) {
        const double r = axis.node(i);
        const double w = scaled_fock_wigner(n, r);
        column[i] = weighted ? 2.0 * kPi * r * w : w;
        t.rows.push_back({r, column[i]});
        if (i > 0 && r < 1.0 && std::signbit(column[i]) != std::signbit(column[i - 1]) && column[i] != 0.0) {
            ++sign_changes;
        }
    }
    t.meta.emplace_back("origin_value", scaled_fock_wigner(n, 0.0));
    t.meta.emplace_back("sign_changes_below_r1", int_cell(sign_changes));
    if (weighted) {
        t.meta.emplace_back("trapezoid_integral", trapezoid(column, axis.spacing()));
    }
    return t;
}

// -- moments ---------------------------------------------------------------------

Table moments_table(const RunConfig& c) {
    const MomentMethod method = parse_moment_method(c.method.empty() ? "recursion" : c.method);
    if (c.max_ell < 0) {
        throw std::invalid_argument("max-ell must be nonnegative");
    }
    if (method == MomentMethod::ClosedForm && c.max_ell > 4) {
        throw std::invalid_argument("closed forms exist for l <= 4 only");
    }
    const std::vector<int> ns = c.n.empty() ? std::vector<int>{10} : c.n;
    const double tol = c.tol.value_or(1e-7);
    Table t;
    common_meta(t, c);
    t.meta.emplace_back("method", to_string(method));
    t.meta.emplace_back("n", join(ns));
    t.meta.emplace_back("max_ell", int_cell(c.max_ell));
    const double contract = method == MomentMethod::Recursion ? 1e-12 : (method == MomentMethod::Quadrature ? 1e-6 : 0.0);
    t.meta.emplace_back("tolerance", method == MomentMethod::Quadrature ? tol : contract);
    t.meta.emplace_back("closed_form_check", contract);
    t.columns = {"n", "ell", "F", "method", "closed_form", "truncation_radius"};

    std::string failure;
    for (int n : ns) {
        if (n < 0) {
            throw std::invalid_argument("moments need n >= 0");
        }
        for (int ell = 0; ell <= c.max_ell; ++ell) {
            double value = 0.0;
            Cell radius;
            switch (method) {
                case MomentMethod::Recursion:
                    value = f_recursion(n, ell);
                    break;
                case MomentMethod::Quadrature: {
                    const auto q = f_quadrature_detail(n, ell, tol);
                    value = q.value;
                    radius = q.truncation_radius;
                    break;
                }
                case MomentMethod::ClosedForm:
                    value = f_closed(n, ell);
                    break;
            }
            Cell closed;
            if (ell <= 4) {
                const double ref = f_closed(n, ell);
                closed = ref;
                if (std::abs(value - ref) > contract * std::max(1.0, std::abs(ref)) && failure.empty()) {
                    std::ostringstream os;
                    os << "F(" << n << ", " << ell << ") = " << format_double(value) << " misses the closed form "
                       << format_double(ref) << " by more than " << contract;
                    failure = os.str();
                }
            }
            t.rows.push_back({int_cell(n), int_cell(ell), value, to_string(method), closed, radius});
        }
    }
    if (!failure.empty()) {
        throw ContractError(failure, std::move(t));
    }
    return t;
}

// -- peak areas ------------------------------------------------------------------

Table peak_table(const RunConfig& c) {
    const std::vector<int> ns = c.n.empty() ? std::vector<int>{10, 20, 40} : c.n;
    for (int n : ns) {
        if (n < 2) {
            throw std::invalid_argument("peak-areas needs every n >= 2");
        }
    }
    Table t;
    common_meta(t, c);
    t.meta.emplace_back("n", join(ns));
    t.meta.emplace_back("peak_only_lower_limit", "z_n");
    t.meta.emplace_back("with_preceding_lower_limit", "z_{n-2}");
    t.meta.emplace_back("tolerance", 1e-10);
    t.columns = {"n", "zero_count", "area_peak_only", "area_with_preceding_oscillation", "full_integral",
                 "truncation_radius"};
    std::string failure;
    for (int n : ns) {
        const auto report = peak_areas(n);
        t.rows.push_back({int_cell(n), int_cell(static_cast<long long>(report.zeros.size())), report.area_peak_only,
                          report.area_with_preceding_oscillation, report.full_integral, report.truncation_radius});
        if (std::abs(report.full_integral - 1.0) > 1e-8 && failure.empty()) {
            failure = "normalization integral for n = " + std::to_string(n) + " is " +
                      format_double(report.full_integral);
        }
    }
    if (!failure.empty()) {
        throw ContractError(failure, std::move(t));
    }
    return t;
}

// -- transform -------------------------------------------------------------------

AnalyticWigner make_state(const RunConfig& c, double hbar) {
    if (c.state == "thermal") {
        if (!(c.beta > 0.0)) {
            throw std::invalid_argument("thermal state needs beta > 0");
        }
        return AnalyticWigner(ThermalOscillator{c.beta, 1.0, 1.0, hbar});
    }
    if (c.state == "fock") {
        const int n = c.n.empty() ? 0 : c.n.front();
        if (n < 0) {
            throw std::invalid_argument("fock state needs n >= 0");
        }
        return AnalyticWigner(Fock{n, hbar});
    }
    throw std::invalid_argument("unknown state '" + c.state + "' (thermal, fock)");
}

Table transform_table(const RunConfig& c) {
    const double hbar = c.hbar.empty() ? 0.3 : c.hbar.front();
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    const std::string method = c.method.empty() ? "exact" : c.method;
    int series_order = -1;
    if (method.rfind("series:", 0) == 0) {
        const std::string k = method.substr(7);
        if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("series order must be a nonnegative integer, e.g. series:1");
        }
        series_order = std::stoi(k);
    } else if (method != "exact" && method != "classical") {
        throw std::invalid_argument("unknown transform method '" + method + "' (exact, series:K, classical)");
    }
    const PhaseGate gate{c.degree, c.alpha, hbar};
    validate(gate);
    if (series_order >= 0 && c.degree != 3) {
        throw std::invalid_argument("the correction series applies to degree 3 gates");
    }
    const AnalyticWigner state = make_state(c, hbar);
    const PhaseSpaceGrid grid = parse_grid_spec(c.grid.empty() ? "-6:6:241,-6:6:241" : c.grid);
    check_kernel_budget(state, gate, grid, c.max_kernel_points);

    Discrepancy d = classical_quantum_discrepancy(state, gate, grid);
    Table t;
    common_meta(t, c);
    t.meta.emplace_back("state", state.describe());
    t.meta.emplace_back("degree", int_cell(c.degree));
    t.meta.emplace_back("alpha", c.alpha);
    t.meta.emplace_back("hbar", hbar);
    t.meta.emplace_back("method", method);
    t.meta.emplace_back("grid", c.grid.empty() ? "-6:6:241,-6:6:241" : c.grid);
    t.meta.emplace_back("kernel_spacing", d.quantum.kernel_spacing);
    t.meta.emplace_back("kernel_extent", d.quantum.kernel_extent);
    t.meta.emplace_back("discrepancy_l_inf", d.l_inf);
    t.meta.emplace_back("discrepancy_l1", d.l1);

    const PhaseSpaceField* field = &d.quantum.field;
    std::vector<std::string> warnings = d.quantum.warnings;
    std::optional<TransformResult> series;
    if (method == "classical") {
        field = &d.classical;
    } else if (series_order >= 0) {
        series = transform_series(state.sample(grid), c.alpha, hbar, series_order);
        field = &series->field;
        warnings.insert(warnings.end(), series->warnings.begin(), series->warnings.end());
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            err = std::max(err, std::abs(field->values()[i] - d.quantum.field.values()[i]));
        }
        t.meta.emplace_back("series_error_l_inf", err);
    }
    t.meta.emplace_back("normalization", integrate_field(*field));
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        t.meta.emplace_back("warning", warnings[i]);
    }
    t.columns = {"q", "p", "W"};
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
            t.rows.push_back({grid.q().node(iq), grid.p().node(ip), field->at(iq, ip)});
        }
    }
    return t;
}

// -- thermal ---------------------------------------------------------------------

Table thermal_table(const RunConfig& c) {
    if (!(c.beta > 0.0)) {
        throw std::invalid_argument("thermal needs beta > 0");
    }
    const std::vector<double> hbars = c.hbar.empty() ? std::vector<double>{0.4, 0.2, 0.1, 0.05} : c.hbar;
    for (double h : hbars) {
        if (!(h > 0.0)) {
            throw std::invalid_argument("every hbar must be positive");
        }
    }
    const std::string spec = c.grid.empty() ? "-6:6:241,-6:6:241" : c.grid;
    const PhaseSpaceGrid grid = parse_grid_spec(spec);
    Table t;
    common_meta(t, c);
    t.meta.emplace_back("beta", c.beta);
    t.meta.emplace_back("hbar", join(hbars));
    t.meta.emplace_back("grid", spec);
    t.columns = {"hbar", "sup_distance", "observed_order", "origin_value"};
    double prev_h = 0.0;
    double prev_d = 0.0;
    for (std::size_t k = 0; k < hbars.size(); ++k) {
        const double h = hbars[k];
        double sup = 0.0;
        for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
            for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
                const double q = grid.q().node(iq);
                const double p = grid.p().node(ip);
                sup = std::max(sup, std::abs(thermal_wigner(c.beta, 1.0, 1.0, h, q, p) - boltzmann_limit(c.beta, q, p)));
            }
        }
        Cell order;
        if (k > 0 && sup > 0.0 && prev_d > 0.0) {
            order = std::log(prev_d / sup) / std::log(prev_h / h);
        }
        t.rows.push_back({h, sup, order, thermal_wigner(c.beta, 1.0, 1.0, h, 0.0, 0.0)});
        prev_h = h;
        prev_d = sup;
    }
    return t;
}

struct ArgvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void error_line(std::ostream& err, const std::string& kind, int code, const std::string& message,
                std::optional<std::size_t> suggested = std::nullopt) {
    Json j;
    j["status"] = "error";
    j["kind"] = kind;
    j["exit_code"] = code;
    j["message"] = message;
    if (suggested) {
        j["suggested_points"] = *suggested;
    }
    err << j.dump() << '\n';
}

void emit(const RunConfig& c, const Table& t, std::ostream& out) {
    std::string path = c.out;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
            std::string name = c.subcommand;
            if (c.subcommand == "figure") {
                name += std::to_string(c.index);
            }
            path = (std::filesystem::path(dir) / (name + (c.format == Format::Json ? ".json" : ".csv"))).string();
        }
    }
    if (path.empty()) {
        c.format == Format::Json ? write_json(out, t) : write_csv(out, t);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    c.format == Format::Json ? write_json(file, t) : write_csv(file, t);
    if (!file) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
    for (const auto& [key, value] : t.meta) {
        if (key == "discrepancy_l_inf" || key == "discrepancy_l1" || key == "series_error_l_inf") {
            out << key << ' ' << cell_text(value) << '\n';
        }
    }
    out << "wrote " << path << '\n';
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\r\n") == std::string::npos && (text.empty() || (text.front() != ' ' && text.back() != ' '))) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') {
            quoted += '"';
        }
        quoted += ch;
    }
    return quoted + '"';
}

void write_csv(std::ostream& os, const Table& table) {
    for (const auto& [key, value] : table.meta) {
        std::string text = cell_text(value);
        for (char& ch : text) {
            if (ch == '\n' || ch == '\r') {
                ch = ' ';
            }
        }
        os << "# " << key << ": " << text << "\r\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << csv_field(table.columns[i]);
    }
    os << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        os << "\r\n";
    }
}

void write_json(std::ostream& os, const Table& table) {
    Json doc;
    Json meta = Json::object();
    for (const auto& [key, value] : table.meta) {
        if (meta.contains(key)) {
            if (!meta[key].is_array()) {
                meta[key] = Json::array({meta[key]});
            }
            meta[key].push_back(cell_json(value));
        } else {
            meta[key] = cell_json(value);
        }
    }
    doc["meta"] = std::move(meta);
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::object();
        for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) {
            r[table.columns[i]] = cell_json(row[i]);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(1) << '\n';
}

PhaseSpaceGrid parse_grid_spec(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("grid spec must be q_min:q_max:n_q,p_min:p_max:n_p");
    }
    const auto axis = [&spec](const std::string& part) {
        std::istringstream is(part);
        double lo = 0.0;
        double hi = 0.0;
        long long n = 0;
        char c1 = 0;
        char c2 = 0;
        if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof()) {
            throw std::invalid_argument("malformed grid axis '" + part + "' in '" + spec + "'");
        }
        if (!(hi > lo) || n < 2) {
            throw std::invalid_argument("grid axis '" + part + "' needs max > min and at least 2 points");
        }
        return UniformAxis(lo, hi, static_cast<std::size_t>(n));
    };
    return PhaseSpaceGrid(axis(spec.substr(0, comma)), axis(spec.substr(comma + 1)));
}

Table run_subcommand(const RunConfig& c) {
    if (c.subcommand == "figure") {
        return figure_table(c);
    }
    if (c.subcommand == "moments") {
        return moments_table(c);
    }
    if (c.subcommand == "peak-areas") {
        return peak_table(c);
    }
    if (c.subcommand == "transform") {
        return transform_table(c);
    }
    if (c.subcommand == "thermal") {
        return thermal_table(c);
    }
    throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wigner-function numerics: figure data, moment tables, phase-gate transforms"};
    app.name("wigmap");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("wigmap ") + kVersion);

    RunConfig c;
    std::string format = "csv";
    double tol = 0.0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", c.out, "Output path (default: stdout, or $WIGMAP_OUT_DIR/<subcommand>.<ext>)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_option("--tol", tol, "Quadrature tolerance where applicable");
    };

    CLI::App* figure = app.add_subcommand("figure", "Radial profile W(n; r) or 2 pi r W(n; r)");
    figure->add_option("--index", c.index, "Figure 1..6; 1-3 emit W, 4-6 emit 2 pi r W")->required();
    figure->add_option("--n", c.n, "Quantum number (default 10, 20, 40 by index)")->expected(1);
    figure->add_option("--r-max", c.r_max, "Upper end of the r range")->capture_default_str();
    figure->add_option("--samples", c.samples, "Number of r samples")->capture_default_str();
    add_common(figure);

    CLI::App* moments = app.add_subcommand("moments", "Moment table F(n, l)");
    moments->add_option("--n", c.n, "Comma-separated n values (default 10)")->delimiter(',');
    moments->add_option("--max-ell", c.max_ell, "Largest l")->capture_default_str();
    moments->add_option("--method", c.method, "recursion | quadrature | closed (default recursion)")
        ->check(CLI::IsMember({"recursion", "quadrature", "closed"}));
    add_common(moments);

    CLI::App* peaks = app.add_subcommand("peak-areas", "Areas under the outermost peak of 2 pi r W(n; r)");
    peaks->add_option("--n", c.n, "Comma-separated n values, each >= 2 (default 10,20,40)")->delimiter(',');
    add_common(peaks);

    CLI::App* transform = app.add_subcommand("transform", "Phase gate exp(i alpha Q^n / (n hbar)) on a closed-form state");
    transform->add_option("--state", c.state, "thermal | fock")->capture_default_str();
    transform->add_option("--n", c.n, "Fock quantum number (default 0)")->expected(1);
    transform->add_option("--degree", c.degree, "Gate degree n")->capture_default_str();
    transform->add_option("--alpha", c.alpha, "Gate strength")->capture_default_str();
    transform->add_option("--hbar", c.hbar, "Planck constant (default 0.3)")->expected(1);
    transform->add_option("--beta", c.beta, "Inverse temperature of the thermal state")->capture_default_str();
    transform->add_option("--method", c.method, "exact | series:K | classical (default exact)");
    transform->add_option("--grid", c.grid, "q_min:q_max:n_q,p_min:p_max:n_p (default -6:6:241,-6:6:241)");
    transform->add_option("--max-kernel-points", c.max_kernel_points, "Position lattice budget")->capture_default_str();
    add_common(transform);

    CLI::App* thermal = app.add_subcommand("thermal", "Thermal Wigner function against its Boltzmann limit");
    thermal->add_option("--beta", c.beta, "Inverse temperature")->capture_default_str();
    thermal->add_option("--hbar", c.hbar, "Comma-separated hbar values (default 0.4,0.2,0.1,0.05)")->delimiter(',');
    thermal->add_option("--grid", c.grid, "Sampling grid (default -6:6:241,-6:6:241)");
    add_common(thermal);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "wigmap " << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        error_line(err, "usage", kUsageError, e.what());
        return kUsageError;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    c.format = format == "json" ? Format::Json : Format::Csv;
    if (app.get_subcommands().front()->count("--tol") > 0) {
        if (!(tol > 0.0)) {
            error_line(err, "usage", kUsageError, "--tol must be positive");
            return kUsageError;
        }
        c.tol = tol;
    }

    try {
        const Table table = run_subcommand(c);
        emit(c, table, out);
        return kOk;
    } catch (const ContractError& e) {
        try {
            emit(c, e.table(), out);
        } catch (const std::exception&) {
        }
        error_line(err, "contract", kContractViolation, e.what());
        return kContractViolation;
    } catch (const NonConvergenceError& e) {
        error_line(err, "contract", kContractViolation, e.what());
        return kContractViolation;
    } catch (const CalibrationError& e) {
        error_line(err, "contract", kContractViolation, e.what());
        return kContractViolation;
    } catch (const GridResolutionError& e) {
        error_line(err, "grid", kRuntimeError, e.what(), e.suggested_points());
        return kRuntimeError;
    } catch (const std::invalid_argument& e) {
        error_line(err, "usage", kUsageError, e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        error_line(err, "runtime", kRuntimeError, e.what());
        return kRuntimeError;
    }
}

}  // namespace wigmap::cli
