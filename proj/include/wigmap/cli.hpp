#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wigmap/grids.hpp"

namespace wigmap::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "WIGMAP_OUT_DIR";

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2, kContractViolation = 3 };

enum class Format { Csv, Json };

// One CSV/JSON cell. monostate prints as an empty field / null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// RFC 4180 with '#'-prefixed "key: value" metadata lines before the header.
void write_csv(std::ostream& os, const Table& table);
// {"meta": {...}, "rows": [{column: value, ...}, ...]}
void write_json(std::ostream& os, const Table& table);

std::string format_double(double x);
std::string csv_field(const std::string& text);

// "q_min:q_max:n_q,p_min:p_max:n_p"; throws std::invalid_argument.
PhaseSpaceGrid parse_grid_spec(const std::string& spec);

struct RunConfig {
    std::string subcommand;
    std::vector<int> n;
    std::vector<double> hbar;
    double alpha = 1.0;
    double beta = 1.0;
    std::string grid;
    std::optional<double> tol;
    std::string out;
    Format format = Format::Csv;
    // figure
    int index = 1;
    double r_max = 1.5;
    std::size_t samples = 2000;
    // moments
    int max_ell = 4;
    std::string method;
    // transform
    std::string state = "thermal";
    int degree = 3;
    std::size_t max_kernel_points = 8000;
};

// Builds the table for a parsed configuration. Throws std::invalid_argument on
// precondition failures and ContractError when an internal check fails after
// the table was produced.
Table run_subcommand(const RunConfig& config);

// Thrown when a tolerance contract fails; carries the table computed so far.
class ContractError : public std::runtime_error {
public:
    ContractError(const std::string& what, Table table) : std::runtime_error(what), table_(std::move(table)) {}
    const Table& table() const noexcept { return table_; }

private:
    Table table_;
};

// Full command line without the program name. Data goes to `out` unless an
// output path or the output-directory variable selects a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wigmap::cli
