// ============================================================================
// Command-line front end: single-point capacity queries, curve sweeps for
// the figure data, recomputation of the six reference tables, and Monte
// Carlo experiment drivers.  All commands emit machine-readable CSV (or
// JSON mirroring the same columns) with '#'-prefixed metadata lines so that
// outputs are self-describing, diffable, and byte-deterministic.
// ============================================================================

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percap/classic_capacity.hpp"
#include "percap/error_capacity.hpp"
#include "percap/lifted_capacity.hpp"
#include "percap/monte_carlo.hpp"
#include "percap/reference_tables.hpp"
#include "percap/specfun.hpp"
#include "percap/types.hpp"

namespace {

constexpr const char* kToolName = "percap";
constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;       // input / domain validation failure
constexpr int kExitNoConverge = 3;   // numerical non-convergence

// --- fixed formatting: 6 significant digits for bounds and parameters,
// --- scientific notation for residual-like columns ---------------------------

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_e(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

std::string fmt_i(long long v) { return std::to_string(v); }

// --- output assembly ----------------------------------------------------------

struct OutputTable {
    std::vector<std::string> meta;     // '#' lines (CSV only)
    std::vector<std::string> columns;  // header row
    std::vector<std::vector<std::string>> rows;  // "" renders as empty / null
};

std::string render_csv(const OutputTable& t) {
    std::string s;
    for (const std::string& m : t.meta) s += "# " + m + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        s += (c ? "," : "") + t.columns[c];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            s += (c ? "," : "") + row[c];
        s += "\n";
    }
    return s;
}

bool cell_is_finite_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

std::string render_json(const OutputTable& t) {
    std::string s = "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        s += r ? ",\n " : "\n ";
        s += "{";
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            if (c) s += ", ";
            s += "\"" + json_escape(t.columns[c]) + "\": ";
            const std::string& cell = t.rows[r][c];
            if (cell_is_finite_number(cell))
                s += cell;
            else if (cell.empty() || cell == "inf" || cell == "-inf" ||
                     cell == "nan")
                s += "null";
            else
                s += "\"" + json_escape(cell) + "\"";
        }
        s += "}";
    }
    s += t.rows.empty() ? "]\n" : "\n]\n";
    return s;
}

// --- grid syntax start:stop:count ----------------------------------------------

bool parse_grid(const std::string& text, std::vector<double>* out) {
    std::istringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, c))
        return false;
    double start = 0.0, stop = 0.0;
    long count = 0;
    try {
        std::size_t pa = 0, pb = 0, pc = 0;
        start = std::stod(a, &pa);
        stop = std::stod(b, &pb);
        count = std::stol(c, &pc);
        if (pa != a.size() || pb != b.size() || pc != c.size()) return false;
    } catch (const std::exception&) {
        return false;
    }
    if (count < 0 || count > 100000) return false;
    out->clear();
    for (long i = 0; i < count; ++i)
        out->push_back(count == 1
                           ? start
                           : start + (stop - start) * static_cast<double>(i) /
                                         static_cast<double>(count - 1));
    return true;
}

// --- command implementations ---------------------------------------------------

OutputTable run_capacity(double kappa, double f_wb) {
    const percap::CapacityResult up =
        percap::alpha_upper({kappa, f_wb, std::nullopt});
    const percap::CapacityResult low = percap::alpha_lower_lifted(kappa, f_wb);
    OutputTable t;
    t.columns = {"kappa", "f_wb",  "alpha_u", "nu_c3to0", "alpha_low",
                 "c3",    "gamma", "nu",      "residual"};
    const percap::LiftPoint pt =
        low.optimizer_point.value_or(percap::LiftPoint{});
    t.rows.push_back({fmt_g(kappa), fmt_g(f_wb), fmt_g(up.alpha_bound),
                      fmt_g(up.optimizer_point ? up.optimizer_point->nu_wb
                                               : percap::kInf),
                      fmt_g(low.alpha_bound), fmt_g(pt.c3_s),
                      fmt_g(pt.gamma_wb_s), fmt_g(pt.nu_wb),
                      fmt_e(low.residual)});
    return t;
}

OutputTable run_tables(int table_id) {
    OutputTable t;
    t.columns = {"f_wb",          "xi_hat",
                 "c3",            "gamma",
                 "nu",            "alpha_low",
                 "nu_c3to0",      "alpha_u",
                 "ref_alpha_low", "ref_alpha_u",
                 "dev_alpha_low_abs", "dev_alpha_low_rel",
                 "dev_alpha_u_abs",   "dev_alpha_u_rel",
                 "flag"};
    for (const percap::ReferenceRow& row : percap::kReferenceTables) {
        if (row.table_id != table_id) continue;
        if (row.header_typo)
            t.meta.push_back(
                "note: this row is labeled f_wb=0.01 in the reference table "
                "but its values are consistent with f_wb=0.10; it is "
                "recomputed at 0.10 and flagged 'relabeled'");
        const percap::CapacityResult up =
            percap::alpha_upper({row.kappa, row.f_wb, std::nullopt});
        const percap::CapacityResult low =
            percap::alpha_lower_lifted(row.kappa, row.f_wb);
        const percap::LiftPoint pt =
            low.optimizer_point.value_or(percap::LiftPoint{});
        const double dev_low = low.alpha_bound - row.alpha_low;
        const double dev_u = up.alpha_bound - row.alpha_u;
        t.rows.push_back(
            {fmt_g(row.f_wb), fmt_e(-low.residual), fmt_g(pt.c3_s),
             fmt_g(pt.gamma_wb_s), fmt_g(pt.nu_wb), fmt_g(low.alpha_bound),
             fmt_g(up.optimizer_point ? up.optimizer_point->nu_wb
                                      : percap::kInf),
             fmt_g(up.alpha_bound), fmt_g(row.alpha_low), fmt_g(row.alpha_u),
             fmt_e(dev_low), fmt_e(dev_low / row.alpha_low), fmt_e(dev_u),
             fmt_e(dev_u / row.alpha_u),
             row.header_typo ? "relabeled" : ""});
    }
    if (t.rows.empty()) throw std::domain_error("tables: table id not in 1..6");
    return t;
}

OutputTable run_sweep(const std::string& mode, double kappa,
                      const std::vector<double>& grid_in, int* exit_code) {
    std::vector<double> grid = grid_in;
    std::sort(grid.begin(), grid.end());
    OutputTable t;
    std::size_t failures = 0;
    if (mode == "figure-1") {
        t.columns = {"kappa", "alpha_c"};
        for (const double k : grid) {
            try {
                t.rows.push_back({fmt_g(k), fmt_g(percap::alpha_c(k))});
            } catch (const std::exception& e) {
                ++failures;
                std::cerr << "warning: kappa=" << fmt_g(k) << ": " << e.what()
                          << "\n";
                t.rows.push_back({fmt_g(k), ""});
            }
        }
    } else {
        if (kappa != 0.0 && kappa != 0.5 && kappa != 1.0)
            throw std::domain_error(
                "sweep: figure-3/figure-4 modes require --kappa in {0, 0.5, "
                "1}");
        t.columns = {"f_wb", "alpha_u", "alpha_low"};
        for (const double f : grid) {
            std::string au, al;
            try {
                au = fmt_g(
                    percap::alpha_upper({kappa, f, std::nullopt}).alpha_bound);
                al = fmt_g(percap::alpha_lower_lifted(kappa, f).alpha_bound);
            } catch (const std::exception& e) {
                ++failures;
                std::cerr << "warning: f_wb=" << fmt_g(f) << ": " << e.what()
                          << "\n";
            }
            t.rows.push_back({fmt_g(f), au, al});
        }
    }
    if (!grid.empty() &&
        static_cast<double>(failures) > 0.1 * static_cast<double>(grid.size()))
        *exit_code = kExitNoConverge;
    return t;
}

OutputTable run_mc_ferr(double kappa, double f_wb, int m, int trials,
                        std::uint64_t seed) {
    if (!(f_wb >= 0.0 && f_wb < 0.5))
        throw std::domain_error("mc-ferr: f_wb must lie in [0, 0.5)");
    percap::McConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n = 1;
    cfg.m = m;
    cfg.kappa = kappa;
    cfg.f_wb = f_wb;
    const percap::McReport rep = percap::f_err_concentration(cfg);
    OutputTable t;
    t.meta.push_back("seed: " + std::to_string(seed));
    t.meta.push_back("config: kappa=" + fmt_g(kappa) + " f_wb=" + fmt_g(f_wb) +
                     " m=" + fmt_i(m) + " trials=" + fmt_i(trials) +
                     " errors_allowed=" + fmt_i(percap::errors_allowed(cfg)));
    t.columns = {"kappa", "f_wb", "m", "trials", "mean", "std_error"};
    t.rows.push_back({fmt_g(kappa), fmt_g(f_wb), fmt_i(m), fmt_i(trials),
                      fmt_g(rep.mean), fmt_e(rep.std_error)});
    return t;
}

OutputTable run_mc_feas(double kappa, double f_wb, int n,
                        const std::vector<double>& grid_in, int trials,
                        std::uint64_t seed) {
    if (!(f_wb >= 0.0 && f_wb < 0.5))
        throw std::domain_error("mc-feas: f_wb must lie in [0, 0.5)");
    if (kappa < 0.0) throw std::domain_error("mc-feas: kappa must be >= 0");
    std::vector<double> grid = grid_in;
    std::sort(grid.begin(), grid.end());
    percap::McConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.n = n;
    cfg.m = 1;  // per-point m is derived from the grid
    cfg.kappa = kappa;
    cfg.f_wb = f_wb;
    const std::vector<percap::SweepPoint> pts =
        percap::capacity_sweep(cfg, grid);
    OutputTable t;
    t.meta.push_back("seed: " + std::to_string(seed));
    t.meta.push_back("config: kappa=" + fmt_g(kappa) + " f_wb=" + fmt_g(f_wb) +
                     " n=" + fmt_i(n) + " trials=" + fmt_i(trials) +
                     " m=round(alpha*n) per point");
    t.columns = {"alpha", "m", "probability", "std_error"};
    for (const percap::SweepPoint& p : pts)
        t.rows.push_back({fmt_g(p.alpha),
                          fmt_i(std::lround(p.alpha * n)),
                          fmt_g(p.probability), fmt_e(p.std_error)});
    return t;
}

OutputTable run_mc_iwb(double kappa, double c3, double gamma, double nu,
                       long long samples, std::uint64_t seed) {
    if (!(c3 > 0.0 && gamma > 0.0 && nu >= 0.0))
        throw std::domain_error(
            "mc-iwb: requires c3 > 0, gamma > 0 and nu >= 0");
    const percap::LiftPoint point{c3, gamma, nu};
    const percap::McReport rep =
        percap::i_wb_1_sampled(point, kappa, samples, seed);
    const double closed = percap::i_wb_1(point, kappa);
    OutputTable t;
    t.meta.push_back("seed: " + std::to_string(seed));
    t.meta.push_back("config: kappa=" + fmt_g(kappa) + " c3=" + fmt_g(c3) +
                     " gamma=" + fmt_g(gamma) + " nu=" + fmt_g(nu) +
                     " samples=" + fmt_i(samples));
    t.columns = {"kappa", "c3",   "gamma",     "nu",         "samples",
                 "mean",  "std_error", "closed_form"};
    t.rows.push_back({fmt_g(kappa), fmt_g(c3), fmt_g(gamma), fmt_g(nu),
                      fmt_i(samples), fmt_g(rep.mean), fmt_e(rep.std_error),
                      fmt_g(closed)});
    return t;
}

int emit(const OutputTable& t, const std::string& format,
         const std::string& out_path) {
    const std::string text = format == "json" ? render_json(t) : render_csv(t);
    if (out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output path " << out_path << "\n";
        return kExitDomain;
    }
    out << text;
    return out ? kExitOk : kExitDomain;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 ": capacity bounds for spherical perceptrons with a "
                 "tolerated fraction of incorrectly stored patterns"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "Output path (default: stdout)")
        ->capture_default_str();
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    double kappa = 0.0, f_wb = 0.0;
    double c3 = 0.0, gamma = 0.0, nu = 0.0;
    int m = 0, n = 0, trials = 100, table_id = 0;
    long long samples = 100000;
    std::uint64_t seed = 0;
    std::string mode, grid_text, alpha_grid_text;

    CLI::App* cmd_capacity = app.add_subcommand(
        "capacity", "Both capacity bounds at a single (kappa, f_wb) point");
    cmd_capacity->add_option("--kappa", kappa, "Stability margin")->required();
    cmd_capacity->add_option("--fwb", f_wb, "Tolerated error fraction")
        ->required();

    CLI::App* cmd_tables = app.add_subcommand(
        "tables", "Recompute one of the six reference tables");
    cmd_tables->add_option("--table", table_id, "Table id (1..6)")->required();

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Curve sweeps for the figure data");
    cmd_sweep
        ->add_option("--mode", mode,
                     "figure-1 (alpha_c vs kappa), figure-3/figure-4 (bounds "
                     "vs f_wb at fixed kappa)")
        ->check(CLI::IsMember({"figure-1", "figure-3", "figure-4"}))
        ->required();
    cmd_sweep->add_option("--grid", grid_text, "Abscissa grid start:stop:count")
        ->required();
    cmd_sweep->add_option("--kappa", kappa,
                          "Fixed kappa for figure-3/figure-4 (0, 0.5 or 1)");

    CLI::App* cmd_mc_ferr = app.add_subcommand(
        "mc-ferr", "Concentration of the finite-m shortfall oracle");
    cmd_mc_ferr->add_option("--kappa", kappa, "Stability margin")->required();
    cmd_mc_ferr->add_option("--fwb", f_wb, "Tolerated error fraction")
        ->required();
    cmd_mc_ferr->add_option("--m", m, "Pattern count")->required();
    cmd_mc_ferr->add_option("--trials", trials, "Trial count")
        ->check(CLI::PositiveNumber);
    cmd_mc_ferr->add_option("--seed", seed, "Random seed");

    CLI::App* cmd_mc_feas = app.add_subcommand(
        "mc-feas", "Empirical feasibility probability over an alpha grid");
    cmd_mc_feas->add_option("--kappa", kappa, "Stability margin")->required();
    cmd_mc_feas->add_option("--fwb", f_wb, "Tolerated error fraction")
        ->required();
    cmd_mc_feas->add_option("--n", n, "Pattern length")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_mc_feas->add_option("--m", m,
                            "Ignored; m is derived as round(alpha*n) per "
                            "grid point");
    cmd_mc_feas
        ->add_option("--alpha-grid", alpha_grid_text,
                     "Alpha grid start:stop:count")
        ->required();
    cmd_mc_feas->add_option("--trials", trials, "Trial count")
        ->check(CLI::PositiveNumber);
    cmd_mc_feas->add_option("--seed", seed, "Random seed");

    CLI::App* cmd_mc_iwb = app.add_subcommand(
        "mc-iwb", "Sampled check of the lifted exponential moment");
    cmd_mc_iwb->add_option("--kappa", kappa, "Stability margin")->required();
    cmd_mc_iwb->add_option("--c3", c3, "Lift strength")->required();
    cmd_mc_iwb->add_option("--gamma", gamma, "Quadratic-term scale")
        ->required();
    cmd_mc_iwb->add_option("--nu", nu, "Shortfall threshold")->required();
    cmd_mc_iwb->add_option("--samples", samples, "Sample count");
    cmd_mc_iwb->add_option("--seed", seed, "Random seed");

    // Let --out / --format appear after the subcommand name.
    for (CLI::App* sub : {cmd_capacity, cmd_tables, cmd_sweep, cmd_mc_ferr,
                          cmd_mc_feas, cmd_mc_iwb})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    int exit_code = kExitOk;
    OutputTable table;
    try {
        if (cmd_capacity->parsed()) {
            table = run_capacity(kappa, f_wb);
        } else if (cmd_tables->parsed()) {
            table = run_tables(table_id);
        } else if (cmd_sweep->parsed()) {
            std::vector<double> grid;
            if (!parse_grid(grid_text, &grid))
                throw std::domain_error("sweep: bad --grid (start:stop:count)");
            table = run_sweep(mode, kappa, grid, &exit_code);
        } else if (cmd_mc_ferr->parsed()) {
            table = run_mc_ferr(kappa, f_wb, m, trials, seed);
        } else if (cmd_mc_feas->parsed()) {
            std::vector<double> grid;
            if (!parse_grid(alpha_grid_text, &grid))
                throw std::domain_error(
                    "mc-feas: bad --alpha-grid (start:stop:count)");
            table = run_mc_feas(kappa, f_wb, n, grid, trials, seed);
        } else if (cmd_mc_iwb->parsed()) {
            table = run_mc_iwb(kappa, c3, gamma, nu, samples, seed);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConverge;
    }

    table.meta.insert(table.meta.begin(),
                      {std::string(kToolName) + " " + kToolVersion,
                       "command: " + join_args(argc, argv)});
    const int emit_code = emit(table, format, out_path);
    return emit_code != kExitOk ? emit_code : exit_code;
}
