#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "atlas/bounds.hpp"
#include "atlas/csv_io.hpp"
#include "atlas/friedrichs.hpp"
#include "atlas/report.hpp"
#include "atlas/three_level.hpp"
#include "atlas/two_excitation.hpp"

namespace {

using atlas::cplx;

double parse_number(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("config-invalid: not a number: " + text);
    }
    return value;
}

// complex values are written "re" or "re,im"
cplx parse_complex(const std::string& text) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
        return cplx(parse_number(text), 0.0);
    }
    return cplx(parse_number(text.substr(0, comma)),
                parse_number(text.substr(comma + 1)));
}

// grid strings are "first:last:count" and expand to a uniform grid with both
// endpoints included
std::vector<double> parse_mu_grid(const std::string& text) {
    std::size_t c1 = text.find(':');
    std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                               : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        text.find(':', c2 + 1) != std::string::npos) {
        throw std::runtime_error("config-invalid: grid must be first:last:count");
    }
    double a = parse_number(text.substr(0, c1));
    double b = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
    double n_raw = parse_number(text.substr(c2 + 1));
    int n = static_cast<int>(n_raw);
    if (n != n_raw || n < 2) {
        throw std::runtime_error("config-invalid: grid needs at least two points");
    }
    if (a < 0.0 || !(a < b)) {
        throw std::runtime_error("config-invalid: grid must be strictly increasing");
    }
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) {
        grid[k] = a + (b - a) * k / (n - 1);
    }
    grid.front() = a;
    grid.back() = b;
    for (int k = 0; k + 1 < n; ++k) {
        if (!(grid[k] < grid[k + 1])) {
            throw std::runtime_error("config-invalid: grid spacing underflows");
        }
    }
    return grid;
}

struct run_options {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    bool resume = false;
    bool no_timestamp = false;
    atlas::quadrature_settings settings;
};

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config-invalid: cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config-invalid: ") + e.what());
    }
    if (!doc.is_object()) {
        throw std::runtime_error("config-invalid: top level must be an object");
    }
    int model_sections = static_cast<int>(doc.contains("two_level")) +
                         static_cast<int>(doc.contains("three_level"));
    if (model_sections != 1) {
        throw std::runtime_error(
            "config-invalid: exactly one model section (two_level or "
            "three_level) is required");
    }
    return doc;
}

template <typename T>
void merge_key(const CLI::Option* opt, T& target, const nlohmann::json& section,
               const char* key) {
    if (opt != nullptr && opt->count() > 0) {
        return;
    }
    if (!section.is_object() || !section.contains(key)) {
        return;
    }
    try {
        target = section.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error(std::string("config-invalid: bad value for ") +
                                 key);
    }
}

// complex config entries may be plain numbers or "re,im" strings
void merge_complex(const CLI::Option* opt, std::string& target,
                   const nlohmann::json& section, const char* key) {
    if (opt != nullptr && opt->count() > 0) {
        return;
    }
    if (!section.is_object() || !section.contains(key)) {
        return;
    }
    const nlohmann::json& v = section.at(key);
    if (v.is_number()) {
        target = atlas::format_double(v.get<double>());
    } else if (v.is_string()) {
        target = v.get<std::string>();
    } else {
        throw std::runtime_error(std::string("config-invalid: bad value for ") +
                                 key);
    }
}

void apply_quadrature_config(const nlohmann::json& cfg,
                             atlas::quadrature_settings& settings) {
    if (!cfg.contains("quadrature")) {
        return;
    }
    const nlohmann::json& q = cfg.at("quadrature");
    merge_key(nullptr, settings.abs_tol, q, "abs_tol");
    merge_key(nullptr, settings.rel_tol, q, "rel_tol");
    merge_key(nullptr, settings.max_subdivisions, q, "max_subdivisions");
    if (!(settings.abs_tol > 0.0) || !(settings.rel_tol > 0.0) ||
        settings.max_subdivisions < 1) {
        throw std::runtime_error("config-invalid: tolerances must be positive");
    }
}

std::string trace_output_path(const run_options& run, const std::string& sector,
                              int family) {
    return (std::filesystem::path(run.out_dir) /
            ("trace_" + sector + "_family" + std::to_string(family) + ".csv"))
        .string();
}

atlas::resonance_trajectory compute_trace(const std::string& sector, int family,
                                          double lambda,
                                          const std::vector<double>& grid) {
    if (sector == "one") {
        return atlas::trace_resonance_in_mu(lambda, family, grid);
    }
    if (family == 0) {
        return atlas::trace_z02(lambda, grid);
    }
    return atlas::trace_z12(lambda, grid);
}

int cmd_trace(const run_options& run, const std::string& sector, int family,
              double lambda, const std::string& grid_spec) {
    std::vector<double> grid = parse_mu_grid(grid_spec);
    std::filesystem::create_directories(run.out_dir);
    const std::string path = trace_output_path(run, sector, family);

    std::size_t have = 0;
    if (run.resume && std::filesystem::exists(path)) {
        std::vector<atlas::trace_sample> rows = atlas::read_trace_csv(path);
        while (have < rows.size() && have < grid.size()) {
            const atlas::trace_sample& row = rows[have];
            bool matches = std::abs(row.mu - grid[have]) <=
                           1e-12 * (1.0 + std::abs(grid[have]));
            if (!matches || !(row.residual <= 1e-8)) {
                break;
            }
            ++have;
        }
        if (have < rows.size()) {
            // the file holds rows this run cannot extend; start over
            have = 0;
        }
        if (have == grid.size()) {
            std::cout << "trace complete, " << grid.size() << " rows in " << path
                      << "\n";
            return 0;
        }
    }

    std::vector<double> todo(grid.begin() + static_cast<std::ptrdiff_t>(have),
                             grid.end());
    atlas::resonance_trajectory traj = compute_trace(sector, family, lambda, todo);
    atlas::trace_csv_writer writer(path, have == 0, !run.no_timestamp);
    for (const atlas::trace_sample& s : traj.samples) {
        writer.write_row(s);
    }
    const atlas::trace_sample& last = traj.samples.back();
    std::cout << (have == 0 ? "wrote " : "resumed, appended ")
              << traj.samples.size() << " rows to " << path << "\n";
    std::cout << "last row: mu=" << atlas::format_double(last.mu) << " z=("
              << atlas::format_double(last.z.real()) << ", "
              << atlas::format_double(last.z.imag()) << ")\n";
    return 0;
}

int cmd_tables(const run_options& run, int which) {
    std::vector<atlas::table_cell> cells =
        atlas::reproduce_table(which, run.settings, run.jobs);
    std::filesystem::create_directories(run.out_dir);
    const std::filesystem::path base(run.out_dir);

    const std::string csv_path =
        (base / ("table" + std::to_string(which) + ".csv")).string();
    std::ofstream csv(csv_path);
    if (!csv) {
        throw std::runtime_error("csv-open-failed");
    }
    csv << atlas::cells_csv(cells);
    csv.close();

    const std::string report_path =
        (base / ("table" + std::to_string(which) + "_report.json")).string();
    std::ofstream report(report_path);
    if (!report) {
        throw std::runtime_error("report-open-failed");
    }
    report << atlas::cells_report_json(
        which, cells, run.no_timestamp ? "" : atlas::iso8601_utc_now());
    report.close();

    int failed = atlas::print_cells(std::cout, cells, atlas::stdout_wants_color());
    std::cout << cells.size() - failed << "/" << cells.size()
              << " cells pass, files: " << csv_path << ", " << report_path
              << "\n";
    return failed == 0 ? 0 : 2;
}

int cmd_critical(const run_options& run, double lambda) {
    double closed = atlas::mu_critical(lambda);
    cplx integral = atlas::integrate_ray(
        [](cplx p) {
            return p == cplx(0.0, 0.0) ? cplx(0.0, 0.0) : atlas::eval_g2(p) / p;
        },
        0.0, run.settings);
    double quad = 2.0 * lambda * lambda * integral.real();
    std::cout << "closed form: " << atlas::format_double(closed) << "\n";
    std::cout << "quadrature:  " << atlas::format_double(quad) << "\n";
    std::cout << "difference:  " << atlas::format_double(std::abs(closed - quad))
              << "\n";
    return 0;
}

struct three_level_args {
    double e1 = 1.0;
    double e2 = 2.0;
    double l01 = 0.08;
    double l12 = 0.06;
    double l02 = 0.0;
    std::string s0 = "0";
    std::string s1 = "0";
    std::string s2 = "0";

    atlas::three_level_model to_model() const {
        atlas::three_level_model m;
        m.e1 = e1;
        m.e2 = e2;
        m.l01 = l01;
        m.l12 = l12;
        m.l02 = l02;
        m.s0 = parse_complex(s0);
        m.s1 = parse_complex(s1);
        m.s2 = parse_complex(s2);
        return m;
    }
};

int cmd_threelevel_spectrum(const three_level_args& args) {
    atlas::three_level_model model = args.to_model();
    std::vector<atlas::prop41_entry> one = atlas::prop41_spectrum(model);
    std::vector<double> two = atlas::b2_spectrum(model);
    std::cout << "one-excitation values (" << one.size() << "):\n";
    for (const atlas::prop41_entry& e : one) {
        std::cout << atlas::format_double(e.value) << "\n";
    }
    std::cout << "two-excitation values (" << two.size() << "):\n";
    for (double v : two) {
        std::cout << atlas::format_double(v) << "\n";
    }
    return 0;
}

int cmd_threelevel_kato(const three_level_args& args,
                        const std::string& family_name, int n) {
    atlas::three_level_model model = args.to_model();
    atlas::kato_family family = family_name == "upper"
                                    ? atlas::kato_family::upper
                                    : atlas::kato_family::lower;
    atlas::three_level_model base = model;
    base.l02 = 0.0;
    double unperturbed = atlas::kato_z2(base, family, n);
    double analytic = atlas::kato_z2(model, family, n);
    double matrix = atlas::kato_matrix_second_order(model, family, n, n + 3);
    std::cout << "family: " << family_name << "\n";
    std::cout << "n: " << n << "\n";
    std::cout << "unperturbed: " << atlas::format_double(unperturbed) << "\n";
    std::cout << "second-order: " << atlas::format_double(analytic) << "\n";
    std::cout << "matrix: " << atlas::format_double(matrix) << "\n";
    std::cout << "shift: " << atlas::format_double(analytic - unperturbed)
              << "\n";
    std::cout << "delta: " << atlas::format_double(std::abs(analytic - matrix))
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonances and spectra of coupled atom-photon levels"};
    app.require_subcommand(1);

    run_options run;
    auto* config_opt =
        app.add_option("--config", run.config_path, "JSON run configuration");
    auto* out_opt = app.add_option("--out", run.out_dir, "output directory");
    auto* jobs_opt =
        app.add_option("--jobs", run.jobs, "worker threads for table runs");
    auto* resume_opt = app.add_flag(
        "--resume", run.resume, "continue a trace file from its last good row");
    auto* no_ts_opt = app.add_flag("--no-timestamp", run.no_timestamp,
                                   "omit generation timestamps from outputs");

    std::string sector = "one";
    int family = 0;
    double lambda = 0.1;
    std::string grid_spec;
    CLI::App* trace = app.add_subcommand("trace", "follow one resonance in mu");
    trace->fallthrough();
    auto* sector_opt = trace->add_option("--sector", sector, "one or two")
                           ->check(CLI::IsMember({"one", "two"}));
    auto* family_opt =
        trace->add_option("--family", family, "0 or 1")->check(CLI::Range(0, 1));
    auto* lambda_opt = trace->add_option("--lambda", lambda, "coupling");
    auto* grid_opt = trace->add_option("--mu", grid_spec,
                                       "grid first:last:count, both ends kept");

    int which = 1;
    CLI::App* tables =
        app.add_subcommand("tables", "recompute one stored table and compare");
    tables->fallthrough();
    auto* which_opt = tables->add_option("--which", which, "table id")
                          ->check(CLI::Range(1, 3));

    double crit_lambda = 0.1;
    CLI::App* critical = app.add_subcommand(
        "critical", "largest scale with a real family-0 value");
    critical->fallthrough();
    auto* crit_lambda_opt = critical->add_option("--lambda", crit_lambda,
                                                 "coupling");

    CLI::App* threelevel =
        app.add_subcommand("threelevel", "three-level atom at zero mode energy");
    threelevel->fallthrough();
    threelevel->require_subcommand(1);
    three_level_args tl;
    std::string kato_family_name = "lower";
    int kato_n = 0;
    CLI::App* spectrum = threelevel->add_subcommand(
        "spectrum", "closed-form one- and two-excitation eigenvalues");
    CLI::App* kato = threelevel->add_subcommand(
        "kato", "second-order splitting of a dressed family member");
    std::vector<std::pair<CLI::App*, std::array<CLI::Option*, 8>>> tl_opts;
    for (CLI::App* sub : {spectrum, kato}) {
        sub->fallthrough();
        std::array<CLI::Option*, 8> opts = {
            sub->add_option("--e1", tl.e1, "first excited level"),
            sub->add_option("--e2", tl.e2, "second excited level"),
            sub->add_option("--l01", tl.l01, "0-1 coupling"),
            sub->add_option("--l12", tl.l12, "1-2 coupling"),
            sub->add_option("--l02", tl.l02, "0-2 coupling"),
            sub->add_option("--s0", tl.s0, "overlap (f01,f02), re or re,im"),
            sub->add_option("--s1", tl.s1, "overlap (f01,f12), re or re,im"),
            sub->add_option("--s2", tl.s2, "overlap (f02,f12), re or re,im"),
        };
        tl_opts.emplace_back(sub, opts);
    }
    auto* kato_family_opt =
        kato->add_option("--family", kato_family_name, "lower or upper")
            ->check(CLI::IsMember({"lower", "upper"}));
    auto* kato_n_opt = kato->add_option("--n", kato_n, "photon count of the member")
                           ->check(CLI::Range(0, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        nlohmann::json cfg;
        if (config_opt->count() > 0) {
            cfg = load_config_file(run.config_path);
            merge_key(out_opt, run.out_dir, cfg, "out");
            merge_key(jobs_opt, run.jobs, cfg, "jobs");
            merge_key(resume_opt, run.resume, cfg, "resume");
            merge_key(no_ts_opt, run.no_timestamp, cfg, "no_timestamp");
            apply_quadrature_config(cfg, run.settings);
            if (cfg.contains("two_level")) {
                const nlohmann::json& sec = cfg.at("two_level");
                merge_key(sector_opt, sector, sec, "sector");
                merge_key(family_opt, family, sec, "family");
                merge_key(lambda_opt, lambda, sec, "lambda");
                merge_key(crit_lambda_opt, crit_lambda, sec, "lambda");
                merge_key(grid_opt, grid_spec, sec, "mu");
            }
            if (cfg.contains("three_level")) {
                const nlohmann::json& sec = cfg.at("three_level");
                for (auto& [sub, opts] : tl_opts) {
                    merge_key(opts[0], tl.e1, sec, "e1");
                    merge_key(opts[1], tl.e2, sec, "e2");
                    merge_key(opts[2], tl.l01, sec, "l01");
                    merge_key(opts[3], tl.l12, sec, "l12");
                    merge_key(opts[4], tl.l02, sec, "l02");
                    merge_complex(opts[5], tl.s0, sec, "s0");
                    merge_complex(opts[6], tl.s1, sec, "s1");
                    merge_complex(opts[7], tl.s2, sec, "s2");
                }
                merge_key(kato_family_opt, kato_family_name, sec, "family");
                merge_key(kato_n_opt, kato_n, sec, "n");
            }
            merge_key(which_opt, which, cfg, "which");
        }
        if (run.jobs < 1) {
            throw std::runtime_error("config-invalid: jobs must be at least 1");
        }
        if (sector == "one" && family != 0 && family != 1) {
            throw std::runtime_error("config-invalid: family must be 0 or 1");
        }

        if (trace->parsed()) {
            if (grid_spec.empty()) {
                throw std::runtime_error("config-invalid: trace needs a mu grid");
            }
            return cmd_trace(run, sector, family, lambda, grid_spec);
        }
        if (tables->parsed()) {
            return cmd_tables(run, which);
        }
        if (critical->parsed()) {
            return cmd_critical(run, crit_lambda);
        }
        if (threelevel->parsed()) {
            if (spectrum->parsed()) {
                return cmd_threelevel_spectrum(tl);
            }
            return cmd_threelevel_kato(tl, kato_family_name, kato_n);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
