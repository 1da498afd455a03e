#include "atlas/reference.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "atlas/bounds.hpp"
#include "atlas/friedrichs.hpp"
#include "atlas/two_excitation.hpp"

namespace atlas {
namespace {

// every stored table was produced at this coupling
constexpr double k_lambda = 0.1;

using value_map = std::map<std::string, cplx>;
using error_map = std::map<std::string, std::string>;

reference_entry entry(std::string id, std::string note, cplx value,
                      double rel_tol, double abs_tol,
                      bool magnitude_only = false) {
    reference_entry e;
    e.id = std::move(id);
    e.note = std::move(note);
    e.value = value;
    e.rel_tol = rel_tol;
    e.abs_tol = abs_tol;
    e.magnitude_only = magnitude_only;
    return e;
}

struct table_two_row {
    const char* label;
    double mu;
    double z;
    double c2_half;
    double m3_sixth;
    double m4_24th;
    double dz_c1;
};

// stored two-excitation grid: row value, halved second coefficient, higher
// moment bounds over 6 and 24, and the first-coefficient derivative
constexpr table_two_row k_table_two_rows[] = {
    {"0", 0.0, -196e-4, 0.0, 0.0, 0.0, 103.9},
    {"1e-4", 1e-4, -185.5e-4, 1.65e-3, 3.95e-6, 1.04e-8, 105.3},
    {"1e-3", 1e-3, -135.7e-4, 13.14e-3, 1e-4, 6.26e-7, 116.0},
    {"3e-3", 3e-3, -69.8e-4, 0.038, 7.93e-4, 1e-5, 143.8},
    {"6e-3", 6e-3, -9.3e-4, 0.099, 7.7e-3, 3.68e-4, 247.1},
    {"6.2e-3", 6.2e-3, -6.6e-4, 0.106, 9.3e-3, 5.2e-4, 265.3},
    {"6.36e-3", 6.36e-3, -4.4e-4, 0.111, 1.09e-2, 7.1e-4, 284.2},
    {"6.3662e-3", 6.3662e-3, -4.328e-4, 0.112, 1.10e-2, 7.17e-4, 285.0},
};

std::string row_prefix(const table_two_row& row) {
    return std::string("table2/mu=") + row.label;
}

cplx sample_at(const resonance_trajectory& traj, double mu) {
    for (const auto& s : traj.samples) {
        if (std::abs(s.mu - mu) <= 1e-12 * (1.0 + std::abs(mu))) {
            return s.z;
        }
    }
    throw std::runtime_error("sample-missing");
}

void record_error(error_map& errors, const value_map& values,
                  const std::string& id, const char* what) {
    if (values.count(id) == 0) {
        errors[id] = what;
    }
}

// one-excitation grids: the stored small-scale rows, then enough extra
// abscissas to carry the family-0 branch out to its large-scale endpoint
const std::vector<double> k_family0_grid = {
    0.0, 1e-4, 1e-3, 3e-3, 6e-3, 6.2e-3, 6.36e-3, 6.366e-3, 7e-3,
    1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.35, 0.5, 0.7, 1.0, 1.4, 2.0};
const std::vector<double> k_family1_grid = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0};

const std::vector<std::pair<std::string, double>> k_family0_cells = {
    {"table1/mu=0", 0.0},
    {"table1/mu=1e-4", 1e-4},
    {"table1/mu=1e-3", 1e-3},
    {"table1/mu=3e-3", 3e-3},
    {"table1/mu=6e-3", 6e-3},
    {"table1/mu=6.2e-3", 6.2e-3},
    {"table1/mu=6.36e-3", 6.36e-3},
    {"table1/mu=6.366e-3", 6.366e-3},
    {"one-exc/family0/mu=1", 1.0},
    {"one-exc/family0/mu=2", 2.0},
};
const std::vector<std::pair<std::string, double>> k_family1_cells = {
    {"one-exc/family1/mu=0", 0.0},
    {"one-exc/family1/mu=1", 1.0},
    {"one-exc/family1/mu=2", 2.0},
};

void assign_from_trace(int family, const std::vector<double>& grid,
                       const std::vector<std::pair<std::string, double>>& cells,
                       value_map& values, error_map& errors) {
    try {
        resonance_trajectory traj = trace_resonance_in_mu(k_lambda, family, grid);
        for (const auto& [id, mu] : cells) {
            values[id] = sample_at(traj, mu);
        }
    } catch (const std::exception& e) {
        for (const auto& [id, mu] : cells) {
            record_error(errors, values, id, e.what());
        }
    }
}

void fill_table_one(value_map& values, error_map& errors) {
    assign_from_trace(0, k_family0_grid, k_family0_cells, values, errors);
    assign_from_trace(1, k_family1_grid, k_family1_cells, values, errors);
}

void fill_bound_row(const std::string& prefix, const two_level_model& model,
                    cplx z, value_map& values, error_map& errors,
                    const quadrature_settings& settings) {
    try {
        bound_report rep = make_bound_report(model, z, settings);
        values[prefix + "/c2-half"] = cplx(0.5 * rep.c2, 0.0);
        values[prefix + "/m3-sixth"] = cplx(rep.m3 / 6.0, 0.0);
        values[prefix + "/m4-24th"] = cplx(rep.m4 / 24.0, 0.0);
        values[prefix + "/dz-c1"] = cplx(rep.dz_c1, 0.0);
    } catch (const std::exception& e) {
        for (const char* col : {"/c2-half", "/m3-sixth", "/m4-24th", "/dz-c1"}) {
            record_error(errors, values, prefix + col, e.what());
        }
    }
}

void fill_table_two(value_map& values, error_map& errors,
                    const quadrature_settings& settings, int jobs) {
    {
        const std::string prefix = row_prefix(k_table_two_rows[0]);
        try {
            double zeta = zeta_eigenvalue(0, 2, k_lambda);
            values[prefix + "/z"] = cplx(zeta, 0.0);
            fill_bound_row(prefix, two_level_model{k_lambda, 0.0},
                           cplx(zeta, 0.0), values, errors, settings);
        } catch (const std::exception& e) {
            for (const char* col : {"/z", "/c2-half", "/m3-sixth", "/m4-24th", "/dz-c1"}) {
                record_error(errors, values, prefix + col, e.what());
            }
        }
    }

    constexpr std::size_t n_rows = std::size(k_table_two_rows) - 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < n_rows; ++i) {
        grid.push_back(k_table_two_rows[i + 1].mu);
    }
    std::vector<cplx> row_z(n_rows);
    std::vector<bool> have_z(n_rows, false);
    try {
        resonance_trajectory traj = trace_z02(k_lambda, grid);
        for (std::size_t i = 0; i < n_rows; ++i) {
            const table_two_row& row = k_table_two_rows[i + 1];
            row_z[i] = sample_at(traj, row.mu);
            have_z[i] = true;
            values[row_prefix(row) + "/z"] = row_z[i];
        }
    } catch (const std::exception& e) {
        for (std::size_t i = 0; i < n_rows; ++i) {
            const std::string prefix = row_prefix(k_table_two_rows[i + 1]);
            for (const char* col : {"/z", "/c2-half", "/m3-sixth", "/m4-24th", "/dz-c1"}) {
                record_error(errors, values, prefix + col, e.what());
            }
        }
    }

    // the bound columns of distinct rows are independent of each other, so
    // they can run on a small worker pool; the merge below keeps row order
    std::vector<value_map> row_values(n_rows);
    std::vector<error_map> row_errors(n_rows);
    auto run_row = [&](std::size_t i) {
        if (!have_z[i]) {
            return;
        }
        const table_two_row& row = k_table_two_rows[i + 1];
        fill_bound_row(row_prefix(row), two_level_model{k_lambda, row.mu},
                       row_z[i], row_values[i], row_errors[i], settings);
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n_rows; ++i) {
            run_row(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < n_rows; i = next++) {
                run_row(i);
            }
        };
        std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), n_rows);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    for (std::size_t i = 0; i < n_rows; ++i) {
        values.insert(row_values[i].begin(), row_values[i].end());
        errors.insert(row_errors[i].begin(), row_errors[i].end());
    }

    try {
        values["two-exc/critical-coupling"] = cplx(mu_critical(k_lambda), 0.0);
    } catch (const std::exception& e) {
        record_error(errors, values, "two-exc/critical-coupling", e.what());
    }
    try {
        values["two-exc/family1/germ"] = cplx(zeta_eigenvalue(1, 2, k_lambda), 0.0);
    } catch (const std::exception& e) {
        record_error(errors, values, "two-exc/family1/germ", e.what());
    }
    try {
        two_exc_context ctx = make_context(two_level_model{k_lambda, 7e-3});
        auto fn = [&](cplx z) {
            return eval_D1(ctx, z, branch_tag2::lower_right, settings);
        };
        root_result r = find_root_complex(fn, cplx(2.8e-4, -2.4e-5), 1e-11, 80);
        if (!r.converged) {
            throw std::runtime_error("root-not-converged");
        }
        values["two-exc/family0/restart-seed"] = r.root;
    } catch (const std::exception& e) {
        record_error(errors, values, "two-exc/family0/restart-seed", e.what());
    }
}

void fill_table_three(value_map& values, error_map& errors,
                      const quadrature_settings& settings) {
    try {
        root_result r = solve_resonance(two_level_model{k_lambda, 2.0},
                                        cplx(0.13, -1.97),
                                        sheet_tag::continued_plus);
        if (!r.converged) {
            throw std::runtime_error("root-not-converged");
        }
        values["table3/one-exc/family0"] = r.root;
    } catch (const std::exception& e) {
        record_error(errors, values, "table3/one-exc/family0", e.what());
    }
    try {
        root_result r = solve_resonance(two_level_model{k_lambda, 1.0},
                                        cplx(0.997, -0.010),
                                        sheet_tag::continued_plus);
        if (!r.converged) {
            throw std::runtime_error("root-not-converged");
        }
        values["table3/one-exc/family1"] = r.root;
    } catch (const std::exception& e) {
        record_error(errors, values, "table3/one-exc/family1", e.what());
    }
    try {
        two_exc_context ctx = make_context(two_level_model{k_lambda, 1.0});
        auto solve_branch = [&](branch_tag2 branch, cplx seed) {
            auto fn = [&](cplx z) { return eval_D1(ctx, z, branch, settings); };
            root_result r = find_root_complex(fn, seed, 1e-11, 80);
            if (!r.converged) {
                throw std::runtime_error("root-not-converged");
            }
            return r.root;
        };
        try {
            values["table3/two-exc/family0"] =
                solve_branch(branch_tag2::lower_right, cplx(0.216, -1.9));
        } catch (const std::exception& e) {
            record_error(errors, values, "table3/two-exc/family0", e.what());
        }
        try {
            values["table3/two-exc/family1"] =
                solve_branch(branch_tag2::lower_right_near_z12, cplx(1.043, -1.127));
        } catch (const std::exception& e) {
            record_error(errors, values, "table3/two-exc/family1", e.what());
        }
    } catch (const std::exception& e) {
        record_error(errors, values, "table3/two-exc/family0", e.what());
        record_error(errors, values, "table3/two-exc/family1", e.what());
    }
}

}  // namespace

const std::vector<reference_entry>& table_one_reference() {
    static const std::vector<reference_entry> table = [] {
        std::vector<reference_entry> t;
        const char* real_note = "family-0 one-excitation value on the real branch";
        t.push_back(entry("table1/mu=0",
                          "decoupled limit of the family-0 value, closed form",
                          cplx(-99e-4, 0.0), 2e-2, 2e-5));
        t.push_back(entry("table1/mu=1e-4", real_note, cplx(-94e-4, 0.0), 2e-2, 2e-5));
        t.push_back(entry("table1/mu=1e-3", real_note, cplx(-68e-4, 0.0), 2e-2, 2e-5));
        t.push_back(entry("table1/mu=3e-3", real_note, cplx(-34e-4, 0.0), 2e-2, 2e-5));
        t.push_back(entry("table1/mu=6e-3", real_note, cplx(-2.5e-4, 0.0), 2e-2, 2e-5));
        t.push_back(entry("table1/mu=6.2e-3", real_note, cplx(-1.1e-4, 0.0), 2e-2, 2e-5));
        const char* sign_note =
            "stored digits round a value crossing zero near the critical scale; "
            "only the magnitude is compared";
        t.push_back(entry("table1/mu=6.36e-3", sign_note, cplx(0.04e-4, 0.0),
                          0.0, 5e-6, true));
        t.push_back(entry("table1/mu=6.366e-3", sign_note, cplx(0.001e-4, 0.0),
                          0.0, 5e-6, true));
        t.push_back(entry("one-exc/family0/mu=1",
                          "family-0 trajectory location at scale mu = 1",
                          cplx(0.11, -0.95), 0.0, 1e-2));
        t.push_back(entry("one-exc/family0/mu=2",
                          "family-0 trajectory endpoint at scale mu = 2",
                          cplx(0.13, -1.97), 0.0, 1e-2));
        t.push_back(entry("one-exc/family1/mu=0",
                          "decoupled limit of the family-1 value, closed form",
                          cplx(1.0099, 0.0), 0.0, 1e-4));
        t.push_back(entry("one-exc/family1/mu=1",
                          "family-1 trajectory location at scale mu = 1",
                          cplx(0.997, -0.010), 0.0, 2e-3));
        t.push_back(entry("one-exc/family1/mu=2",
                          "family-1 trajectory endpoint at scale mu = 2",
                          cplx(0.995, -0.0032), 0.0, 2e-3));
        return t;
    }();
    return table;
}

const std::vector<reference_entry>& table_two_reference() {
    static const std::vector<reference_entry> table = [] {
        std::vector<reference_entry> t;
        for (const table_two_row& row : k_table_two_rows) {
            const std::string prefix = row_prefix(row);
            t.push_back(entry(prefix + "/z",
                              "family-0 two-excitation value, real branch",
                              cplx(row.z, 0.0), 2e-2, 0.0));
            if (row.mu == 0.0) {
                const char* zero_note =
                    "higher coefficients vanish in the zero-dispersion limit";
                t.push_back(entry(prefix + "/c2-half", zero_note, cplx(0.0, 0.0),
                                  0.0, 1e-15));
                t.push_back(entry(prefix + "/m3-sixth", zero_note, cplx(0.0, 0.0),
                                  0.0, 1e-15));
                t.push_back(entry(prefix + "/m4-24th", zero_note, cplx(0.0, 0.0),
                                  0.0, 1e-15));
            } else {
                t.push_back(entry(prefix + "/c2-half",
                                  "second expansion coefficient over two",
                                  cplx(row.c2_half, 0.0), 5e-2, 0.0));
                t.push_back(entry(prefix + "/m3-sixth",
                                  "third moment bound over six",
                                  cplx(row.m3_sixth, 0.0), 1e-1, 0.0));
                t.push_back(entry(prefix + "/m4-24th",
                                  "fourth moment bound over twenty-four",
                                  cplx(row.m4_24th, 0.0), 1e-1, 0.0));
            }
            t.push_back(entry(prefix + "/dz-c1",
                              "derivative of the first coefficient at the row value",
                              cplx(row.dz_c1, 0.0), 5e-2, 0.0));
        }
        t.push_back(entry("two-exc/critical-coupling",
                          "largest scale with a real family-0 one-excitation "
                          "value, closed form 2*lambda^2/pi",
                          cplx(6.3662e-3, 0.0), 0.0, 1e-6));
        t.push_back(entry("two-exc/family0/restart-seed",
                          "documented restart location for the family-0 branch at "
                          "scale 7e-3; the converged zero sits about 4e-5 away, "
                          "so this comparison is deliberately loose",
                          cplx(2.8e-4, -2.4e-5), 0.0, 5e-5));
        t.push_back(entry("two-exc/family1/germ",
                          "decoupled limit of the family-1 two-excitation value",
                          cplx(1.01962, 0.0), 0.0, 1e-4));
        return t;
    }();
    return table;
}

const std::vector<reference_entry>& table_three_reference() {
    static const std::vector<reference_entry> table = [] {
        std::vector<reference_entry> t;
        t.push_back(entry("table3/one-exc/family0",
                          "family-0 one-excitation resonance; the stored digits "
                          "correspond to scale mu = 2",
                          cplx(0.13, -1.97), 2e-2, 2e-2));
        t.push_back(entry("table3/two-exc/family0",
                          "family-0 two-excitation zero at scale mu = 1, "
                          "lower-right branch",
                          cplx(0.216, -1.9), 2e-2, 2e-2));
        t.push_back(entry("table3/one-exc/family1",
                          "family-1 one-excitation resonance at scale mu = 1",
                          cplx(0.997, -0.010), 2e-2, 2e-2));
        t.push_back(entry("table3/two-exc/family1",
                          "family-1 two-excitation zero at scale mu = 1, branch "
                          "near the one-excitation value",
                          cplx(1.043, -1.127), 2e-2, 2e-2));
        return t;
    }();
    return table;
}

double cell_deviation(const reference_entry& entry, cplx computed) {
    if (entry.magnitude_only) {
        return std::abs(computed);
    }
    return std::max(std::abs(computed.real() - entry.value.real()),
                    std::abs(computed.imag() - entry.value.imag()));
}

bool cell_passes(const reference_entry& entry, cplx computed) {
    if (entry.magnitude_only) {
        return std::abs(computed) <= entry.abs_tol;
    }
    auto component_ok = [&](double got, double want) {
        double allowed = std::max(entry.rel_tol * std::abs(want), entry.abs_tol);
        return std::abs(got - want) <= allowed;
    };
    return component_ok(computed.real(), entry.value.real()) &&
           component_ok(computed.imag(), entry.value.imag());
}

std::vector<table_cell> reproduce_table(int which,
                                        const quadrature_settings& settings,
                                        int jobs) {
    const std::vector<reference_entry>* entries = nullptr;
    value_map values;
    error_map errors;
    switch (which) {
        case 1:
            entries = &table_one_reference();
            fill_table_one(values, errors);
            break;
        case 2:
            entries = &table_two_reference();
            fill_table_two(values, errors, settings, jobs);
            break;
        case 3:
            entries = &table_three_reference();
            fill_table_three(values, errors, settings);
            break;
        default:
            throw std::invalid_argument("table-id-invalid");
    }

    std::vector<table_cell> cells;
    cells.reserve(entries->size());
    for (const reference_entry& e : *entries) {
        table_cell cell;
        cell.entry = e;
        auto it = values.find(e.id);
        if (it != values.end()) {
            cell.computed = it->second;
            cell.deviation = cell_deviation(e, cell.computed);
            cell.pass = cell_passes(e, cell.computed);
        } else {
            auto err = errors.find(e.id);
            cell.error = (err != errors.end()) ? err->second : "cell-not-computed";
            cell.pass = false;
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

}  // namespace atlas
