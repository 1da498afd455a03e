#pragma once

#include <string>
#include <vector>

#include "atlas/contour.hpp"

namespace atlas {

// One stored constant of the reproduction target set together with its
// comparison rule. A computed value passes when every component deviates by
// at most max(rel_tol * |reference component|, abs_tol). Entries flagged
// magnitude_only instead require |computed| <= abs_tol: their stored digits
// are too coarse to fix the sign of a quantity crossing zero.
struct reference_entry {
    std::string id;    // stable cell key, unique across all tables
    std::string note;  // what the number is and how it is evaluated
    cplx value{0.0, 0.0};
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    bool magnitude_only = false;
};

// Outcome of recomputing one reference cell. When the evaluation throws, the
// message is kept in `error` and the cell is marked failed; the other cells
// of the run are still produced.
struct table_cell {
    reference_entry entry;
    cplx computed{0.0, 0.0};
    double deviation = 0.0;
    bool pass = false;
    std::string error;
};

// Embedded reproduction targets. Table 1 holds the small-scale real values
// of the one-excitation family-0 resonance plus the endpoints of both
// one-excitation trajectories. Table 2 holds the two-excitation family-0
// real zero with its truncation-bound columns, the critical coupling, the
// small-scale restart location, and the family-1 germ. Table 3 holds the
// four resonances of the physical-scale model.
const std::vector<reference_entry>& table_one_reference();
const std::vector<reference_entry>& table_two_reference();
const std::vector<reference_entry>& table_three_reference();

// Componentwise worst deviation of computed from the stored value (the
// magnitude of computed for magnitude_only entries).
double cell_deviation(const reference_entry& entry, cplx computed);
bool cell_passes(const reference_entry& entry, cplx computed);

// Recomputes every cell of the requested table (which in {1, 2, 3}) at the
// reference coupling lambda = 0.1 and compares against the stored values.
// Throws std::invalid_argument("table-id-invalid") for any other id.
// jobs > 1 evaluates the independent bound rows of table 2 concurrently;
// the assembled cells are identical to a sequential run.
std::vector<table_cell> reproduce_table(int which,
                                        const quadrature_settings& settings = {},
                                        int jobs = 1);

}  // namespace atlas
