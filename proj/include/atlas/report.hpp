#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "atlas/reference.hpp"

namespace atlas {

// Serializes one reproduced table as a JSON document. Every cell appears
// exactly once, as an object with fields location, quote, reference,
// computed, tolerance, and pass; cells whose evaluation threw carry an
// error field instead of computed. `generated` is embedded verbatim when
// nonempty so deterministic runs can leave it out.
std::string cells_report_json(int which, const std::vector<table_cell>& cells,
                              const std::string& generated);

// Writes one PASS/FAIL console line per cell, optionally with ANSI color.
// Returns the number of cells that failed.
int print_cells(std::ostream& os, const std::vector<table_cell>& cells,
                bool color);

// True when stdout is a terminal and the NO_COLOR variable is unset.
bool stdout_wants_color();

}  // namespace atlas
