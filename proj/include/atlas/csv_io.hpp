#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "atlas/friedrichs.hpp"
#include "atlas/reference.hpp"

namespace atlas {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double x);

// Column layout shared by every trajectory file.
std::string csv_header();

// Current UTC wall time as 2024-05-01T12:30:00Z.
std::string iso8601_utc_now();

// Streams trajectory rows to a file, flushing after every row so a killed
// run leaves a usable prefix. Truncating opens write the header first (and
// a leading `# generated <time>` comment unless timestamps are suppressed);
// appending opens write rows only.
class trace_csv_writer {
  public:
    trace_csv_writer(const std::string& path, bool truncate, bool timestamp);
    void write_row(const trace_sample& sample);

  private:
    std::ofstream out_;
};

// Parses a trajectory file written by trace_csv_writer. Comment lines are
// skipped; the header line must match csv_header() exactly. Throws
// "csv-open-failed", "csv-header-mismatch", or "csv-parse".
std::vector<trace_sample> read_trace_csv(const std::string& path);

// Reference-cell comparison results as CSV, header included. The status
// column holds pass, fail, or the error identifier of a cell whose
// evaluation threw.
std::string cells_csv(const std::vector<table_cell>& cells);

}  // namespace atlas
