#include "atlas/report.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "json.hpp"

namespace atlas {
namespace {

nlohmann::ordered_json complex_json(cplx z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

std::string cells_report_json(int which, const std::vector<table_cell>& cells,
                              const std::string& generated) {
    nlohmann::ordered_json doc;
    doc["table"] = which;
    if (!generated.empty()) {
        doc["generated"] = generated;
    }
    bool all_pass = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const table_cell& cell : cells) {
        nlohmann::ordered_json row;
        row["location"] = cell.entry.id;
        row["quote"] = cell.entry.note;
        row["reference"] = complex_json(cell.entry.value);
        if (cell.error.empty()) {
            row["computed"] = complex_json(cell.computed);
            row["deviation"] = cell.deviation;
        } else {
            row["error"] = cell.error;
        }
        row["tolerance"] = {{"rel", cell.entry.rel_tol},
                            {"abs", cell.entry.abs_tol},
                            {"magnitude_only", cell.entry.magnitude_only}};
        row["pass"] = cell.pass;
        all_pass = all_pass && cell.pass;
        rows.push_back(std::move(row));
    }
    doc["all_pass"] = all_pass;
    doc["cells"] = std::move(rows);
    return doc.dump(2) + "\n";
}

int print_cells(std::ostream& os, const std::vector<table_cell>& cells,
                bool color) {
    const char* green = color ? "\x1b[32m" : "";
    const char* red = color ? "\x1b[31m" : "";
    const char* reset = color ? "\x1b[0m" : "";
    int failed = 0;
    for (const table_cell& cell : cells) {
        if (cell.pass) {
            os << green << "[PASS]" << reset;
        } else {
            os << red << "[FAIL]" << reset;
            ++failed;
        }
        os << ' ' << cell.entry.id;
        if (!cell.error.empty()) {
            os << "  error=" << cell.error;
        } else {
            os << "  computed=(" << cell.computed.real() << ", "
               << cell.computed.imag() << ")  deviation=" << cell.deviation;
        }
        os << '\n';
    }
    return failed;
}

bool stdout_wants_color() {
    return isatty(fileno(stdout)) != 0 && std::getenv("NO_COLOR") == nullptr;
}

}  // namespace atlas
