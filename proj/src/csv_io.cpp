#include "atlas/csv_io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>
#include <system_error>

namespace atlas {
namespace {

double parse_double(const std::string& field) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("csv-parse");
    }
    return value;
}

int parse_int(const std::string& field) {
    int value = 0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("csv-parse");
    }
    return value;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

// error identifiers are single tokens, but anything that might carry a comma
// would corrupt the row
std::string sanitize_field(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return text;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) {
        throw std::runtime_error("double-format-failed");
    }
    return std::string(buf, ptr);
}

std::string csv_header() { return "mu,re,im,branch,residual,iterations"; }

std::string iso8601_utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

trace_csv_writer::trace_csv_writer(const std::string& path, bool truncate,
                                   bool timestamp) {
    out_.open(path, truncate ? std::ios::out | std::ios::trunc
                             : std::ios::out | std::ios::app);
    if (!out_) {
        throw std::runtime_error("csv-open-failed");
    }
    if (truncate) {
        if (timestamp) {
            out_ << "# generated " << iso8601_utc_now() << "\n";
        }
        out_ << csv_header() << "\n";
        out_.flush();
    }
}

void trace_csv_writer::write_row(const trace_sample& sample) {
    out_ << format_double(sample.mu) << ',' << format_double(sample.z.real())
         << ',' << format_double(sample.z.imag()) << ','
         << sanitize_field(sample.branch) << ','
         << format_double(sample.residual) << ',' << sample.iterations << '\n';
    out_.flush();
    if (!out_) {
        throw std::runtime_error("csv-write-failed");
    }
}

std::vector<trace_sample> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("csv-open-failed");
    }
    std::vector<trace_sample> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != csv_header()) {
                throw std::runtime_error("csv-header-mismatch");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 6) {
            throw std::runtime_error("csv-parse");
        }
        trace_sample s;
        s.mu = parse_double(fields[0]);
        s.z = cplx(parse_double(fields[1]), parse_double(fields[2]));
        s.branch = fields[3];
        s.residual = parse_double(fields[4]);
        s.iterations = parse_int(fields[5]);
        rows.push_back(std::move(s));
    }
    if (!header_seen) {
        throw std::runtime_error("csv-header-mismatch");
    }
    return rows;
}

std::string cells_csv(const std::vector<table_cell>& cells) {
    std::string out =
        "id,ref_re,ref_im,computed_re,computed_im,deviation,status\n";
    for (const table_cell& cell : cells) {
        out += sanitize_field(cell.entry.id);
        out += ',';
        out += format_double(cell.entry.value.real());
        out += ',';
        out += format_double(cell.entry.value.imag());
        out += ',';
        if (cell.error.empty()) {
            out += format_double(cell.computed.real());
            out += ',';
            out += format_double(cell.computed.imag());
            out += ',';
            out += format_double(cell.deviation);
            out += ',';
            out += cell.pass ? "pass" : "fail";
        } else {
            out += ",,,";
            out += sanitize_field(cell.error);
        }
        out += '\n';
    }
    return out;
}

}  // namespace atlas
