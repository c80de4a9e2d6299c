#include "ratchet/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ratchet/rng.hpp"
#include "ratchet/version.hpp"

namespace ratchet {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Manifest::set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}
void Manifest::set(const std::string& key, const char* value) {
    entries_.emplace_back(key, std::string(value));
}
void Manifest::set(const std::string& key, double value) {
    entries_.emplace_back(key, format_g17(value));
}
void Manifest::set(const std::string& key, long long value) {
    entries_.emplace_back(key, std::to_string(value));
}
void Manifest::set(const std::string& key, std::uint64_t value) {
    entries_.emplace_back(key, std::to_string(value));
}

void Manifest::set_common(const RatchetParams& p, std::uint64_t seed) {
    set("n", p.N);
    set("lambda", p.lambda);
    set("s", p.s);
    set("seed", seed);
    set("rng", kRngAlgorithm);
    set("version", kVersion);
}

std::string Manifest::text() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    return out.str();
}

void Manifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text();
}

CsvWriter::CsvWriter(const std::string& path, const std::string& manifest_ref)
    : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    if (!manifest_ref.empty()) out_ << "# manifest = " << manifest_ref << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out_ << ',';
        out_ << cols[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::field(double v) {
    if (row_started_) out_ << ',';
    out_ << format_g17(v);
    row_started_ = true;
    return *this;
}
CsvWriter& CsvWriter::field(long long v) {
    if (row_started_) out_ << ',';
    out_ << v;
    row_started_ = true;
    return *this;
}
CsvWriter& CsvWriter::field(std::uint64_t v) {
    if (row_started_) out_ << ',';
    out_ << v;
    row_started_ = true;
    return *this;
}
CsvWriter& CsvWriter::field(const std::string& v) {
    if (row_started_) out_ << ',';
    out_ << v;
    row_started_ = true;
    return *this;
}
void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw std::runtime_error("csv column not found: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(idx)]);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(row, cell, ',')) table.columns.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> vals;
        vals.reserve(table.columns.size());
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            vals.push_back(end != cell.c_str() ? v
                                               : std::numeric_limits<double>::quiet_NaN());
        }
        vals.resize(table.columns.size(), std::numeric_limits<double>::quiet_NaN());
        table.rows.push_back(std::move(vals));
    }
    if (!have_header) throw std::runtime_error("csv has no header: " + path);
    return table;
}

}  // namespace ratchet
