#include "dioman/csv.hpp"

#include <fstream>

#include "dioman/errors.hpp"

namespace dioman {

std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) { begin_section(std::move(header)); }

void CsvWriter::begin_section(std::vector<std::string> header) {
    if (header.empty()) throw Error("csv: empty header");
    columns_ = header.size();
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += csv_escape(header[i]);
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("csv: row width does not match the header");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += csv_escape(cells[i]);
    }
    body_ += '\n';
}

std::string CsvWriter::str() const { return body_; }

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("csv: cannot open '" + path + "' for writing");
    out << body_;
    if (!out) throw Error("csv: write to '" + path + "' failed");
}

std::string cell(double v) { return format_double(v); }
std::string cell(const Rat& v) { return format_rat(v); }
std::string cell(Int v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("manifest: cannot open '" + path + "' for writing");
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
    if (!out) throw Error("manifest: write to '" + path + "' failed");
}

}  // namespace dioman
