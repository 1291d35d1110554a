#pragma once

// Deterministic CSV artifacts: header row, LF line endings, UTF-8, RFC-4180
// quoting. Doubles print as the shortest decimal that round-trips; exact
// rationals print as "num/den" (so an exact zero is the literal "0/1").

#include <string>
#include <utility>
#include <vector>

#include "dioman/rational.hpp"

namespace dioman {

std::string csv_escape(const std::string& field);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);  // size must match
    // starts a new section with its own header (summary blocks)
    void begin_section(std::vector<std::string> header);

    std::string str() const;
    void write_file(const std::string& path) const;  // throws Error on IO failure

  private:
    std::string body_;
    size_t columns_ = 0;
};

std::string cell(double v);
std::string cell(const Rat& v);
std::string cell(Int v);
std::string cell(int v);
std::string cell(bool v);  // "1"/"0"

// flat key=value manifest, one pair per line, keys in the order given
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace dioman
