#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "subdiff/common.hpp"

// Deterministic CSV output: a schema tag comment, a header row, then data
// rows with numbers at 17 significant digits so files are byte-stable
// across runs and round-trip exactly.

namespace subdiff {

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& schema,
              std::vector<std::string> columns)
        : out_(path), n_columns_(columns.size()) {
        if (!out_)
            throw numerical_error("cannot open '" + path + "' for writing");
        out_ << "# schema: " << schema << "\n";
        write_row(columns);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != n_columns_)
            throw std::invalid_argument("csv row has " +
                                        std::to_string(cells.size()) +
                                        " cells, header has " +
                                        std::to_string(n_columns_));
        write_row(cells);
    }

    static std::string num(double v) { return format_g17(v); }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t n_columns_;
};

} // namespace subdiff
