#ifndef SKTK_CSV_HPP
#define SKTK_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sktk {

/// Round-trip exact formatting (17 significant digits).
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Deterministic CSV emission: header row, '\n' endings, numbers printed with
/// 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) {
            throw std::runtime_error("CsvWriter: cannot open " + path);
        }
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0) {
                out_ << ',';
            }
            out_ << cells[c];
        }
        out_ << '\n';
    }

    void write_numbers(const std::vector<double>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c > 0) {
                out_ << ',';
            }
            out_ << format_number(cells[c]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

} // namespace sktk

#endif // SKTK_CSV_HPP
