#pragma once

#include <stdexcept>
#include <string>

#include "alie/series.hpp"

namespace alie {

/// Thrown for unreadable or malformed input files; carries the offending line.
struct CsvError : std::runtime_error {
    CsvError(const std::string& msg, int line_number)
        : std::runtime_error(line_number > 0 ? msg + " (line " + std::to_string(line_number) + ")"
                                             : msg),
          line(line_number) {}
    int line;
};

/**
 * @brief Reads a numeric series from a CSV file.
 *
 * The first numeric column (determined on the first data row) is used; an
 * optional header row is skipped. Non-numeric entries in the chosen column are
 * rejected with their line number. Decimal points only, no locale handling.
 */
TimeSeries read_series_csv(const std::string& path);

}  // namespace alie
