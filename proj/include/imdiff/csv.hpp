#pragma once

#include <string>
#include <vector>

#include "imdiff/entropy.hpp"
#include "imdiff/grid.hpp"

namespace imdiff {

/// Fixed trace header; columns match EntropyTrace::Row.
extern const char* const kTraceHeader;

/// Values are printed with 17 significant digits so a read-back is
/// bit-identical.
std::string format_trace(const EntropyTrace& trace);
void emit_trace(const EntropyTrace& trace, const std::string& path);
EntropyTrace read_trace(const std::string& path);

/// Field layout: two header lines (grid bounds, then sizes), followed by
/// one comma-separated row of nchi values per z index.
std::string format_field(const DensityField2D& field);
void emit_field(const DensityField2D& field, const std::string& path);
DensityField2D read_field(const std::string& path);

/// Generic matrix with the same two-line header; NaN cells print as "nan".
std::string format_matrix(const std::vector<double>& values, int ncols, int nrows,
                          double x_min, double x_max, double y_min, double y_max);
void emit_matrix(const std::vector<double>& values, int ncols, int nrows,
                 double x_min, double x_max, double y_min, double y_max,
                 const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

} // namespace imdiff
