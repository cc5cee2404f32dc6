#include "imdiff/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "imdiff/errors.hpp"

namespace imdiff {

const char* const kTraceHeader =
    "t,sigma_entropy,tilde_entropy,entropy_production_direct,"
    "entropy_production_fisher,entropy_flow,mass";

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s)
{
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("csv: malformed number '" + s + "'");
    return v;
}

} // namespace

std::string format_trace(const EntropyTrace& trace)
{
    std::string out(kTraceHeader);
    out += '\n';
    for (const auto& r : trace.rows) {
        out += num(r.t) + ',' + num(r.sigma_entropy) + ',' + num(r.tilde_entropy) + ',' +
               num(r.entropy_production_direct) + ',' + num(r.entropy_production_fisher) + ',' +
               num(r.entropy_flow) + ',' + num(r.mass) + '\n';
    }
    return out;
}

void emit_trace(const EntropyTrace& trace, const std::string& path)
{
    write_text_file(path, format_trace(trace));
}

EntropyTrace read_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw ConfigError("csv: bad trace header in " + path);

    EntropyTrace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 7) throw ConfigError("csv: bad trace row in " + path);
        EntropyTrace::Row r;
        r.t = parse_double(cols[0]);
        r.sigma_entropy = parse_double(cols[1]);
        r.tilde_entropy = parse_double(cols[2]);
        r.entropy_production_direct = parse_double(cols[3]);
        r.entropy_production_fisher = parse_double(cols[4]);
        r.entropy_flow = parse_double(cols[5]);
        r.mass = parse_double(cols[6]);
        trace.rows.push_back(r);
    }
    return trace;
}

std::string format_matrix(const std::vector<double>& values, int ncols, int nrows,
                          double x_min, double x_max, double y_min, double y_max)
{
    std::string out;
    out += "# bounds x_min=" + num(x_min) + " x_max=" + num(x_max) +
           " y_min=" + num(y_min) + " y_max=" + num(y_max) + "\n";
    out += "# size ncols=" + std::to_string(ncols) + " nrows=" + std::to_string(nrows) +
           " layout=row-major\n";
    for (int j = 0; j < nrows; ++j) {
        for (int i = 0; i < ncols; ++i) {
            if (i) out += ',';
            out += num(values[static_cast<size_t>(j) * ncols + i]);
        }
        out += '\n';
    }
    return out;
}

void emit_matrix(const std::vector<double>& values, int ncols, int nrows,
                 double x_min, double x_max, double y_min, double y_max,
                 const std::string& path)
{
    write_text_file(path, format_matrix(values, ncols, nrows, x_min, x_max, y_min, y_max));
}

std::string format_field(const DensityField2D& field)
{
    const Grid2D& g = field.grid;
    return format_matrix(field.values, g.nchi, g.nz, -g.chi_max, g.chi_max, -g.z_max, g.z_max);
}

void emit_field(const DensityField2D& field, const std::string& path)
{
    write_text_file(path, format_field(field));
}

DensityField2D read_field(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("csv: cannot open " + path);

    std::string line;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    int ncols = 0, nrows = 0;
    if (!std::getline(in, line) ||
        std::sscanf(line.c_str(), "# bounds x_min=%lf x_max=%lf y_min=%lf y_max=%lf",
                    &x_min, &x_max, &y_min, &y_max) != 4)
        throw ConfigError("csv: bad field bounds line in " + path);
    if (!std::getline(in, line) ||
        std::sscanf(line.c_str(), "# size ncols=%d nrows=%d", &ncols, &nrows) != 2)
        throw ConfigError("csv: bad field size line in " + path);
    if (x_max <= 0.0 || y_max <= 0.0 || x_min != -x_max || y_min != -y_max)
        throw ConfigError("csv: field bounds are not a centered rectangle in " + path);

    DensityField2D out(Grid2D(ncols, nrows, x_max, y_max));
    for (int j = 0; j < nrows; ++j) {
        if (!std::getline(in, line)) throw ConfigError("csv: truncated field in " + path);
        const auto cols = split(line, ',');
        if (static_cast<int>(cols.size()) != ncols)
            throw ConfigError("csv: bad field row in " + path);
        for (int i = 0; i < ncols; ++i) out.at(i, j) = parse_double(cols[i]);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

} // namespace imdiff
