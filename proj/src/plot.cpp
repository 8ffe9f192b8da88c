// plot.cpp

#include "geophase/plot.hpp"
#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace geophase {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::istringstream ss(s);
    ss.imbue(std::locale::classic());
    ss >> out;
    return !ss.fail() && ss.eof() && std::isfinite(out);
}

std::string join_columns(const std::vector<std::string>& header) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? ", " : "") + header[i];
    return out;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(6);
    ss << v;
    return ss.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string axis_label(const std::string& column) {
    const std::string unit = column_unit(column);
    return unit.empty() ? column : column + " [" + unit + "]";
}

} // namespace

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) return table;
    table.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split(line));
    }
    return table;
}

std::string column_unit(const std::string& column) {
    static const std::map<std::string, std::string> units{
        {"omega1", "energy"}, {"nu", "energy"},      {"lambda", "energy"},
        {"coupling_J", "energy"}, {"omega2", "energy"}, {"energy", "energy"},
        {"min_gap", "energy"}, {"theta", "rad"},     {"chi", "rad"},
        {"xi", "rad"},        {"eta", "rad"},
    };
    if (const auto it = units.find(column); it != units.end()) return it->second;
    for (const char* suffix : {"_numeric", "_analytic", "_diff"}) {
        const std::string s(suffix);
        if (column.size() > s.size() && column.compare(column.size() - s.size(), s.size(), s) == 0) {
            return "rad";
        }
    }
    return "";
}

std::string render_svg(const CsvTable& table, const std::string& x_column,
                       const std::vector<std::string>& y_columns) {
    if (table.header.empty() || table.rows.empty()) {
        throw Error(ErrorKind::InvalidInput, "CSV has no data rows");
    }
    if (y_columns.empty()) throw Error(ErrorKind::InvalidInput, "no y columns requested");
    std::vector<std::string> wanted{x_column};
    wanted.insert(wanted.end(), y_columns.begin(), y_columns.end());
    for (const auto& name : wanted) {
        if (table.column(name) < 0) {
            throw Error(ErrorKind::InvalidInput, "missing column '" + name +
                                                     "'; available: " + join_columns(table.header));
        }
    }

    const int xi = table.column(x_column);
    const int level_col = table.column("level");

    // series key: (y column, level label) in first-appearance order
    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> points;
    };
    std::vector<Series> series;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;

    for (const auto& y_name : y_columns) {
        const int yi = table.column(y_name);
        for (const auto& row : table.rows) {
            double x = 0.0, y = 0.0;
            if (static_cast<int>(row.size()) <= std::max(xi, yi)) continue;
            if (!parse_number(row[xi], x) || !parse_number(row[yi], y)) continue;
            const std::string level =
                level_col >= 0 && level_col < static_cast<int>(row.size()) ? row[level_col] : "";
            const auto key = std::make_pair(y_name, level);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, series.size()).first;
                series.push_back({level.empty() ? y_name : y_name + " (j=" + level + ")", {}});
            }
            series[it->second].points.emplace_back(x, y);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (series.empty()) {
        throw Error(ErrorKind::InvalidInput, "requested columns hold no numeric values");
    }
    if (xmax - xmin <= 0.0) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin <= 0.0) { ymin -= 0.5; ymax += 0.5; }

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymin + (ymax - ymin) * t / 4.0;
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + plot_h + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(axis_label(x_column)) << "</text>\n";
    std::string y_label;
    for (std::size_t i = 0; i < y_columns.size(); ++i) {
        y_label += (i ? ", " : "") + axis_label(y_columns[i]);
    }
    svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = kPalette[s % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[s].points.size(); ++k) {
            const auto& [x, y] = series[s].points[k];
            svg << (k ? " " : "") << fmt(sx(x)) << ',' << fmt(sy(y));
        }
        svg << "\"/>\n";
        const double ly = kTop + 14.0 * (s + 1);
        svg << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << kWidth - kRight + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly
            << "\" font-size=\"11\">" << escape(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::filesystem::path& csv_path, const std::string& x_column,
               const std::vector<std::string>& y_columns, const std::filesystem::path& svg_path) {
    std::ifstream in(csv_path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + csv_path.string());
    const std::string svg = render_svg(read_csv(in), x_column, y_columns);
    std::ofstream out(svg_path, std::ios::binary);
    out << svg;
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + svg_path.string());
}

} // namespace geophase
