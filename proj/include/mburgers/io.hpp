#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace mburgers::io {

// Fixed formatting so that identical runs give identical bytes.
inline std::string cell(double v)
{
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string cell(long v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(const std::string& v) { return v; }
inline std::string cell(const char* v) { return v; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <class... Ts>
    void add(const Ts&... values)
    {
        if (sizeof...(Ts) != header.size()) throw std::logic_error("Table::add: row width differs from header");
        rows.push_back({cell(values)...});
    }

    std::size_t column(const std::string& name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::out_of_range("Table: no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
};

inline void write_csv(const std::filesystem::path& path, const Table& t)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline Table read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Series of (x_col, y_col), one per distinct value of group_col (or a single series).
inline std::vector<Series> series_from(const Table& t, const std::string& x_col, const std::string& y_col,
                                       const std::string& group_col = "")
{
    const auto xi = t.column(x_col), yi = t.column(y_col);
    std::vector<Series> out;
    std::map<std::string, std::size_t> index;
    for (const auto& r : t.rows) {
        const std::string key = group_col.empty() ? y_col : group_col + "=" + r[t.column(group_col)];
        auto [it, fresh] = index.try_emplace(key, out.size());
        if (fresh) out.push_back({key, {}, {}});
        out[it->second].x.push_back(std::stod(r[xi]));
        out[it->second].y.push_back(std::stod(r[yi]));
    }
    return out;
}

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    double width = 720;
    double height = 440;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.2f")
{
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

} // namespace detail

inline void write_svg(const std::filesystem::path& path, const Plot& p)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : p.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double left = 70, right = 160, top = 40, bottom = 50;
    const double pw = p.width - left - right, ph = p.height - top - bottom;
    auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    using detail::fmt;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(p.width, "%.0f") << "\" height=\""
        << fmt(p.height, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << detail::escape(p.title) << "</text>\n";
    out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
        out << "<line x1=\"" << fmt(X(xv)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(X(xv)) << "\" y2=\""
            << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(X(xv)) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">"
            << fmt(xv, "%.3g") << "</text>\n";
        out << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(Y(yv)) << "\" x2=\"" << fmt(left) << "\" y2=\""
            << fmt(Y(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(Y(yv) + 4) << "\" text-anchor=\"end\">"
            << fmt(yv, "%.3g") << "</text>\n";
    }
    if (y0 < 0.0 && y1 > 0.0)
        out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(Y(0.0)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
            << fmt(Y(0.0)) << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(p.height - 10) << "\" text-anchor=\"middle\">"
        << detail::escape(p.x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << fmt(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << detail::escape(p.y_label) << "</text>\n";

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        const char* colour = palette[k % std::size(palette)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << (i ? " " : "") << fmt(X(s.x[i])) << "," << fmt(Y(s.y[i]));
        out << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 36)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(left + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\">" << detail::escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
}

} // namespace mburgers::io
