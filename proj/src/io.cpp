#include "harnack_lab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace harnack::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(data));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_csv(const std::filesystem::path& path, const CsvSeries& series) {
    std::string out;
    if (!series.header.empty()) out += "# " + series.header + "\n";
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        if (c) out += ",";
        out += series.columns[c];
    }
    out += "\n";
    for (const auto& row : series.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += format_double(row[c]);
        }
        out += "\n";
    }
    write_text(path, out);
}

void write_field_csv(const std::filesystem::path& path, const elliptic::ScalarField& f,
                     const std::string& header) {
    const GridDomain& g = *f.grid;
    std::string out;
    if (!header.empty()) out += "# " + header + "\n";
    out += g.dim == 2 ? "i,j,x,y,value\n" : "i,j,k,x,y,z,value\n";
    for (int eq = 0; eq < g.interior_count(); ++eq) {
        const std::int64_t fl = g.cell_of_eq[std::size_t(eq)];
        const auto c = g.coords(fl);
        const Point p = g.center(fl);
        for (int d = 0; d < g.dim; ++d) out += std::to_string(c[std::size_t(d)]) + ",";
        for (int d = 0; d < g.dim; ++d) out += format_double(p[std::size_t(d)]) + ",";
        out += format_double(f.values[std::size_t(eq)]) + "\n";
    }
    write_text(path, out);
}

void write_field_binary(const std::filesystem::path& path, const elliptic::ScalarField& f) {
    const GridDomain& g = *f.grid;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.write("HLSF", 4);
    const std::uint32_t dim = std::uint32_t(g.dim);
    os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    for (int d = 0; d < g.dim; ++d) {
        const std::uint64_t md = std::uint64_t(g.m[std::size_t(d)]);
        os.write(reinterpret_cast<const char*>(&md), sizeof md);
    }
    os.write(reinterpret_cast<const char*>(&g.h), sizeof g.h);
    for (int d = 0; d < g.dim; ++d)
        os.write(reinterpret_cast<const char*>(&g.xmin[std::size_t(d)]), sizeof(double));
    const std::uint64_t count = std::uint64_t(f.values.size());
    os.write(reinterpret_cast<const char*>(&count), sizeof count);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             std::streamsize(count * sizeof(double)));
}

void write_mask_csv(const std::filesystem::path& path, const GridDomain& g,
                    const std::vector<std::uint8_t>& per_eq_mask) {
    std::string out;
    for (int j = g.m[1] - 1; j >= 0; --j) {
        for (int i = 0; i < g.m[0]; ++i) {
            if (i) out += ",";
            const auto eq = g.eq_of_cell[std::size_t(g.flat(i, j, 0))];
            out += (eq >= 0 && per_eq_mask[std::size_t(eq)]) ? "1" : "0";
        }
        out += "\n";
    }
    write_text(path, out);
}

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<std::string>& names,
                    const std::vector<std::vector<double>>& xs,
                    const std::vector<std::vector<double>>& ys) {
    const int W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (std::size_t s = 0; s < xs.size(); ++s)
        for (std::size_t i = 0; i < xs[s].size(); ++i) {
            xlo = std::min(xlo, xs[s][i]);
            xhi = std::max(xhi, xs[s][i]);
            ylo = std::min(ylo, ys[s][i]);
            yhi = std::max(yhi, ys[s][i]);
        }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    auto X = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
           "\" height=\"" + std::to_string(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(H - mb) +
           "\" x2=\"" + std::to_string(W - mr) + "\" y2=\"" + std::to_string(H - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) +
           "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + std::to_string(H - mb) +
           "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double tx = xlo + (xhi - xlo) * tick / 4.0;
        const double ty = ylo + (yhi - ylo) * tick / 4.0;
        svg += "<text x=\"" + std::to_string(int(X(tx))) + "\" y=\"" +
               std::to_string(H - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(tx) + "</text>\n";
        svg += "<text x=\"" + std::to_string(ml - 6) + "\" y=\"" +
               std::to_string(int(Y(ty)) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_double(ty) + "</text>\n";
    }
    for (std::size_t s = 0; s < xs.size(); ++s) {
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += colors[s % 5];
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs[s].size(); ++i) {
            svg += format_double(X(xs[s][i])) + "," + format_double(Y(ys[s][i])) + " ";
        }
        svg += "\"/>\n";
        if (s < names.size()) {
            svg += "<text x=\"" + std::to_string(W - mr - 10) + "\" y=\"" +
                   std::to_string(mt + 16 * int(s)) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
                   "fill=\"" + colors[s % 5] + "\">" + names[s] + "</text>\n";
        }
    }
    svg += "</svg>\n";
    write_text(path, svg);
}

}  // namespace harnack::io
