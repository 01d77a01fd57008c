#include "gaze3d/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gaze3d {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// diverging blue-white-red for t in [-1, 1]
std::string diverging_color(double t) {
    t = std::clamp(t, -1.0, 1.0);
    int r, g, b;
    if (t >= 0) {
        r = 255;
        g = static_cast<int>(255 * (1.0 - t));
        b = static_cast<int>(255 * (1.0 - t));
    } else {
        r = static_cast<int>(255 * (1.0 + t));
        g = static_cast<int>(255 * (1.0 + t));
        b = 255;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

void text(std::ostringstream& out, double x, double y, const std::string& s,
          int size = 11, const char* anchor = "middle") {
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
}

}  // namespace

std::string svg_heatmap(const Matrix& values, const std::vector<std::string>& labels,
                        const std::string& title) {
    const int n = static_cast<int>(values.rows);
    const double cell = 46.0;
    const double left = 110.0, top = 50.0;
    const double w = left + n * cell + 20.0;
    const double h = top + n * cell + 90.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\">\n";
    text(out, w / 2, 24, title, 14);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = values(i, j);
            const double x = left + j * cell;
            const double y = top + i * cell;
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
                << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\""
                << (std::isnan(v) ? "#dddddd" : diverging_color(v))
                << "\" stroke=\"#777777\" stroke-width=\"0.5\"/>\n";
            text(out, x + cell / 2, y + cell / 2 + 4, std::isnan(v) ? "n/a" : fmt(v), 10);
        }
        text(out, left - 8, top + i * cell + cell / 2 + 4, labels[i], 11, "end");
    }
    for (int j = 0; j < n; ++j) {
        const double x = left + j * cell + cell / 2;
        out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + n * cell + 14)
            << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\" "
            << "transform=\"rotate(-45 " << fmt(x) << ' ' << fmt(top + n * cell + 14)
            << ")\">" << labels[j] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_bar_chart(const std::vector<double>& values,
                          const std::vector<std::string>& labels,
                          const std::string& title) {
    const int n = static_cast<int>(values.size());
    const double bar_w = 58.0, gap = 16.0;
    const double left = 60.0, top = 50.0, plot_h = 220.0;
    const double w = left + n * (bar_w + gap) + 30.0;
    const double h = top + plot_h + 90.0;
    const double vmax = std::max(1e-12, *std::max_element(values.begin(), values.end()));

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\">\n";
    text(out, w / 2, 24, title, 14);
    out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + plot_h) << "\" x2=\""
        << fmt(w - 20) << "\" y2=\"" << fmt(top + plot_h)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i < n; ++i) {
        const double bh = plot_h * values[i] / vmax;
        const double x = left + i * (bar_w + gap) + gap / 2;
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(top + plot_h - bh)
            << "\" width=\"" << fmt(bar_w) << "\" height=\"" << fmt(bh)
            << "\" fill=\"#4878b0\"/>\n";
        text(out, x + bar_w / 2, top + plot_h - bh - 6, fmt(values[i]), 10);
        out << "<text x=\"" << fmt(x + bar_w / 2) << "\" y=\"" << fmt(top + plot_h + 14)
            << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\" "
            << "transform=\"rotate(-45 " << fmt(x + bar_w / 2) << ' '
            << fmt(top + plot_h + 14) << ")\">" << labels[i] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace gaze3d
