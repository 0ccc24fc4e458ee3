#include "repclust/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "repclust/error.hpp"

namespace repclust {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("spearman: series differ in length");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw InvalidArgument("spearman: values must be finite");
    const std::size_t n = x.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = 0.5 * double(n + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
    constexpr double W = 480, H = 360, L = 60, R = 20, T = 40, B = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!points.empty()) {
        xmin = xmax = points.front().x;
        ymin = ymax = points.front().y;
        for (const auto& p : points) {
            xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
        }
        if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
        if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
    }
    auto sx = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
    auto sy = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(W) +
         "\" height=\"" + fmt(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape_xml(title) + "</text>\n";
    s += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(W - R) + "\" y2=\"" +
         fmt(H - B) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(T) + "\" x2=\"" + fmt(L) + "\" y2=\"" +
         fmt(H - B) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(L) + "\" y=\"" + fmt(H - B + 16) + "\" font-size=\"10\">" + fmt(xmin) +
         "</text>\n";
    s += "<text x=\"" + fmt(W - R) + "\" y=\"" + fmt(H - B + 16) +
         "\" text-anchor=\"end\" font-size=\"10\">" + fmt(xmax) + "</text>\n";
    s += "<text x=\"" + fmt(L - 4) + "\" y=\"" + fmt(H - B) +
         "\" text-anchor=\"end\" font-size=\"10\">" + fmt(ymin) + "</text>\n";
    s += "<text x=\"" + fmt(L - 4) + "\" y=\"" + fmt(T + 8) +
         "\" text-anchor=\"end\" font-size=\"10\">" + fmt(ymax) + "</text>\n";
    s += "<text x=\"" + fmt((L + W - R) / 2) + "\" y=\"" + fmt(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape_xml(x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt((T + H - B) / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt((T + H - B) / 2) + ")\">" + escape_xml(y_label) + "</text>\n";
    for (const auto& p : points) {
        s += "<circle cx=\"" + fmt(sx(p.x)) + "\" cy=\"" + fmt(sy(p.y)) +
             "\" r=\"4\" fill=\"steelblue\"><title>" + escape_xml(p.label) + "</title></circle>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace repclust
