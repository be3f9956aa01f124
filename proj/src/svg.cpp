#include "uqlearn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string header() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n<rect width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
}

std::string title_text(const std::string& title) {
    return "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">" + title + "</text>\n";
}

std::string axes_frame() {
    return "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kPlotW) +
           "\" height=\"" + num(kPlotH) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
}

struct YScale {
    double lo, hi;
    double map(double v) const { return kTop + kPlotH * (1.0 - (v - lo) / (hi - lo)); }
};

std::string y_ticks(const YScale& scale, int count = 5) {
    std::string out;
    for (int i = 0; i <= count; ++i) {
        const double v = scale.lo + (scale.hi - scale.lo) * i / count;
        const double y = scale.map(v);
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) +
               "\" y2=\"" + num(y) + "\" stroke=\"#333333\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "%.3g", v);
        out += "<text x=\"" + num(kLeft - 10) + "\" y=\"" + num(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + label +
               "</text>\n";
    }
    return out;
}

} // namespace

std::string boxplot_svg(const std::vector<std::string>& labels,
                        const std::vector<BoxplotStats>& stats, const std::string& title) {
    if (labels.empty() || labels.size() != stats.size())
        throw ValidationError("boxplot_svg: labels and stats must be non-empty and equal-length");

    double lo = stats[0].min, hi = stats[0].max;
    for (const BoxplotStats& s : stats) {
        lo = std::min({lo, s.min});
        hi = std::max({hi, s.max});
    }
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    const YScale scale{lo, hi};

    std::string out = header() + title_text(title) + axes_frame() + y_ticks(scale);
    const double slot = kPlotW / static_cast<double>(stats.size());
    const double box_w = std::min(60.0, slot * 0.5);

    for (size_t i = 0; i < stats.size(); ++i) {
        const BoxplotStats& s = stats[i];
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const std::string color = kPalette[i % 8];

        // whiskers
        out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(scale.map(s.whisker_low)) + "\" x2=\"" +
               num(cx) + "\" y2=\"" + num(scale.map(s.q1)) + "\" stroke=\"#333333\"/>\n";
        out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(scale.map(s.q3)) + "\" x2=\"" + num(cx) +
               "\" y2=\"" + num(scale.map(s.whisker_high)) + "\" stroke=\"#333333\"/>\n";
        out += "<line x1=\"" + num(cx - box_w / 4) + "\" y1=\"" + num(scale.map(s.whisker_low)) +
               "\" x2=\"" + num(cx + box_w / 4) + "\" y2=\"" + num(scale.map(s.whisker_low)) +
               "\" stroke=\"#333333\"/>\n";
        out += "<line x1=\"" + num(cx - box_w / 4) + "\" y1=\"" + num(scale.map(s.whisker_high)) +
               "\" x2=\"" + num(cx + box_w / 4) + "\" y2=\"" + num(scale.map(s.whisker_high)) +
               "\" stroke=\"#333333\"/>\n";

        // interquartile box and median
        out += "<rect class=\"box\" x=\"" + num(cx - box_w / 2) + "\" y=\"" +
               num(scale.map(s.q3)) + "\" width=\"" + num(box_w) + "\" height=\"" +
               num(scale.map(s.q1) - scale.map(s.q3)) + "\" fill=\"" + color +
               "\" fill-opacity=\"0.5\" stroke=\"#333333\"/>\n";
        out += "<line x1=\"" + num(cx - box_w / 2) + "\" y1=\"" + num(scale.map(s.median)) +
               "\" x2=\"" + num(cx + box_w / 2) + "\" y2=\"" + num(scale.map(s.median)) +
               "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";

        for (double o : s.outliers)
            out += "<circle class=\"outlier\" cx=\"" + num(cx) + "\" cy=\"" + num(scale.map(o)) +
                   "\" r=\"3\" fill=\"none\" stroke=\"" + color + "\"/>\n";

        out += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               labels[i] + "</text>\n";
    }
    return out + "</svg>\n";
}

std::string roc_svg(const std::vector<std::string>& names, const std::vector<RocCurve>& curves,
                    const std::vector<double>& aucs, const std::string& title) {
    if (names.empty() || names.size() != curves.size() || names.size() != aucs.size())
        throw ValidationError("roc_svg: names, curves and aucs must be non-empty, equal-length");

    auto px = [](double fpr) { return kLeft + kPlotW * fpr; };
    auto py = [](double tpr) { return kTop + kPlotH * (1.0 - tpr); };

    std::string out = header() + title_text(title) + axes_frame();
    // diagonal chance reference
    out += "<path class=\"diagonal\" d=\"M " + num(px(0)) + " " + num(py(0)) + " L " + num(px(1)) +
           " " + num(py(1)) + "\" stroke=\"#999999\" stroke-dasharray=\"6,4\" fill=\"none\"/>\n";

    for (size_t c = 0; c < curves.size(); ++c) {
        const RocCurve& curve = curves[c];
        std::string d = "M " + num(px(curve.fpr[0])) + " " + num(py(curve.tpr[0]));
        for (size_t i = 1; i < curve.fpr.size(); ++i)
            d += " L " + num(px(curve.fpr[i])) + " " + num(py(curve.tpr[i]));
        out += "<path class=\"roc\" d=\"" + d + "\" stroke=\"" + kPalette[c % 8] +
               "\" stroke-width=\"2\" fill=\"none\"/>\n";

        char label[128];
        std::snprintf(label, sizeof(label), "%s (auc %.3f)", names[c].c_str(), aucs[c]);
        const double ly = kTop + 18.0 + 16.0 * static_cast<double>(c);
        out += "<rect x=\"" + num(kLeft + 12) + "\" y=\"" + num(ly - 9) +
               "\" width=\"12\" height=\"4\" fill=\"" + kPalette[c % 8] + "\"/>\n";
        out += "<text x=\"" + num(kLeft + 30) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
    }

    out += "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"" + num(kHeight - 15) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">false positive "
           "rate</text>\n";
    out += "<text x=\"20\" y=\"" + num(kTop + kPlotH / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 " + num(kTop + kPlotH / 2) + ")\">true positive rate"
           "</text>\n";
    return out + "</svg>\n";
}

namespace {

struct PointScale {
    double x_min, x_max, y_min, y_max;
    double px(double x) const { return kLeft + kPlotW * (x - x_min) / (x_max - x_min); }
    double py(double y) const { return kTop + kPlotH * (1.0 - (y - y_min) / (y_max - y_min)); }
};

std::string scatter_points(const Matrix& points, const std::vector<int>& labels,
                           const PointScale& scale) {
    std::string out;
    for (size_t i = 0; i < points.rows(); ++i) {
        const char* color = labels[i] == 1 ? "#d62728" : "#1f77b4";
        out += "<circle class=\"marker\" cx=\"" + num(scale.px(points(i, 0))) + "\" cy=\"" +
               num(scale.py(points(i, 1))) + "\" r=\"4\" fill=\"" + color +
               "\" fill-opacity=\"0.8\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
    }
    // class legend
    out += "<circle cx=\"" + num(kLeft + 16) + "\" cy=\"" + num(kTop + 14) +
           "\" r=\"4\" fill=\"#d62728\"/>\n<text x=\"" + num(kLeft + 26) + "\" y=\"" +
           num(kTop + 18) + "\" font-family=\"sans-serif\" font-size=\"12\">positive (Covid)"
           "</text>\n";
    out += "<circle cx=\"" + num(kLeft + 16) + "\" cy=\"" + num(kTop + 30) +
           "\" r=\"4\" fill=\"#1f77b4\"/>\n<text x=\"" + num(kLeft + 26) + "\" y=\"" +
           num(kTop + 34) + "\" font-family=\"sans-serif\" font-size=\"12\">negative (normal)"
           "</text>\n";
    return out;
}

} // namespace

std::string heatmap_svg(const EntropyField& field, const Matrix* points2d,
                        const std::vector<int>* labels, const std::string& title) {
    if (field.nx == 0 || field.ny == 0) throw ValidationError("heatmap_svg: empty field");

    const PointScale scale{field.x_min, field.x_max, field.y_min, field.y_max};
    const double cell_w = kPlotW / static_cast<double>(field.nx);
    const double cell_h = kPlotH / static_cast<double>(field.ny);
    const double ln2 = std::log(2.0);

    std::string out = header() + title_text(title);
    for (size_t i = 0; i < field.ny; ++i) {
        for (size_t j = 0; j < field.nx; ++j) {
            // dark = high uncertainty: gray level 255 * (1 - H / ln 2)
            const double t = std::clamp(field.values(i, j) / ln2, 0.0, 1.0);
            const int gray = static_cast<int>(std::lround(255.0 * (1.0 - t)));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", gray, gray, gray);
            const double x = kLeft + cell_w * static_cast<double>(j);
            // row 0 sits at y_min, so flip vertically for screen coordinates
            const double y = kTop + kPlotH - cell_h * static_cast<double>(i + 1);
            out += "<rect class=\"cell\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                   num(cell_w + 0.5) + "\" height=\"" + num(cell_h + 0.5) + "\" fill=\"" + color +
                   "\"/>\n";
        }
    }
    out += axes_frame();
    if (points2d && labels) {
        if (points2d->rows() != labels->size() || points2d->cols() != 2)
            throw ValidationError("heatmap_svg: overlay needs (n, 2) points with n labels");
        out += scatter_points(*points2d, *labels, scale);
    }
    return out + "</svg>\n";
}

std::string scatter_svg(const Matrix& points2d, const std::vector<int>& labels,
                        const std::string& title) {
    if (points2d.rows() == 0 || points2d.cols() != 2 || points2d.rows() != labels.size())
        throw ValidationError("scatter_svg: need non-empty (n, 2) points with n labels");

    double x_min = points2d(0, 0), x_max = x_min, y_min = points2d(0, 1), y_max = y_min;
    for (size_t i = 0; i < points2d.rows(); ++i) {
        x_min = std::min(x_min, points2d(i, 0));
        x_max = std::max(x_max, points2d(i, 0));
        y_min = std::min(y_min, points2d(i, 1));
        y_max = std::max(y_max, points2d(i, 1));
    }
    auto widen = [](double& lo, double& hi) {
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    };
    widen(x_min, x_max);
    widen(y_min, y_max);

    const PointScale scale{x_min, x_max, y_min, y_max};
    std::string out = header() + title_text(title) + axes_frame();
    out += scatter_points(points2d, labels, scale);
    return out + "</svg>\n";
}

void write_svg(const std::string& svg, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << svg;
    if (!out) throw IoError("write failed for " + path);
}

} // namespace uqlearn
