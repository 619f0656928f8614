#include "fearpp/svg.hpp"

#include <cmath>
#include <cstdio>

namespace fearpp {

namespace {
constexpr int kMarginL = 60, kMarginR = 15, kMarginT = 15, kMarginB = 45;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
} // namespace

SvgPlot::SvgPlot(double x_min, double x_max, double y_min, double y_max, std::string x_label,
                 std::string y_label, int width, int height)
    : x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max), xlab_(std::move(x_label)),
      ylab_(std::move(y_label)), w_(width), h_(height) {
    if (x1_ <= x0_) x1_ = x0_ + 1.0;
    if (y1_ <= y0_) y1_ = y0_ + 1.0;
}

double SvgPlot::px(double x) const {
    return kMarginL + (x - x0_) / (x1_ - x0_) * (w_ - kMarginL - kMarginR);
}
double SvgPlot::py(double y) const {
    return h_ - kMarginB - (y - y0_) / (y1_ - y0_) * (h_ - kMarginT - kMarginB);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                       bool dashed, double stroke_width) {
    if (pts.size() < 2) return;
    std::string d;
    for (const auto& [x, y] : pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        d += fmt(px(x)) + "," + fmt(py(y)) + " ";
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(stroke_width) + "\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") +
             " points=\"" + d + "\"/>\n";
}

void SvgPlot::circle(double x, double y, double radius_px, const std::string& color, bool filled) {
    body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" + fmt(radius_px) +
             "\" stroke=\"" + color + "\" fill=\"" + (filled ? color : std::string("white")) +
             "\"/>\n";
}

void SvgPlot::text(double x, double y, const std::string& label, const std::string& color) {
    body_ += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) + "\" font-size=\"12\" fill=\"" +
             color + "\">" + label + "</text>\n";
}

void SvgPlot::cell(double x, double y, double w, double h, const std::string& color) {
    const double xa = px(x - w / 2), xb = px(x + w / 2);
    const double ya = py(y + h / 2), yb = py(y - h / 2);
    body_ += "<rect x=\"" + fmt(xa) + "\" y=\"" + fmt(ya) + "\" width=\"" + fmt(xb - xa) +
             "\" height=\"" + fmt(yb - ya) + "\" fill=\"" + color + "\" stroke=\"none\"/>\n";
}

std::string SvgPlot::render() const {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += body_;
    // axes
    s += "<line x1=\"" + fmt(px(x0_)) + "\" y1=\"" + fmt(py(y0_)) + "\" x2=\"" + fmt(px(x1_)) +
         "\" y2=\"" + fmt(py(y0_)) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(px(x0_)) + "\" y1=\"" + fmt(py(y0_)) + "\" x2=\"" + fmt(px(x0_)) +
         "\" y2=\"" + fmt(py(y1_)) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = x0_ + (x1_ - x0_) * i / 4.0;
        const double y = y0_ + (y1_ - y0_) * i / 4.0;
        s += "<text x=\"" + fmt(px(x) - 10) + "\" y=\"" + fmt(py(y0_) + 16) +
             "\" font-size=\"10\">" + fmt(x) + "</text>\n";
        s += "<text x=\"" + fmt(px(x0_) - 45) + "\" y=\"" + fmt(py(y) + 4) +
             "\" font-size=\"10\">" + fmt(y) + "</text>\n";
    }
    s += "<text x=\"" + fmt((px(x0_) + px(x1_)) / 2) + "\" y=\"" + fmt(py(y0_) + 34) +
         "\" font-size=\"12\">" + xlab_ + "</text>\n";
    s += "<text x=\"12\" y=\"" + fmt((py(y0_) + py(y1_)) / 2) + "\" font-size=\"12\">" + ylab_ +
         "</text>\n";
    s += "</svg>\n";
    return s;
}

std::string class_color(int index) {
    static const char* palette[] = {"#4878cf", "#d65f5f", "#6acc65", "#b47cc7",
                                    "#c4ad66", "#77bedb", "#888888"};
    return palette[index % 7];
}

} // namespace fearpp
