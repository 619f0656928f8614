// Minimal SVG 1.1 plot writer: axes, polylines, markers, text. Plots are pure
// views of data that is always also written as CSV/JSON. Convention: stable
// objects are drawn solid, unstable ones dashed.

#ifndef FEARPP_SVG_HPP
#define FEARPP_SVG_HPP

#include <string>
#include <vector>

namespace fearpp {

class SvgPlot {
public:
    SvgPlot(double x_min, double x_max, double y_min, double y_max, std::string x_label,
            std::string y_label, int width = 640, int height = 480);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  bool dashed = false, double stroke_width = 1.5);
    void circle(double x, double y, double radius_px, const std::string& color, bool filled);
    void text(double x, double y, const std::string& label, const std::string& color = "#303030");
    // filled cell for sweep heat maps; (x,y) is the cell center in data coords
    void cell(double x, double y, double w, double h, const std::string& color);

    std::string render() const;

private:
    double px(double x) const;
    double py(double y) const;
    double x0_, x1_, y0_, y1_;
    std::string xlab_, ylab_;
    int w_, h_;
    std::string body_;
};

// categorical color palette for sweep classes
std::string class_color(int index);

} // namespace fearpp

#endif
