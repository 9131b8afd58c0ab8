#include "lakegame/io/svg.hpp"

#include <cstdio>
#include <sstream>

namespace lakegame::io {

std::pair<double, double> PlotFrame::to_pixel(double x, double y) const {
    const double w = width - 2.0 * margin;
    const double h = height - 2.0 * margin;
    return {margin + (x - x_min) / (x_max - x_min) * w,
            height - margin - (y - y_min) / (y_max - y_min) * h};
}

std::pair<double, double> PlotFrame::from_pixel(double px, double py) const {
    const double w = width - 2.0 * margin;
    const double h = height - 2.0 * margin;
    return {x_min + (px - margin) / w * (x_max - x_min),
            y_min + (height - margin - py) / h * (y_max - y_min)};
}

PlotFrame rectangle_frame() {
    PlotFrame f;
    f.y_max = kPi;
    return f;
}

PlotFrame cartesian_frame() {
    PlotFrame f;
    f.width = 560.0;
    f.height = 560.0;
    f.margin = 24.0;
    f.x_min = f.y_min = -1.15;
    f.x_max = f.y_max = 1.15;
    return f;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void open_svg(std::ostringstream& os, const PlotFrame& f, std::string_view game, double mu) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(f.width)
       << "\" height=\"" << fmt(f.height) << "\" viewBox=\"0 0 " << fmt(f.width) << ' '
       << fmt(f.height) << "\" data-game=\"" << game << "\" data-mu=\"" << fmt_value(mu)
       << "\">\n"
       << "<style>\n"
       << "polyline { fill: none; stroke-width: 1.2; }\n"
       << ".region-FocalTributary { stroke: #1f77b4; }\n"
       << ".region-UniversalTributary { stroke: #2ca02c; }\n"
       << ".kind-partition { stroke: #145a14; stroke-width: 2; stroke-dasharray: 6 3; }\n"
       << ".region-FocalLine, .region-UniversalLine { stroke: #000000; stroke-width: 2.5; }\n"
       << ".region-OnBarrier { stroke: #d62728; stroke-width: 2.5; }\n"
       << ".region-AboveBarrier { stroke: #7f7f7f; }\n"
       << ".kind-lady { stroke: #1f77b4; stroke-width: 1.6; }\n"
       << ".kind-man { stroke: #d62728; stroke-width: 1.6; }\n"
       << ".frame { fill: none; stroke: #333333; stroke-width: 1; }\n"
       << "text { font-family: sans-serif; font-size: 12px; fill: #222222; }\n"
       << "</style>\n";
}

}  // namespace

std::string flowfield_svg(const Flowfield& field) {
    const PlotFrame f = rectangle_frame();
    std::ostringstream os;
    open_svg(os, f, to_string(field.game), field.mu);

    const auto [x0, y0] = f.to_pixel(0.0, kPi);
    const auto [x1, y1] = f.to_pixel(1.0, 0.0);
    os << "<rect class=\"frame\" x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
       << fmt(x1 - x0) << "\" height=\"" << fmt(y1 - y0) << "\"/>\n";
    for (const double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto [px, py] = f.to_pixel(r, 0.0);
        os << "<text x=\"" << fmt(px - 8.0) << "\" y=\"" << fmt(py + 16.0) << "\">"
           << fmt_value(r) << "</text>\n";
    }
    const std::pair<double, const char*> theta_ticks[] = {
        {0.0, "0"}, {kPi / 2.0, "π/2"}, {kPi, "π"}};
    for (const auto& [th, label] : theta_ticks) {
        const auto [px, py] = f.to_pixel(0.0, th);
        os << "<text x=\"" << fmt(px - 30.0) << "\" y=\"" << fmt(py + 4.0) << "\">" << label
           << "</text>\n";
    }
    os << "<text x=\"" << fmt(0.5 * f.width) << "\" y=\"" << fmt(f.height - 12.0)
       << "\">r</text>\n";
    os << "<text x=\"12\" y=\"" << fmt(0.5 * f.height) << "\">θ</text>\n";
    os << "<text x=\"" << fmt(f.margin) << "\" y=\"20\">" << to_string(field.game)
       << " game, μ = " << fmt_value(field.mu) << "</text>\n";

    for (const auto& line : field.lines) {
        os << "<polyline data-id=\"" << line.id << "\" data-region=\"" << to_string(line.region)
           << "\" data-kind=\"" << line.kind << "\" class=\"region-" << to_string(line.region)
           << " kind-" << line.kind << "\" points=\"";
        bool first = true;
        for (const auto& p : line.points) {
            const auto [px, py] = f.to_pixel(p.r, p.theta);
            os << (first ? "" : " ") << fmt(px) << ',' << fmt(py);
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string tributary_svg(const TributaryFigure& figure) {
    const PlotFrame f = cartesian_frame();
    std::ostringstream os;
    open_svg(os, f, "tributary", figure.mu);

    const auto [cx, cy] = f.to_pixel(0.0, 0.0);
    const auto [ex, ey] = f.to_pixel(1.0, 0.0);
    os << "<circle class=\"frame\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
       << fmt(ex - cx) << "\"/>\n";
    const auto [mx, my] = f.to_pixel(figure.mu, 0.0);
    os << "<circle class=\"frame\" stroke-dasharray=\"4 4\" cx=\"" << fmt(cx) << "\" cy=\""
       << fmt(cy) << "\" r=\"" << fmt(mx - cx) << "\"/>\n";

    const auto marker = [&](const CartesianPoint& p, std::string_view shape,
                            std::string_view kind) {
        const auto [px, py] = f.to_pixel(p.x, p.y);
        const char* color = kind == "man" ? "#d62728" : "#1f77b4";
        if (shape == "triangle") {
            os << "<polygon data-marker=\"fl-entry\" fill=\"" << color << "\" points=\""
               << fmt(px) << ',' << fmt(py - 5.0) << ' ' << fmt(px - 4.5) << ','
               << fmt(py + 3.5) << ' ' << fmt(px + 4.5) << ',' << fmt(py + 3.5) << "\"/>\n";
        } else {
            const bool open = shape == "open";
            os << "<circle data-marker=\"" << (open ? "start" : "end") << "\" cx=\"" << fmt(px)
               << "\" cy=\"" << fmt(py) << "\" r=\"4\" fill=\"" << (open ? "#ffffff" : color)
               << "\" stroke=\"" << color << "\"/>\n";
        }
    };

    for (const auto& path : figure.paths) {
        os << "<polyline data-id=\"" << path.id << "\" data-kind=\"" << path.kind
           << "\" data-case=\"" << path.label << "\" class=\"kind-" << path.kind
           << "\" points=\"";
        bool first = true;
        for (const auto& p : path.points) {
            const auto [px, py] = f.to_pixel(p.x, p.y);
            os << (first ? "" : " ") << fmt(px) << ',' << fmt(py);
            first = false;
        }
        os << "\"/>\n";
        marker(path.start, "open", path.kind);
        if (path.fl_entry) marker(*path.fl_entry, "triangle", path.kind);
        marker(path.end, "filled", path.kind);
    }
    os << "<text x=\"" << fmt(f.margin) << "\" y=\"16\">FL tributaries, μ = "
       << fmt_value(figure.mu) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace lakegame::io
