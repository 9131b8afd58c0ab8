#pragma once

// Static SVG 1.1 rendering of flowfields: the (r, theta) rectangle with r on
// the horizontal axis, and the unit-circle Cartesian frame.

#include <string>
#include <utility>

#include "lakegame/io/flowfield.hpp"

namespace lakegame::io {

/// Affine map between data coordinates and pixels (y grows downward).
struct PlotFrame {
    double width = 720.0;
    double height = 480.0;
    double margin = 56.0;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    std::pair<double, double> to_pixel(double x, double y) const;
    std::pair<double, double> from_pixel(double px, double py) const;
};

/// x = r in [0, 1], y = theta in [0, pi].
PlotFrame rectangle_frame();
/// x, y in [-1.15, 1.15].
PlotFrame cartesian_frame();

/// One <polyline> per trajectory carrying data-region, data-kind and data-id.
std::string flowfield_svg(const Flowfield& field);

std::string tributary_svg(const TributaryFigure& figure);

}  // namespace lakegame::io
