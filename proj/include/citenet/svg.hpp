#pragma once

#include <string>
#include <string_view>

namespace citenet::svg {

/// Fixed two-decimal formatting so output bytes never depend on locale or
/// shortest-representation quirks.
std::string num(double v);

std::string escape(std::string_view text);

/// Minimal SVG 1.1 builder. Attributes are passed pre-formatted.
class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {});
    void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
              std::string_view extra = {});
    void circle(double cx, double cy, double r, std::string_view fill, std::string_view extra = {});
    void path(std::string_view d, std::string_view fill, std::string_view extra = {});
    void polyline(std::string_view points, std::string_view stroke, double width, std::string_view extra = {});
    void text(double x, double y, std::string_view content, double size, std::string_view anchor = "start",
              std::string_view extra = {});
    void raw(std::string_view element);

    std::string str() const;

private:
    double width_;
    double height_;
    std::string body_;
};

/// SVG path for an annulus sector between angles a0 and a1 (radians,
/// clockwise from 12 o'clock). A full turn is drawn as two half arcs.
std::string ring_segment(double cx, double cy, double r_inner, double r_outer, double a0, double a1);

} // namespace citenet::svg
