#include "citenet/svg.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace citenet::svg {

std::string num(double v)
{
    if (std::abs(v) < 0.005) {
        v = 0.0;
    }
    return fmt::format("{:.2f}", v);
}

std::string escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

namespace {

std::string with_extra(std::string_view extra)
{
    return extra.empty() ? std::string() : " " + std::string(extra);
}

} // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra)
{
    body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"{}/>\n", num(x), num(y),
                         num(w), num(h), fill, with_extra(extra));
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
                    std::string_view extra)
{
    body_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
                         num(x1), num(y1), num(x2), num(y2), stroke, num(width), with_extra(extra));
}

void Document::circle(double cx, double cy, double r, std::string_view fill, std::string_view extra)
{
    body_ += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"{}/>\n", num(cx), num(cy), num(r), fill,
                         with_extra(extra));
}

void Document::path(std::string_view d, std::string_view fill, std::string_view extra)
{
    body_ += fmt::format("<path d=\"{}\" fill=\"{}\"{}/>\n", d, fill, with_extra(extra));
}

void Document::polyline(std::string_view points, std::string_view stroke, double width, std::string_view extra)
{
    body_ += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n", points,
                         stroke, num(width), with_extra(extra));
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                    std::string_view extra)
{
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\"{}>{}</text>\n", num(x), num(y),
                         num(size), anchor, with_extra(extra), escape(content));
}

void Document::raw(std::string_view element)
{
    body_ += element;
    body_ += '\n';
}

std::string Document::str() const
{
    return fmt::format("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                       "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
                       "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
                       "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n"
                       "{2}</svg>\n",
                       num(width_), num(height_), body_);
}

std::string ring_segment(double cx, double cy, double r_inner, double r_outer, double a0, double a1)
{
    auto pt = [&](double r, double a) {
        return fmt::format("{} {}", num(cx + r * std::sin(a)), num(cy - r * std::cos(a)));
    };
    const double sweep = a1 - a0;
    if (sweep >= 2.0 * std::numbers::pi - 1e-9) {
        const double mid = a0 + std::numbers::pi;
        return fmt::format("M {0} A {2} {2} 0 1 1 {1} A {2} {2} 0 1 1 {0} Z M {3} A {4} {4} 0 1 0 {5} A {4} {4} 0 1 0 "
                           "{3} Z",
                           pt(r_outer, a0), pt(r_outer, mid), num(r_outer), pt(r_inner, a0), num(r_inner),
                           pt(r_inner, mid));
    }
    const int large = sweep > std::numbers::pi ? 1 : 0;
    return fmt::format("M {} A {} {} 0 {} 1 {} L {} A {} {} 0 {} 0 {} Z", pt(r_outer, a0), num(r_outer), num(r_outer),
                       large, pt(r_outer, a1), pt(r_inner, a1), num(r_inner), num(r_inner), large, pt(r_inner, a0));
}

} // namespace citenet::svg
