#include "citenet/charts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "citenet/error.hpp"
#include "citenet/io.hpp"
#include "citenet/svg.hpp"

namespace citenet {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;
const std::string kOtherColor = "#c7c7c7";
const std::string kTextColor = "#333333";

struct Frame {
    double x0, y0, w, h;

    double bottom() const { return y0 + h; }
};

Frame plot_frame(const ChartStyle& style)
{
    return {kLeft, kTop, std::max(10.0, style.width - kLeft - kRight), std::max(10.0, style.height - kTop - kBottom)};
}

const std::string& color_at(const ChartStyle& style, std::size_t i)
{
    return style.palette[i % style.palette.size()];
}

std::string finish(const svg::Document& doc, const std::filesystem::path& out_path)
{
    std::string text = doc.str();
    write_file_atomic(out_path, text);
    return text;
}

std::string placeholder(const ChartStyle& style, std::string_view title, const std::filesystem::path& out_path)
{
    svg::Document doc(style.width, style.height);
    doc.text(style.width / 2.0, kTop - 20.0, title, style.title_font_size, "middle");
    doc.text(style.width / 2.0, style.height / 2.0, "no data", style.title_font_size, "middle",
             "class=\"placeholder\" fill=\"#777777\"");
    return finish(doc, out_path);
}

/// Round axis maximum with `ticks` equal steps.
double nice_step(double max_value, int ticks)
{
    if (max_value <= 0.0) {
        return 1.0;
    }
    const double raw = max_value / std::max(1, ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

/// Draws the y axis with ticks from 0 and returns the axis maximum.
double y_axis(svg::Document& doc, const Frame& f, double max_value, const ChartStyle& style)
{
    const int ticks = std::max(1, std::min(style.num_ticks, 10));
    const double step = nice_step(max_value, ticks);
    const double top = std::max(step, std::ceil(max_value / step) * step);
    doc.line(f.x0, f.y0, f.x0, f.bottom(), kTextColor);
    doc.line(f.x0, f.bottom(), f.x0 + f.w, f.bottom(), kTextColor);
    for (double v = 0.0; v <= top + step * 1e-9; v += step) {
        const double y = f.bottom() - v / top * f.h;
        doc.line(f.x0 - 4.0, y, f.x0, y, kTextColor);
        doc.line(f.x0, y, f.x0 + f.w, y, "#eeeeee");
        doc.text(f.x0 - 6.0, y + 4.0, fmt::format("{:g}", v), style.axis_font_size, "end");
    }
    return top;
}

/// Period labels under the x axis, thinned to at most num_ticks.
void x_labels(svg::Document& doc, const Frame& f, const std::vector<double>& xs, const std::vector<std::string>& labels,
              const ChartStyle& style)
{
    const std::size_t n = labels.size();
    const std::size_t every = std::max<std::size_t>(1, (n + static_cast<std::size_t>(style.num_ticks) - 1) /
                                                           static_cast<std::size_t>(std::max(1, style.num_ticks)));
    for (std::size_t i = 0; i < n; i += every) {
        doc.line(xs[i], f.bottom(), xs[i], f.bottom() + 4.0, kTextColor);
        doc.text(xs[i], f.bottom() + 18.0, labels[i], style.axis_font_size, "end",
                 fmt::format("transform=\"rotate(-35 {} {})\"", svg::num(xs[i]), svg::num(f.bottom() + 18.0)));
    }
}

void legend(svg::Document& doc, const ChartStyle& style, const std::vector<std::pair<std::string, std::string>> items)
{
    const double x = style.width - kRight + 20.0;
    double y = kTop;
    for (const auto& [label, color] : items) {
        doc.rect(x, y - 9.0, 12.0, 12.0, color, "class=\"legend-swatch\"");
        doc.text(x + 18.0, y + 1.0, label, style.legend_font_size, "start", "class=\"legend-label\"");
        y += style.legend_font_size + 8.0;
    }
}

void title(svg::Document& doc, const ChartStyle& style, std::string_view text)
{
    doc.text(style.width / 2.0, kTop - 22.0, text, style.title_font_size, "middle", "class=\"title\"");
}

std::vector<double> point_xs(const Frame& f, std::size_t n)
{
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = n == 1 ? f.x0 + f.w / 2.0 : f.x0 + f.w * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return xs;
}

std::vector<std::string> labels_of(const TimeSeries& series)
{
    std::vector<std::string> out;
    for (const auto& p : series.points) {
        out.push_back(p.first);
    }
    return out;
}

std::string series_color(const ChartStyle& style, const std::vector<std::string>& names, std::size_t i)
{
    return names[i] == "other" ? kOtherColor : color_at(style, i);
}

std::string heat_color(double r)
{
    r = std::clamp(r, -1.0, 1.0);
    const double lo[3] = {33, 102, 172}, mid[3] = {247, 247, 247}, hi[3] = {178, 24, 43};
    const double* a = mid;
    const double* b = r < 0 ? lo : hi;
    const double t = std::abs(r);
    int rgb[3];
    for (int k = 0; k < 3; ++k) {
        rgb[k] = static_cast<int>(std::lround(a[k] + (b[k] - a[k]) * t));
    }
    return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

std::string join_values(const std::vector<std::int64_t>& v)
{
    return fmt::format("{}", fmt::join(v, ","));
}

} // namespace

const std::vector<std::string>& tab10()
{
    static const std::vector<std::string> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

void ChartStyle::validate() const
{
    if (palette.empty()) {
        throw ParameterError("chart palette must not be empty");
    }
    if (width <= 0 || height <= 0 || num_ticks <= 0 || histogram_bins <= 0 || layout_iterations < 0) {
        throw ParameterError("chart sizes, tick count and bin count must be positive");
    }
    if (min_node_radius <= 0.0 || min_node_radius > max_node_radius) {
        throw ParameterError("node radius bounds must satisfy 0 < min <= max");
    }
    if (min_edge_width < 0.0 || min_edge_width > max_edge_width) {
        throw ParameterError("edge width bounds must satisfy 0 <= min <= max");
    }
    if (ring_thickness < 0.0) {
        throw ParameterError("ring thickness must be non-negative");
    }
}

std::string PieEntity::attribute() const
{
    return countries ? std::string("country") : std::string(to_string(level));
}

std::string render_article_trends(const TimeSeries& series, const ChartStyle& style,
                                  const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Root and base set articles";
    if (series.empty()) {
        return placeholder(style, heading, out_path);
    }
    const std::vector<std::string> names = {"root", "base"};
    const std::size_t n = series.points.size();
    std::vector<std::vector<double>> cum(names.size() + 1, std::vector<double>(n, 0.0));
    double max_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < names.size(); ++s) {
            cum[s + 1][i] = cum[s][i] + static_cast<double>(series.value(i, names[s]));
        }
        max_total = std::max(max_total, cum[names.size()][i]);
    }

    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    const Frame f = plot_frame(style);
    const double top = y_axis(doc, f, max_total, style);
    const auto xs = point_xs(f, n);
    auto y_of = [&](double v) { return f.bottom() - v / top * f.h; };

    std::vector<std::pair<std::string, std::string>> items;
    for (std::size_t s = 0; s < names.size(); ++s) {
        std::string d, edge;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string pt = svg::num(xs[i]) + " " + svg::num(y_of(cum[s + 1][i]));
            d += (i == 0 ? "M " : " L ") + pt;
            edge += (i == 0 ? "M " : " L ") + pt;
        }
        for (std::size_t i = n; i-- > 0;) {
            d += " L " + svg::num(xs[i]) + " " + svg::num(y_of(cum[s][i]));
        }
        d += " Z";
        std::vector<std::int64_t> values;
        for (std::size_t i = 0; i < n; ++i) {
            values.push_back(series.value(i, names[s]));
        }
        const std::string& color = color_at(style, s);
        doc.path(d, color,
                 fmt::format("class=\"area\" data-series=\"{}\" data-values=\"{}\" fill-opacity=\"0.85\"", names[s],
                             join_values(values)));
        doc.path(edge, "none", fmt::format("class=\"area-line\" data-series=\"{}\" stroke=\"{}\" stroke-width=\"1.5\"",
                                           names[s], color));
        items.emplace_back(names[s] == "root" ? "root set" : "base set", color);
    }
    x_labels(doc, f, xs, labels_of(series), style);
    legend(doc, style, items);
    return finish(doc, out_path);
}

std::string render_topic_trends(const TimeSeries& series, const ChartStyle& style,
                                const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Topics over time";
    if (series.empty() || series.series.empty()) {
        return placeholder(style, heading, out_path);
    }
    const std::size_t n = series.points.size();
    double max_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = 0.0;
        for (const auto& name : series.series) {
            t += static_cast<double>(series.value(i, name));
        }
        max_total = std::max(max_total, t);
    }
    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    const Frame f = plot_frame(style);
    const double top = y_axis(doc, f, max_total, style);
    const double slot = f.w / static_cast<double>(n);
    const double bar = slot * 0.8;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = f.x0 + slot * (static_cast<double>(i) + 0.5);
        double base = 0.0;
        doc.raw(fmt::format("<g class=\"bar-stack\" data-period=\"{}\">", svg::escape(series.points[i].first)));
        for (std::size_t s = 0; s < series.series.size(); ++s) {
            const auto v = series.value(i, series.series[s]);
            if (v == 0) {
                continue;
            }
            const double h = static_cast<double>(v) / top * f.h;
            doc.rect(xs[i] - bar / 2.0, f.bottom() - base - h, bar, h, series_color(style, series.series, s),
                     fmt::format("class=\"bar-segment\" data-series=\"{}\" data-value=\"{}\"",
                                 svg::escape(series.series[s]), v));
            base += h;
        }
        doc.raw("</g>");
    }
    x_labels(doc, f, xs, labels_of(series), style);
    std::vector<std::pair<std::string, std::string>> items;
    for (std::size_t s = 0; s < series.series.size(); ++s) {
        items.emplace_back(series.series[s], series_color(style, series.series, s));
    }
    legend(doc, style, items);
    return finish(doc, out_path);
}

std::string render_top_authors(const std::vector<AuthorRank>& ranking, const ChartStyle& style,
                               const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Top authors";
    if (ranking.empty()) {
        return placeholder(style, heading, out_path);
    }
    std::map<std::string, std::int64_t> topic_totals;
    std::int64_t max_score = 0;
    for (const auto& a : ranking) {
        max_score = std::max(max_score, a.score);
        for (const auto& [t, v] : a.breakdown) {
            topic_totals[t] += v;
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> topics(topic_totals.begin(), topic_totals.end());
    std::stable_sort(topics.begin(), topics.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::map<std::string, std::string> colors;
    for (std::size_t i = 0; i < topics.size(); ++i) {
        colors[topics[i].first] = color_at(style, i);
    }

    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    Frame f = plot_frame(style);
    f.x0 += 90.0;
    f.w = std::max(10.0, f.w - 90.0);
    const double row = f.h / static_cast<double>(ranking.size());
    const double bar = row * 0.7;
    const double scale = max_score > 0 ? f.w / static_cast<double>(max_score) : 0.0;
    doc.line(f.x0, f.y0, f.x0, f.bottom(), kTextColor);
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const auto& a = ranking[r];
        const double y = f.y0 + row * static_cast<double>(r) + (row - bar) / 2.0;
        doc.text(f.x0 - 6.0, y + bar / 2.0 + 4.0, a.display_name.empty() ? a.id : a.display_name, style.axis_font_size,
                 "end");
        doc.raw(fmt::format("<g class=\"bar-stack\" data-author=\"{}\" data-value=\"{}\">", svg::escape(a.id), a.score));
        double x = f.x0;
        for (const auto& [t, total] : topics) {
            auto it = a.breakdown.find(t);
            if (it == a.breakdown.end() || it->second == 0) {
                continue;
            }
            const double w = static_cast<double>(it->second) * scale;
            doc.rect(x, y, w, bar, colors[t],
                     fmt::format("class=\"bar-segment\" data-series=\"{}\" data-value=\"{}\"", svg::escape(t),
                                 it->second));
            x += w;
        }
        doc.raw("</g>");
    }
    std::vector<std::pair<std::string, std::string>> items;
    for (const auto& [t, total] : topics) {
        items.emplace_back(t, colors[t]);
    }
    legend(doc, style, items);
    return finish(doc, out_path);
}

std::string render_keyword_bars(const std::vector<KeywordScore>& scores, const ChartStyle& style,
                                const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Top keywords";
    if (scores.empty()) {
        return placeholder(style, heading, out_path);
    }
    std::int64_t max_count = 0;
    for (const auto& s : scores) {
        max_count = std::max(max_count, s.count);
    }
    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    Frame f = plot_frame(style);
    f.x0 += 90.0;
    f.w = std::max(10.0, f.w - 90.0 + kRight - 40.0);
    const double row = f.h / static_cast<double>(scores.size());
    const double bar = row * 0.7;
    doc.line(f.x0, f.y0, f.x0, f.bottom(), kTextColor);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double y = f.y0 + row * static_cast<double>(i) + (row - bar) / 2.0;
        const double w = max_count > 0 ? static_cast<double>(scores[i].count) / static_cast<double>(max_count) * f.w : 0.0;
        doc.text(f.x0 - 6.0, y + bar / 2.0 + 4.0, scores[i].ngram, style.axis_font_size, "end");
        doc.rect(f.x0, y, w, bar, color_at(style, 0),
                 fmt::format("class=\"bar\" data-keyword=\"{}\" data-value=\"{}\"", svg::escape(scores[i].ngram),
                             scores[i].count));
        doc.text(f.x0 + w + 4.0, y + bar / 2.0 + 4.0, std::to_string(scores[i].count), style.axis_font_size);
    }
    return finish(doc, out_path);
}

std::string render_keyword_trends(const TimeSeries& series, const ChartStyle& style,
                                  const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Keyword trends";
    if (series.empty() || series.series.empty()) {
        return placeholder(style, heading, out_path);
    }
    const std::size_t n = series.points.size();
    double max_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& name : series.series) {
            max_value = std::max(max_value, static_cast<double>(series.value(i, name)));
        }
    }
    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    const Frame f = plot_frame(style);
    const double top = y_axis(doc, f, max_value, style);
    const auto xs = point_xs(f, n);
    std::vector<std::pair<std::string, std::string>> items;
    for (std::size_t s = 0; s < series.series.size(); ++s) {
        std::string pts;
        std::vector<std::int64_t> values;
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = series.value(i, series.series[s]);
            values.push_back(v);
            if (i) {
                pts += ' ';
            }
            pts += svg::num(xs[i]) + "," + svg::num(f.bottom() - static_cast<double>(v) / top * f.h);
        }
        const std::string& color = color_at(style, s);
        doc.polyline(pts, color, 2.0,
                     fmt::format("class=\"trend-line\" data-series=\"{}\" data-values=\"{}\"",
                                 svg::escape(series.series[s]), join_values(values)));
        items.emplace_back(series.series[s], color);
    }
    x_labels(doc, f, xs, labels_of(series), style);
    legend(doc, style, items);
    return finish(doc, out_path);
}

std::vector<std::size_t> histogram_counts(const std::vector<double>& values, int bins)
{
    if (values.empty()) {
        return {};
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) {
        return {values.size()};
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * bins);
        counts[std::min(b, counts.size() - 1)] += 1;
    }
    return counts;
}

std::vector<std::filesystem::path> render_graph_statistics(const GraphStatistics& stats, const ChartStyle& style,
                                                           const std::filesystem::path& out_dir)
{
    style.validate();
    std::vector<std::filesystem::path> written;

    for (std::size_t m = 0; m < stats.metrics.size(); ++m) {
        const std::string& metric = stats.metrics[m];
        const auto& values = stats.report.values.at(metric);
        const auto path = out_dir / fmt::format("histogram_{}.svg", metric);
        written.push_back(path);
        if (values.empty()) {
            placeholder(style, metric, path);
            continue;
        }
        const auto counts = histogram_counts(values, style.histogram_bins);
        const double lo = stats.summaries[m].min, hi = stats.summaries[m].max;
        svg::Document doc(style.width, style.height);
        title(doc, style, fmt::format("Distribution of {}", metric));
        const Frame f = plot_frame(style);
        const double top = y_axis(doc, f, static_cast<double>(*std::max_element(counts.begin(), counts.end())), style);
        const double slot = f.w / static_cast<double>(counts.size());
        for (std::size_t b = 0; b < counts.size(); ++b) {
            const double h = static_cast<double>(counts[b]) / top * f.h;
            const double from = counts.size() == 1 ? lo : lo + (hi - lo) * static_cast<double>(b) / counts.size();
            const double to = counts.size() == 1 ? hi : lo + (hi - lo) * static_cast<double>(b + 1) / counts.size();
            doc.rect(f.x0 + slot * static_cast<double>(b) + 1.0, f.bottom() - h, std::max(0.0, slot - 2.0), h,
                     color_at(style, 0),
                     fmt::format("class=\"bin\" data-count=\"{}\" data-from=\"{:.6g}\" data-to=\"{:.6g}\"", counts[b],
                                 from, to));
        }
        doc.text(f.x0, f.bottom() + 20.0, fmt::format("{:.4g}", lo), style.axis_font_size, "start");
        doc.text(f.x0 + f.w, f.bottom() + 20.0, fmt::format("{:.4g}", hi), style.axis_font_size, "end");
        finish(doc, path);
    }

    {
        const auto path = out_dir / "correlation_heatmap.svg";
        written.push_back(path);
        const std::size_t k = stats.metrics.size();
        if (k == 0) {
            placeholder(style, "Correlation of centrality metrics", path);
        } else {
            const double side = std::min(style.width - 220.0, style.height - 200.0);
            const double cell = std::max(4.0, side / static_cast<double>(k));
            const double x0 = 180.0, y0 = 60.0;
            svg::Document doc(x0 + cell * k + 40.0, y0 + cell * k + 160.0);
            doc.text((x0 + cell * k) / 2.0, 30.0, "Correlation of centrality metrics", style.title_font_size, "middle",
                     "class=\"title\"");
            for (std::size_t i = 0; i < k; ++i) {
                doc.text(x0 - 6.0, y0 + cell * (i + 0.5) + 4.0, stats.metrics[i], style.axis_font_size, "end");
                const double lx = x0 + cell * (i + 0.5), ly = y0 + cell * k + 10.0;
                doc.text(lx, ly, stats.metrics[i], style.axis_font_size, "end",
                         fmt::format("transform=\"rotate(-60 {} {})\"", svg::num(lx), svg::num(ly)));
                for (std::size_t j = 0; j < k; ++j) {
                    const double r = stats.correlation[i][j];
                    doc.rect(x0 + cell * j, y0 + cell * i, cell, cell, heat_color(r),
                             fmt::format("class=\"cell\" data-row=\"{}\" data-col=\"{}\" data-value=\"{:.6f}\"", i, j,
                                         r));
                    doc.text(x0 + cell * (j + 0.5), y0 + cell * (i + 0.5) + 4.0, fmt::format("{:.2f}", r),
                             std::min(style.axis_font_size, cell / 3.0), "middle");
                }
            }
            finish(doc, path);
        }
    }

    {
        const auto path = out_dir / "graph_summary.svg";
        written.push_back(path);
        const double row = 22.0;
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"nodes", std::to_string(stats.nodes)});
        rows.push_back({"edges", std::to_string(stats.edges)});
        rows.push_back({"directed", stats.directed ? "true" : "false"});
        rows.push_back({"density", stats.density_defined ? fmt::format("{:.6f}", stats.density) : "undefined"});
        svg::Document doc(760.0, 80.0 + row * (rows.size() + stats.metrics.size() + 2));
        doc.text(380.0, 30.0, "Graph statistics", style.title_font_size, "middle", "class=\"title\"");
        double y = 60.0;
        for (const auto& r : rows) {
            doc.text(20.0, y, r[0], style.axis_font_size);
            doc.text(200.0, y, r[1], style.axis_font_size, "start", "class=\"stat\"");
            y += row;
        }
        y += row / 2.0;
        const std::vector<std::string> header = {"metric", "min", "max", "mean", "median", "std"};
        const double cols[] = {20.0, 230.0, 330.0, 430.0, 530.0, 630.0};
        for (std::size_t c = 0; c < header.size(); ++c) {
            doc.text(cols[c], y, header[c], style.axis_font_size, "start", "font-weight=\"bold\"");
        }
        y += row;
        for (std::size_t m = 0; m < stats.metrics.size(); ++m) {
            const auto& s = stats.summaries[m];
            const std::vector<std::string> cells = {stats.metrics[m],           fmt::format("{:.4g}", s.min),
                                                    fmt::format("{:.4g}", s.max), fmt::format("{:.4g}", s.mean),
                                                    fmt::format("{:.4g}", s.median), fmt::format("{:.4g}", s.stddev)};
            for (std::size_t c = 0; c < cells.size(); ++c) {
                doc.text(cols[c], y, cells[c], style.axis_font_size);
            }
            y += row;
        }
        finish(doc, path);
    }
    return written;
}

std::string render_clustered_graph(const Graph& graph, const Clustering& clustering, std::size_t n_clusters,
                                   std::size_t m_entries, const PieEntity& entity, const ChartStyle& style,
                                   const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Clusters";
    if (!clustering.assignment.empty() && clustering.assignment.size() != graph.node_count()) {
        throw ParameterError("clustering does not cover the graph");
    }
    const auto sizes = clustering.sizes();
    const std::size_t drawn = std::min(n_clusters, sizes.size());
    if (drawn == 0) {
        return placeholder(style, heading, out_path);
    }

    const std::string attr = entity.attribute();
    std::vector<std::map<std::string, std::size_t>> entries(drawn);
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
        const std::size_t c = clustering.assignment[v];
        if (c >= drawn) {
            continue;
        }
        const auto& attrs = graph.node(v).attrs;
        auto it = attrs.find(attr);
        if (it == attrs.end()) {
            continue;
        }
        const std::string value = attr_to_string(it->second);
        if (!value.empty()) {
            ++entries[c][value];
        }
    }
    std::vector<std::vector<std::pair<std::string, std::size_t>>> pies(drawn);
    std::map<std::string, std::size_t> entity_totals;
    for (std::size_t c = 0; c < drawn; ++c) {
        pies[c].assign(entries[c].begin(), entries[c].end());
        std::stable_sort(pies[c].begin(), pies[c].end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (pies[c].size() > m_entries) {
            pies[c].resize(m_entries);
        }
        for (const auto& [name, count] : pies[c]) {
            entity_totals[name] += count;
        }
    }
    std::vector<std::pair<std::string, std::size_t>> entity_order(entity_totals.begin(), entity_totals.end());
    std::stable_sort(entity_order.begin(), entity_order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::map<std::string, std::string> entity_color;
    for (std::size_t i = 0; i < entity_order.size(); ++i) {
        entity_color[entity_order[i].first] = color_at(style, i);
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cross;
    for (const auto& e : graph.edges()) {
        const std::size_t a = clustering.assignment[e.source], b = clustering.assignment[e.target];
        if (a != b && a < drawn && b < drawn) {
            ++cross[std::minmax(a, b)];
        }
    }

    // Seeded force-directed placement of the super-nodes in the unit square.
    SeededRng rng(style.layout_seed);
    std::vector<double> px(drawn), py(drawn);
    for (std::size_t c = 0; c < drawn; ++c) {
        px[c] = rng.uniform();
        py[c] = rng.uniform();
    }
    if (drawn > 1) {
        const double k = 1.0 / std::sqrt(static_cast<double>(drawn));
        std::vector<double> dx(drawn), dy(drawn);
        for (int it = 0; it < style.layout_iterations; ++it) {
            const double temp = 0.1 * (1.0 - static_cast<double>(it) / std::max(1, style.layout_iterations));
            std::fill(dx.begin(), dx.end(), 0.0);
            std::fill(dy.begin(), dy.end(), 0.0);
            for (std::size_t a = 0; a < drawn; ++a) {
                for (std::size_t b = a + 1; b < drawn; ++b) {
                    double ddx = px[a] - px[b], ddy = py[a] - py[b];
                    const double d = std::max(1e-6, std::hypot(ddx, ddy));
                    const double rep = k * k / d;
                    dx[a] += ddx / d * rep;
                    dy[a] += ddy / d * rep;
                    dx[b] -= ddx / d * rep;
                    dy[b] -= ddy / d * rep;
                }
            }
            for (const auto& [pair, count] : cross) {
                const auto [a, b] = pair;
                const double ddx = px[a] - px[b], ddy = py[a] - py[b];
                const double d = std::max(1e-6, std::hypot(ddx, ddy));
                const double att = d * d / k * std::log1p(static_cast<double>(count));
                dx[a] -= ddx / d * att;
                dy[a] -= ddy / d * att;
                dx[b] += ddx / d * att;
                dy[b] += ddy / d * att;
            }
            for (std::size_t a = 0; a < drawn; ++a) {
                const double len = std::max(1e-12, std::hypot(dx[a], dy[a]));
                const double step = std::min(len, temp);
                px[a] += dx[a] / len * step;
                py[a] += dy[a] / len * step;
            }
        }
    }

    const double max_size = static_cast<double>(sizes[0]);
    std::vector<double> radius(drawn);
    for (std::size_t c = 0; c < drawn; ++c) {
        radius[c] = style.min_node_radius +
                    (style.max_node_radius - style.min_node_radius) * std::sqrt(static_cast<double>(sizes[c]) / max_size);
    }
    const double pad = style.max_node_radius * (1.0 + style.ring_thickness) + 20.0;
    const double area_w = std::max(1.0, style.width - kRight - 2.0 * pad);
    const double area_h = std::max(1.0, style.height - kTop - 2.0 * pad);
    const auto [minx, maxx] = std::minmax_element(px.begin(), px.end());
    const auto [miny, maxy] = std::minmax_element(py.begin(), py.end());
    const double spanx = *maxx - *minx, spany = *maxy - *miny;
    std::vector<double> cx(drawn), cy(drawn);
    for (std::size_t c = 0; c < drawn; ++c) {
        cx[c] = pad + (spanx > 0 ? (px[c] - *minx) / spanx * area_w : area_w / 2.0);
        cy[c] = kTop + pad + (spany > 0 ? (py[c] - *miny) / spany * area_h : area_h / 2.0);
    }

    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    std::size_t max_cross = 0;
    for (const auto& [pair, count] : cross) {
        max_cross = std::max(max_cross, count);
    }
    for (const auto& [pair, count] : cross) {
        const auto [a, b] = pair;
        const double w = style.min_edge_width + (style.max_edge_width - style.min_edge_width) *
                                                    static_cast<double>(count) / static_cast<double>(max_cross);
        doc.line(cx[a], cy[a], cx[b], cy[b], style.edge_color, w,
                 fmt::format("class=\"cluster-edge\" data-source=\"{}\" data-target=\"{}\" data-count=\"{}\" "
                             "stroke-opacity=\"0.7\"",
                             a, b, count));
    }
    for (std::size_t c = 0; c < drawn; ++c) {
        doc.raw(fmt::format("<g class=\"cluster\" data-cluster=\"{}\" data-size=\"{}\">", c, sizes[c]));
        doc.circle(cx[c], cy[c], radius[c], "#f2f2f2",
                   fmt::format("class=\"super-node\" stroke=\"{}\" stroke-width=\"2\"", kTextColor));
        std::size_t total = 0;
        for (const auto& [name, count] : entries[c]) {
            total += count;
        }
        double angle = 0.0;
        const double r_in = radius[c], r_out = radius[c] * (1.0 + style.ring_thickness);
        for (const auto& [name, count] : pies[c]) {
            const double sweep = 2.0 * std::numbers::pi * static_cast<double>(count) / static_cast<double>(total);
            doc.path(svg::ring_segment(cx[c], cy[c], r_in, r_out, angle, angle + sweep), entity_color[name],
                     fmt::format("class=\"pie-segment\" data-entity=\"{}\" data-value=\"{}\" fill-rule=\"evenodd\"",
                                 svg::escape(name), count));
            angle += sweep;
        }
        doc.text(cx[c], cy[c] + style.node_font_size / 3.0, fmt::format("{} ({})", c, sizes[c]), style.node_font_size,
                 "middle");
        doc.raw("</g>");
    }
    std::vector<std::pair<std::string, std::string>> items;
    for (const auto& [name, total] : entity_order) {
        items.emplace_back(name, entity_color[name]);
    }
    legend(doc, style, items);
    return finish(doc, out_path);
}

std::string render_cluster_sizes(const Clustering& clustering, const ChartStyle& style, std::size_t n_clusters,
                                 const std::filesystem::path& out_path)
{
    style.validate();
    const std::string heading = "Cluster sizes";
    const auto sizes = clustering.sizes();
    const std::size_t drawn = std::min(n_clusters, sizes.size());
    if (drawn == 0) {
        return placeholder(style, heading, out_path);
    }
    svg::Document doc(style.width, style.height);
    title(doc, style, heading);
    Frame f = plot_frame(style);
    f.w = std::max(10.0, f.w + kRight - 60.0);
    const double row = f.h / static_cast<double>(drawn);
    const double bar = row * 0.7;
    const double max_size = static_cast<double>(sizes[0]);
    doc.line(f.x0, f.y0, f.x0, f.bottom(), kTextColor);
    for (std::size_t c = 0; c < drawn; ++c) {
        const double y = f.y0 + row * static_cast<double>(c) + (row - bar) / 2.0;
        const double w = static_cast<double>(sizes[c]) / max_size * f.w;
        doc.text(f.x0 - 6.0, y + bar / 2.0 + 4.0, fmt::format("cluster {}", c), style.axis_font_size, "end");
        doc.rect(f.x0, y, w, bar, color_at(style, c),
                 fmt::format("class=\"bar\" data-cluster=\"{}\" data-value=\"{}\"", c, sizes[c]));
        doc.text(f.x0 + w + 4.0, y + bar / 2.0 + 4.0, std::to_string(sizes[c]), style.axis_font_size);
    }
    return finish(doc, out_path);
}

} // namespace citenet
