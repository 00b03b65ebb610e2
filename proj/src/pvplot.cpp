#include "pvaudit/pvplot.hpp"

#include "pvaudit/csv.hpp"
#include "pvaudit/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pvaudit::pvplot {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
}

PValuePlot assemble(std::vector<PValueEntry> entries, double alpha) {
    if (entries.empty()) {
        throw UsageError("cannot build a p-value plot from an empty dataset");
    }
    // Stable: equal p keep input order. log_p breaks ties among floored p.
    std::stable_sort(entries.begin(), entries.end(), [](const PValueEntry& a, const PValueEntry& b) {
        if (a.p != b.p) {
            return a.p < b.p;
        }
        return a.log_p.neg_log10_p() > b.log_p.neg_log10_p();
    });

    PValuePlot plot;
    plot.alpha = alpha;
    plot.k = entries.size();
    std::vector<double> sorted;
    sorted.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        PValueEntry& e = entries[i];
        e.rank = i + 1;
        sorted.push_back(e.p);
        switch (e.sign) {
        case corrstats::Sign::positive:
            ++plot.n_positive;
            break;
        case corrstats::Sign::negative:
            ++plot.n_negative;
            break;
        case corrstats::Sign::zero:
            ++plot.n_zero;
            break;
        }
        if (e.p < alpha) {
            ++plot.n_below_alpha;
        }
    }
    plot.ks_d = ks_uniform_distance(sorted);
    plot.entries = std::move(entries);
    return plot;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

// Smallest of 1, 2, 5 x 10^e that is >= raw.
std::size_t nice_step(double raw) {
    double magnitude = 1.0;
    while (magnitude * 10.0 <= raw) {
        magnitude *= 10.0;
    }
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * magnitude >= raw) {
            return static_cast<std::size_t>(m * magnitude);
        }
    }
    return static_cast<std::size_t>(10.0 * magnitude);
}

using RowPrefix = std::function<std::vector<std::string>(const PValueEntry&)>;

std::string render_rows(const PValuePlot& plot, const multiplicity::AdjustmentResult& adj,
                        const std::vector<std::string>& header_prefix, const RowPrefix& prefix,
                        const TableOptions& options) {
    if (adj.entries.empty()) {
        throw UsageError("render_table: adjustment is empty");
    }
    if (adj.entries.size() > plot.k) {
        throw UsageError("render_table: adjustment has more entries than the plot");
    }
    for (const auto& e : adj.entries) {
        if (e.original_index >= plot.k || plot.entries[e.original_index].p != e.unadjusted) {
            throw UsageError("render_table: adjustment was not computed over this plot's entries");
        }
    }

    const std::string delim(1, options.delimiter);
    std::string out;
    std::vector<std::string> header = header_prefix;
    header.insert(header.begin(), "rank");
    header.emplace_back("p");
    header.emplace_back("p_adjusted");
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? delim : "") + header[i];
    }
    out += '\n';

    for (const auto& a : adj.by_rank()) {
        const PValueEntry& entry = plot.entries[a.original_index];
        std::vector<std::string> cells{std::to_string(entry.rank)};
        for (auto& cell : prefix(entry)) {
            cells.push_back(csv::escape(cell, options.delimiter));
        }
        cells.push_back(fmt::format("{:.{}f}", a.unadjusted, options.decimals));
        cells.push_back(fmt::format("{:.{}f}", a.adjusted, options.decimals));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? delim : "") + cells[i];
        }
        out += '\n';
    }
    return out;
}

} // namespace

double ks_uniform_distance(std::span<const double> sorted_ps) {
    const double k = static_cast<double>(sorted_ps.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_ps.size(); ++i) {
        const double p = sorted_ps[i];
        const double upper = static_cast<double>(i + 1) / k;
        const double lower = static_cast<double>(i) / k;
        d = std::max({d, std::abs(upper - p), std::abs(lower - p)});
    }
    return d;
}

PValuePlot build_plot(const dataset::Dataset& data, double alpha, corrstats::Sidedness sidedness) {
    require_alpha(alpha);
    std::vector<PValueEntry> entries;
    entries.reserve(data.records.size());
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const corrstats::CorrelationTest t = corrstats::correlation_p(data.records[i].effect, sidedness);
        entries.push_back(PValueEntry{t.p, t.log_p, 0, t.sign, i});
    }
    return assemble(std::move(entries), alpha);
}

PValuePlot build_plot(std::span<const PValueInput> inputs, double alpha) {
    require_alpha(alpha);
    std::vector<PValueEntry> entries;
    entries.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const PValueInput& in = inputs[i];
        if (!(in.p >= 0.0 && in.p <= 1.0)) {
            throw DomainError("p-value at index " + std::to_string(i) + " must lie in [0, 1]");
        }
        numerics::LogTail log_p = in.log_p.value_or(
            in.p > 0.0 ? numerics::LogTail::from_probability(in.p)
                       : numerics::LogTail::from_neg_log10(HUGE_VAL));
        entries.push_back(PValueEntry{in.p, log_p, 0, in.sign, i});
    }
    return assemble(std::move(entries), alpha);
}

multiplicity::AdjustmentResult adjust_top(const PValuePlot& plot, std::size_t top,
                                          std::optional<std::size_t> family) {
    const std::size_t s = std::min(top, plot.k);
    std::vector<double> ps;
    ps.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        ps.push_back(plot.entries[i].p);
    }
    return multiplicity::bh_adjust(ps, family.value_or(plot.k));
}

std::string render_svg(const PValuePlot& plot, const SvgOptions& options) {
    if (plot.k == 0 || plot.entries.size() != plot.k) {
        throw UsageError("render_svg: invalid plot");
    }
    constexpr double left = 64.0;
    constexpr double right = 24.0;
    constexpr double top = 40.0;
    constexpr double bottom = 52.0;
    const double width = options.width;
    const double height = options.height;
    const double area_w = width - left - right;
    const double area_h = height - top - bottom;

    const std::size_t step = nice_step(static_cast<double>(plot.k) / 8.0);
    const std::size_t x_max = ((plot.k + step - 1) / step) * step;
    const auto x_of = [&](double rank) { return left + rank / static_cast<double>(x_max) * area_w; };
    const auto y_of = [&](double p) { return top + (1.0 - p) * area_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\">\n",
        options.width, options.height, options.width, options.height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                       options.width, options.height);
    if (!options.title.empty()) {
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
            "text-anchor=\"middle\">{}</text>\n",
            width / 2.0, xml_escape(options.title));
    }

    // axes
    svg += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left,
                       y_of(0.0), left + area_w, y_of(0.0));
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left,
                       y_of(0.0), left, y_of(1.0));
    svg += "</g>\n";

    svg += "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (std::size_t t = 0; t <= x_max; t += step) {
        const double x = x_of(static_cast<double>(t));
        svg += fmt::format(
            "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>"
            "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
            x, y_of(0.0), x, y_of(0.0) + 5.0, x, y_of(0.0) + 18.0, t);
    }
    for (int t = 0; t <= 10; t += 2) {
        const double p = t / 10.0;
        svg += fmt::format(
            "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>"
            "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n",
            left - 5.0, y_of(p), left, y_of(p), left - 8.0, y_of(p) + 4.0, p);
    }
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", left + area_w / 2.0,
        height - 12.0, xml_escape(options.x_label));
    svg += fmt::format(
        "<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
        top + area_h / 2.0, top + area_h / 2.0, xml_escape(options.y_label));
    svg += "</g>\n";

    const double k = static_cast<double>(plot.k);
    svg += fmt::format(
        "<line class=\"reference\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
        "stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
        x_of(1.0), y_of(1.0 / k), x_of(k), y_of(1.0));

    svg += "<g class=\"markers\" stroke=\"black\" stroke-width=\"1\">\n";
    for (const PValueEntry& e : plot.entries) {
        const double x = x_of(static_cast<double>(e.rank));
        const double y = y_of(e.p);
        switch (e.sign) {
        case corrstats::Sign::negative:
            svg += fmt::format(
                "<polygon class=\"negative\" points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" "
                "fill=\"black\"/>\n",
                x - 4.0, y - 3.5, x + 4.0, y - 3.5, x, y + 4.0);
            break;
        case corrstats::Sign::positive:
            svg += fmt::format(
                "<circle class=\"positive\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"black\"/>\n", x, y);
            break;
        case corrstats::Sign::zero:
            svg += fmt::format(
                "<circle class=\"zero\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"none\"/>\n", x, y);
            break;
        }
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

std::string render_table(const PValuePlot& plot, const multiplicity::AdjustmentResult& adj,
                         const dataset::Dataset& source, const TableOptions& options) {
    return render_rows(
        plot, adj, {"criterion", "r", "n"},
        [&](const PValueEntry& e) -> std::vector<std::string> {
            if (e.record_ref >= source.records.size()) {
                throw UsageError("render_table: plot does not come from this dataset");
            }
            const auto& rec = source.records[e.record_ref];
            return {rec.criterion, fmt::format("{}", rec.effect.r()), std::to_string(rec.effect.n())};
        },
        options);
}

std::string render_table(const PValuePlot& plot, const multiplicity::AdjustmentResult& adj,
                         std::span<const std::string> labels, const TableOptions& options) {
    return render_rows(
        plot, adj, {"label"},
        [&](const PValueEntry& e) -> std::vector<std::string> {
            if (e.record_ref >= labels.size()) {
                throw UsageError("render_table: missing label for entry");
            }
            return {labels[e.record_ref]};
        },
        options);
}

} // namespace pvaudit::pvplot
