#include "qwalk/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qwalk::cli {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string provenance_header(const std::string& command, Route route, const RunConfig& run,
                              const std::string& comment) {
    std::ostringstream s;
    s << comment << "qwalk " << command << '\n';
    s << comment << "route: " << to_string(route) << '\n';
    s << comment << "config: " << to_json_string(run) << '\n';
    return s.str();
}

std::string distribution_csv(const std::string& command, const RunConfig& run, const MomentumDistribution& dist) {
    RunConfig resolved = run;
    resolved.walk.momentum_cutoff = dist.cutoff;
    std::ostringstream s;
    s << provenance_header(command, dist.route, resolved);
    s << "# leakage: " << format_number(dist.leakage) << '\n';
    s << "# validity_product: " << format_number(dist.validity_product) << '\n';
    s << "n,P,P1,P2\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        s << dist.n_at(i) << ',' << format_number(dist.total[i]) << ',' << format_number(dist.p1[i]) << ','
          << format_number(dist.p2[i]) << '\n';
    }
    return s.str();
}

namespace {

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr const char* kColours[] = {"#4c72b0", "#dd5130", "#2a9d50", "#8a5cc2", "#444444"};

}  // namespace

std::string render_svg(const std::string& title, const std::vector<PlotSeries>& series,
                       const std::string& provenance) {
    constexpr double width = 900.0, height = 420.0;
    constexpr double left = 60.0, right = 20.0, top = 40.0, bottom = 50.0;
    // Visible range: classes carrying more than 1e-6 of the largest value.
    double pmax = 0.0;
    int lo = 0, hi = 1;
    for (const auto& s : series) {
        for (double p : s.dist->total) pmax = std::max(pmax, p);
    }
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.dist->size(); ++i) {
            if (s.dist->total[i] > 1e-6 * pmax) {
                const int n = s.dist->n_at(i);
                lo = any ? std::min(lo, n) : n;
                hi = any ? std::max(hi, n) : n;
                any = true;
            }
        }
    }
    // Symmetric about n = 1/2 so the mirror line sits in the middle.
    const int reach = std::max(1 - lo, hi);
    lo = 1 - reach;
    hi = reach;
    if (!(pmax > 0.0)) pmax = 1.0;
    const double span = hi - lo + 1;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    auto xpos = [&](double n) { return left + (n - lo + 0.5) / span * plot_w; };
    auto ypos = [&](double p) { return top + plot_h * (1.0 - p / (1.05 * pmax)); };

    std::ostringstream s;
    s.precision(6);
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<!--\n" << escape_xml(provenance) << "-->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
    const int step = std::max(1, static_cast<int>(std::ceil(span / 40.0)) * 5);
    for (int n = lo; n <= hi; ++n) {
        if (n % step != 0) continue;
        s << "<line x1=\"" << xpos(n) << "\" y1=\"" << top << "\" x2=\"" << xpos(n) << "\" y2=\"" << top + plot_h
          << "\" stroke=\"#dddddd\"/>\n";
        s << "<text x=\"" << xpos(n) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">" << n
          << "</text>\n";
    }
    for (int k = 1; k <= 4; ++k) {
        const double p = 1.05 * pmax * k / 4.0;
        s << "<line x1=\"" << left << "\" y1=\"" << ypos(p) << "\" x2=\"" << left + plot_w << "\" y2=\"" << ypos(p)
          << "\" stroke=\"#eeeeee\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << ypos(p) + 4 << "\" text-anchor=\"end\">" << format_number(p).substr(0, 6)
          << "</text>\n";
    }
    s << "<line x1=\"" << xpos(0.5) << "\" y1=\"" << top << "\" x2=\"" << xpos(0.5) << "\" y2=\"" << top + plot_h
      << "\" stroke=\"#888888\" stroke-dasharray=\"4,3\"/>\n";
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">momentum class n</text>\n";

    const double bar = 0.8 * plot_w / span;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& d = *series[k].dist;
        const char* colour = kColours[k % std::size(kColours)];
        if (k == 0) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                const int n = d.n_at(i);
                if (n < lo || n > hi) continue;
                const double y = ypos(d.total[i]);
                s << "<rect x=\"" << xpos(n) - bar / 2 << "\" y=\"" << y << "\" width=\"" << bar << "\" height=\""
                  << top + plot_h - y << "\" fill=\"" << colour << "\" fill-opacity=\"0.7\"/>\n";
            }
        } else {
            s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < d.size(); ++i) {
                const int n = d.n_at(i);
                if (n >= lo && n <= hi) s << xpos(n) << ',' << ypos(d.total[i]) << ' ';
            }
            s << "\"/>\n";
        }
        s << "<text x=\"" << left + plot_w - 8 << "\" y=\"" << top + 16 + 16 * k << "\" text-anchor=\"end\" fill=\""
          << colour << "\">" << escape_xml(series[k].label) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw ConfigError("cannot write " + path.string());
}

}  // namespace qwalk::cli
