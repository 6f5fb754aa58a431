#include "a0c/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "a0c/experiment.hpp"

namespace a0c {

namespace {

struct Series {
    std::string label;
    std::vector<double> x;     // mean cumulative accounted steps per episode
    std::vector<double> mean;  // smoothed return, mean over repetitions
    std::vector<double> lo;    // min over repetitions
    std::vector<double> hi;    // max over repetitions
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

Series build_series(const std::string& path) {
    const std::vector<RunRecord> records = read_csv(path);
    if (records.empty()) {
        throw std::runtime_error("plot: no rows in " + path);
    }

    std::map<int, std::vector<RunRecord>> by_rep;
    for (const RunRecord& r : records) {
        by_rep[r.repetition].push_back(r);
    }

    // Per repetition: smoothed returns and cumulative accounted steps.
    std::vector<std::vector<double>> smoothed, cumsteps;
    for (auto& [rep, recs] : by_rep) {
        std::sort(recs.begin(), recs.end(),
                  [](const RunRecord& a, const RunRecord& b) {
                      return a.episode < b.episode;
                  });
        std::vector<double> returns;
        std::vector<double> steps;
        double acc = 0.0;
        for (const RunRecord& r : recs) {
            returns.push_back(r.episode_return);
            acc += static_cast<double>(r.accounted_steps);
            steps.push_back(acc);
        }
        smoothed.push_back(trailing_mean(returns, 10));
        cumsteps.push_back(std::move(steps));
    }

    Series s;
    const long n_trace = records[0].real_steps > 0
                             ? records[0].accounted_steps / records[0].real_steps
                             : 0;
    s.label = "N_trace=" + std::to_string(n_trace);

    std::size_t max_eps = 0;
    for (const auto& v : smoothed) {
        max_eps = std::max(max_eps, v.size());
    }
    for (std::size_t e = 0; e < max_eps; ++e) {
        double sum = 0.0, sum_x = 0.0;
        double lo = 0.0, hi = 0.0;
        int present = 0;
        for (std::size_t r = 0; r < smoothed.size(); ++r) {
            if (e >= smoothed[r].size()) continue;
            const double y = smoothed[r][e];
            if (present == 0) {
                lo = hi = y;
            } else {
                lo = std::min(lo, y);
                hi = std::max(hi, y);
            }
            sum += y;
            sum_x += cumsteps[r][e];
            ++present;
        }
        s.x.push_back(sum_x / present);
        s.mean.push_back(sum / present);
        s.lo.push_back(lo);
        s.hi.push_back(hi);
    }
    return s;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Rounds a raw interval to a 1/2/5 tick step.
double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) step = 1.0;
    else if (norm <= 2.0) step = 2.0;
    else if (norm <= 5.0) step = 5.0;
    return step * mag;
}

}  // namespace

std::string plot_svg(const std::vector<std::string>& csv_paths) {
    if (csv_paths.empty()) {
        throw std::invalid_argument("plot: need at least one CSV");
    }
    std::vector<Series> series;
    for (const std::string& path : csv_paths) {
        series.push_back(build_series(path));
    }

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                x_min = x_max = s.x[i];
                y_min = s.lo[i];
                y_max = s.hi[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.lo[i]);
                y_max = std::max(y_max, s.hi[i]);
            }
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) {
        y_max += 0.5;
        y_min -= 0.5;
    }

    const double width = 960, height = 600;
    const double ml = 80, mr = 24, mt = 24, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
           "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) +
           " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes with 1/2/5 ticks.
    svg += "<g stroke=\"#333\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
           fmt(ml + pw) + "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" +
           fmt(ml) + "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
    svg += "</g>\n";

    const double x_step = nice_step(x_max - x_min, 6);
    for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9;
         t += x_step) {
        svg += "<line x1=\"" + fmt(sx(t)) + "\" y1=\"" + fmt(mt + ph) +
               "\" x2=\"" + fmt(sx(t)) + "\" y2=\"" + fmt(mt + ph + 5) +
               "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(sx(t)) + "\" y=\"" + fmt(mt + ph + 20) +
               "\" font-family=\"sans-serif\" font-size=\"12\" "
               "text-anchor=\"middle\">" +
               fmt(t) + "</text>\n";
    }
    const double y_step = nice_step(y_max - y_min, 6);
    for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-9;
         t += y_step) {
        svg += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(sy(t)) +
               "\" x2=\"" + fmt(ml) + "\" y2=\"" + fmt(sy(t)) +
               "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(sy(t) + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\" "
               "text-anchor=\"end\">" +
               fmt(t) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
           "\" font-family=\"sans-serif\" font-size=\"14\" "
           "text-anchor=\"middle\">accounted environment steps</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(mt + ph / 2) +
           "\" font-family=\"sans-serif\" font-size=\"14\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt(mt + ph / 2) +
           ")\">episode return (trailing-10 mean)</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
        if (s.x.size() == 1) {
            svg += "<circle cx=\"" + fmt(sx(s.x[0])) + "\" cy=\"" +
                   fmt(sy(s.mean[0])) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
            continue;
        }
        // min-max band
        std::string band = "<path d=\"M";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            band += fmt(sx(s.x[i])) + " " + fmt(sy(s.hi[i])) + " L";
        }
        for (std::size_t i = s.x.size(); i-- > 0;) {
            band += fmt(sx(s.x[i])) + " " + fmt(sy(s.lo[i]));
            if (i > 0) band += " L";
        }
        band += " Z\" fill=\"" + std::string(color) +
                "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        svg += band;

        std::string line = "<polyline fill=\"none\" stroke=\"" +
                           std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) line += " ";
            line += fmt(sx(s.x[i])) + "," + fmt(sy(s.mean[i]));
        }
        line += "\"/>\n";
        svg += line;
    }

    // Legend, top right.
    const double lx = ml + pw - 150, ly = mt + 10;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
        const double y = ly + 18 * static_cast<double>(k);
        svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               fmt(lx + 24) + "\" y2=\"" + fmt(y) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape_xml(series[k].label) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void emit_plot(const std::vector<std::string>& csv_paths,
               const std::string& out_path) {
    const std::string svg = plot_svg(csv_paths);
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("plot: cannot open " + out_path);
    }
    os.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!os) {
        throw std::runtime_error("plot: write failed for " + out_path);
    }
}

}  // namespace a0c
