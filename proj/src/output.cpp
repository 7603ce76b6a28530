#include "signopt/output.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace signopt {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trajectory_csv(const RunRecord& r) {
    const std::size_t n = r.recorded.empty() ? 0 : r.recorded.front().x.size();
    std::string out = "k";
    for (std::size_t i = 0; i < n; ++i) out += ",x_" + std::to_string(i);
    out += ",v,xbar,d,min_gap\n";
    for (const auto& s : r.recorded) {
        out += std::to_string(s.k);
        for (const double xi : s.x) {
            out += ',';
            out += format_number(xi);
        }
        for (const double m : {s.v, s.xbar, s.d, s.min_gap}) {
            out += ',';
            out += format_number(m);
        }
        out += '\n';
    }
    return out;
}

namespace {

// Ticks at 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi, int target) {
    std::vector<double> ticks;
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return ticks;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

std::string fixed(double v, int digits = 2) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

}  // namespace

std::string trajectory_svg(const RunRecord& r, const SvgOptions& options) {
    const double w = options.width;
    const double h = options.height;
    const double left = 70, right = 20, top = options.title.empty() ? 20 : 40, bottom = 50;
    const double pw = w - left - right;
    const double ph = h - top - bottom;

    double k_max = 1.0;
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    for (const auto& s : r.recorded) {
        k_max = std::max(k_max, static_cast<double>(s.k));
        for (const double x : s.x) {
            y_lo = std::min(y_lo, x);
            y_hi = std::max(y_hi, x);
        }
    }
    if (r.optimum) {
        y_lo = std::min(y_lo, r.optimum->lo);
        y_hi = std::max(y_hi, r.optimum->hi);
    }
    if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
    if (y_hi - y_lo < 1e-9) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double k) { return left + pw * k / k_max; };
    auto py = [&](double y) { return top + ph * (y_hi - y) / (y_hi - y_lo); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) +
           "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " +
           std::to_string(options.width) + " " + std::to_string(options.height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        out += "<text x=\"" + fixed(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
               escape_xml(options.title) + "</text>\n";
    }
    if (r.optimum) {
        const double y0 = py(r.optimum->hi);
        const double y1 = py(r.optimum->lo);
        out += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(y0) + "\" width=\"" + fixed(pw) +
               "\" height=\"" + fixed(std::max(y1 - y0, 1.0)) +
               "\" fill=\"#999999\" fill-opacity=\"0.25\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
    }
    out += "<g stroke=\"black\" fill=\"none\">\n";
    out += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" + fixed(left + pw) +
           "\" y2=\"" + fixed(top + ph) + "\"/>\n";
    out += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) +
           "\" y2=\"" + fixed(top + ph) + "\"/>\n";
    out += "</g>\n";
    for (const double t : nice_ticks(0.0, k_max, 6)) {
        out += "<line x1=\"" + fixed(px(t)) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" + fixed(px(t)) +
               "\" y2=\"" + fixed(top + ph + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(px(t)) + "\" y=\"" + fixed(top + ph + 18) +
               "\" text-anchor=\"middle\">" + format_number(t) + "</text>\n";
    }
    for (const double t : nice_ticks(y_lo, y_hi, 6)) {
        out += "<line x1=\"" + fixed(left - 5) + "\" y1=\"" + fixed(py(t)) + "\" x2=\"" + fixed(left) +
               "\" y2=\"" + fixed(py(t)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(py(t) + 4) +
               "\" text-anchor=\"end\">" + format_number(t) + "</text>\n";
    }
    out += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(h - 12) +
           "\" text-anchor=\"middle\">k</text>\n";
    out += "<text x=\"16\" y=\"" + fixed(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fixed(top + ph / 2) + ")\">state</text>\n";

    // Thin long records to at most ~2000 vertices per line; the last point is always kept.
    const std::size_t n = r.recorded.empty() ? 0 : r.recorded.front().x.size();
    const std::size_t stride = std::max<std::size_t>(1, r.recorded.size() / 2000);
    for (std::size_t i = 0; i < n; ++i) {
        out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + std::string(palette(i)) +
               "\" points=\"";
        for (std::size_t t = 0; t < r.recorded.size(); ++t) {
            if (t % stride != 0 && t + 1 != r.recorded.size()) continue;
            const auto& s = r.recorded[t];
            out += fixed(px(static_cast<double>(s.k))) + "," + fixed(py(s.x[i])) + " ";
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) +
           "_" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

}  // namespace signopt
