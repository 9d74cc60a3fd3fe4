#include "crwb/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crwb::io {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

template <typename S, typename Fmt>
std::string layers_csv(const std::vector<PeriodicField<S>>& layers, Fmt fmt) {
    std::ostringstream os;
    os << "step";
    if (!layers.empty())
        for (std::size_t j = 0; j < layers.front().size(); ++j) os << ',' << j;
    os << '\n';
    for (std::size_t t = 0; t < layers.size(); ++t) {
        os << t;
        for (const S& x : layers[t]) os << ',' << fmt(x);
        os << '\n';
    }
    return os.str();
}

}  // namespace

std::string trajectory_csv(const std::vector<PeriodicField<double>>& layers) {
    return layers_csv(layers, [](double x) { return format_double(x); });
}

std::string trajectory_csv(const std::vector<PeriodicField<ExtendedReal>>& layers) {
    return layers_csv(layers, [](ExtendedReal x) { return to_string(x); });
}

std::string diagnostics_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "step,sum_u,flow,min_u,max_u,min_vt,max_vt\n";
    for (std::size_t t = 0; t < traj.stats.size(); ++t) {
        const StepStats& st = traj.stats[t];
        os << t << ',' << format_double(st.occupancy_sum) << ',' << format_double(st.flow) << ','
           << format_double(st.min_occupancy) << ',' << format_double(st.max_occupancy) << ','
           << format_double(st.min_inflow_limit) << ',' << format_double(st.max_inflow_limit)
           << '\n';
    }
    return os.str();
}

std::string inflow_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "step";
    if (!traj.stats.empty())
        for (std::size_t j = 0; j < traj.stats.front().inflow.size(); ++j) os << ',' << j;
    os << '\n';
    for (std::size_t t = 0; t < traj.stats.size(); ++t) {
        os << t;
        for (double x : traj.stats[t].inflow) os << ',' << format_double(x);
        os << '\n';
    }
    return os.str();
}

std::string pgm_raster(const std::vector<PeriodicField<double>>& layers, double capacity) {
    if (layers.empty()) throw Error("empty trajectory");
    const std::size_t w = layers.front().size();
    const std::size_t h = layers.size();
    std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    out.reserve(out.size() + w * h);
    for (const auto& layer : layers) {
        for (double v : layer) {
            const double g = std::lround(255.0 * (1.0 - v / capacity));
            out.push_back(static_cast<char>(static_cast<unsigned char>(
                g < 0.0 ? 0 : (g > 255.0 ? 255 : g))));
        }
    }
    return out;
}

std::string diagram_csv(const std::vector<DiagramPoint>& points) {
    std::ostringstream os;
    os << "density,mean_flow,flow_std,samples\n";
    for (const DiagramPoint& p : points)
        os << format_double(p.density) << ',' << format_double(p.mean_flow) << ','
           << format_double(p.flow_std) << ',' << p.sample_count << '\n';
    return os.str();
}

namespace {

struct SvgFrame {
    static constexpr double width = 560, height = 420;
    static constexpr double left = 60, right = 20, top = 20, bottom = 50;
    double y_max;

    double px(double rho) const { return left + rho * (width - left - right); }
    double py(double q) const {
        return height - bottom - q / y_max * (height - top - bottom);
    }
};

}  // namespace

std::string diagram_svg(const std::vector<DiagramPoint>& points, double capacity, int vt_min) {
    double q_max = 0.0;
    for (const DiagramPoint& p : points) q_max = std::max(q_max, p.mean_flow);
    SvgFrame f{std::max(0.55, q_max * 1.15)};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
       << f.height << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << f.px(0) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(1) << "\" y2=\""
       << f.py(0) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << f.px(0) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(0) << "\" y2=\""
       << f.py(f.y_max) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double rho = i / 4.0;
        os << "<line x1=\"" << f.px(rho) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(rho)
           << "\" y2=\"" << f.py(0) + 4 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f.px(rho) << "\" y=\"" << f.py(0) + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << format_double(rho) << "</text>\n";
    }
    for (double q = 0.0; q <= f.y_max + 1e-12; q += 0.1) {
        os << "<line x1=\"" << f.px(0) - 4 << "\" y1=\"" << f.py(q) << "\" x2=\"" << f.px(0)
           << "\" y2=\"" << f.py(q) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f.px(0) - 8 << "\" y=\"" << f.py(q) + 4
           << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(std::round(q * 10) / 10)
           << "</text>\n";
    }
    os << "<text x=\"" << (f.px(0) + f.px(1)) / 2 << "\" y=\"" << f.height - 12
       << "\" font-size=\"12\" text-anchor=\"middle\">density</text>\n";
    os << "<text x=\"16\" y=\"" << f.py(f.y_max / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << f.py(f.y_max / 2) << ")\">flow</text>\n";

    // conjectured trapezoid min(rho, q*, 1-rho), dashed
    const double q_star = vt_min / (2.0 * capacity);
    os << "<polyline fill=\"none\" stroke=\"#888\" stroke-dasharray=\"5 4\" points=\""
       << f.px(0) << "," << f.py(0) << " " << f.px(q_star) << "," << f.py(q_star) << " "
       << f.px(1 - q_star) << "," << f.py(q_star) << " " << f.px(1) << "," << f.py(0) << "\"/>\n";

    for (const DiagramPoint& p : points)
        os << "<circle cx=\"" << f.px(p.density) << "\" cy=\"" << f.py(p.mean_flow)
           << "\" r=\"2.2\" fill=\"#1f4e9c\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::string limit_report_json(const LimitReport& report) {
    nlohmann::json j;
    j["epsilons"] = report.epsilons;
    j["max_abs_error"] = report.max_abs_error;
    j["converged"] = report.converged;
    j["rate_constant"] = report.rate_constant;
    return j.dump(2) + "\n";
}

std::string transition_estimate_json(const TransitionEstimate& est) {
    nlohmann::json j;
    j["estimated"] = {{"rho_low", est.rho_low},
                      {"rho_high", est.rho_high},
                      {"q_star", est.q_star}};
    j["conjectured"] = {{"rho_low", est.conjectured_rho_low},
                        {"rho_high", est.conjectured_rho_high},
                        {"q_star", est.conjectured_q}};
    j["degenerate"] = est.degenerate;
    return j.dump(2) + "\n";
}

}  // namespace crwb::io
