#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mems4/errors.hpp"
#include "mems4/grid.hpp"
#include "mems4/steady.hpp"
#include "mems4/trajectory.hpp"

namespace mems4 {

// Shortest-round-trip decimal form: 17 significant digits keeps every
// emitted CSV byte-reproducible and re-parseable to the exact double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(const std::string& path,
                                 const Trajectory& traj,
                                 bool hyperbolic = false) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    os << "t,min_u,u_probe,l2_ut,energy,dist_to_steady";
    if (hyperbolic) os << ",l2_v";
    os << "\n";
    for (const auto& s : traj.samples) {
        os << format_double(s.t) << ',' << format_double(s.min_u) << ','
           << format_double(s.u_probe) << ',' << format_double(s.l2_ut) << ','
           << format_double(s.energy) << ','
           << (std::isfinite(s.dist_to_steady) ? format_double(s.dist_to_steady)
                                               : std::string());
        if (hyperbolic) os << ',' << format_double(s.l2_v);
        os << "\n";
    }
}

inline void write_profile_csv(const std::string& path, const Grid& g,
                              const Field& u) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    os << "x,u\n";
    for (int i = 0; i < g.interior_count(); ++i)
        os << format_double(g.node(i)) << ',' << format_double(u[i]) << "\n";
}

inline std::string snapshot_filename(double t) {
    std::ostringstream name;
    name << "snap_t" << format_double(t) << ".csv";
    return name.str();
}

inline void write_snapshots(const std::string& dir, const Grid& g,
                            const Trajectory& traj) {
    for (const auto& [t, u] : traj.snapshots)
        write_profile_csv(dir + "/" + snapshot_filename(t), g, u);
}

// Branch export: lambda, min_psi, residual_norm, smallest_eig per row.
inline void write_branch_csv(const std::string& path, const Branch& br) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    os << "lambda,min_psi,residual_norm,smallest_eig\n";
    for (const auto& s : br.points) {
        os << format_double(s.lambda) << ',' << format_double(s.min_value)
           << ',' << format_double(s.residual_norm) << ','
           << (s.smallest_eig ? format_double(*s.smallest_eig) : std::string())
           << "\n";
    }
}

// ---------------------------------------------------------------------------
// Run configuration files: flat `key = value` text, # comments.

enum class InitKind { Zero, ScaledBump, File };

struct RunConfigFile {
    std::string model = "parabolic";  // parabolic | hyperbolic
    double B = 0.01;
    double T = 1.0;
    double lambda = 0.0;
    double kappa = 0.5;
    double a = -1.0;
    double b = 1.0;
    int N = 256;
    double dt = 1e-3;
    double t_end = 200.0;
    InitKind u0_kind = InitKind::Zero;
    double u0_amplitude = 0.0;
    std::string u0_path;
    InitKind u1_kind = InitKind::Zero;
    double u1_amplitude = 0.0;
    std::string u1_path;
    std::vector<double> probes{0.0};
    std::vector<double> snapshot_times;
    std::string output_dir = "out";

    void validate() const {
        if (model != "parabolic" && model != "hyperbolic")
            throw ValidationError("model must be parabolic or hyperbolic");
        Params p{B, T, lambda, kappa};
        p.validate();
        if (!(b > a)) throw ValidationError("domain requires b > a");
        if (N < 8) throw ValidationError("N must be >= 8");
        if (!(dt > 0.0)) throw ValidationError("dt must be positive");
        if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace detail

inline RunConfigFile parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file: " + path);
    RunConfigFile cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected key = value");
        std::string key = detail::trim(s.substr(0, eq));
        std::string val = detail::trim(s.substr(eq + 1));
        // strip optional quotes
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
            val = val.substr(1, val.size() - 2);
        try {
            if (key == "model") cfg.model = val;
            else if (key == "B") cfg.B = std::stod(val);
            else if (key == "T") cfg.T = std::stod(val);
            else if (key == "lambda") cfg.lambda = std::stod(val);
            else if (key == "kappa") cfg.kappa = std::stod(val);
            else if (key == "a") cfg.a = std::stod(val);
            else if (key == "b") cfg.b = std::stod(val);
            else if (key == "N") cfg.N = std::stoi(val);
            else if (key == "dt") cfg.dt = std::stod(val);
            else if (key == "t_end") cfg.t_end = std::stod(val);
            else if (key == "u0_kind" || key == "u1_kind") {
                InitKind k;
                if (val == "zero") k = InitKind::Zero;
                else if (val == "scaled_bump") k = InitKind::ScaledBump;
                else if (val == "file") k = InitKind::File;
                else throw ParseError("unknown init kind: " + val);
                (key == "u0_kind" ? cfg.u0_kind : cfg.u1_kind) = k;
            }
            else if (key == "u0_amplitude") cfg.u0_amplitude = std::stod(val);
            else if (key == "u1_amplitude") cfg.u1_amplitude = std::stod(val);
            else if (key == "u0_path") cfg.u0_path = val;
            else if (key == "u1_path") cfg.u1_path = val;
            else if (key == "probes") cfg.probes = detail::parse_list(val);
            else if (key == "snapshot_times")
                cfg.snapshot_times = detail::parse_list(val);
            else if (key == "output_dir") cfg.output_dir = val;
            else
                throw ParseError("unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": bad value for " + key);
        }
    }
    cfg.validate();
    return cfg;
}

inline Field read_field_csv(const std::string& path, int expected) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open field file: " + path);
    Field u;
    std::string line;
    std::getline(is, line);  // header x,u
    while (std::getline(is, line)) {
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) continue;
        u.push_back(std::stod(line.substr(comma + 1)));
    }
    if (static_cast<int>(u.size()) != expected)
        throw ValidationError("field file size does not match grid: " + path);
    return u;
}

// Initial data factory per the config: zero, a scaled clamped bump
// amplitude*(1-x^2)^2 on (-1,1)-like domains, or samples from a file.
inline Field make_initial_field(const RunConfigFile& cfg, const Grid& g,
                                InitKind kind, double amplitude,
                                const std::string& path) {
    switch (kind) {
        case InitKind::Zero:
            return Field(g.interior_count(), 0.0);
        case InitKind::ScaledBump:
            return sample(g, [&](double x) {
                double s = 2.0 * (x - g.a) / (g.b - g.a) - 1.0;
                double w = (1.0 - s * s);
                return amplitude * w * w;
            });
        case InitKind::File:
            return read_field_csv(path, g.interior_count());
    }
    return Field(g.interior_count(), 0.0);
}

}  // namespace mems4
