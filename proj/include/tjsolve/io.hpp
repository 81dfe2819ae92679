#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tjsolve/errors.hpp"
#include "tjsolve/field.hpp"
#include "tjsolve/frame.hpp"
#include "tjsolve/oracles.hpp"
#include "tjsolve/picard.hpp"

namespace tjsolve {

namespace fs = std::filesystem;

// ---- small text helpers -----------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': expected a finite number, got '" + v + "'");
    }
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int i = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
    }
}

inline std::string format_double(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

} // namespace detail

/// Writes through a temporary file in the same directory, then renames it into place.
inline void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        body(os);
        os.flush();
        if (!os) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
}

// ---- run configuration -----------------------------------------------------

/// One Fourier term k, a cos(2 pi k y) + b sin(2 pi k y).
struct FourierTerm {
    int k;
    double a;
    double b;
};

struct BoundarySpec {
    std::optional<FamilySpec> family;
    std::array<std::vector<FourierTerm>, 3> terms;
};

[[nodiscard]] inline FamilySpec parse_family(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("family: expected translate:cx,cy or rotate:beta");
    const std::string name = detail::trim(text.substr(0, colon));
    const auto args = detail::split(text.substr(colon + 1), ',');
    if (name == "translate" && args.size() == 2) {
        return {FamilyKind::translate, Vec2(detail::parse_double("family", args[0]), detail::parse_double("family", args[1])), 0.0};
    }
    if (name == "rotate" && args.size() == 1) return {FamilyKind::rotate, Vec2::Zero(), detail::parse_double("family", args[0])};
    throw ConfigError("family: cannot parse '" + text + "'");
}

[[nodiscard]] inline std::string format_family(const FamilySpec& f) {
    if (f.kind == FamilyKind::translate) {
        return "translate:" + detail::format_double(f.c.x()) + "," + detail::format_double(f.c.y());
    }
    return "rotate:" + detail::format_double(f.beta);
}

/// "k,a,b; k,a,b; ..."
[[nodiscard]] inline std::vector<FourierTerm> parse_terms(const std::string& key, const std::string& text) {
    std::vector<FourierTerm> out;
    for (const auto& t : detail::split(text, ';')) {
        if (t.empty()) continue;
        const auto f = detail::split(t, ',');
        if (f.size() != 3) throw ConfigError("'" + key + "': each term needs k,a,b");
        const FourierTerm term{detail::parse_int(key, f[0]), detail::parse_double(key, f[1]), detail::parse_double(key, f[2])};
        if (term.k < 0) throw ConfigError("'" + key + "': negative wavenumber");
        out.push_back(term);
    }
    return out;
}

[[nodiscard]] inline std::string format_terms(const std::vector<FourierTerm>& terms) {
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += "; ";
        s += std::to_string(t.k) + "," + detail::format_double(t.a) + "," + detail::format_double(t.b);
    }
    return s;
}

struct RunConfig {
    double delta = 0.25;
    double alpha = 0.5;
    int nx = 48;
    int ny = 64;
    double tol = 1e-10;
    int max_iter = 50;
    std::optional<double> r_guard;
    std::optional<double> epsilon;
    BoundarySpec boundary;
    std::string out = "run";

    /// Applies one key=value setting.
    void set(const std::string& key, const std::string& value) {
        if (key == "delta") delta = detail::parse_double(key, value);
        else if (key == "alpha") alpha = detail::parse_double(key, value);
        else if (key == "nx") nx = detail::parse_int(key, value);
        else if (key == "ny") ny = detail::parse_int(key, value);
        else if (key == "tol") tol = detail::parse_double(key, value);
        else if (key == "max_iter") max_iter = detail::parse_int(key, value);
        else if (key == "r_guard") r_guard = detail::parse_double(key, value);
        else if (key == "epsilon") epsilon = detail::parse_double(key, value);
        else if (key == "family") boundary.family = parse_family(value);
        else if (key == "phi1") boundary.terms[0] = parse_terms(key, value);
        else if (key == "phi2") boundary.terms[1] = parse_terms(key, value);
        else if (key == "phi3") boundary.terms[2] = parse_terms(key, value);
        else if (key == "out") out = value;
        else throw ConfigError("unknown configuration key '" + key + "'");
    }

    void validate() const {
        if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
        if (nx < 8) throw ConfigError("nx must be >= 8");
        if (ny < 8 || ny % 2 != 0) throw ConfigError("ny must be even and >= 8");
        if (boundary.family) {
            for (const auto& t : boundary.terms) {
                if (!t.empty()) throw ConfigError("give either a family or phi1..phi3 coefficients, not both");
            }
        }
        for (const auto& terms : boundary.terms) {
            for (const auto& t : terms) {
                if (t.k > ny / 2) throw ConfigError("boundary wavenumber " + std::to_string(t.k) + " exceeds ny/2");
            }
        }
        options().validate();
    }

    [[nodiscard]] SolveOptions options() const {
        SolveOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.r_guard = r_guard;
        o.alpha = alpha;
        o.epsilon = epsilon;
        return o;
    }

    [[nodiscard]] Grid2D grid() const { return {nx, ny}; }
    [[nodiscard]] CutoffProfile cutoff() const { return CutoffProfile(delta); }

    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const {
        std::vector<std::pair<std::string, std::string>> e{
            {"delta", detail::format_double(delta)}, {"alpha", detail::format_double(alpha)},
            {"nx", std::to_string(nx)},              {"ny", std::to_string(ny)},
            {"tol", detail::format_double(tol)},     {"max_iter", std::to_string(max_iter)}};
        if (r_guard) e.emplace_back("r_guard", detail::format_double(*r_guard));
        if (epsilon) e.emplace_back("epsilon", detail::format_double(*epsilon));
        if (boundary.family) e.emplace_back("family", format_family(*boundary.family));
        for (int s = 0; s < 3; ++s) {
            if (!boundary.terms[s].empty()) e.emplace_back("phi" + std::to_string(s + 1), format_terms(boundary.terms[s]));
        }
        e.emplace_back("out", out);
        return e;
    }
};

/// Reads flat key=value lines; '#' starts a comment.
inline void load_config(const fs::path& path, RunConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline void write_config(std::ostream& os, const RunConfig& cfg, const std::string& prefix = "") {
    for (const auto& [k, v] : cfg.entries()) os << prefix << k << "=" << v << "\n";
}

/// Boundary data on the y-grid. Families are evaluated without the magnitude guard.
[[nodiscard]] inline PeriodicTriple boundary_data(const BoundarySpec& spec, int ny) {
    if (spec.family) {
        const FamilySpec& f = *spec.family;
        const JunctionFrame frame = frame_vectors();
        return PeriodicTriple::sample(ny, [&](TripleIndex i, double) {
            return f.kind == FamilyKind::translate ? f.c.dot(frame.normal(i)) : f.beta;
        });
    }
    return PeriodicTriple::sample(ny, [&](TripleIndex i, double y) {
        double v = 0.0;
        for (const auto& t : spec.terms[i.slot()]) {
            v += t.a * std::cos(2.0 * pi * t.k * y) + t.b * std::sin(2.0 * pi * t.k * y);
        }
        return v;
    });
}

[[nodiscard]] inline BoundarySpec scaled(const BoundarySpec& spec, double t) {
    BoundarySpec s = spec;
    if (s.family) s.family = s.family->scaled(t);
    for (auto& terms : s.terms) {
        for (auto& term : terms) {
            term.a *= t;
            term.b *= t;
        }
    }
    return s;
}

// ---- field CSV ---------------------------------------------------------------

/// Comment lines carry the config; then "nx,ny,delta", its values, and nx rows of ny values.
inline void write_field_csv(std::ostream& os, const ScalarField& f, double delta,
                            const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "nx,ny,delta\n" << f.grid().nx() << "," << f.grid().ny() << "," << detail::format_double(delta) << "\n";
    os.precision(17);
    for (int j = 0; j < f.grid().nx(); ++j) {
        for (int m = 0; m < f.grid().ny(); ++m) os << (m ? "," : "") << f(j, m);
        os << "\n";
    }
}

struct LoadedField {
    ScalarField field;
    double delta;
};

[[nodiscard]] inline LoadedField read_field_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(is, line)) {
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(line);
    }
    if (rows.size() < 2 || rows[0] != "nx,ny,delta") throw std::runtime_error(path.string() + ": missing header");
    const auto head = detail::split(rows[1], ',');
    if (head.size() != 3) throw std::runtime_error(path.string() + ": malformed size line");
    const int nx = detail::parse_int("nx", head[0]);
    const int ny = detail::parse_int("ny", head[1]);
    const double delta = detail::parse_double("delta", head[2]);
    if (static_cast<int>(rows.size()) != nx + 2) throw std::runtime_error(path.string() + ": wrong number of rows");
    Eigen::MatrixXd v(nx, ny);
    for (int j = 0; j < nx; ++j) {
        const auto cells = detail::split(rows[j + 2], ',');
        if (static_cast<int>(cells.size()) != ny) throw std::runtime_error(path.string() + ": wrong row length");
        for (int m = 0; m < ny; ++m) v(j, m) = detail::parse_double("value", cells[m]);
    }
    return {ScalarField(Grid2D(nx, ny), std::move(v)), delta};
}

/// "y,phi1,phi2,phi3" per y-node.
inline void write_boundary_csv(std::ostream& os, const PeriodicTriple& phi) {
    os << "y,phi1,phi2,phi3\n";
    os.precision(17);
    for (int m = 0; m < phi.ny(); ++m) {
        os << static_cast<double>(m) / phi.ny() << "," << phi[0](m) << "," << phi[1](m) << "," << phi[2](m) << "\n";
    }
}

[[nodiscard]] inline PeriodicTriple read_boundary_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
    }
    if (detail::trim(line) != "y,phi1,phi2,phi3") throw std::runtime_error(path.string() + ": missing header");
    std::array<std::vector<double>, 3> cols;
    while (std::getline(is, line)) {
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = detail::split(line, ',');
        if (cells.size() != 4) throw std::runtime_error(path.string() + ": malformed row");
        for (int s = 0; s < 3; ++s) cols[s].push_back(detail::parse_double("phi", cells[s + 1]));
    }
    auto map = [](const std::vector<double>& c) { return PeriodicMap(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size())); };
    return {map(cols[0]), map(cols[1]), map(cols[2])};
}

// ---- solve report -----------------------------------------------------------

/// One row per iteration.
inline void write_report_csv(std::ostream& os, const SolveReport& r) {
    os << "iteration,update_norm,update_proxy,contraction_ratio,proxy,aliasing\n";
    os.precision(17);
    for (std::size_t j = 0; j < r.update_norms.size(); ++j) {
        os << j + 1 << "," << r.update_norms[j] << "," << r.update_proxies[j] << ",";
        if (j > 0 && j - 1 < r.contraction_ratios.size()) os << r.contraction_ratios[j - 1];
        os << "," << r.proxies[j] << "," << (j < r.aliasing.size() && r.aliasing[j] ? 1 : 0) << "\n";
    }
}

/// key=value summary block.
inline void write_summary(std::ostream& os, const SolveReport& r) {
    auto d = detail::format_double;
    os << "status=" << to_string(r.status) << "\n"
       << "iterations=" << r.iterations << "\n"
       << "residual_laplace=" << d(r.residuals.laplace) << "\n"
       << "residual_boundary=" << d(r.residuals.boundary) << "\n"
       << "residual_conormal=" << d(r.residuals.conormal) << "\n"
       << "residual_outer_trace=" << d(r.residuals.outer_trace) << "\n"
       << "residual_trace_sum=" << d(r.residuals.trace_sum) << "\n"
       << "residual_gate=" << d(r.residual_gate) << "\n"
       << "proxy=" << d(r.guards.proxy) << "\n"
       << "component_proxy=" << d(r.guards.component_proxy) << "\n"
       << "r_guard=" << d(r.guards.r_guard) << "\n"
       << "embedded_margin=" << d(r.guards.embedded_margin) << "\n"
       << "phi_proxy=" << d(r.phi_proxy) << "\n"
       << "epsilon=" << d(r.epsilon) << "\n"
       << "message=" << r.message << "\n";
    for (const auto& w : r.warnings) os << "warning=" << w << "\n";
}

[[nodiscard]] inline std::map<std::string, std::string> read_summary(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

/// "y,v1,v2".
inline void write_spine_csv(std::ostream& os, const SpineCurve& spine) {
    os << "y,v1,v2\n";
    os.precision(17);
    for (int m = 0; m < spine.ny(); ++m) {
        os << static_cast<double>(m) / spine.ny() << "," << spine.values()(m, 0) << "," << spine.values()(m, 1) << "\n";
    }
}

} // namespace tjsolve
