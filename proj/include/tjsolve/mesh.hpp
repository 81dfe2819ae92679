#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "tjsolve/cutoff.hpp"
#include "tjsolve/field.hpp"
#include "tjsolve/geometry.hpp"

namespace tjsolve {

/// Triangulation of the three sheets in the unrolled chart (p1, p2, y).
struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::array<std::vector<std::array<int, 3>>, 3> faces;  // per sheet, 0-based vertex indices

    [[nodiscard]] std::size_t face_count() const { return faces[0].size() + faces[1].size() + faces[2].size(); }

    [[nodiscard]] double min_triangle_area() const {
        double a = std::numeric_limits<double>::infinity();
        for (const auto& sheet : faces) {
            for (const auto& f : sheet) {
                const Vec3 e1 = vertices[f[1]] - vertices[f[0]];
                const Vec3 e2 = vertices[f[2]] - vertices[f[0]];
                a = std::min(a, 0.5 * e1.cross(e2).norm());
            }
        }
        return a;
    }
};

/// m_x samples in x on [0,1], m_y distinct samples in y; the seam y = 1 is a
/// duplicate column and the x = 0 column (the spine) is shared by all sheets.
[[nodiscard]] inline SurfaceMesh mesh_surface(const TripleField& u, const CutoffProfile& cutoff, int mx, int my) {
    if (mx < 2 || my < 3) throw std::invalid_argument("mesh_surface: resolution must be at least (2, 3)");
    const SurfaceChart chart(u, cutoff);
    SurfaceMesh mesh;
    const int cols = my + 1;
    auto yv = [&](int b) { return static_cast<double>(b) / my; };
    auto xv = [&](int a) { return static_cast<double>(a) / (mx - 1); };

    std::vector<int> spine(cols);
    for (int b = 0; b < cols; ++b) {
        spine[b] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(chart.embed(TripleIndex(1), 0.0, yv(b)));
    }
    for (TripleIndex i : TripleIndex::all()) {
        std::vector<std::vector<int>> id(mx, std::vector<int>(cols));
        id[0] = spine;
        for (int a = 1; a < mx; ++a) {
            for (int b = 0; b < cols; ++b) {
                id[a][b] = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back(chart.embed(i, xv(a), yv(b)));
            }
        }
        auto& faces = mesh.faces[i.slot()];
        for (int a = 0; a + 1 < mx; ++a) {
            for (int b = 0; b < my; ++b) {
                faces.push_back({id[a][b], id[a + 1][b], id[a + 1][b + 1]});
                faces.push_back({id[a][b], id[a + 1][b + 1], id[a][b + 1]});
            }
        }
    }
    return mesh;
}

/// Wavefront OBJ; `header` lines are written as comments.
inline void write_obj(std::ostream& os, const SurfaceMesh& mesh, const std::vector<std::string>& header) {
    os.precision(17);
    for (const auto& h : header) os << "# " << h << "\n";
    os << "# coordinates are (p1, p2, y) in the unrolled chart; y = 0 and y = 1 are identified\n";
    for (const auto& v : mesh.vertices) os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (int s = 0; s < 3; ++s) {
        os << "g sheet" << (s + 1) << "\n";
        for (const auto& f : mesh.faces[s]) os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    }
}

} // namespace tjsolve
