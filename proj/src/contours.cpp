#include "pspec/contours.hpp"

#include <array>
#include <map>
#include <tuple>

namespace pspec {

namespace {

// Lattice edge identifier: orientation 0 = horizontal (between x-index i and
// i+1 at y-index j), 1 = vertical (between y-index j and j+1 at x-index i).
using EdgeKey = std::tuple<int, Index, Index>;
using Segment = std::pair<EdgeKey, EdgeKey>;

struct CellEdges {
    EdgeKey bottom, right, top, left;
};

Complex edge_crossing(const ResolventField& f, const EdgeKey& e, double eps) {
    const auto [orient, i, j] = e;
    double va, vb;
    Complex pa, pb;
    if (orient == 0) {
        va = f.value(i, j);
        vb = f.value(i + 1, j);
        pa = f.grid.z(i, j);
        pb = f.grid.z(i + 1, j);
    } else {
        va = f.value(i, j);
        vb = f.value(i, j + 1);
        pa = f.grid.z(i, j);
        pb = f.grid.z(i, j + 1);
    }
    const double t = (eps - va) / (vb - va);
    return pa + t * (pb - pa);
}

ContourLevel trace_level(const ResolventField& f, double eps) {
    ContourLevel level;
    level.epsilon = eps;

    const Index nx = f.grid.nx, ny = f.grid.ny;
    std::vector<Segment> segments;
    for (Index j = 0; j + 1 < ny; ++j) {
        for (Index i = 0; i + 1 < nx; ++i) {
            const bool b0 = f.value(i, j) < eps;
            const bool b1 = f.value(i + 1, j) < eps;
            const bool b2 = f.value(i + 1, j + 1) < eps;
            const bool b3 = f.value(i, j + 1) < eps;
            const int code = int(b0) | int(b1) << 1 | int(b2) << 2 | int(b3) << 3;
            if (code == 0 || code == 15) continue;

            const CellEdges e{{0, i, j}, {1, i + 1, j}, {0, i, j + 1}, {1, i, j}};
            auto emit = [&](const EdgeKey& a, const EdgeKey& b) {
                segments.emplace_back(a, b);
            };
            switch (code) {
                case 1:  emit(e.bottom, e.left); break;
                case 2:  emit(e.bottom, e.right); break;
                case 3:  emit(e.left, e.right); break;
                case 4:  emit(e.right, e.top); break;
                case 6:  emit(e.bottom, e.top); break;
                case 7:  emit(e.left, e.top); break;
                case 8:  emit(e.top, e.left); break;
                case 9:  emit(e.bottom, e.top); break;
                case 11: emit(e.right, e.top); break;
                case 12: emit(e.left, e.right); break;
                case 13: emit(e.bottom, e.right); break;
                case 14: emit(e.bottom, e.left); break;
                case 5: {
                    const double center = 0.25 * (f.value(i, j) + f.value(i + 1, j) +
                                                  f.value(i + 1, j + 1) + f.value(i, j + 1));
                    if (center < eps) { emit(e.bottom, e.right); emit(e.top, e.left); }
                    else { emit(e.bottom, e.left); emit(e.right, e.top); }
                    break;
                }
                case 10: {
                    const double center = 0.25 * (f.value(i, j) + f.value(i + 1, j) +
                                                  f.value(i + 1, j + 1) + f.value(i, j + 1));
                    if (center < eps) { emit(e.bottom, e.left); emit(e.right, e.top); }
                    else { emit(e.bottom, e.right); emit(e.top, e.left); }
                    break;
                }
                default: break;
            }
        }
    }

    // Chain segments through shared lattice edges.  Adjacency is at most two
    // segments per edge, so every component is a simple path or cycle.
    std::map<EdgeKey, std::vector<size_t>> touching;
    for (size_t s = 0; s < segments.size(); ++s) {
        touching[segments[s].first].push_back(s);
        touching[segments[s].second].push_back(s);
    }

    std::vector<char> used(segments.size(), 0);
    auto walk = [&](size_t start_seg, const EdgeKey& start_node) {
        std::vector<EdgeKey> path;
        path.push_back(start_node);
        size_t seg = start_seg;
        EdgeKey node = start_node;
        while (true) {
            used[seg] = 1;
            node = (segments[seg].first == node) ? segments[seg].second
                                                 : segments[seg].first;
            path.push_back(node);
            const auto& nbrs = touching[node];
            size_t next = segments.size();
            for (size_t cand : nbrs)
                if (!used[cand]) { next = cand; break; }
            if (next == segments.size()) break;
            seg = next;
        }
        return path;
    };

    auto finish = [&](const std::vector<EdgeKey>& path) {
        Polyline pl;
        pl.closed = path.size() > 2 && path.front() == path.back();
        const size_t count = pl.closed ? path.size() - 1 : path.size();
        pl.vertices.reserve(count);
        for (size_t i = 0; i < count; ++i)
            pl.vertices.push_back(edge_crossing(f, path[i], eps));
        for (size_t i = 0; i + 1 < pl.vertices.size(); ++i)
            pl.length += std::abs(pl.vertices[i + 1] - pl.vertices[i]);
        if (pl.closed && !pl.vertices.empty())
            pl.length += std::abs(pl.vertices.front() - pl.vertices.back());
        level.total_length += pl.length;
        level.polylines.push_back(std::move(pl));
    };

    // Open chains first (their seeds are degree-1 edges), then the cycles.
    for (const auto& [node, segs] : touching) {
        if (segs.size() != 1) continue;
        if (used[segs[0]]) continue;
        finish(walk(segs[0], node));
    }
    for (size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        finish(walk(s, segments[s].first));
    }
    return level;
}

}  // namespace

ContourSet extract_contours(const ResolventField& field, const std::vector<double>& epsilons) {
    ContourSet set;
    set.cell_diagonal = field.grid.cell_diagonal();
    for (const double eps : epsilons) {
        if (!(eps > 0)) throw InputError("extract_contours: levels must be positive");
        set.levels.push_back(trace_level(field, eps));
    }
    return set;
}

bool point_in_polygon(const std::vector<Complex>& polygon, Complex z) {
    bool inside = false;
    const size_t n = polygon.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = polygon[i].real(), yi = polygon[i].imag();
        const double xj = polygon[j].real(), yj = polygon[j].imag();
        const bool crosses = (yi > z.imag()) != (yj > z.imag());
        if (crosses) {
            const double xcross = xj + (z.imag() - yj) / (yi - yj) * (xi - xj);
            if (z.real() < xcross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace pspec
