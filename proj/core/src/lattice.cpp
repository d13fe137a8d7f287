#include "dca/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "dca/errors.hpp"

namespace dca {

namespace {

constexpr double kOrthoTol = 1e-9; // |cos(diagonal angle)| bound for the orthogonal tag

std::string face_str(int f) {
    std::ostringstream os;
    os << "face " << f;
    return os.str();
}

// Diagonal vectors of a stored face: d13 = z3 - z1, d24 = z4 - z2.
std::pair<Vec2, Vec2> diagonals(const QuadLattice& L, const Face& f) {
    return {L.points[f.v[2]] - L.points[f.v[0]], L.points[f.v[3]] - L.points[f.v[1]]};
}

double face_shoelace(const std::vector<Vec2>& pts, const std::array<int, 4>& v) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += cross(pts[v[k]], pts[v[(k + 1) % 4]]);
    return 0.5 * s;
}

bool face_is_orthogonal(const QuadLattice& L, const Face& f) {
    auto [p, q] = diagonals(L, f);
    double denom = norm(p) * norm(q);
    if (denom == 0.0) return false;
    return std::abs(dot(p, q)) <= kOrthoTol * denom;
}

// 2-coloring of the vertices from the face side structure: every side joins
// opposite classes. Per component, the class of the smallest vertex index is
// B. Throws NotBipartite on an odd cycle or a face whose diagonal pairs end
// up in mixed classes.
std::vector<Color> compute_coloring(int n, const std::vector<Face>& faces) {
    std::vector<std::vector<int>> adj(n);
    for (const Face& f : faces) {
        for (int k = 0; k < 4; ++k) {
            int a = f.v[k], b = f.v[(k + 1) % 4];
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }
    std::vector<int> parity(n, -1);
    std::vector<Color> color(n, Color::B);
    for (int root = 0; root < n; ++root) {
        if (parity[root] != -1) continue;
        // `root` is the smallest index of its component; anchor it in B.
        parity[root] = 0;
        std::queue<int> bfs;
        bfs.push(root);
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int w : adj[v]) {
                if (parity[w] == -1) {
                    parity[w] = parity[v] ^ 1;
                    bfs.push(w);
                } else if (parity[w] == parity[v]) {
                    throw NotBipartite("vertex classes are inconsistent (odd side cycle)");
                }
            }
        }
    }
    for (int v = 0; v < n; ++v) color[v] = parity[v] == 0 ? Color::B : Color::W;
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& q = faces[f].v;
        if (color[q[0]] != color[q[2]] || color[q[1]] != color[q[3]] ||
            color[q[0]] == color[q[1]])
            throw NotBipartite("diagonal pairs of " + face_str(static_cast<int>(f)) +
                               " are not monochromatic");
    }
    return color;
}

// Directed boundary sides (used by exactly one face, in that face's ccw
// orientation), chained into a cycle starting at the smallest vertex on it.
std::vector<int> trace_boundary(int n, const std::vector<Face>& faces) {
    std::map<std::pair<int, int>, int> undirected;
    for (const Face& f : faces)
        for (int k = 0; k < 4; ++k) {
            int a = f.v[k], b = f.v[(k + 1) % 4];
            undirected[{std::min(a, b), std::max(a, b)}]++;
        }
    std::vector<int> next(n, -1);
    int start = n;
    size_t count = 0;
    for (const Face& f : faces)
        for (int k = 0; k < 4; ++k) {
            int a = f.v[k], b = f.v[(k + 1) % 4];
            if (undirected[{std::min(a, b), std::max(a, b)}] == 1) {
                if (next[a] != -1)
                    throw ValidationError("boundary is not a single simple cycle (vertex " +
                                          std::to_string(a) + " has two outgoing boundary sides)");
                next[a] = b;
                start = std::min(start, a);
                ++count;
            }
        }
    if (count == 0) throw ValidationError("lattice has no boundary sides");
    std::vector<int> cycle;
    int at = start;
    do {
        if (next[at] == -1)
            throw ValidationError("boundary chain breaks at vertex " + std::to_string(at));
        cycle.push_back(at);
        at = next[at];
        if (cycle.size() > count)
            throw ValidationError("boundary sides do not close into one cycle");
    } while (at != start);
    if (cycle.size() != count)
        throw ValidationError("boundary sides form more than one cycle");
    return cycle;
}

double max_side_length(const QuadLattice& L) {
    double m = 0.0;
    for (const Face& f : L.faces)
        for (int k = 0; k < 4; ++k)
            m = std::max(m, norm(L.points[f.v[(k + 1) % 4]] - L.points[f.v[k]]));
    return m;
}

} // namespace

std::vector<char> QuadLattice::boundary_mask() const {
    std::vector<char> mask(points.size(), 0);
    for (int v : boundary) mask[v] = 1;
    return mask;
}

Domain Domain::rect(double x0, double y0, double x1, double y1) {
    Domain d;
    d.shape = Shape::rect;
    d.x0 = x0;
    d.y0 = y0;
    d.x1 = x1;
    d.y1 = y1;
    return d;
}

Domain Domain::disk(double cx, double cy, double r) {
    Domain d;
    d.shape = Shape::disk;
    d.cx = cx;
    d.cy = cy;
    d.r = r;
    return d;
}

bool Domain::contains(Vec2 p) const {
    if (shape == Shape::rect) {
        double tx = 1e-12 * std::max({std::abs(x0), std::abs(x1), 1.0});
        double ty = 1e-12 * std::max({std::abs(y0), std::abs(y1), 1.0});
        return p.x >= x0 - tx && p.x <= x1 + tx && p.y >= y0 - ty && p.y <= y1 + ty;
    }
    double dx = p.x - cx, dy = p.y - cy;
    return dx * dx + dy * dy <= r * r * (1.0 + 4e-12);
}

double Domain::boundary_distance(Vec2 p) const {
    if (shape == Shape::disk) return std::abs(r - std::hypot(p.x - cx, p.y - cy));
    double dx = std::min(std::abs(p.x - x0), std::abs(p.x - x1));
    double dy = std::min(std::abs(p.y - y0), std::abs(p.y - y1));
    return std::min(dx, dy);
}

QuadLattice make_lattice(std::vector<Vec2> points,
                         const std::vector<std::array<int, 4>>& raw_faces,
                         LatticeKind hint) {
    const int n = static_cast<int>(points.size());
    if (n == 0 || raw_faces.empty()) throw EmptyLattice("lattice has no vertices or faces");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
            throw ValidationError("vertex " + std::to_string(i) + " has non-finite coordinates");

    QuadLattice L;
    L.points = std::move(points);
    L.faces.reserve(raw_faces.size());
    for (size_t i = 0; i < raw_faces.size(); ++i) {
        std::array<int, 4> v = raw_faces[i];
        for (int k = 0; k < 4; ++k)
            if (v[k] < 0 || v[k] >= n)
                throw ValidationError(face_str(static_cast<int>(i)) + ": vertex index out of range");
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (v[a] == v[b])
                    throw ValidationError(face_str(static_cast<int>(i)) + ": repeated vertex");
        double area = face_shoelace(L.points, v);
        if (area == 0.0)
            throw ValidationError(face_str(static_cast<int>(i)) + ": zero signed area");
        if (area < 0.0) {
            // Reverse orientation keeping the leading vertex, so the diagonal
            // pairs (0,2) and (1,3) are preserved.
            std::swap(v[1], v[3]);
            area = -area;
        }
        Face f;
        f.v = v;
        f.area = area;
        L.faces.push_back(f);
    }

    L.color = compute_coloring(n, L.faces);
    for (Face& f : L.faces) {
        if (L.color[f.v[0]] == Color::W)
            f.v = {f.v[1], f.v[2], f.v[3], f.v[0]}; // rotate once: B corners to 0/2
        if (f.v[2] < f.v[0])
            f.v = {f.v[2], f.v[3], f.v[0], f.v[1]}; // smaller B index first
    }
    L.boundary = trace_boundary(n, L.faces);

    std::vector<char> seen(n, 0);
    for (const Face& f : L.faces)
        for (int k = 0; k < 4; ++k) seen[f.v[k]] = 1;
    for (int i = 0; i < n; ++i)
        if (!seen[i])
            throw ValidationError("vertex " + std::to_string(i) + " belongs to no face");

    L.h = 2.0 * max_side_length(L);
    if (hint == LatticeKind::square) {
        L.kind = LatticeKind::square;
    } else {
        L.kind = LatticeKind::general;
        bool ortho = true;
        for (const Face& f : L.faces) ortho = ortho && face_is_orthogonal(L, f);
        if (ortho) L.kind = LatticeKind::orthogonal;
    }
    return L;
}

QuadLattice build_square_lattice(const Domain& domain, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidStep("step must be positive and finite");

    // Cells indexed by their lower-left grid node (i, j); the grid is anchored
    // at the rectangle corner or the disk center.
    std::vector<std::pair<int, int>> cells;
    double ax, ay; // grid anchor
    if (domain.shape == Domain::Shape::rect) {
        ax = domain.x0;
        ay = domain.y0;
        int nx = static_cast<int>(std::floor((domain.x1 - domain.x0) / step + 1e-9));
        int ny = static_cast<int>(std::floor((domain.y1 - domain.y0) / step + 1e-9));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) cells.push_back({i, j});
    } else {
        ax = domain.cx;
        ay = domain.cy;
        int range = static_cast<int>(std::ceil(domain.r / step)) + 1;
        for (int j = -range; j < range; ++j)
            for (int i = -range; i < range; ++i) {
                bool in = true;
                for (int dj = 0; dj < 2 && in; ++dj)
                    for (int di = 0; di < 2 && in; ++di)
                        in = domain.contains({ax + (i + di) * step, ay + (j + dj) * step});
                if (in) cells.push_back({i, j});
            }
    }
    if (cells.empty()) throw EmptyLattice("no grid cell of the requested step fits the domain");

    // Vertex indices sorted by (j, i): bottom-left node gets index 0.
    std::map<std::pair<int, int>, int> vid; // keyed (j, i)
    for (auto [i, j] : cells)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) vid.insert({{j + dj, i + di}, 0});
    int next_id = 0;
    for (auto& kv : vid) kv.second = next_id++;

    std::vector<Vec2> pts(vid.size());
    for (const auto& [ji, id] : vid) pts[id] = {ax + ji.second * step, ay + ji.first * step};

    std::vector<std::array<int, 4>> faces;
    faces.reserve(cells.size());
    for (auto [i, j] : cells)
        faces.push_back({vid.at({j, i}), vid.at({j, i + 1}), vid.at({j + 1, i + 1}),
                         vid.at({j + 1, i})});

    return make_lattice(std::move(pts), faces, LatticeKind::square);
}

BipartitionResult bipartition(const QuadLattice& L) {
    BipartitionResult r;
    r.color = compute_coloring(L.vertex_count(), L.faces);
    for (int v = 0; v < L.vertex_count(); ++v)
        (r.color[v] == Color::B ? r.b_vertices : r.w_vertices).push_back(v);

    // Connectivity of the diagonal graphs.
    auto connected = [&](Color c, const std::vector<int>& members) {
        if (members.empty()) return false;
        std::vector<std::vector<int>> adj(L.vertex_count());
        for (const Face& f : L.faces) {
            int a = c == Color::B ? f.v[0] : f.v[1];
            int b = c == Color::B ? f.v[2] : f.v[3];
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> vis(L.vertex_count(), 0);
        std::queue<int> bfs;
        bfs.push(members[0]);
        vis[members[0]] = 1;
        size_t found = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int w : adj[v])
                if (!vis[w]) {
                    vis[w] = 1;
                    ++found;
                    bfs.push(w);
                }
        }
        return found == members.size();
    };
    r.b_connected = connected(Color::B, r.b_vertices);
    r.w_connected = connected(Color::W, r.w_vertices);
    return r;
}

EccentricityReport eccentricity(const QuadLattice& L) {
    EccentricityReport rep;
    rep.min_diag_angle = std::numeric_limits<double>::infinity();
    for (int f = 0; f < L.face_count(); ++f) {
        auto [p, q] = diagonals(L, L.faces[f]);
        double lp = norm(p), lq = norm(q);
        if (lp == 0.0 || lq == 0.0)
            throw DegenerateFace(face_str(f) + " has a zero-length diagonal");
        rep.max_diag_ratio = std::max(rep.max_diag_ratio, std::max(lp, lq) / std::min(lp, lq));
        // Acute-normalized angle between the diagonal *lines*.
        double ang = std::atan2(std::abs(cross(p, q)), std::abs(dot(p, q)));
        rep.min_diag_angle = std::min(rep.min_diag_angle, ang);
    }

    // Condition (U): probe disks of radius h/2 (the max edge length) centered
    // at every vertex and on a grid of pitch h/4; count via spatial binning.
    const double rad = L.h / 2.0;
    const double cell = rad > 0 ? rad : 1.0;
    std::map<std::pair<long, long>, std::vector<int>> bins;
    auto bin_of = [&](Vec2 p) -> std::pair<long, long> {
        return {static_cast<long>(std::floor(p.x / cell)), static_cast<long>(std::floor(p.y / cell))};
    };
    for (int v = 0; v < L.vertex_count(); ++v) bins[bin_of(L.points[v])].push_back(v);
    auto count_disk = [&](Vec2 c) {
        auto [bx, by] = bin_of(c);
        int cnt = 0;
        for (long dy = -1; dy <= 1; ++dy)
            for (long dx = -1; dx <= 1; ++dx) {
                auto it = bins.find({bx + dx, by + dy});
                if (it == bins.end()) continue;
                for (int v : it->second)
                    if (norm2(L.points[v] - c) <= rad * rad) ++cnt;
            }
        return cnt;
    };
    int best = 0;
    for (int v = 0; v < L.vertex_count(); ++v) best = std::max(best, count_disk(L.points[v]));
    double minx = std::numeric_limits<double>::infinity(), miny = minx;
    double maxx = -minx, maxy = -minx;
    for (const Vec2& p : L.points) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double pitch = L.h / 4.0;
    for (double y = miny; y <= maxy + pitch / 2; y += pitch)
        for (double x = minx; x <= maxx + pitch / 2; x += pitch)
            best = std::max(best, count_disk({x, y}));
    rep.max_disk_count = best;

    rep.e = std::max({rep.max_diag_ratio, 1.0 / rep.min_diag_angle,
                      static_cast<double>(rep.max_disk_count)});
    return rep;
}

std::vector<int> boundary_arcs(const QuadLattice& L, int from, int to) {
    auto pos = [&](int v) {
        for (size_t i = 0; i < L.boundary.size(); ++i)
            if (L.boundary[i] == v) return static_cast<long>(i);
        throw NotOnBoundary("vertex " + std::to_string(v) + " is not on the boundary cycle");
    };
    long a = pos(from), b = pos(to);
    std::vector<int> arc;
    const long n = static_cast<long>(L.boundary.size());
    for (long i = a;; i = (i + 1) % n) {
        arc.push_back(L.boundary[i]);
        if (i == b) break;
    }
    return arc;
}

namespace {

void check_faces(const QuadLattice& L, ValidationReport& rep) {
    const int n = L.vertex_count();
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        bool index_ok = true;
        for (int k = 0; k < 4; ++k)
            if (v[k] < 0 || v[k] >= n) {
                rep.violations.push_back({"face-index", face_str(f) + ": index out of range"});
                index_ok = false;
            }
        if (!index_ok) continue;
        bool distinct = true;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (v[a] == v[b]) distinct = false;
        if (!distinct) {
            rep.violations.push_back({"face-repeated-vertex", face_str(f) + ": repeated vertex"});
            continue;
        }
        double area = face_shoelace(L.points, v);
        if (!(area > 0.0))
            rep.violations.push_back(
                {"face-orientation", face_str(f) + ": stored order has non-positive shoelace area"});
        if (std::abs(area - L.faces[f].area) > 1e-12 * std::max(1.0, std::abs(area)))
            rep.violations.push_back({"face-area-cache", face_str(f) + ": cached area mismatch"});
        auto [p, q] = diagonals(L, L.faces[f]);
        if (norm2(p) == 0.0 || norm2(q) == 0.0)
            rep.violations.push_back({"face-degenerate-diagonal",
                                      face_str(f) + ": zero-length diagonal"});
        // Simplicity: opposite sides must not cross.
        auto pt = [&](int k) { return L.points[v[k % 4]]; };
        if (segments_intersect_properly(pt(0), pt(1), pt(2), pt(3)) ||
            segments_intersect_properly(pt(1), pt(2), pt(3), pt(4)))
            rep.violations.push_back({"face-self-intersecting", face_str(f) + ": sides cross"});
    }
}

void check_edges_and_boundary(const QuadLattice& L, ValidationReport& rep) {
    std::map<std::pair<int, int>, std::vector<std::pair<int, bool>>> sides; // undirected -> (face, forward)
    for (int f = 0; f < L.face_count(); ++f)
        for (int k = 0; k < 4; ++k) {
            int a = L.faces[f].v[k], b = L.faces[f].v[(k + 1) % 4];
            bool forward = a < b;
            sides[{std::min(a, b), std::max(a, b)}].push_back({f, forward});
        }
    std::set<std::pair<int, int>> boundary_sides;
    for (const auto& [e, owners] : sides) {
        if (owners.size() > 2)
            rep.violations.push_back({"edge-shared-many",
                                      "edge (" + std::to_string(e.first) + "," +
                                          std::to_string(e.second) + ") belongs to " +
                                          std::to_string(owners.size()) + " faces"});
        else if (owners.size() == 2 && owners[0].second == owners[1].second)
            rep.violations.push_back({"edge-orientation",
                                      "edge (" + std::to_string(e.first) + "," +
                                          std::to_string(e.second) +
                                          ") traversed twice in the same direction"});
        if (owners.size() == 1) boundary_sides.insert(e);
    }

    // Pairwise face intersections, combinatorial part: two faces may share at
    // most one edge (two adjacent vertices).
    std::map<std::pair<int, int>, int> pair_shared;
    {
        std::vector<std::vector<int>> at_vertex(L.vertex_count());
        for (int f = 0; f < L.face_count(); ++f)
            for (int k = 0; k < 4; ++k) {
                int v = L.faces[f].v[k];
                if (v >= 0 && v < L.vertex_count()) at_vertex[v].push_back(f);
            }
        for (const auto& fs : at_vertex)
            for (size_t a = 0; a < fs.size(); ++a)
                for (size_t b = a + 1; b < fs.size(); ++b)
                    if (fs[a] != fs[b]) pair_shared[{fs[a], fs[b]}]++;
    }
    for (const auto& [pr, cnt] : pair_shared) {
        if (cnt >= 3) {
            rep.violations.push_back({"faces-overlap",
                                      "faces " + std::to_string(pr.first) + " and " +
                                          std::to_string(pr.second) +
                                          " intersect in more than one edge"});
        } else if (cnt == 2) {
            const auto& w0 = L.faces[pr.first].v;
            const auto& w1 = L.faces[pr.second].v;
            std::set<int> common;
            for (int x : w0)
                for (int y : w1)
                    if (x == y) common.insert(x);
            std::vector<int> c(common.begin(), common.end());
            if (c.size() != 2) continue; // repeated-vertex faces are reported elsewhere
            auto is_side = [&](const std::array<int, 4>& q) {
                for (int k = 0; k < 4; ++k) {
                    int a = q[k], b = q[(k + 1) % 4];
                    if ((a == c[0] && b == c[1]) || (a == c[1] && b == c[0])) return true;
                }
                return false;
            };
            if (!(is_side(w0) && is_side(w1)))
                rep.violations.push_back({"faces-overlap",
                                          "faces " + std::to_string(pr.first) + " and " +
                                              std::to_string(pr.second) +
                                              " share two vertices that are not a common edge"});
        }
    }

    // Boundary cycle structure.
    const auto& cyc = L.boundary;
    if (cyc.empty()) {
        rep.violations.push_back({"boundary-empty", "boundary cycle is empty"});
        return;
    }
    bool in_range = true;
    std::set<int> seen;
    for (int v : cyc) {
        if (v < 0 || v >= L.vertex_count()) in_range = false;
        if (!seen.insert(v).second)
            rep.violations.push_back({"boundary-not-simple",
                                      "boundary revisits vertex " + std::to_string(v)});
    }
    if (!in_range) {
        rep.violations.push_back({"boundary-index", "boundary index out of range"});
        return;
    }
    std::set<std::pair<int, int>> cyc_sides;
    for (size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        cyc_sides.insert({std::min(a, b), std::max(a, b)});
        if (!boundary_sides.count({std::min(a, b), std::max(a, b)}))
            rep.violations.push_back({"boundary-cycle",
                                      "boundary step (" + std::to_string(a) + "," +
                                          std::to_string(b) + ") is not a boundary edge"});
    }
    for (const auto& e : boundary_sides)
        if (!cyc_sides.count(e))
            rep.violations.push_back({"boundary-cycle",
                                      "boundary edge (" + std::to_string(e.first) + "," +
                                          std::to_string(e.second) + ") missing from the cycle"});
}

void check_geometric_overlap(const QuadLattice& L, ValidationReport& rep) {
    if (L.h <= 0.0) return;
    const double cell = L.h;
    std::map<std::pair<long, long>, std::vector<int>> grid;
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        bool ok = true;
        for (int k = 0; k < 4; ++k) ok = ok && v[k] >= 0 && v[k] < L.vertex_count();
        if (!ok) continue;
        double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
        for (int k = 0; k < 4; ++k) {
            minx = std::min(minx, L.points[v[k]].x);
            maxx = std::max(maxx, L.points[v[k]].x);
            miny = std::min(miny, L.points[v[k]].y);
            maxy = std::max(maxy, L.points[v[k]].y);
        }
        for (long gy = static_cast<long>(std::floor(miny / cell));
             gy <= static_cast<long>(std::floor(maxy / cell)); ++gy)
            for (long gx = static_cast<long>(std::floor(minx / cell));
                 gx <= static_cast<long>(std::floor(maxx / cell)); ++gx)
                grid[{gx, gy}].push_back(f);
    }
    std::set<std::pair<int, int>> tested;
    for (const auto& [key, fs] : grid) {
        (void)key;
        for (size_t a = 0; a < fs.size(); ++a)
            for (size_t b = a + 1; b < fs.size(); ++b) {
                int fa = std::min(fs[a], fs[b]), fb = std::max(fs[a], fs[b]);
                if (!tested.insert({fa, fb}).second) continue;
                const auto& va = L.faces[fa].v;
                const auto& vb = L.faces[fb].v;
                bool flagged = false;
                for (int i = 0; i < 4 && !flagged; ++i)
                    for (int j = 0; j < 4 && !flagged; ++j)
                        if (segments_intersect_properly(
                                L.points[va[i]], L.points[va[(i + 1) % 4]],
                                L.points[vb[j]], L.points[vb[(j + 1) % 4]]))
                            flagged = true;
                if (!flagged) {
                    // A vertex of one face strictly inside the other.
                    auto strictly_inside = [&](Vec2 p, const std::array<int, 4>& q) {
                        std::vector<Vec2> poly = {L.points[q[0]], L.points[q[1]],
                                                  L.points[q[2]], L.points[q[3]]};
                        if (!point_in_polygon(p, poly)) return false;
                        return polygon_boundary_distance(p, poly) > 0.0;
                    };
                    for (int k = 0; k < 4 && !flagged; ++k)
                        if (strictly_inside(L.points[vb[k]], va) ||
                            strictly_inside(L.points[va[k]], vb))
                            flagged = true;
                }
                if (flagged)
                    rep.violations.push_back({"faces-overlap",
                                              "faces " + std::to_string(fa) + " and " +
                                                  std::to_string(fb) + " overlap geometrically"});
            }
    }
}

} // namespace

ValidationReport validate(const QuadLattice& L) {
    ValidationReport rep;
    if (L.points.empty() || L.faces.empty()) {
        rep.violations.push_back({"empty", "lattice has no vertices or faces"});
        return rep;
    }
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!std::isfinite(L.points[i].x) || !std::isfinite(L.points[i].y))
            rep.violations.push_back({"vertex-not-finite",
                                      "vertex " + std::to_string(i) + " has non-finite coordinates"});

    check_faces(L, rep);

    std::vector<char> seen(L.vertex_count(), 0);
    for (const Face& f : L.faces)
        for (int k = 0; k < 4; ++k)
            if (f.v[k] >= 0 && f.v[k] < L.vertex_count()) seen[f.v[k]] = 1;
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!seen[i])
            rep.violations.push_back({"vertex-unused",
                                      "vertex " + std::to_string(i) + " belongs to no face"});

    check_edges_and_boundary(L, rep);
    check_geometric_overlap(L, rep);

    // Coloring: recompute and compare with the stored tags.
    try {
        std::vector<Color> fresh = compute_coloring(L.vertex_count(), L.faces);
        if (L.color.size() != L.points.size()) {
            rep.violations.push_back({"color-size", "color array length mismatch"});
        } else {
            for (int v = 0; v < L.vertex_count(); ++v)
                if (L.color[v] != fresh[v]) {
                    rep.violations.push_back({"color-mismatch",
                                              "stored coloring differs from canonical at vertex " +
                                                  std::to_string(v)});
                    break;
                }
        }
        for (int f = 0; f < L.face_count(); ++f)
            if (fresh[L.faces[f].v[0]] != Color::B) {
                rep.violations.push_back({"face-b-position",
                                          face_str(f) + ": leading vertex is not in B"});
                break;
            }
        BipartitionResult bp = bipartition(L);
        if (!bp.b_connected)
            rep.violations.push_back({"graph-b-disconnected", "diagonal graph B is disconnected"});
        if (!bp.w_connected)
            rep.violations.push_back({"graph-w-disconnected", "diagonal graph W is disconnected"});
    } catch (const NotBipartite& e) {
        rep.violations.push_back({"not-bipartite", e.what()});
    }

    double hs = 2.0 * max_side_length(L);
    if (std::abs(hs - L.h) > 1e-12 * std::max(1.0, hs))
        rep.violations.push_back({"h-cache", "stored h differs from twice the max edge length"});

    if (L.kind == LatticeKind::orthogonal || L.kind == LatticeKind::square) {
        for (int f = 0; f < L.face_count(); ++f)
            if (!face_is_orthogonal(L, L.faces[f])) {
                rep.violations.push_back({"kind-orthogonal",
                                          face_str(f) + ": diagonals not orthogonal within tolerance"});
                break;
            }
    }
    if (L.kind == LatticeKind::square) {
        for (int f = 0; f < L.face_count(); ++f) {
            auto p = L.face_points(f);
            double s0 = norm(p[1] - p[0]);
            bool square = true;
            for (int k = 0; k < 4; ++k) {
                Vec2 a = p[(k + 1) % 4] - p[k];
                Vec2 b = p[(k + 2) % 4] - p[(k + 1) % 4];
                square = square && std::abs(norm(a) - s0) <= 1e-9 * s0 &&
                         std::abs(dot(a, b)) <= 1e-9 * s0 * s0;
            }
            if (!square) {
                rep.violations.push_back({"kind-square", face_str(f) + ": not a square cell"});
                break;
            }
        }
    }
    return rep;
}

StarExample make_star_example(double M) {
    if (!(M > 1.0)) throw ValidationError("star example requires M > 1");
    const double c8 = 1.0 + std::sqrt(2.0); // cot(pi/8)
    const double R = std::sqrt(2.0) * M;
    std::vector<Vec2> pts = {
        {0, 0},           // 0: center
        {c8, 0},          // 1
        {-c8, 0},         // 2
        {0, 1},           // 3
        {0, -1},          // 4
        {R * c8, R},      // 5
        {-R * c8, R},     // 6
        {-R * c8, -R},    // 7
        {R * c8, -R},     // 8
    };
    std::vector<std::array<int, 4>> faces = {
        {0, 1, 5, 3}, // first quadrant
        {0, 4, 8, 1}, // fourth
        {0, 3, 6, 2}, // second
        {0, 2, 7, 4}, // third
    };
    StarExample ex;
    ex.M = M;
    ex.lattice = make_lattice(std::move(pts), faces);
    // f(0) = M(1+i); f(+-i) = 1; f(+-c8) = 0; f at the first/third-quadrant
    // outer vertices = 0; at the second/fourth-quadrant outer ones = 2Mi.
    ex.u = {M, 0, 0, 1, 1, 0, 0, 0, 0};
    ex.v = {M, 0, 0, 0, 0, 0, 2 * M, 0, 2 * M};
    return ex;
}

} // namespace dca
