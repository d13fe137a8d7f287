#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dca/analysis.hpp"
#include "dca/errors.hpp"
#include "dca/expr.hpp"
#include "dca/fem.hpp"
#include "dca/lattice.hpp"
#include "dca/measure.hpp"
#include "dca/operators.hpp"
#include "dca/rng.hpp"
#include "dca/solver.hpp"
#include "dca/svg.hpp"

using namespace dca;

namespace {

// Post-parse argument problems (malformed descriptors, impossible flag
// combinations). Mapped to exit code 2 like CLI11's own parse errors.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

int g_exit = 0; // sticky domain-failure flag for subcommands that report rather than throw

std::string number_repr(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, sep)) out.push_back(piece);
    return out;
}

double parse_number(const std::string& text, const char* what) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("expected a number for ") + what + ", got '" + text + "'");
    }
}

int parse_int(const std::string& text, const char* what) {
    try {
        size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("expected an integer for ") + what + ", got '" + text + "'");
    }
}

// "disk:cx,cy,r" or "rect:x0,y0,x1,y1"
Domain parse_domain(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("domain must look like disk:cx,cy,r or rect:x0,y0,x1,y1");
    std::string kind = text.substr(0, colon);
    std::vector<std::string> parts = split(text.substr(colon + 1), ',');
    if (kind == "disk" && parts.size() == 3)
        return Domain::disk(parse_number(parts[0], "domain"), parse_number(parts[1], "domain"),
                            parse_number(parts[2], "domain"));
    if (kind == "rect" && parts.size() == 4)
        return Domain::rect(parse_number(parts[0], "domain"), parse_number(parts[1], "domain"),
                            parse_number(parts[2], "domain"), parse_number(parts[3], "domain"));
    throw UsageError("domain must look like disk:cx,cy,r or rect:x0,y0,x1,y1");
}

// "index:value"
std::pair<int, double> parse_anchor(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("anchor must look like index:value");
    return {parse_int(text.substr(0, colon), "anchor"),
            parse_number(text.substr(colon + 1), "anchor")};
}

void write_file(const std::string& path, const std::string& body) {
    std::FILE* file = std::fopen(path.c_str(), "wb");
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    size_t written = std::fwrite(body.data(), 1, body.size(), file);
    if (std::fclose(file) != 0 || written != body.size())
        throw IoError("failed to write '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::string vertex_csv(const std::vector<Vec2>& points, const VertexFunction& u) {
    std::string out = "index,x,y,value\n";
    for (size_t i = 0; i < points.size(); ++i)
        out += std::to_string(i) + "," + number_repr(points[i].x) + "," +
               number_repr(points[i].y) + "," + number_repr(u[i]) + "\n";
    return out;
}

std::string complex_csv(const std::vector<Vec2>& points, const ComplexVertexFunction& f) {
    std::string out = "index,x,y,value_re,value_im\n";
    for (size_t i = 0; i < points.size(); ++i)
        out += std::to_string(i) + "," + number_repr(points[i].x) + "," +
               number_repr(points[i].y) + "," + number_repr(f[i].real()) + "," +
               number_repr(f[i].imag()) + "\n";
    return out;
}

VertexFunction read_vertex_csv(const std::string& path, size_t expected) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
    VertexFunction u(expected, 0.0);
    std::vector<char> seen(expected, 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long index = -1;
        double x, y, value;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf", &index, &x, &y, &value) != 4)
            throw ParseError("'" + path + "': malformed row '" + line + "'");
        if (index < 0 || index >= static_cast<long>(expected))
            throw ParseError("'" + path + "': vertex index " + std::to_string(index) +
                             " out of range");
        u[index] = value;
        seen[index] = 1;
    }
    for (size_t i = 0; i < expected; ++i)
        if (!seen[i])
            throw ParseError("'" + path + "': no row for vertex " + std::to_string(i));
    return u;
}

std::vector<double> read_number_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    return values;
}

std::string json_report(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out = "{\n";
    for (size_t i = 0; i < fields.size(); ++i)
        out += "  \"" + fields[i].first + "\": " + fields[i].second +
               (i + 1 < fields.size() ? ",\n" : "\n");
    return out + "}\n";
}

std::vector<int> resolve_arc(const QuadLattice& L, const std::string& arc_list, int arc_from,
                             int arc_to) {
    bool has_list = !arc_list.empty();
    bool has_range = arc_from >= 0 || arc_to >= 0;
    if (has_list == has_range)
        throw UsageError("give the arc either as --arc v1,v2,... or as --arc-from/--arc-to");
    if (has_list) {
        std::vector<int> arc;
        for (const std::string& part : split(arc_list, ',')) arc.push_back(parse_int(part, "--arc"));
        return arc;
    }
    if (arc_from < 0 || arc_to < 0) throw UsageError("--arc-from and --arc-to go together");
    return boundary_arcs(L, arc_from, arc_to);
}

SmoothField field_from_source(const std::string& source) {
    return field_from_expr(parse_expr(source));
}

struct CheckRow {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool ran = false;
    bool pass = false;
};

void print_check_table(const std::vector<CheckRow>& rows) {
    for (const CheckRow& row : rows) {
        if (!row.ran) {
            std::printf("%-26s %12s  %10s  skipped (needs an orthogonal lattice)\n",
                        row.name.c_str(), "-", "-");
            continue;
        }
        std::printf("%-26s %12.3e  <= %8.1e  %s\n", row.name.c_str(), row.value, row.bound,
                    row.pass ? "pass" : "FAIL");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete complex analysis on quadrilateral lattices"};
    app.require_subcommand(1);

    // ---- build ----------------------------------------------------------
    auto* build = app.add_subcommand("build", "generate a square lattice over a domain");
    std::string build_kind = "square", build_domain, build_out;
    double build_step = 0.0;
    build->add_option("--kind", build_kind, "lattice kind (square)");
    build->add_option("--domain", build_domain, "disk:cx,cy,r or rect:x0,y0,x1,y1")->required();
    build->add_option("--step", build_step, "cell side length")->required();
    build->add_option("-o,--output", build_out, "lattice JSON path")->required();
    build->callback([&] {
        if (build_kind != "square")
            throw UsageError("only --kind square is supported; kite lattices come from `dca kite`");
        QuadLattice L = build_square_lattice(parse_domain(build_domain), build_step);
        save_lattice(L, build_out);
        std::printf("wrote %s: %d vertices, %d faces\n", build_out.c_str(), L.vertex_count(),
                    L.face_count());
    });

    // ---- validate -------------------------------------------------------
    auto* check_lattice = app.add_subcommand("validate", "check every lattice invariant");
    std::string validate_lattice;
    check_lattice->add_option("-l,--lattice", validate_lattice, "lattice JSON path")->required();
    check_lattice->callback([&] {
        QuadLattice L = load_lattice(validate_lattice);
        ValidationReport report = validate(L);
        for (const Violation& v : report.violations)
            std::printf("%s: %s\n", v.code.c_str(), v.message.c_str());
        std::printf("%s: %d vertices, %d faces, %zu violations\n",
                    report.ok() ? "ok" : "invalid", L.vertex_count(), L.face_count(),
                    report.violations.size());
        if (!report.ok()) g_exit = 1;
    });

    // ---- solve ----------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "Dirichlet solve with expression boundary data");
    std::string solve_lattice, solve_expr, solve_out, solve_report, solve_svg;
    double solve_tol = 1e-12;
    bool solve_labels = false;
    solve->add_option("-l,--lattice", solve_lattice, "lattice JSON path")->required();
    solve->add_option("-g,--boundary", solve_expr, "boundary data expression")->required();
    solve->add_option("-o,--output", solve_out, "solution CSV path");
    solve->add_option("--report", solve_report, "solve report JSON path");
    solve->add_option("--svg", solve_svg, "heatmap SVG path");
    solve->add_option("--tol", solve_tol, "iterative solver tolerance");
    solve->add_flag("--labels", solve_labels, "label vertices in the SVG");
    solve->callback([&] {
        QuadLattice L = load_lattice(solve_lattice);
        BoundaryExpr g = parse_expr(solve_expr);
        std::map<int, double> data;
        for (int v : L.boundary) data[v] = eval_real(g, L.points[v]);
        SolveReport rep = solve_dirichlet(L, data, solve_tol);
        if (!solve_out.empty()) write_file(solve_out, vertex_csv(L.points, rep.solution));
        if (!solve_report.empty())
            write_file(solve_report,
                       json_report({{"residual", number_repr(rep.residual)},
                                    {"iterations", std::to_string(rep.iterations)},
                                    {"energy", number_repr(rep.energy)}}));
        if (!solve_svg.empty()) {
            SvgOptions opt;
            opt.label_vertices = solve_labels;
            emit_svg(L, rep.solution, solve_svg, opt);
        }
        std::printf("solved %d vertices: residual=%.3e iterations=%d energy=%s\n",
                    L.vertex_count(), rep.residual, rep.iterations,
                    number_repr(rep.energy).c_str());
    });

    // ---- conjugate ------------------------------------------------------
    auto* conj = app.add_subcommand("conjugate", "conjugate of a discrete harmonic function");
    std::string conj_lattice, conj_in, conj_out, conj_analytic;
    int conj_anchor = 0;
    double conj_anchor_value = 0.0;
    conj->add_option("-l,--lattice", conj_lattice, "lattice JSON path")->required();
    conj->add_option("-u,--values", conj_in, "harmonic function CSV (index,x,y,value)")->required();
    conj->add_option("-o,--output", conj_out, "conjugate CSV path");
    conj->add_option("--analytic", conj_analytic, "u + iv complex CSV path");
    conj->add_option("--anchor", conj_anchor, "vertex pinning the conjugate");
    conj->add_option("--anchor-value", conj_anchor_value, "value at the anchor");
    conj->callback([&] {
        QuadLattice L = load_lattice(conj_lattice);
        VertexFunction u = read_vertex_csv(conj_in, L.points.size());
        VertexFunction v = conjugate(L, u, conj_anchor, conj_anchor_value);
        if (!conj_out.empty()) write_file(conj_out, vertex_csv(L.points, v));
        if (!conj_analytic.empty()) {
            ComplexVertexFunction f(u.size());
            for (size_t i = 0; i < u.size(); ++i) f[i] = Complex(u[i], v[i]);
            write_file(conj_analytic, complex_csv(L.points, f));
        }
        std::printf("conjugate anchored at %d: v range [%s, %s]\n", conj_anchor,
                    number_repr(*std::min_element(v.begin(), v.end())).c_str(),
                    number_repr(*std::max_element(v.begin(), v.end())).c_str());
    });

    // ---- network --------------------------------------------------------
    auto* network = app.add_subcommand("network",
                                       "reconstruct an alternating network from boundary data");
    std::string net_lattice, net_b, net_w, net_banchor = "0:0", net_wanchor, net_out, net_faces,
                net_report;
    network->add_option("-l,--lattice", net_lattice, "lattice JSON path")->required();
    network->add_option("--b-increments", net_b, "file of boundary B increments")->required();
    network->add_option("--w-increments", net_w, "file of boundary W increments")->required();
    network->add_option("--b-anchor", net_banchor, "index:value on the B class");
    network->add_option("--w-anchor", net_wanchor, "index:value on the W class")->required();
    network->add_option("-o,--output", net_out, "reconstructed f as complex CSV");
    network->add_option("--faces", net_faces, "per-face V and I phasor CSV");
    network->add_option("--report", net_report, "network energy JSON");
    network->callback([&] {
        QuadLattice L = load_lattice(net_lattice);
        NetworkState state =
            solve_network(L, read_number_list(net_b), read_number_list(net_w),
                          parse_anchor(net_banchor), parse_anchor(net_wanchor));
        if (!net_out.empty()) write_file(net_out, complex_csv(L.points, state.f));
        if (!net_faces.empty()) {
            std::string csv = "face,V_re,V_im,I_re,I_im\n";
            for (size_t k = 0; k < state.voltage.size(); ++k)
                csv += std::to_string(k) + "," + number_repr(state.voltage[k].real()) + "," +
                       number_repr(state.voltage[k].imag()) + "," +
                       number_repr(state.current[k].real()) + "," +
                       number_repr(state.current[k].imag()) + "\n";
            write_file(net_faces, csv);
        }
        double E = network_energy(L, state.f);
        if (!net_report.empty())
            write_file(net_report, json_report({{"energy", number_repr(E)}}));
        std::printf("network energy %s over %d faces\n", number_repr(E).c_str(), L.face_count());
    });

    // ---- fem ------------------------------------------------------------
    auto* fem = app.add_subcommand("fem", "triangulations: generate meshes, cotangent solve");
    std::string fem_mesh, fem_expr, fem_out, fem_report;
    int fem_rings = 0;
    std::uint64_t fem_seed = 0;
    double fem_tol = 1e-12;
    fem->add_option("--mesh", fem_mesh, "triangulation JSON path");
    fem->add_option("--make-disk", fem_rings, "generate a seeded disk mesh with this many rings");
    fem->add_option("--seed", fem_seed, "mesh jitter seed");
    fem->add_option("-g,--boundary", fem_expr, "boundary data expression");
    fem->add_option("-o,--output", fem_out, "output path (mesh JSON or solution CSV)");
    fem->add_option("--report", fem_report, "Delaunay report JSON path");
    fem->add_option("--tol", fem_tol, "iterative solver tolerance");
    fem->callback([&] {
        if ((fem_rings > 0) == !fem_mesh.empty())
            throw UsageError("use exactly one of --make-disk RINGS or --mesh FILE");
        Triangulation T =
            fem_rings > 0 ? make_disk_triangulation(fem_rings, fem_seed) : load_triangulation(fem_mesh);
        DelaunayReport dr = delaunay_report(T);
        if (!fem_report.empty())
            write_file(fem_report,
                       json_report({{"is_delaunay", dr.is_delaunay ? "true" : "false"},
                                    {"min_slack", number_repr(dr.min_slack)},
                                    {"regular_boundary", dr.regular_boundary ? "true" : "false"}}));
        if (fem_rings > 0) {
            if (fem_out.empty()) throw UsageError("--make-disk needs -o for the mesh JSON");
            save_triangulation(T, fem_out);
            std::printf("wrote %s: %d vertices, %d triangles, min slack %.3e\n", fem_out.c_str(),
                        T.vertex_count(), T.triangle_count(), dr.min_slack);
            return;
        }
        if (fem_expr.empty()) {
            std::printf("%s: %d vertices, %d triangles, min slack %.3e, %s boundary\n",
                        dr.is_delaunay ? "delaunay" : "not delaunay", T.vertex_count(),
                        T.triangle_count(), dr.min_slack,
                        dr.regular_boundary ? "regular" : "irregular");
            return;
        }
        BoundaryExpr g = parse_expr(fem_expr);
        std::map<int, double> data;
        for (int v : T.boundary) data[v] = eval_real(g, T.points[v]);
        VertexFunction u = solve_fem(T, data, fem_tol);
        if (!fem_out.empty()) write_file(fem_out, vertex_csv(T.points, u));
        std::printf("fem solved %d vertices (min slack %.3e)\n", T.vertex_count(), dr.min_slack);
    });

    // ---- kite -----------------------------------------------------------
    auto* kite = app.add_subcommand("kite", "kite lattice of a Delaunay triangulation");
    std::string kite_mesh, kite_out, kite_equiv;
    kite->add_option("--mesh", kite_mesh, "triangulation JSON path")->required();
    kite->add_option("-o,--output", kite_out, "kite lattice JSON path");
    kite->add_option("--equivalence", kite_equiv,
                     "boundary expression; print the FEM/kite max gap for it");
    kite->callback([&] {
        Triangulation T = load_triangulation(kite_mesh);
        QuadLattice L = build_kite_lattice(T);
        if (!kite_out.empty()) save_lattice(L, kite_out);
        std::printf("kite lattice: %d vertices, %d faces, kind %s\n", L.vertex_count(),
                    L.face_count(), L.kind == LatticeKind::orthogonal ? "orthogonal" : "other");
        if (!kite_equiv.empty()) {
            BoundaryExpr g = parse_expr(kite_equiv);
            double gap = kite_equivalence(T, [&](Vec2 p) { return eval_real(g, p); });
            std::printf("fem/kite equivalence gap %.3e\n", gap);
        }
    });

    // ---- measure --------------------------------------------------------
    auto* measure = app.add_subcommand("measure", "exact harmonic measure of a boundary arc");
    std::string meas_lattice, meas_arc, meas_out;
    int meas_from = -1, meas_to = -1, meas_at = -1;
    measure->add_option("-l,--lattice", meas_lattice, "lattice JSON path")->required();
    measure->add_option("--arc", meas_arc, "comma-separated boundary vertex ids");
    measure->add_option("--arc-from", meas_from, "arc start (boundary vertex id)");
    measure->add_option("--arc-to", meas_to, "arc end, following the cycle orientation");
    measure->add_option("-o,--output", meas_out, "measure CSV path");
    measure->add_option("--at", meas_at, "print the measure at this vertex");
    measure->callback([&] {
        QuadLattice L = load_lattice(meas_lattice);
        std::vector<int> arc = resolve_arc(L, meas_arc, meas_from, meas_to);
        VertexFunction omega = harmonic_measure_exact(L, arc);
        if (!meas_out.empty()) write_file(meas_out, vertex_csv(L.points, omega));
        if (meas_at >= 0) {
            if (meas_at >= L.vertex_count()) throw UsageError("--at vertex is out of range");
            std::printf("omega(%d) = %s\n", meas_at, number_repr(omega[meas_at]).c_str());
        } else {
            std::printf("measure of a %zu-vertex arc computed\n", arc.size());
        }
    });

    // ---- walk -----------------------------------------------------------
    auto* walk = app.add_subcommand("walk", "Monte Carlo harmonic measure");
    std::string walk_lattice, walk_arc, walk_report;
    int walk_from = -1, walk_to = -1, walk_start = -1;
    WalkConfig cfg;
    bool walk_w = false;
    walk->add_option("-l,--lattice", walk_lattice, "lattice JSON path")->required();
    walk->add_option("--arc", walk_arc, "comma-separated boundary vertex ids");
    walk->add_option("--arc-from", walk_from, "arc start (boundary vertex id)");
    walk->add_option("--arc-to", walk_to, "arc end, following the cycle orientation");
    walk->add_option("--start", walk_start, "interior start vertex")->required();
    walk->add_option("--walks", cfg.n_walks, "number of walks");
    walk->add_option("--seed", cfg.seed, "random seed");
    walk->add_option("--max-steps", cfg.max_steps, "per-walk step cap (0 = automatic)");
    walk->add_flag("--w-graph", walk_w, "walk the W diagonal graph");
    walk->add_option("--report", walk_report, "estimate JSON path");
    walk->callback([&] {
        QuadLattice L = load_lattice(walk_lattice);
        cfg.use_w_graph = walk_w;
        std::vector<int> arc = resolve_arc(L, walk_arc, walk_from, walk_to);
        MeasureEstimate est = random_walk_measure(L, arc, walk_start, cfg);
        std::string body = json_report({{"p_hat", number_repr(est.p_hat)},
                                        {"stderr", number_repr(est.standard_error)},
                                        {"n_absorbed", std::to_string(est.n_absorbed)},
                                        {"n_capped", std::to_string(est.n_capped)},
                                        {"seed", std::to_string(cfg.seed)}});
        if (!walk_report.empty()) write_file(walk_report, body);
        std::printf("%s", body.c_str());
    });

    // ---- study ----------------------------------------------------------
    auto* study = app.add_subcommand("study", "convergence studies over refinement sequences");
    std::string study_type, study_domain, study_g, study_exact, study_kind = "square",
                study_steps = "0.2,0.1,0.05", study_rings = "4,6,8", study_out;
    std::uint64_t study_seed = 0;
    study->add_option("--type", study_type, "dirichlet or energy")->required();
    study->add_option("--domain", study_domain, "disk:cx,cy,r or rect:x0,y0,x1,y1")->required();
    study->add_option("-g,--boundary", study_g, "data expression")->required();
    study->add_option("--exact", study_exact, "exact solution (defaults to -g)");
    study->add_option("--kind", study_kind, "square or kite");
    study->add_option("--steps", study_steps, "square lattice steps, comma separated");
    study->add_option("--rings", study_rings, "kite mesh ring counts, comma separated");
    study->add_option("--seed", study_seed, "kite mesh jitter seed");
    study->add_option("-o,--output", study_out, "CSV path (stdout when omitted)");
    study->callback([&] {
        Domain domain = parse_domain(study_domain);
        SmoothField g = field_from_source(study_g);
        std::vector<QuadLattice> lattices;
        if (study_kind == "square") {
            for (const std::string& part : split(study_steps, ','))
                lattices.push_back(build_square_lattice(domain, parse_number(part, "--steps")));
        } else if (study_kind == "kite") {
            if (domain.shape != Domain::Shape::disk)
                throw UsageError("kite studies need a disk domain");
            int level = 0;
            for (const std::string& part : split(study_rings, ',')) {
                Triangulation T =
                    make_disk_triangulation(parse_int(part, "--rings"), study_seed + level++);
                for (Vec2& p : T.points)
                    p = {domain.cx + domain.r * p.x, domain.cy + domain.r * p.y};
                lattices.push_back(build_kite_lattice(T));
            }
        } else {
            throw UsageError("--kind must be square or kite");
        }
        std::vector<StudyRecord> records;
        if (study_type == "dirichlet") {
            SmoothField exact =
                study_exact.empty() ? g : field_from_source(study_exact);
            records = dirichlet_convergence_study(domain, g, lattices, exact.value);
        } else if (study_type == "energy") {
            records = energy_convergence_study(domain, g, lattices);
        } else {
            throw UsageError("--type must be dirichlet or energy");
        }
        std::string csv = study_csv(records);
        if (study_out.empty())
            std::printf("%s", csv.c_str());
        else
            write_file(study_out, csv);
    });

    // ---- check ----------------------------------------------------------
    auto* check = app.add_subcommand("check", "identity suite on a lattice");
    std::string check_file;
    bool check_all = false, check_green = false, check_ec = false, check_form = false,
         check_lap = false, check_max = false;
    std::uint64_t check_seed = 1;
    check->add_option("-l,--lattice", check_file, "lattice JSON path")->required();
    check->add_flag("--all", check_all, "run every identity");
    check->add_flag("--green", check_green, "two-function Green identity");
    check->add_flag("--energy-conservation", check_ec, "boundary energy formula");
    check->add_flag("--energy-form", check_form, "energy vs quadratic form");
    check->add_flag("--laplacian", check_lap, "two Laplacian formulas");
    check->add_flag("--max-principle", check_max, "harmonic maximum principle");
    check->add_option("--seed", check_seed, "seed for the random test functions");
    check->callback([&] {
        if (!(check_green || check_ec || check_form || check_lap || check_max)) check_all = true;
        QuadLattice L = load_lattice(check_file);
        bool orth = L.kind != LatticeKind::general;

        SplitMix64 rng{check_seed};
        VertexFunction u(L.points.size()), v(L.points.size());
        for (auto& x : u) x = rng.uniform() * 2 - 1;
        for (auto& x : v) x = rng.uniform() * 2 - 1;
        double E = energy(L, u);

        std::vector<CheckRow> rows;
        auto add = [&](const std::string& name, bool wanted, bool runnable, double value,
                       double bound) {
            if (!wanted && !check_all) return;
            CheckRow row{name, value, bound, runnable, runnable && value <= bound};
            rows.push_back(row);
        };

        if (check_all || check_lap) {
            VertexFunction a = laplacian(L, u), b = laplacian_via_gradients(L, u);
            double gap = 0.0, scale = 1.0;
            for (size_t i = 0; i < a.size(); ++i) {
                gap = std::max(gap, std::abs(a[i] - b[i]));
                scale = std::max(scale, std::abs(a[i]));
            }
            add("laplacian-agreement", check_lap, true, gap / scale, 1e-12);
        }
        if (check_all || check_form) {
            StiffnessSystem S = assemble(L);
            VertexFunction Mu = laplacian(S, u);
            double quad = 0.0;
            for (size_t i = 0; i < u.size(); ++i) quad -= 0.5 * u[i] * Mu[i];
            add("energy-vs-form", check_form, true, std::abs(E - quad), 1e-10 * E);
        }
        if (check_all || check_green)
            add("green-identity", check_green, orth, orth ? green_residual(L, u, v) : 0.0, 1e-10);

        if (check_all || check_ec || check_max) {
            // a nontrivial harmonic function and its analytic completion
            std::map<int, double> data;
            for (int b : L.boundary)
                data[b] = L.points[b].x * L.points[b].x - L.points[b].y * L.points[b].y;
            SolveReport solved = solve_dirichlet(L, data);
            if (check_all || check_max) {
                double ratio = max_principle_report(L, solved.solution).ratio;
                add("max-principle", check_max, orth, orth ? std::abs(ratio - 1.0) : 0.0, 1e-12);
            }
            if (check_all || check_ec) {
                ComplexVertexFunction f =
                    analytic_completion(L, solved.solution, 0, solved.solution[0]);
                double gap = orth ? energy_conservation_residual(L, f) : 0.0;
                add("energy-conservation", check_ec, orth,
                    gap, 1e-10 * std::max(solved.energy, 1e-300));
            }
        }

        print_check_table(rows);
        for (const CheckRow& row : rows)
            if (row.ran && !row.pass) g_exit = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return g_exit;
}
