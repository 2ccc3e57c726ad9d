// Command-line front end: matrix ingestion, analysis subcommands, and
// CSV/JSON/SVG emission.

#include "pspec/contours.hpp"
#include "pspec/grid.hpp"
#include "pspec/matrix_market.hpp"
#include "pspec/numerical_range.hpp"
#include "pspec/pencil.hpp"
#include "pspec/projection.hpp"
#include "pspec/svg.hpp"
#include "pspec/transient.hpp"
#include "pspec/weighted.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pspec;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Run configuration: every flag in one struct with a canonical JSON form that
// round-trips byte-identically.

struct RunConfig {
    std::string command;
    std::string A_path, E_path, H_path;
    std::string mu = "auto";           // "auto" or "re,im"
    std::optional<long> d_hint;
    std::vector<double> grid;          // re0,re1,im0,im1,nx,ny
    std::vector<double> eps;
    double tmax = 20.0;
    long nt = 201;
    long k = 0;
    long seed = 1;
    long nv = 0, np = 0;
    double density = 0.25;
    std::string out = ".";
    std::vector<std::string> format = {"csv", "json"};
    std::vector<std::string> T_paths;

    json to_json() const {
        json j;
        j["command"] = command;
        j["A"] = A_path;
        j["E"] = E_path;
        j["H"] = H_path;
        j["mu"] = mu;
        j["d"] = d_hint ? json(*d_hint) : json(nullptr);
        j["grid"] = grid;
        j["eps"] = eps;
        j["tmax"] = tmax;
        j["nt"] = nt;
        j["k"] = k;
        j["seed"] = seed;
        j["nv"] = nv;
        j["np"] = np;
        j["density"] = density;
        j["out"] = out;
        j["format"] = format;
        j["T"] = T_paths;
        return j;
    }

    static RunConfig from_json(const json& j) {
        RunConfig c;
        c.command = j.value("command", "");
        c.A_path = j.value("A", "");
        c.E_path = j.value("E", "");
        c.H_path = j.value("H", "");
        c.mu = j.value("mu", "auto");
        if (j.contains("d") && !j["d"].is_null()) c.d_hint = j["d"].get<long>();
        c.grid = j.value("grid", std::vector<double>{});
        c.eps = j.value("eps", std::vector<double>{});
        c.tmax = j.value("tmax", 20.0);
        c.nt = j.value("nt", 201L);
        c.k = j.value("k", 0L);
        c.seed = j.value("seed", 1L);
        c.nv = j.value("nv", 0L);
        c.np = j.value("np", 0L);
        c.density = j.value("density", 0.25);
        c.out = j.value("out", ".");
        c.format = j.value("format", std::vector<std::string>{"csv", "json"});
        c.T_paths = j.value("T", std::vector<std::string>{});
        return c;
    }

    bool wants(const std::string& f) const {
        return std::find(format.begin(), format.end(), f) != format.end();
    }

    GridSpec grid_spec() const {
        if (grid.empty()) return GridSpec(-4, 2, -4, 4, 81, 81);
        if (grid.size() != 6)
            throw InputError("--grid expects re0,re1,im0,im1,nx,ny");
        return GridSpec(grid[0], grid[1], grid[2], grid[3], Index(grid[4]),
                        Index(grid[5]));
    }

    std::vector<double> eps_list() const {
        if (eps.empty()) return {1.0, 0.1, 0.01};
        for (double e : eps)
            if (!(e > 0)) throw InputError("--eps values must be positive");
        return eps;
    }

    std::vector<double> t_grid() const {
        if (!(tmax > 0) || nt < 2) throw InputError("--tmax must be positive, --nt >= 2");
        std::vector<double> t(static_cast<size_t>(nt));
        for (long i = 0; i < nt; ++i) t[size_t(i)] = tmax * double(i) / double(nt - 1);
        return t;
    }
};

Complex parse_mu(const std::string& text) {
    if (text == "auto") throw InputError("internal: parse_mu on auto");
    double re = 0, im = 0;
    const int got = std::sscanf(text.c_str(), "%lf,%lf", &re, &im);
    if (got < 1) throw InputError("--mu expects 'auto' or RE[,IM], got '" + text + "'");
    return {re, im};
}

// ---------------------------------------------------------------------------
// Output helpers: one writer, deterministic formatting.

class OutputDir {
public:
    explicit OutputDir(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.out) {
        fs::create_directories(dir_);
    }

    void write_json(const std::string& name, json doc) const {
        if (!cfg_.wants("json")) return;
        doc["config"] = cfg_.to_json();
        std::ofstream out(dir_ / name);
        out << doc.dump(2) << "\n";
        std::cout << (dir_ / name).string() << "\n";
    }

    void write_field_csv(const std::string& name, const ResolventField& f) const {
        if (!cfg_.wants("csv")) return;
        std::ofstream out(dir_ / name);
        out << "re,im,sigmin\n";
        for (Index j = 0; j < f.grid.ny; ++j)
            for (Index i = 0; i < f.grid.nx; ++i)
                out << fmt17(f.grid.x(i)) << "," << fmt17(f.grid.y(j)) << ","
                    << fmt17(f.value(i, j)) << "\n";
        std::cout << (dir_ / name).string() << "\n";
    }

    void write_table_csv(const std::string& name, const std::string& header,
                         const std::vector<std::vector<double>>& rows) const {
        if (!cfg_.wants("csv")) return;
        std::ofstream out(dir_ / name);
        out << header << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << fmt17(row[i]);
            out << "\n";
        }
        std::cout << (dir_ / name).string() << "\n";
    }

    void write_svg(const std::string& name, const GridSpec& window,
                   const std::vector<Complex>& eigs, const ContourSet& contours,
                   const NumericalRangeBoundary* nr, const std::string& title) const {
        if (!cfg_.wants("svg")) return;
        write_svg_plot((dir_ / name).string(), window, eigs, contours, nr,
                       {640, 560, title});
        std::cout << (dir_ / name).string() << "\n";
    }

    const fs::path& dir() const { return dir_; }

private:
    const RunConfig& cfg_;
    fs::path dir_;
};

// ---------------------------------------------------------------------------
// Problem loading shared by the dense-analysis subcommands.

struct Problem {
    Pencil pencil;
    FiniteDecomposition fd;     // Euclidean decomposition
    Matrix generator;           // flow generator, H-transformed when H given
    Complex mu{};
    bool weighted = false;
    std::vector<std::string> warnings;
};

Matrix load_dense(const std::string& path, const char* what) {
    if (path.empty()) throw InputError(std::string("missing required matrix: ") + what);
    return read_matrix_market(path).to_dense();
}

Problem load_problem(const RunConfig& cfg) {
    Problem pr;
    pr.pencil = Pencil(load_dense(cfg.A_path, "--A"), load_dense(cfg.E_path, "--E"));
    pr.mu = cfg.mu == "auto" ? select_shift(pr.pencil) : parse_mu(cfg.mu);
    std::optional<Index> hint;
    if (cfg.d_hint) hint = Index(*cfg.d_hint);
    pr.fd = decompose(pr.pencil, pr.mu, hint);
    pr.warnings = pr.fd.warnings;
    if (!cfg.H_path.empty()) {
        const InnerProductNorm ipn(load_dense(cfg.H_path, "--H"));
        pr.generator = h_schur_transform(pr.fd, ipn).generator;
        pr.weighted = true;
    } else {
        pr.generator = pr.fd.generator();
    }
    return pr;
}

std::vector<Complex> generator_eigenvalues(const Problem& pr) {
    std::vector<Complex> out;
    for (Index i = 0; i < pr.generator.rows(); ++i) out.push_back(pr.generator(i, i));
    return out;
}

json base_summary(const Problem& pr) {
    json j;
    j["n"] = pr.pencil.size();
    j["d"] = pr.fd.d;
    j["index"] = pr.fd.index;
    j["mu"] = complex_to_json(pr.mu);
    j["weighted"] = pr.weighted;
    j["warnings"] = pr.warnings;
    return j;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

void cmd_decompose(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);

    json j = base_summary(pr);
    json eigs = json::array();
    for (const Complex l : finite_eigenvalues(pr.fd)) eigs.push_back(complex_to_json(l));
    j["finite_eigenvalues"] = eigs;
    j["spectral_abscissa"] = spectral_abscissa(pr.fd);

    const Matrix Emu = shifted_operator(pr.pencil, pr.mu);
    const Index n = pr.fd.n(), d = pr.fd.d, m = n - d;
    Matrix Qfull(n, n), T = Matrix::Zero(n, n);
    Qfull << pr.fd.Q, pr.fd.Qtilde;
    T.topLeftCorner(m, m) = pr.fd.G;
    T.topRightCorner(m, d) = pr.fd.D;
    T.bottomRightCorner(d, d) = pr.fd.N;
    j["residuals"]["reconstruction"] =
        (Qfull * T * Qfull.adjoint() - Emu).norm() / std::max(1e-300, Emu.norm());
    j["residuals"]["unitarity"] =
        (Qfull.adjoint() * Qfull - Matrix::Identity(n, n)).norm();
    out.write_json("decompose.json", j);
}

void cmd_grid(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const GridSpec grid = cfg.grid_spec();
    const ResolventField field = field_for_matrix(pr.generator, grid, FieldKind::dae, pr.mu);
    out.write_field_csv("field.csv", field);

    json j = base_summary(pr);
    j["grid"] = {grid.re_min, grid.re_max, grid.im_min, grid.im_max,
                 double(grid.nx), double(grid.ny)};
    j["sigmin_min"] = field.min_value();
    j["sigmin_max"] = field.max_value();
    out.write_json("grid.json", j);

    const ContourSet contours = extract_contours(field, cfg.eps_list());
    out.write_svg("field.svg", grid, generator_eigenvalues(pr), contours, nullptr,
                  "pseudospectra");
}

void cmd_contours(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const GridSpec grid = cfg.grid_spec();
    const ResolventField field = field_for_matrix(pr.generator, grid, FieldKind::dae, pr.mu);
    const ContourSet contours = extract_contours(field, cfg.eps_list());
    out.write_field_csv("field.csv", field);

    json j = base_summary(pr);
    json levels = json::array();
    for (const ContourLevel& level : contours.levels) {
        json lj;
        lj["epsilon"] = level.epsilon;
        lj["arc_length"] = level.total_length;
        json polys = json::array();
        for (const Polyline& pl : level.polylines) {
            json pj;
            pj["closed"] = pl.closed;
            pj["length"] = pl.length;
            json verts = json::array();
            for (const Complex v : pl.vertices) verts.push_back(complex_to_json(v));
            pj["vertices"] = verts;
            polys.push_back(pj);
        }
        lj["polylines"] = polys;
        levels.push_back(lj);
    }
    j["levels"] = levels;
    j["cell_diagonal"] = contours.cell_diagonal;
    out.write_json("contours.json", j);
    out.write_svg("contours.svg", grid, generator_eigenvalues(pr), contours, nullptr,
                  "contour levels");
}

void cmd_nr(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const NumericalRangeBoundary nr = numerical_range_of(pr.generator, 256);

    json j = base_summary(pr);
    j["omega"] = nr.omega;
    json pts = json::array();
    for (const Complex p : nr.points) pts.push_back(complex_to_json(p));
    j["boundary"] = pts;
    out.write_json("nr.json", j);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < nr.points.size(); ++i)
        rows.push_back({nr.theta[i], nr.points[i].real(), nr.points[i].imag()});
    out.write_table_csv("nr.csv", "theta,re,im", rows);

    double r0 = nr.points.front().real(), r1 = r0, i0 = nr.points.front().imag(), i1 = i0;
    for (const Complex p : nr.points) {
        r0 = std::min(r0, p.real());
        r1 = std::max(r1, p.real());
        i0 = std::min(i0, p.imag());
        i1 = std::max(i1, p.imag());
    }
    const double mr = 0.1 * std::max(r1 - r0, 1e-3), mi = 0.1 * std::max(i1 - i0, 1e-3);
    const GridSpec window(r0 - mr, r1 + mr, i0 - mi, i1 + mi, 2, 2);
    out.write_svg("nr.svg", window, generator_eigenvalues(pr), ContourSet{}, &nr,
                  "numerical range");
}

void cmd_abscissa(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);

    json j = base_summary(pr);
    json table = json::array();
    std::vector<std::vector<double>> rows;
    for (const double eps : cfg.eps_list()) {
        const LevelSearchResult r = pseudospectral_abscissa_of(pr.generator, eps);
        json e;
        e["epsilon"] = eps;
        e["alpha_eps"] = r.value;
        e["ratio"] = r.value / eps;
        e["argpoint"] = complex_to_json(r.argpoint);
        e["used_fallback"] = r.used_fallback;
        table.push_back(e);
        rows.push_back({eps, r.value, r.value / eps});
    }
    j["alpha_eps"] = table;
    j["omega"] = numerical_abscissa_of(pr.generator);
    out.write_json("abscissa.json", j);
    out.write_table_csv("abscissa.csv", "eps,alpha_eps,ratio", rows);
}

void cmd_kreiss(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const KreissResult kr = kreiss_constant_of(pr.generator);

    json j = base_summary(pr);
    j["kreiss"] = std::isfinite(kr.K) ? json(kr.K) : json("inf");
    j["eps_star"] = std::isfinite(kr.eps_star) ? json(kr.eps_star) : json("inf");
    j["unstable"] = kr.unstable;
    out.write_json("kreiss.json", j);
}

void cmd_bounds(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const GridSpec grid = cfg.grid_spec();
    const std::vector<double> t = cfg.t_grid();
    const ResolventField field = field_for_matrix(pr.generator, grid, FieldKind::dae, pr.mu);
    const ContourSet contours = extract_contours(field, cfg.eps_list());
    const BoundCurves bc = upper_bounds(pr.fd, t, contours, field);

    json j = base_summary(pr);
    j["omega"] = bc.omega;
    j["spectral_abscissa"] = bc.spectral_abscissa;
    j["kappa_V"] = std::isfinite(bc.kappa_V) ? json(bc.kappa_V) : json("inf");
    j["kreiss"] = std::isfinite(bc.kreiss_K) ? json(bc.kreiss_K) : json("inf");
    j["kreiss_bound"] = std::isfinite(bc.kreiss_bound) ? json(bc.kreiss_bound) : json("inf");
    json ratio = json::array();
    for (const double eps : cfg.eps_list()) {
        const LevelSearchResult r = pseudospectral_abscissa_of(pr.generator, eps);
        ratio.push_back({{"epsilon", eps}, {"alpha_eps", r.value}, {"ratio", r.value / eps}});
    }
    j["ratio_sweep"] = ratio;
    json cj = json::array();
    for (const ContourBound& cb : bc.contour) {
        json c;
        c["epsilon"] = cb.epsilon;
        c["refused"] = cb.refused;
        if (cb.refused) {
            c["reason"] = cb.refusal_reason;
        } else {
            c["arc_length"] = cb.length;
            c["alpha_eps"] = cb.alpha_eps;
            c["prefactor"] = cb.prefactor;
        }
        cj.push_back(c);
    }
    j["contour_bounds"] = cj;
    j["bound_warnings"] = bc.warnings;
    out.write_json("bounds.json", j);

    std::vector<std::vector<double>> rows;
    const ExpCurve curve = exp_norm_curve_of(pr.generator, t);
    for (size_t i = 0; i < t.size(); ++i) {
        std::vector<double> row{t[i], curve.norm[i], bc.coppell[i]};
        row.push_back(bc.eigenvector.empty() ? std::numeric_limits<double>::infinity()
                                             : bc.eigenvector[i]);
        row.push_back(bc.kreiss_bound);
        for (const ContourBound& cb : bc.contour)
            row.push_back(cb.refused ? std::numeric_limits<double>::infinity()
                                     : cb.curve[i]);
        rows.push_back(row);
    }
    std::string header = "t,exp_norm,coppell,eigenvector,kreiss_bound";
    for (const ContourBound& cb : bc.contour)
        header += ",contour_eps_" + fmt17(cb.epsilon);
    out.write_table_csv("bounds.csv", header, rows);
}

void cmd_transient(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const std::vector<double> t = cfg.t_grid();
    const ExpCurve curve = exp_norm_curve_of(pr.generator, t);

    json j = base_summary(pr);
    j["omega"] = numerical_abscissa_of(pr.generator);
    j["peak"] = curve.peak;
    j["t_peak"] = curve.t_peak;
    json worst = json::array();
    if (!pr.weighted) {
        const Vector x0 = pr.fd.Q * curve.worst_y0;
        for (Index i = 0; i < x0.size(); ++i) worst.push_back(complex_to_json(x0(i)));
    } else {
        for (Index i = 0; i < curve.worst_y0.size(); ++i)
            worst.push_back(complex_to_json(curve.worst_y0(i)));
    }
    j["worst_initial_condition"] = worst;
    json lower = json::array();
    for (const double eps : cfg.eps_list()) {
        const double a = pseudospectral_abscissa_of(pr.generator, eps).value;
        json e;
        e["epsilon"] = eps;
        e["alpha_eps"] = a;
        e["ratio"] = a / eps;
        if (a > 0) e["timed_bound_tmax"] = growth_lower_bound_timed(a, eps, t.back());
        lower.push_back(e);
    }
    j["lower_bounds"] = lower;
    out.write_json("transient.json", j);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < t.size(); ++i) rows.push_back({t[i], curve.norm[i]});
    out.write_table_csv("transient.csv", "t,exp_norm", rows);
}

void cmd_discrete(const RunConfig& cfg) {
    const Problem pr = load_problem(cfg);
    const OutputDir out(cfg);
    const Index k_max = Index(std::max(2L, cfg.nt));
    const DiscreteReport rep = discrete_report(pr.fd, k_max, cfg.eps_list());

    json j = base_summary(pr);
    j["spectral_radius"] = rep.spectral_radius;
    json rho = json::array();
    for (const auto& [eps, r] : rep.rho_eps)
        rho.push_back({{"epsilon", eps}, {"rho_eps", r}});
    j["rho_eps"] = rho;
    j["kreiss_disk_extension"] = std::isfinite(rep.kreiss_disk_extension)
                                     ? json(rep.kreiss_disk_extension)
                                     : json("inf");
    out.write_json("discrete.json", j);

    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < rep.power_norm.size(); ++k)
        rows.push_back({double(k), rep.power_norm[k]});
    out.write_table_csv("discrete.csv", "k,power_norm", rows);
}

void cmd_compare(const RunConfig& cfg) {
    const OutputDir out(cfg);
    const Pencil base(load_dense(cfg.A_path, "--A"), load_dense(cfg.E_path, "--E"));
    const GridSpec grid = cfg.grid_spec();

    struct Entry {
        std::string label;
        ResolventField dae;
        ResolventField gen1;
    };
    std::vector<Entry> entries;
    auto add = [&](const std::string& label, const Pencil& p) {
        const Complex mu = cfg.mu == "auto" ? select_shift(p) : parse_mu(cfg.mu);
        std::optional<Index> hint;
        if (cfg.d_hint) hint = Index(*cfg.d_hint);
        const FiniteDecomposition fd = decompose(p, mu, hint);
        entries.push_back({label, pseudospectra_grid(fd, grid),
                           legacy_grid(p, grid, FieldKind::gen1)});
    };
    add("original", base);
    for (size_t t = 0; t < cfg.T_paths.size(); ++t) {
        const Matrix T = load_dense(cfg.T_paths[t], "--T");
        add("T" + std::to_string(t + 1), Pencil(T * base.A, T * base.E));
    }

    auto rel_diff = [&](const ResolventField& a, const ResolventField& b) {
        double worst = 0.0;
        for (Index j = 0; j < grid.ny; ++j)
            for (Index i = 0; i < grid.nx; ++i) {
                const double x = a.value(i, j), y = b.value(i, j);
                if (std::max(x, y) <= 1e-12) continue;
                worst = std::max(worst, std::abs(x - y) / std::max(x, y));
            }
        return worst;
    };
    auto max_ratio = [&](const ResolventField& a, const ResolventField& b) {
        double worst = 0.0;
        for (Index j = 0; j < grid.ny; ++j)
            for (Index i = 0; i < grid.nx; ++i) {
                const double x = a.value(i, j), y = b.value(i, j);
                if (std::min(x, y) <= 1e-12) continue;
                worst = std::max(worst, std::max(x / y, y / x));
            }
        return worst;
    };

    json j;
    j["grid"] = {grid.re_min, grid.re_max, grid.im_min, grid.im_max,
                 double(grid.nx), double(grid.ny)};
    json per = json::array();
    double dae_worst = 0.0, gen1_best = 0.0;
    for (size_t a = 0; a < entries.size(); ++a) {
        for (size_t b = a + 1; b < entries.size(); ++b) {
            json pj;
            pj["pair"] = entries[a].label + " vs " + entries[b].label;
            const double dd = rel_diff(entries[a].dae, entries[b].dae);
            const double gr = max_ratio(entries[a].gen1, entries[b].gen1);
            pj["dae_max_rel_diff"] = dd;
            pj["gen1_max_ratio"] = gr;
            per.push_back(pj);
            dae_worst = std::max(dae_worst, dd);
            gen1_best = std::max(gen1_best, gr);
        }
    }
    j["pairs"] = per;
    j["dae_fields_identical"] = dae_worst < 1e-8;
    j["dae_max_rel_diff"] = dae_worst;
    j["gen1_max_ratio"] = gen1_best;
    j["gen1_fields_divergent"] = gen1_best > 10.0;
    out.write_json("compare.json", j);

    for (const Entry& e : entries) {
        out.write_field_csv("field_dae_" + e.label + ".csv", e.dae);
        out.write_field_csv("field_gen1_" + e.label + ".csv", e.gen1);
    }
}

void cmd_project(const RunConfig& cfg) {
    const OutputDir out(cfg);
    const MarketMatrix Am = read_matrix_market(cfg.A_path);
    const MarketMatrix Em = read_matrix_market(cfg.E_path);
    if (Am.rows != Am.cols || Em.rows != Am.rows || Em.cols != Am.cols)
        throw InputError("project: A and E must be square with equal dimension");
    SparsePencil sp;
    sp.A = Am.to_sparse();
    sp.E = Em.to_sparse();
    if (cfg.k < 1) throw InputError("project: pass --k >= 1");

    const Complex mu = cfg.mu == "auto" ? select_shift(sp.dense()) : parse_mu(cfg.mu);
    ProjectionResult pr = arnoldi_invariant_subspace(sp, mu, Index(cfg.k));
    std::optional<InnerProductNorm> ipn;
    if (!cfg.H_path.empty()) {
        ipn.emplace(load_dense(cfg.H_path, "--H"));
        pr = projected_h_norm(std::move(pr), *ipn);
    }
    const Matrix gen = ipn ? projected_h_generator(pr) : pr.generator();

    const GridSpec grid = cfg.grid_spec();
    const ResolventField field = field_for_matrix(gen, grid, FieldKind::dae, mu);
    out.write_field_csv("interior_field.csv", field);

    json j;
    j["n"] = sp.size();
    j["k"] = pr.k();
    j["mu"] = complex_to_json(mu);
    j["converged"] = pr.converged;
    j["basis_condition"] = pr.basis_condition;
    j["weighted"] = bool(ipn);
    json rv = json::array(), rs = json::array();
    for (const Complex r : pr.ritz_values) rv.push_back(complex_to_json(r));
    for (const double r : pr.residuals) rs.push_back(r);
    j["ritz_values"] = rv;
    j["residuals"] = rs;
    j["warnings"] = pr.warnings;
    json growth = json::array();
    for (const double eps : cfg.eps_list()) {
        const double a = pseudospectral_abscissa_of(gen, eps).value;
        growth.push_back({{"epsilon", eps},
                          {"alpha_eps_interior", a},
                          {"guaranteed_growth", a / eps}});
    }
    j["growth_bounds"] = growth;
    out.write_json("project.json", j);

    const ContourSet contours = extract_contours(field, cfg.eps_list());
    std::vector<Complex> ritz_shifted;
    for (const Complex r : pr.ritz_values) ritz_shifted.push_back(1.0 / r + mu);
    out.write_svg("interior_field.svg", grid, ritz_shifted, contours, nullptr,
                  "interior pseudospectra estimate");
}

void cmd_gen_saddle(const RunConfig& cfg) {
    if (cfg.nv <= 0 || cfg.np <= 0) throw InputError("gen-saddle: pass --nv and --np");
    const OutputDir out(cfg);
    const SparsePencil sp = generate_saddle_pencil(Index(cfg.nv), Index(cfg.np),
                                                   std::uint64_t(cfg.seed), cfg.density);
    write_matrix_market((out.dir() / "A.mtx").string(), sp.A);
    write_matrix_market((out.dir() / "E.mtx").string(), sp.E);
    std::cout << (out.dir() / "A.mtx").string() << "\n";
    std::cout << (out.dir() / "E.mtx").string() << "\n";

    json j;
    j["n"] = sp.size();
    j["nv"] = sp.n_v;
    j["np"] = sp.n_p;
    j["expected_d"] = 2 * sp.n_p;
    j["expected_index"] = 2;
    j["nnz_A"] = sp.A.nonZeros();
    j["nnz_E"] = sp.E.nonZeros();
    out.write_json("gen-saddle.json", j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAE-structured pseudospectra of matrix pencils and transient-growth bounds"};
    app.require_subcommand(1);

    RunConfig cfg;

    // Load defaults from --config before the flags are parsed, so explicit
    // flags override the file.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::cerr << "cannot open config file: " << argv[i + 1] << "\n";
                return 2;
            }
            try {
                cfg = RunConfig::from_json(json::parse(in));
            } catch (const json::exception& e) {
                std::cerr << "malformed config file: " << e.what() << "\n";
                return 2;
            }
        }
    }
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--A", cfg.A_path, "Matrix Market file for A");
        sub->add_option("--E", cfg.E_path, "Matrix Market file for E");
        sub->add_option("--H", cfg.H_path, "Hermitian positive definite norm matrix");
        sub->add_option("--mu", cfg.mu, "shift: auto or RE[,IM]");
        sub->add_option("--d", cfg.d_hint, "known count of infinite eigenvalues");
        sub->add_option("--grid", cfg.grid, "re0,re1,im0,im1,nx,ny")->delimiter(',');
        sub->add_option("--eps", cfg.eps, "epsilon levels")->delimiter(',');
        sub->add_option("--tmax", cfg.tmax, "time horizon");
        sub->add_option("--nt", cfg.nt, "time samples (k_max for discrete)");
        sub->add_option("--k", cfg.k, "projection subspace dimension");
        sub->add_option("--seed", cfg.seed, "generator seed");
        sub->add_option("--nv", cfg.nv, "saddle velocity dimension");
        sub->add_option("--np", cfg.np, "saddle pressure dimension");
        sub->add_option("--density", cfg.density, "saddle sparsity density");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--format", cfg.format, "outputs: csv,json,svg")->delimiter(',');
        sub->add_option("--T", cfg.T_paths, "premultiplier matrices for compare");
    };

    struct Cmd {
        const char* name;
        const char* help;
        void (*fn)(const RunConfig&);
    };
    const Cmd commands[] = {
        {"decompose", "finite/infinite spectral split and eigenvalues", cmd_decompose},
        {"grid", "sigma_min field over a complex-plane window", cmd_grid},
        {"contours", "level curves of the field with arc lengths", cmd_contours},
        {"nr", "numerical range boundary and abscissa", cmd_nr},
        {"abscissa", "pseudospectral abscissa per epsilon", cmd_abscissa},
        {"kreiss", "Kreiss constant and guaranteed growth", cmd_kreiss},
        {"bounds", "lower/upper transient bounds and the ratio sweep", cmd_bounds},
        {"transient", "exponential norm curve and worst-case start", cmd_transient},
        {"discrete", "power norms and pseudospectral radii", cmd_discrete},
        {"compare", "definition comparison under premultiplication", cmd_compare},
        {"project", "shift-invert Arnoldi interior estimates", cmd_project},
        {"gen-saddle", "seeded sparse saddle-point pencil", cmd_gen_saddle},
    };
    for (const Cmd& c : commands) add_common(app.add_subcommand(c.name, c.help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();

    auto fail_json = [&](const char* type, const std::string& msg) {
        json err;
        err["error"]["type"] = type;
        err["error"]["message"] = msg;
        err["config"] = cfg.to_json();
        std::cout << err.dump(2) << "\n";
    };

    try {
        for (const Cmd& c : commands) {
            if (cfg.command == c.name) {
                c.fn(cfg);
                return 0;
            }
        }
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const InputError& e) {
        fail_json("input", e.what());
        return 2;
    } catch (const NumericalError& e) {
        fail_json("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        fail_json("internal", e.what());
        return 3;
    }
}
