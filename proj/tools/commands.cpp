#include "commands.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dml/classify.hpp"
#include "dml/codim2.hpp"
#include "dml/continuation.hpp"
#include "dml/csv.hpp"
#include "dml/equilibria.hpp"
#include "dml/manifest.hpp"
#include "dml/scenarios.hpp"
#include "dml/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace dmlcli {

std::string OutputDir::path(const std::string& name) const {
    return (fs::path(dir) / name).string();
}

OutputDir resolve_output_dir(const std::string& flag_value) {
    std::string d = flag_value;
    if (d.empty()) {
        if (const char* env = std::getenv("DML_OUTPUT_DIR")) d = env;
    }
    if (d.empty()) d = ".";
    fs::create_directories(d);
    return {d};
}

namespace {

using Clock = std::chrono::steady_clock;

struct ManifestScope {
    dml::RunManifest m;
    Clock::time_point t0 = Clock::now();
    OutputDir out;

    ManifestScope(const std::string& sub, const std::vector<std::string>& argv,
                  const OutputDir& o)
        : out(o) {
        m.subcommand = sub;
        m.argv = argv;
    }
    void finish() {
        m.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0)
                        .count();
        m.write(out.path("manifest_" + m.subcommand + ".json"));
    }
};

ordered_json eq_to_json(const dml::Equilibrium& e) {
    ordered_json j;
    j["x"] = e.state.x;
    j["y"] = e.state.y;
    j["trace"] = e.trace;
    j["det"] = e.det;
    j["eigenvalues"] = {{e.eig1.real(), e.eig1.imag()},
                        {e.eig2.real(), e.eig2.imag()}};
    j["stability"] = dml::to_string(e.stability);
    j["marginal"] = e.marginal;
    return j;
}

ordered_json bif_to_json(const dml::BifurcationPoint& b) {
    ordered_json j;
    j["kind"] = dml::to_string(b.kind);
    j["x"] = b.state.x;
    j["y"] = b.state.y;
    j["I"] = b.I;
    j["gamma"] = b.gamma;
    j["eigenvalues"] = {{b.eig1.real(), b.eig1.imag()},
                        {b.eig2.real(), b.eig2.imag()}};
    if (b.l1) j["l1"] = *b.l1;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

std::string solver_json(double rtol, double atol) {
    ordered_json j;
    j["method"] = "dopri5";
    j["rtol"] = rtol;
    j["atol"] = atol;
    return j.dump();
}

dml::CsvTable series_to_csv(const dml::TimeSeries& ts) {
    dml::CsvTable t;
    t.header = {"t", "x", "y", "phi"};
    t.rows.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        t.rows.push_back({ts.t[i], ts.states[i][0], ts.states[i][1],
                          ts.states[i][2]});
    return t;
}

ordered_json label_to_json(const dml::RegimeLabel& lab) {
    ordered_json j;
    j["kind"] = dml::to_string(lab.kind);
    if (lab.n_per_burst) j["n_per_burst"] = *lab.n_per_burst;
    else j["n_per_burst"] = nullptr;
    j["spike_count"] = lab.spike_count;
    j["series_range"] = lab.series_range;
    j["isi_stats"] = {{"cv", lab.isi_cv}};
    j["strobe_period"] = lab.strobe_period;
    j["n_bursts"] = lab.n_bursts;
    j["excursions_per_burst"] = lab.n_excursions_per_burst;
    j["subthreshold_per_spike"] = lab.subthreshold_per_spike;
    if (!lab.note.empty()) j["note"] = lab.note;
    return j;
}

void plot_series_svg(const dml::TimeSeries& ts, const std::string& title,
                     const std::string& ts_path, const std::string& pp_path) {
    dml::SvgPlot tp;
    tp.title = title;
    tp.x_label = "t";
    tp.y_label = "x";
    dml::SvgSeries sx;
    sx.id = "x_of_t";
    sx.color = "#1f77b4";
    sx.x = ts.t;
    sx.y = ts.x();
    tp.series.push_back(sx);
    tp.write(ts_path);

    dml::SvgPlot pp;
    pp.title = title + " phase projection";
    pp.x_label = "x";
    pp.y_label = "y";
    dml::SvgSeries sp;
    sp.id = "xy_orbit";
    sp.color = "#d62728";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sp.x.push_back(ts.states[i][0]);
        sp.y.push_back(ts.states[i][1]);
    }
    pp.series.push_back(sp);
    pp.write(pp_path);
}

}  // namespace

int cmd_nullclines(const std::vector<std::string>& argv, CLI::App& app,
                   dml::OriginalParams& p, double xlo, double xhi, int n,
                   const std::string& out_flag, bool svg) {
    (void)app;
    const OutputDir out = resolve_output_dir(out_flag);
    ManifestScope ms("nullclines", argv, out);
    p.validate();
    dml::CsvTable t;
    t.header = {"x", "y_xnull", "y_ynull"};
    for (int i = 0; i <= n; ++i) {
        const double x = xlo + (xhi - xlo) * i / n;
        t.rows.push_back(
            {x, dml::x_nullcline(x, p), dml::y_nullcline(x, p)});
    }
    const std::string csv = out.path("nullclines.csv");
    t.write(csv);
    ms.m.outputs.push_back(csv);
    if (svg) {
        dml::SvgPlot plot;
        plot.title = "nullclines";
        plot.x_label = "x";
        plot.y_label = "y";
        dml::SvgSeries s1, s2;
        s1.id = "x_nullcline";
        s1.color = "#ff7f0e";
        s2.id = "y_nullcline";
        s2.color = "black";
        s1.x = s2.x = t.column("x");
        s1.y = t.column("y_xnull");
        s2.y = t.column("y_ynull");
        plot.series = {s1, s2};
        const std::string sp = out.path("nullclines.svg");
        plot.write(sp);
        ms.m.outputs.push_back(sp);
    }
    ms.m.parameters_json = dml::to_json(p);
    ms.finish();
    return 0;
}

int run_cli(const std::vector<std::string>& argv) {
    CLI::App app{"bifurcation and simulation toolkit for the denatured "
                 "Morris-Lecar neuron model"};
    app.require_subcommand(1);
    std::string out_flag;
    app.add_option("--out", out_flag,
                   "output directory (default: $DML_OUTPUT_DIR or .)");

    // ---- nullclines ----
    dml::OriginalParams np;
    double n_xlo = -1.0, n_xhi = 1.5;
    int n_n = 600;
    bool n_svg = false;
    auto* c_null = app.add_subcommand("nullclines", "x/y nullcline table");
    c_null->add_option("--gamma", np.gamma);
    c_null->add_option("--I", np.I);
    c_null->add_option("--A", np.A);
    c_null->add_option("--alpha", np.alpha);
    c_null->add_option("--xlo", n_xlo);
    c_null->add_option("--xhi", n_xhi);
    c_null->add_option("--n", n_n);
    c_null->add_flag("--svg", n_svg);

    // ---- equilibria ----
    dml::OriginalParams ep;
    double e_xlo = -1.0, e_xhi = 1.5;
    int e_grid = 512;
    auto* c_eq = app.add_subcommand("equilibria",
                                    "equilibria with stability classification");
    c_eq->add_option("--gamma", ep.gamma);
    c_eq->add_option("--I", ep.I);
    c_eq->add_option("--A", ep.A);
    c_eq->add_option("--alpha", ep.alpha);
    c_eq->add_option("--xlo", e_xlo);
    c_eq->add_option("--xhi", e_xhi);
    c_eq->add_option("--grid", e_grid);

    // ---- continue ----
    dml::OriginalParams cp;
    std::string c_free = "I";
    double c_from = 0, c_to = 0;
    dml::ContinuationSettings cset;
    bool c_svg = false;
    auto* c_cont = app.add_subcommand(
        "continue", "pseudo-arclength equilibrium continuation");
    c_cont->add_option("--free", c_free, "free parameter: I or gamma")
        ->check(CLI::IsMember({"I", "gamma"}));
    c_cont->add_option("--from", c_from)->required();
    c_cont->add_option("--to", c_to)->required();
    c_cont->add_option("--gamma", cp.gamma, "fixed gamma (free = I)");
    c_cont->add_option("--I", cp.I, "fixed I (free = gamma)");
    c_cont->add_option("--A", cp.A);
    c_cont->add_option("--alpha", cp.alpha);
    c_cont->add_option("--h0", cset.h0);
    c_cont->add_option("--hmin", cset.h_min);
    c_cont->add_option("--hmax", cset.h_max);
    c_cont->add_flag("--svg", c_svg);

    // ---- codim2 ----
    dml::OriginalParams k2p;
    double k2_xlo = 0.01, k2_xhi = 0.65;
    int k2_n = 400;
    bool k2_svg = false;
    auto* c_k2 = app.add_subcommand(
        "codim2", "closed-form fold and Hopf curves in the (I, gamma)-plane");
    c_k2->add_option("--A", k2p.A);
    c_k2->add_option("--alpha", k2p.alpha);
    c_k2->add_option("--xlo", k2_xlo);
    c_k2->add_option("--xhi", k2_xhi);
    c_k2->add_option("--n", k2_n);
    c_k2->add_flag("--svg", k2_svg);

    // ---- cusp ----
    dml::OriginalParams cuspp;
    auto* c_cusp = app.add_subcommand("cusp", "cusp point of the fold curve");
    c_cusp->add_option("--A", cuspp.A);
    c_cusp->add_option("--alpha", cuspp.alpha);

    // ---- gh ----
    dml::OriginalParams ghp;
    double gh_xlo = 0.34, gh_xhi = 0.6;
    auto* c_gh = app.add_subcommand(
        "gh", "generalized Hopf point (l1 = 0 on the Hopf curve)");
    c_gh->add_option("--A", ghp.A);
    c_gh->add_option("--alpha", ghp.alpha);
    c_gh->add_option("--xlo", gh_xlo);
    c_gh->add_option("--xhi", gh_xhi);

    // ---- regions ----
    dml::OriginalParams rp;
    double r_Ilo = -0.01, r_Ihi = 0.06, r_glo = 0.15, r_ghi = 0.34;
    int r_nI = 24, r_ng = 24, r_workers = 1;
    auto* c_reg = app.add_subcommand(
        "regions", "region classification over an (I, gamma) grid");
    c_reg->add_option("--A", rp.A);
    c_reg->add_option("--alpha", rp.alpha);
    c_reg->add_option("--Ilo", r_Ilo);
    c_reg->add_option("--Ihi", r_Ihi);
    c_reg->add_option("--nI", r_nI);
    c_reg->add_option("--glo", r_glo);
    c_reg->add_option("--ghi", r_ghi);
    c_reg->add_option("--ng", r_ng);
    c_reg->add_option("--workers", r_workers);

    // ---- simulate ----
    std::string s_scenario;
    dml::ImprovedParams sp;
    double s_horizon = 0, s_x0 = 0.01, s_y0 = 0.01, s_phi0 = 0.01;
    double s_rtol = 1e-9, s_atol = 1e-12;
    bool s_svg = false;
    auto* c_sim = app.add_subcommand("simulate", "integrate the forced model");
    c_sim->add_option("--scenario", s_scenario, "named scenario (fig4a...)");
    c_sim->add_option("--gamma", sp.gamma);
    c_sim->add_option("--I0", sp.I0);
    c_sim->add_option("--omega", sp.omega);
    c_sim->add_option("--k", sp.k);
    c_sim->add_option("--A", sp.A);
    c_sim->add_option("--alpha", sp.alpha);
    c_sim->add_option("--k1", sp.k1);
    c_sim->add_option("--k2", sp.k2);
    c_sim->add_option("--alpha1", sp.alpha1);
    c_sim->add_option("--beta", sp.beta);
    c_sim->add_option("--phi-ext", sp.phi_ext);
    c_sim->add_option("--horizon", s_horizon, "default: 20 forcing periods");
    c_sim->add_option("--x0", s_x0);
    c_sim->add_option("--y0", s_y0);
    c_sim->add_option("--phi0", s_phi0);
    c_sim->add_option("--rtol", s_rtol);
    c_sim->add_option("--atol", s_atol);
    c_sim->add_flag("--svg", s_svg);

    // ---- classify ----
    std::string cl_scenario, cl_in;
    double cl_period = 0;
    auto* c_cls = app.add_subcommand(
        "classify", "firing-regime label for a series or scenario");
    c_cls->add_option("--scenario", cl_scenario);
    c_cls->add_option("--in", cl_in, "series CSV with t,x[,y,phi] columns");
    c_cls->add_option("--period", cl_period,
                      "forcing period of the series (with --in)");

    // ---- sweep ----
    std::string sw_param = "I0";
    double sw_from = 0, sw_to = 0, sw_gamma = 0.315;
    int sw_n = 10, sw_workers = 4;
    auto* c_sw = app.add_subcommand(
        "sweep", "parameter sweep of simulate+classify cells");
    c_sw->add_option("--param", sw_param)->check(CLI::IsMember({"I0", "gamma"}));
    c_sw->add_option("--from", sw_from)->required();
    c_sw->add_option("--to", sw_to)->required();
    c_sw->add_option("--n", sw_n);
    c_sw->add_option("--gamma", sw_gamma, "fixed gamma (param = I0)");
    c_sw->add_option("--workers", sw_workers);

    // ---- scenario list ----
    auto* c_scen = app.add_subcommand("scenario", "scenario registry");
    auto* c_scen_list = c_scen->add_subcommand("list", "list named scenarios");
    c_scen->require_subcommand(1);

    // ---- plot ----
    std::string p_kind = "timeseries", p_in, p_svg_path = "plot.svg";
    auto* c_plot = app.add_subcommand("plot", "render a data CSV as SVG");
    c_plot->add_option("--kind", p_kind)
        ->check(CLI::IsMember({"timeseries", "phase", "nullclines", "branch"}));
    c_plot->add_option("--in", p_in)->required();
    c_plot->add_option("--svg", p_svg_path);

    // ---- rerun ----
    std::string rr_manifest;
    auto* c_rr = app.add_subcommand(
        "rerun", "re-execute the command recorded in a manifest");
    c_rr->add_option("--manifest", rr_manifest)->required();

    // let --out appear after the subcommand as well
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* ss : sub->get_subcommands({})) ss->fallthrough();
    }

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (c_null->parsed())
            return cmd_nullclines(argv, app, np, n_xlo, n_xhi, n_n, out_flag,
                                  n_svg);

        if (c_eq->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("equilibria", argv, out);
            const auto found = dml::find_equilibria(ep, e_xlo, e_xhi, e_grid);
            ordered_json arr = ordered_json::array();
            for (const auto& e : found.equilibria) arr.push_back(eq_to_json(e));
            for (const auto& f : found.failures)
                std::cerr << "warning: refinement failed on ["
                          << dml::format_double(f.x_lo) << ", "
                          << dml::format_double(f.x_hi) << "]: " << f.reason
                          << "\n";
            const std::string path = out.path("equilibria.json");
            write_text(path, arr.dump(2) + "\n");
            std::cout << arr.dump(2) << "\n";
            ms.m.outputs.push_back(path);
            ms.m.parameters_json = dml::to_json(ep);
            ms.finish();
            return 0;
        }

        if (c_cont->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("continue", argv, out);
            const dml::FreeParam free =
                c_free == "I" ? dml::FreeParam::I : dml::FreeParam::gamma;
            // start from an equilibrium at the midpoint of the range
            dml::OriginalParams p0 = cp;
            const double mid = 0.5 * (c_from + c_to);
            if (free == dml::FreeParam::I) p0.I = mid;
            else p0.gamma = mid;
            const auto eqs = dml::find_equilibria(p0);
            if (eqs.equilibria.empty())
                throw std::runtime_error(
                    "no equilibrium found at the range midpoint");
            const auto br = dml::continue_equilibrium(
                eqs.equilibria.front(), p0, free, c_from, c_to, cset);
            dml::CsvTable t;
            // stability codes follow the Stability enum order; 1 = stable
            // when read as (det > 0 && trace < 0)
            t.header = {"param", "x", "y", "trace", "det", "stability"};
            for (const auto& bp : br.points)
                t.rows.push_back({bp.param, bp.state.x, bp.state.y, bp.trace,
                                  bp.det,
                                  double(static_cast<int>(bp.stability))});
            const std::string csv = out.path("branch.csv");
            t.write(csv);
            ms.m.outputs.push_back(csv);
            ordered_json bl = ordered_json::array();
            for (const auto& b : br.bifurcations) bl.push_back(bif_to_json(b));
            ordered_json j;
            j["free"] = c_free;
            j["complete"] = br.complete;
            if (!br.complete) j["termination"] = br.termination;
            j["bifurcations"] = bl;
            const std::string bj = out.path("bifurcations.json");
            write_text(bj, j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            ms.m.outputs.push_back(bj);
            if (c_svg) {
                dml::SvgPlot plot;
                plot.title = "equilibrium branch";
                plot.x_label = c_free;
                plot.y_label = "x";
                dml::SvgSeries s;
                s.id = "branch";
                s.color = "#1f77b4";
                s.x = t.column("param");
                s.y = t.column("x");
                plot.series.push_back(s);
                for (const auto& b : br.bifurcations)
                    plot.markers.push_back(
                        {free == dml::FreeParam::I ? b.I : b.gamma, b.state.x,
                         "#d62728", dml::to_string(b.kind)});
                const std::string spath = out.path("branch.svg");
                plot.write(spath);
                ms.m.outputs.push_back(spath);
            }
            ms.m.parameters_json = dml::to_json(cp);
            ms.finish();
            return 0;
        }

        if (c_k2->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("codim2", argv, out);
            std::vector<double> grid;
            for (int i = 0; i <= k2_n; ++i) {
                const double x = k2_xlo + (k2_xhi - k2_xlo) * i / k2_n;
                if (x > 0 && x < 2.0 / 3.0 &&
                    std::abs(2 * x - 3 * x * x) > 1e-9)
                    grid.push_back(x);
            }
            const auto fc = dml::fold_curve(k2p, grid);
            const auto hc = dml::hopf_curve(k2p, grid);
            dml::CsvTable tf, th;
            tf.header = {"x", "I", "gamma"};
            for (const auto& q : fc) tf.rows.push_back({q.x_eq, q.I, q.gamma});
            th.header = {"x", "I", "gamma", "genuine"};
            for (const auto& q : hc)
                th.rows.push_back({q.x_eq, q.I, q.gamma, q.genuine ? 1.0 : 0.0});
            const std::string pf = out.path("fold_curve.csv");
            const std::string ph = out.path("hopf_curve.csv");
            tf.write(pf);
            th.write(ph);
            ms.m.outputs = {pf, ph};
            if (k2_svg) {
                dml::SvgPlot plot;
                plot.title = "two-parameter bifurcation curves";
                plot.x_label = "I";
                plot.y_label = "gamma";
                dml::SvgSeries f, h;
                f.id = "fold_curve";
                f.color = "black";
                f.x = tf.column("I");
                f.y = tf.column("gamma");
                h.id = "hopf_curve";
                h.color = "#2ca02c";
                h.x = th.column("I");
                h.y = th.column("gamma");
                plot.series = {f, h};
                const auto cusp = dml::find_cusp(k2p);
                plot.markers.push_back({cusp.I, cusp.gamma, "#d62728", "CP"});
                try {
                    const auto gh = dml::find_generalized_hopf(k2p);
                    plot.markers.push_back({gh.I, gh.gamma, "#9467bd", "GH"});
                } catch (const std::exception&) {
                    // no GH on the default bracket; curve plot still valid
                }
                const std::string spath = out.path("codim2.svg");
                plot.write(spath);
                ms.m.outputs.push_back(spath);
            }
            ms.m.parameters_json = dml::to_json(k2p);
            ms.finish();
            return 0;
        }

        if (c_cusp->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("cusp", argv, out);
            const auto b = dml::find_cusp(cuspp);
            const std::string path = out.path("cusp.json");
            write_text(path, bif_to_json(b).dump(2) + "\n");
            std::cout << bif_to_json(b).dump(2) << "\n";
            ms.m.outputs.push_back(path);
            ms.m.parameters_json = dml::to_json(cuspp);
            ms.finish();
            return 0;
        }

        if (c_gh->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("gh", argv, out);
            const auto b = dml::find_generalized_hopf(ghp, gh_xlo, gh_xhi);
            const std::string path = out.path("gh.json");
            write_text(path, bif_to_json(b).dump(2) + "\n");
            std::cout << bif_to_json(b).dump(2) << "\n";
            ms.m.outputs.push_back(path);
            ms.m.parameters_json = dml::to_json(ghp);
            ms.finish();
            return 0;
        }

        if (c_reg->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("regions", argv, out);
            // cells are independent; fan out over a worker pool and merge
            // by index so the output ordering is scheduling-independent
            const int ncells = r_ng * r_nI;
            std::vector<std::array<double, 6>> cells(ncells);
            std::atomic<int> next{0};
            auto work = [&]() {
                for (;;) {
                    const int c = next.fetch_add(1);
                    if (c >= ncells) return;
                    const int gi = c / r_nI, ii = c % r_nI;
                    const double g =
                        r_glo + (r_ghi - r_glo) * gi / std::max(1, r_ng - 1);
                    const double I =
                        r_Ilo + (r_Ihi - r_Ilo) * ii / std::max(1, r_nI - 1);
                    const auto rep = dml::classify_region(I, g, rp);
                    cells[c] = {I, g, double(static_cast<int>(rep.region)),
                                double(rep.n_equilibria), double(rep.n_stable),
                                rep.cycle_present ? 1.0 : 0.0};
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < std::max(1, r_workers); ++w)
                pool.emplace_back(work);
            for (auto& th : pool) th.join();
            dml::CsvTable t;
            t.header = {"I", "gamma", "region", "n_equilibria", "n_stable",
                        "cycle"};
            for (const auto& row : cells)
                t.rows.push_back(
                    {row[0], row[1], row[2], row[3], row[4], row[5]});
            const std::string path = out.path("regions.csv");
            t.write(path);
            ms.m.outputs.push_back(path);
            ms.m.parameters_json = dml::to_json(rp);
            ms.finish();
            return 0;
        }

        if (c_sim->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("simulate", argv, out);
            dml::Scenario sc;
            if (!s_scenario.empty()) {
                sc = dml::scenario_by_name(s_scenario);
            } else {
                sc.name = "custom";
                sc.params = sp;
                sc.initial = {s_x0, s_y0, s_phi0};
            }
            if (s_horizon > 0) sc.horizon = s_horizon;
            sc.rtol = s_rtol;
            sc.atol = s_atol;
            const auto ts = dml::run_scenario(sc);
            const std::string csv = out.path("series.csv");
            series_to_csv(ts).write(csv);
            ms.m.outputs.push_back(csv);
            ordered_json meta;
            meta["scenario"] = sc.name;
            meta["parameters"] = ordered_json::parse(dml::to_json(sc.params));
            meta["initial"] = {sc.initial.x, sc.initial.y, sc.initial.phi};
            meta["horizon"] = sc.resolved_horizon();
            meta["transient_fraction"] = sc.transient_fraction;
            meta["forcing_period"] = sc.forcing_period();
            meta["steps_accepted"] = ts.meta.steps_accepted;
            meta["steps_rejected"] = ts.meta.steps_rejected;
            meta["solver"] = ordered_json::parse(solver_json(sc.rtol, sc.atol));
            const std::string mpath = out.path("series_meta.json");
            write_text(mpath, meta.dump(2) + "\n");
            ms.m.outputs.push_back(mpath);
            if (s_svg) {
                const std::string p1 = out.path("timeseries.svg");
                const std::string p2 = out.path("phase.svg");
                plot_series_svg(ts, sc.name, p1, p2);
                ms.m.outputs.push_back(p1);
                ms.m.outputs.push_back(p2);
            }
            ms.m.parameters_json = dml::to_json(sc.params);
            ms.m.solver_json = solver_json(sc.rtol, sc.atol);
            ms.finish();
            return 0;
        }

        if (c_cls->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("classify", argv, out);
            dml::RegimeLabel lab;
            if (!cl_scenario.empty()) {
                const auto& sc = dml::scenario_by_name(cl_scenario);
                lab = dml::classify_scenario(sc);
                ms.m.parameters_json = dml::to_json(sc.params);
            } else {
                if (cl_in.empty())
                    throw std::invalid_argument(
                        "classify needs --scenario or --in");
                if (!(cl_period > 0))
                    throw std::invalid_argument(
                        "--period is required with --in");
                const auto t = dml::CsvTable::read(cl_in);
                dml::TimeSeries ts;
                ts.dim = 3;
                ts.t = t.column("t");
                const auto xs = t.column("x");
                ts.states.resize(xs.size());
                for (std::size_t i = 0; i < xs.size(); ++i)
                    ts.states[i] = {xs[i], 0, 0};
                lab = dml::classify_activity(ts, cl_period);
            }
            const std::string path = out.path("classification.json");
            write_text(path, label_to_json(lab).dump(2) + "\n");
            std::cout << label_to_json(lab).dump(2) << "\n";
            ms.m.outputs.push_back(path);
            ms.finish();
            return 0;
        }

        if (c_sw->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            return cmd_sweep(argv, out.dir, sw_param, sw_from, sw_to, sw_n,
                             sw_gamma, sw_workers, true);
        }

        if (c_scen_list->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("scenario", argv, out);
            ordered_json arr = ordered_json::array();
            for (const auto& sc : dml::scenario_table()) {
                ordered_json j;
                j["name"] = sc.name;
                j["parameters"] =
                    ordered_json::parse(dml::to_json(sc.params));
                j["initial"] = {sc.initial.x, sc.initial.y, sc.initial.phi};
                j["horizon"] = sc.resolved_horizon();
                arr.push_back(j);
            }
            std::cout << arr.dump(2) << "\n";
            const std::string path = out.path("scenarios.json");
            write_text(path, arr.dump(2) + "\n");
            ms.m.outputs.push_back(path);
            ms.finish();
            return 0;
        }

        if (c_plot->parsed()) {
            const OutputDir out = resolve_output_dir(out_flag);
            ManifestScope ms("plot", argv, out);
            const auto t = dml::CsvTable::read(p_in);
            dml::SvgPlot plot;
            if (p_kind == "timeseries") {
                plot.title = "time series";
                plot.x_label = "t";
                plot.y_label = "x";
                dml::SvgSeries s;
                s.id = "x_of_t";
                s.color = "#1f77b4";
                s.x = t.column("t");
                s.y = t.column("x");
                plot.series.push_back(s);
            } else if (p_kind == "phase") {
                plot.title = "phase projection";
                plot.x_label = "x";
                plot.y_label = "y";
                dml::SvgSeries s;
                s.id = "xy_orbit";
                s.color = "#d62728";
                s.x = t.column("x");
                s.y = t.column("y");
                plot.series.push_back(s);
            } else if (p_kind == "nullclines") {
                plot.title = "nullclines";
                plot.x_label = "x";
                plot.y_label = "y";
                dml::SvgSeries s1, s2;
                s1.id = "x_nullcline";
                s1.color = "#ff7f0e";
                s2.id = "y_nullcline";
                s2.color = "black";
                s1.x = s2.x = t.column("x");
                s1.y = t.column("y_xnull");
                s2.y = t.column("y_ynull");
                plot.series = {s1, s2};
            } else {  // branch
                plot.title = "equilibrium branch";
                plot.x_label = "param";
                plot.y_label = "x";
                dml::SvgSeries s;
                s.id = "branch";
                s.color = "#1f77b4";
                s.x = t.column("param");
                s.y = t.column("x");
                plot.series.push_back(s);
            }
            const std::string path =
                p_svg_path.find('/') == std::string::npos ? out.path(p_svg_path)
                                                          : p_svg_path;
            plot.write(path);
            ms.m.outputs.push_back(path);
            ms.finish();
            return 0;
        }

        if (c_rr->parsed()) {
            const auto m = dml::RunManifest::read(rr_manifest);
            std::vector<std::string> sub_argv;
            sub_argv.push_back(m.argv.empty() ? "dml" : m.argv.front());
            if (!out_flag.empty()) {
                // --out before the subcommand overrides the recorded one
                sub_argv.push_back("--out");
                sub_argv.push_back(out_flag);
            }
            for (std::size_t i = 1; i < m.argv.size(); ++i) {
                if (!out_flag.empty() && m.argv[i] == "--out") {
                    ++i;  // skip the recorded directory
                    continue;
                }
                sub_argv.push_back(m.argv[i]);
            }
            return run_cli(sub_argv);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace dmlcli

int run_cli(const std::vector<std::string>& argv) {
    return dmlcli::run_cli(argv);
}
