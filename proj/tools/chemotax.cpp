// chemotax command-line frontend: run / sweep / classify / constants /
// probe-blowup / plot. Exit codes: 0 success (run: completed), 2 run ended
// blowup_indicated, 1 failure, 64 config parse/validation error, 65 plot
// asked for a column the CSV does not have.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chemotax/constants.hpp"
#include "chemotax/experiment.hpp"
#include "chemotax/snapshot.hpp"

using nlohmann::json;
using namespace chemotax;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_blowup = 2;
constexpr int exit_config = 64;
constexpr int exit_missing_column = 65;

void print_report(std::ostream& os, const BlowupReport& rep) {
    os << "# BlowupReport\n"
       << "status = " << to_string(rep.status) << "\n"
       << "t_stop = " << format_double(rep.t_stop) << "\n"
       << "peak_linf_u = " << format_double(rep.peak_linf_u) << "\n"
       << "peak_linf_w = " << format_double(rep.peak_linf_w) << "\n"
       << "entropy_peak = " << format_double(rep.entropy_peak) << "\n"
       << "dt_at_stop = " << format_double(rep.dt_at_stop) << "\n";
}

int status_exit_code(RunStatus s) {
    switch (s) {
    case RunStatus::completed: return exit_ok;
    case RunStatus::blowup_indicated: return exit_blowup;
    case RunStatus::solver_failure: return exit_failure;
    }
    return exit_failure;
}

int cmd_run(const std::string& config_path, std::string csv_override,
            std::string snapshot_override) {
    RunConfig cfg = parse_run_config_file(config_path);
    if (!csv_override.empty()) cfg.csv_path = csv_override;
    if (!snapshot_override.empty()) cfg.snapshot_path = snapshot_override;

    Experiment ex = build_experiment(cfg);

    std::ofstream file;
    const bool to_stdout = cfg.csv_path == "-";
    if (!to_stdout) {
        file.open(cfg.csv_path, std::ios::trunc);
        if (!file) {
            std::cerr << "chemotax: cannot open csv output '" << cfg.csv_path << "'\n";
            return exit_failure;
        }
    }
    std::ostream& csv = to_stdout ? std::cout : file;
    csv << csv_header() << "\n";

    RunResult rr = run(ex.state0, ex.params, ex.dp, cfg.solver, ex.dom,
                       cfg.diagnostics_every,
                       [&](const DiagnosticsRow& row) { csv << csv_row(row) << "\n"; });
    csv.flush();

    if (!cfg.snapshot_path.empty())
        write_snapshot(cfg.snapshot_path,
                       make_snapshot(rr.final_state, ex.dom, ex.params));

    std::ostream& rep = to_stdout ? std::cerr : std::cout;
    print_report(rep, rr.report);
    // higher-order signal distances: reporting only, third differences are
    // discretization-noise dominated at desk resolutions
    rep << "w2inf_dist_v = "
        << format_double(wkinf_distance(rr.final_state.v, ex.dp.w0bar, ex.dom, 2))
        << "\n"
        << "w3inf_dist_v = "
        << format_double(wkinf_distance(rr.final_state.v, ex.dp.w0bar, ex.dom, 3))
        << "\n"
        << "w2inf_dist_z = "
        << format_double(wkinf_distance(rr.final_state.z, ex.dp.u0bar, ex.dom, 2))
        << "\n"
        << "w3inf_dist_z = "
        << format_double(wkinf_distance(rr.final_state.z, ex.dp.u0bar, ex.dom, 3))
        << "\n";
    return status_exit_code(rr.report.status);
}

json rates_to_json(const RateReport& r) {
    json j;
    auto put = [&](const char* name, const std::optional<double>& v) {
        if (v) j[name] = *v;
        else j[name] = nullptr;
    };
    put("mu", r.mu);
    put("delta", r.delta);
    put("sigma", r.sigma);
    put("zeta1", r.zeta1);
    put("zeta2", r.zeta2);
    put("zeta", r.zeta);
    put("rate_u_w", r.rate_u_w);
    put("rate_vz_ee", r.rate_vz_ee);
    put("rate_vz_pp", r.rate_vz_pp);
    return j;
}

const char* summary_name(RegimeSummary s) {
    switch (s) {
    case RegimeSummary::bounded_predicted: return "bounded_predicted";
    case RegimeSummary::blowup_predicted: return "blowup_predicted";
    case RegimeSummary::theory_silent: return "theory_silent";
    }
    return "unknown";
}

int cmd_classify(const std::string& config_path, const std::string& json_path) {
    RunConfig cfg = parse_run_config_file(config_path);
    Experiment ex = build_experiment(cfg);
    const RegimeVerdict v = classify(ex.params, ex.dp.m1, ex.dp.m2, ex.dp, ex.dom);

    std::cout << "# regime verdict (m1 = " << format_double(ex.dp.m1)
              << ", m2 = " << format_double(ex.dp.m2) << ")\n";
    for (const auto& c : v.applicable_conditions) {
        std::cout << (c.holds ? "[x] " : "[ ] ") << c.name
                  << "  lhs = " << format_double(c.lhs)
                  << "  rhs = " << format_double(c.rhs);
        if (!c.note.empty()) std::cout << "  (" << c.note << ")";
        std::cout << "\n";
    }
    std::cout << "b1_bounded = " << v.b1_bounded << " (margin "
              << format_double(v.b1_margin) << ")\n"
              << "b3_converges = " << v.b3_converges << "\n"
              << "b4_on_blowup_line = " << v.b4_on_blowup_line << "\n"
              << "b4_blowup_mass = " << v.b4_blowup_mass << "\n"
              << "summary = " << summary_name(v.summary) << "\n"
              << "k_est = " << format_double(v.k_est) << " ("
              << (v.k_provenance == ConstantProvenance::user_supplied ? "user"
                                                                      : "estimated")
              << ")\n"
              << "cgn_est = " << format_double(v.cgn_est) << " ("
              << (v.cgn_provenance == ConstantProvenance::user_supplied ? "user"
                                                                        : "estimated")
              << ")\n";

    json record{
        {"m1", ex.dp.m1},
        {"m2", ex.dp.m2},
        {"b1_bounded", v.b1_bounded},
        {"b1_margin", std::isnan(v.b1_margin) ? json(nullptr) : json(v.b1_margin)},
        {"b3_converges", v.b3_converges},
        {"b4_on_blowup_line", v.b4_on_blowup_line},
        {"b4_blowup_mass", v.b4_blowup_mass},
        {"summary", summary_name(v.summary)},
        {"k_est", v.k_est},
        {"cgn_est", v.cgn_est},
        {"k_provenance",
         v.k_provenance == ConstantProvenance::user_supplied ? "user" : "estimated"},
        {"cgn_provenance",
         v.cgn_provenance == ConstantProvenance::user_supplied ? "user" : "estimated"},
        {"rates", rates_to_json(v.rates)},
    };
    json conds = json::array();
    for (const auto& c : v.applicable_conditions)
        conds.push_back({{"name", c.name},
                         {"lhs", std::isnan(c.lhs) ? json(nullptr) : json(c.lhs)},
                         {"rhs", std::isnan(c.rhs) ? json(nullptr) : json(c.rhs)},
                         {"holds", c.holds}});
    record["conditions"] = conds;

    if (json_path.empty()) {
        std::cout << record.dump() << "\n";
    } else {
        std::ofstream out(json_path, std::ios::trunc);
        out << record.dump(2) << "\n";
    }
    return exit_ok;
}

int cmd_constants(const std::string& config_path) {
    RunConfig cfg = parse_run_config_file(config_path);
    const DomainSpec dom = cfg.domain();

    const double ps = pistar(dom);
    const ConstantEstimate k = estimate_k(dom, cfg.opt);
    const ConstantEstimate c4 = estimate_cgn(dom, cfg.opt);
    const double p_min = poincare_l2_oracle(dom, cfg.opt);

    std::cout << "constant      estimate              bound    analytic reference\n"
              << "pi_star       " << format_double(ps)
              << "    exact    4*pi on every rectangle\n"
              << "k             " << format_double(k.value)
              << "    lower    k >= 4 d^2/pi^2 = " << format_double(k_lower_reference(dom))
              << " (convex)\n"
              << "C_GN^4        " << format_double(c4.value)
              << "    lower    C_GN^4 >= 1/(8 pi) = " << format_double(cgn4_reference())
              << " (informational)\n"
              << "C_GN          " << format_double(std::pow(c4.value, 0.25))
              << "    lower\n"
              << "poincare_l2   " << format_double(p_min)
              << "    oracle   pi^2/max(Lx,Ly)^2 = "
              << format_double(poincare_l2_reference(dom)) << "\n";
    if (k.discretization_alarm)
        std::cout << "warning: k estimate exceeds 100x the convex lower bound; "
                     "discretization suspect\n";
    return exit_ok;
}

int cmd_sweep(const std::string& config_path, const std::string& grid,
              int jobs_flag, std::string out_override) {
    RunConfig cfg = parse_run_config_file(config_path);
    const SweepSpec spec = parse_grid_spec(grid);

    int jobs = jobs_flag;
    if (const char* env = std::getenv("CHEMOTAX_JOBS")) jobs = std::atoi(env);
    if (jobs < 1) jobs = 1;

    const std::vector<SweepPoint> points = run_sweep(cfg, spec, jobs);
    const std::string path = out_override.empty() ? cfg.aggregate_path : out_override;
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        std::cerr << "chemotax: cannot open aggregate output '" << path << "'\n";
        return exit_failure;
    }
    out << sweep_csv(points);
    std::cout << "sweep: " << points.size() << " points -> " << path << "\n";
    return exit_ok;
}

int cmd_probe_blowup(const std::string& config_path, std::vector<double> widths) {
    RunConfig cfg = parse_run_config_file(config_path);
    if (cfg.init_u.builder != "gaussian") {
        std::cerr << "chemotax: probe-blowup expects [initial_u] builder = gaussian\n";
        return exit_failure;
    }
    if (widths.empty()) widths = {cfg.init_u.width};

    Experiment probe = build_experiment(cfg);
    const auto [on_line, blowup_mass] =
        check_b4(probe.params, probe.dp.m1, probe.dp.m2, probe.dp);
    std::cout << "# blow-up probe: on_line = " << on_line
              << ", blowup_mass = " << blowup_mass << "\n";
    std::cout << "width,second_moment,status,t_stop,peak_ratio_u,dt_at_stop,"
                 "entropy_peak\n";

    for (double w : widths) {
        RunConfig c = cfg;
        c.init_u.width = w;
        Experiment ex = build_experiment_with_constants(
            c, probe.dp.k_est, probe.dp.k_provenance, probe.dp.cgn_est,
            probe.dp.cgn_provenance);
        const double m2nd = second_moment(ex.state0.u, ex.dom, c.init_u.center_x,
                                          c.init_u.center_y);
        const double init_peak = linf_norm(ex.state0.u);
        RunResult rr =
            run(ex.state0, ex.params, ex.dp, c.solver, ex.dom, c.diagnostics_every);
        std::cout << format_double(w) << ',' << format_double(m2nd) << ','
                  << to_string(rr.report.status) << ','
                  << format_double(rr.report.t_stop) << ','
                  << format_double(rr.report.peak_linf_u / init_peak) << ','
                  << format_double(rr.report.dt_at_stop) << ','
                  << format_double(rr.report.entropy_peak) << "\n";
    }
    return exit_ok;
}

int cmd_plot(const std::string& csv_path, const std::string& outdir,
             std::vector<std::string> columns) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "chemotax: cannot open csv '" << csv_path << "'\n";
        return exit_failure;
    }
    std::string header;
    if (!std::getline(in, header)) {
        std::cerr << "chemotax: empty csv\n";
        return exit_missing_column;
    }
    std::vector<std::string> names;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ',')) names.push_back(tok);
    }
    auto col_index = [&](const std::string& n) -> int {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<int>(i);
        return -1;
    };
    const int t_col = col_index("t");
    if (t_col < 0) {
        std::cerr << "chemotax: csv has no 't' column\n";
        return exit_missing_column;
    }
    if (columns.empty()) {
        for (const auto& n : names)
            if (n != "t") columns.push_back(n);
    }
    for (const auto& c : columns)
        if (col_index(c) < 0) {
            std::cerr << "chemotax: csv has no column '" << c << "'\n";
            return exit_missing_column;
        }

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) cells.push_back(tok);
        cells.resize(names.size());
        rows.push_back(std::move(cells));
    }

    std::filesystem::create_directories(outdir);
    for (const auto& c : columns) {
        const int ci = col_index(c);
        std::ofstream out(std::filesystem::path(outdir) / (c + ".dat"),
                          std::ios::trunc);
        for (const auto& cells : rows) {
            if (cells[static_cast<std::size_t>(ci)].empty()) continue;
            out << cells[static_cast<std::size_t>(t_col)] << ' '
                << cells[static_cast<std::size_t>(ci)] << '\n';
        }
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mass-conservative 2D simulator for a two-species, two-stimuli "
                 "chemotaxis system"};
    app.require_subcommand(1);

    std::string config_path, csv_path, snapshot_path, json_path, grid, out_path;
    std::string plot_csv, plot_outdir = "plot";
    std::vector<std::string> plot_columns;
    std::vector<double> widths;
    int jobs = 0;

    auto* c_run = app.add_subcommand("run", "execute one simulation");
    c_run->add_option("config", config_path)->required();
    c_run->add_option("--csv", csv_path, "override csv output path ('-' = stdout)");
    c_run->add_option("--snapshot", snapshot_path, "override final snapshot path");

    auto* c_sweep = app.add_subcommand("sweep", "Cartesian mass sweep");
    c_sweep->add_option("config", config_path)->required();
    c_sweep->add_option("--grid", grid, "m1=a:b:n,m2=c:d:n")->required();
    c_sweep->add_option("--jobs", jobs, "parallel points (env CHEMOTAX_JOBS overrides)");
    c_sweep->add_option("--out", out_path, "aggregate csv path");

    auto* c_classify = app.add_subcommand("classify", "theory verdict for a config");
    c_classify->add_option("config", config_path)->required();
    c_classify->add_option("--json", json_path, "write the machine-readable record here");

    auto* c_constants = app.add_subcommand("constants", "domain constant estimates");
    c_constants->add_option("config", config_path)->required();

    auto* c_probe = app.add_subcommand("probe-blowup", "gaussian width sweep probe");
    c_probe->add_option("config", config_path)->required();
    c_probe->add_option("--widths", widths, "bump widths to probe")->delimiter(',');

    auto* c_plot = app.add_subcommand("plot", "emit gnuplot two-column files");
    c_plot->add_option("csv", plot_csv)->required();
    c_plot->add_option("--outdir", plot_outdir);
    c_plot->add_option("--columns", plot_columns)->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_run) return cmd_run(config_path, csv_path, snapshot_path);
        if (*c_sweep) return cmd_sweep(config_path, grid, jobs, out_path);
        if (*c_classify) return cmd_classify(config_path, json_path);
        if (*c_constants) return cmd_constants(config_path);
        if (*c_probe) return cmd_probe_blowup(config_path, widths);
        if (*c_plot) return cmd_plot(plot_csv, plot_outdir, plot_columns);
    } catch (const ConfigError& e) {
        std::cerr << "chemotax: config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "chemotax: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}
