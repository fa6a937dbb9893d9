#include "chemotax/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace chemotax {

namespace {

struct Entry {
    std::string value;
    int line;
    int col;
    mutable bool consumed = false;
};

using Section = std::map<std::string, Entry>;

struct ParsedFile {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ParsedFile tokenize(const std::string& text) {
    ParsedFile out;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError("malformed section header", lineno,
                                  static_cast<int>(raw.find('[')) + 1);
            section = trim(t.substr(1, t.size() - 2));
            out.sections[section];
            out.section_lines.emplace(section, lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno, 1);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", lineno, 1);
        if (value.empty())
            throw ConfigError("empty value for key '" + key + "'", lineno,
                              static_cast<int>(eq) + 2);
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any [section]", lineno, 1);
        const int col = static_cast<int>(raw.find(key)) + 1;
        if (!out.sections[section].emplace(key, Entry{value, lineno, col}).second)
            throw ConfigError("duplicate key '" + key + "'", lineno, col);
    }
    return out;
}

template <typename T>
T convert(const Entry& e, const std::string& key);

template <>
double convert<double>(const Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + e.value, e.line,
                          e.col);
    }
}

template <>
int convert<int>(const Entry& e, const std::string& key) {
    int v = 0;
    const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size())
        throw ConfigError("invalid integer for '" + key + "': " + e.value, e.line,
                          e.col);
    return v;
}

template <>
std::uint64_t convert<std::uint64_t>(const Entry& e, const std::string& key) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || p != e.value.data() + e.value.size())
        throw ConfigError("invalid seed for '" + key + "': " + e.value, e.line, e.col);
    return v;
}

template <>
bool convert<bool>(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError("invalid boolean for '" + key + "': " + e.value, e.line, e.col);
}

template <>
std::string convert<std::string>(const Entry& e, const std::string&) {
    return e.value;
}

class Reader {
public:
    explicit Reader(const ParsedFile& f) : f_(f) {}

    bool has_section(const std::string& s) const { return f_.sections.count(s) > 0; }

    template <typename T>
    T get(const std::string& sec, const std::string& key, T fallback) const {
        const Entry* e = find(sec, key);
        if (!e) return fallback;
        return convert<T>(*e, key);
    }

    std::optional<double> get_opt(const std::string& sec, const std::string& key) const {
        const Entry* e = find(sec, key);
        if (!e) return std::nullopt;
        return convert<double>(*e, key);
    }

    bool has(const std::string& sec, const std::string& key) const {
        return find(sec, key) != nullptr;
    }

    void reject_unknown_keys() const {
        for (const auto& [sec, entries] : f_.sections)
            for (const auto& [key, e] : entries)
                if (!e.consumed)
                    throw ConfigError("unknown key '" + key + "' in [" + sec + "]",
                                      e.line, e.col);
    }

    int section_line(const std::string& sec) const {
        auto it = f_.section_lines.find(sec);
        return it == f_.section_lines.end() ? 0 : it->second;
    }

private:
    const Entry* find(const std::string& sec, const std::string& key) const {
        auto s = f_.sections.find(sec);
        if (s == f_.sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.consumed = true;
        return &k->second;
    }

    const ParsedFile& f_;
};

InitialRecipe read_recipe(const Reader& r, const std::string& sec,
                          const InitialRecipe& defaults) {
    InitialRecipe rec = defaults;
    rec.builder = r.get<std::string>(sec, "builder", rec.builder);
    rec.mass = r.get<double>(sec, "mass", rec.mass);
    rec.value = r.get<double>(sec, "value", rec.value);
    rec.center_x = r.get<double>(sec, "center_x", rec.center_x);
    rec.center_y = r.get<double>(sec, "center_y", rec.center_y);
    rec.width = r.get<double>(sec, "width", rec.width);
    rec.floor_frac = r.get<double>(sec, "floor_frac", rec.floor_frac);
    rec.amplitude = r.get<double>(sec, "amplitude", rec.amplitude);
    rec.mode_x = r.get<int>(sec, "mode_x", rec.mode_x);
    rec.mode_y = r.get<int>(sec, "mode_y", rec.mode_y);
    if (r.has(sec, "seed")) {
        rec.seed = r.get<std::uint64_t>(sec, "seed", 0);
        rec.seed_set = true;
    }
    if (rec.builder == "random" && !rec.seed_set)
        throw ConfigError("builder 'random' requires an explicit seed in [" + sec + "]",
                          r.section_line(sec), 1);
    return rec;
}

RunConfig read_config(const ParsedFile& pf) {
    Reader r(pf);
    RunConfig c;

    c.lx = r.get<double>("domain", "lx", c.lx);
    c.ly = r.get<double>("domain", "ly", c.ly);
    c.nx = r.get<int>("domain", "nx", c.nx);
    c.ny = r.get<int>("domain", "ny", c.ny);

    c.model.chi1 = r.get<double>("model", "chi1", c.model.chi1);
    c.model.chi2 = r.get<double>("model", "chi2", c.model.chi2);
    c.model.chi3 = r.get<double>("model", "chi3", c.model.chi3);
    c.model.tau1 = r.get<double>("model", "tau1", c.model.tau1);
    c.model.tau2 = r.get<double>("model", "tau2", c.model.tau2);

    c.symmetric_copy = r.get<bool>("initial", "symmetric_copy", false);
    c.base_seed = r.get<std::uint64_t>("initial", "base_seed", c.base_seed);

    c.init_u = read_recipe(r, "initial_u", c.init_u);
    InitialRecipe signal_default;
    signal_default.builder = "elliptic";
    c.init_v = read_recipe(r, "initial_v", signal_default);
    if (c.symmetric_copy) {
        if (r.has_section("initial_w") || r.has_section("initial_z"))
            throw ConfigError(
                "symmetric_copy replaces [initial_w]/[initial_z]; remove them",
                r.section_line(r.has_section("initial_w") ? "initial_w" : "initial_z"),
                1);
    } else {
        c.init_w = read_recipe(r, "initial_w", c.init_w);
        c.init_z = read_recipe(r, "initial_z", signal_default);
    }

    c.solver.dt_init = r.get<double>("solver", "dt_init", c.solver.dt_init);
    c.solver.dt_min = r.get<double>("solver", "dt_min", c.solver.dt_min);
    c.solver.dt_max = r.get<double>("solver", "dt_max", c.solver.dt_max);
    c.solver.cfl_safety = r.get<double>("solver", "cfl_safety", c.solver.cfl_safety);
    c.solver.t_end = r.get<double>("solver", "t_end", c.solver.t_end);
    c.solver.blowup_linf_factor =
        r.get<double>("solver", "blowup_linf_factor", c.solver.blowup_linf_factor);
    c.solver.blowup_entropy_factor = r.get<double>("solver", "blowup_entropy_factor",
                                                   c.solver.blowup_entropy_factor);
    const std::string pm = r.get<std::string>("solver", "positivity_mode",
                                              "scharfetter_gummel");
    if (pm == "scharfetter_gummel")
        c.solver.positivity_mode = PositivityMode::scharfetter_gummel;
    else if (pm == "upwind")
        c.solver.positivity_mode = PositivityMode::upwind;
    else
        throw ConfigError("positivity_mode must be scharfetter_gummel or upwind",
                          r.section_line("solver"), 1);
    const std::string hb = r.get<std::string>("solver", "helmholtz_backend", "dct");
    if (hb == "dct")
        c.solver.helmholtz_backend = HelmholtzBackend::dct;
    else if (hb == "pcg")
        c.solver.helmholtz_backend = HelmholtzBackend::pcg;
    else
        throw ConfigError("helmholtz_backend must be dct or pcg",
                          r.section_line("solver"), 1);

    c.diagnostics_every = r.get<int>("diagnostics", "every", c.diagnostics_every);

    c.k_user = r.get_opt("constants", "k_est");
    c.cgn_user = r.get_opt("constants", "cgn_est");
    c.opt.max_iters = r.get<int>("constants", "max_iters", c.opt.max_iters);
    c.opt.random_starts = r.get<int>("constants", "starts", c.opt.random_starts);
    c.opt.seed = r.get<std::uint64_t>("constants", "seed", c.opt.seed);
    c.est_nx = r.get<int>("constants", "est_nx", c.est_nx);
    c.est_ny = r.get<int>("constants", "est_ny", c.est_ny);

    c.csv_path = r.get<std::string>("output", "csv", c.csv_path);
    c.snapshot_path = r.get<std::string>("output", "snapshot", c.snapshot_path);
    c.aggregate_path = r.get<std::string>("output", "aggregate", c.aggregate_path);

    r.reject_unknown_keys();
    return c;
}

Field build_density(const InitialRecipe& rec, const DomainSpec& dom) {
    if (rec.builder == "constant") return build_constant(dom, rec.mass);
    if (rec.builder == "gaussian")
        return build_gaussian_bump(dom, rec.mass, rec.center_x, rec.center_y,
                                   rec.width, rec.floor_frac * rec.mass / dom.area());
    if (rec.builder == "cosine")
        return build_cosine_perturbation(dom, rec.mass, rec.amplitude, rec.mode_x,
                                         rec.mode_y);
    if (rec.builder == "random")
        return build_random_perturbation(dom, rec.mass, rec.amplitude, rec.seed);
    throw InvalidData("unknown density builder '" + rec.builder + "'");
}

Field build_signal(const InitialRecipe& rec, const DomainSpec& dom,
                   const Field& source, const HelmholtzSolver& hh) {
    const double level =
        rec.value >= 0.0 ? rec.value : mean_value(source, dom);
    if (rec.builder == "elliptic") return hh.solve(source, 1.0, 1.0);
    if (rec.builder == "constant") return Field(dom.nx, dom.ny, level);
    if (rec.builder == "cosine") {
        Field f(dom.nx, dom.ny);
        for (int iy = 0; iy < dom.ny; ++iy)
            for (int ix = 0; ix < dom.nx; ++ix)
                f(ix, iy) = level * (1.0 +
                                     rec.amplitude *
                                         std::cos(M_PI * rec.mode_x * dom.cell_x(ix) / dom.lx) *
                                         std::cos(M_PI * rec.mode_y * dom.cell_y(iy) / dom.ly));
        return f;
    }
    if (rec.builder == "random") {
        std::mt19937_64 rng(rec.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        Field f(dom.nx, dom.ny);
        for (double& v : f.values()) v = level * (1.0 + rec.amplitude * unit(rng));
        return f;
    }
    throw InvalidData("unknown signal builder '" + rec.builder + "'");
}

} // namespace

RunConfig parse_run_config_text(const std::string& text) {
    return read_config(tokenize(text));
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str());
}

Experiment build_experiment(const RunConfig& cfg) {
    Experiment ex{cfg.domain(), cfg.model, {}, {}};
    ex.params.validate();
    cfg.solver.validate();

    HelmholtzSolver hh(ex.dom, cfg.solver.helmholtz_backend);
    SimState s;
    s.t = 0.0;
    s.u = build_density(cfg.init_u, ex.dom);
    if (cfg.symmetric_copy) {
        // v couples to w, which under the mirror construction is (chi2/chi1) u
        Field w_implied = s.u;
        for (double& x : w_implied.values()) x *= ex.params.chi2 / ex.params.chi1;
        s.v = build_signal(cfg.init_v, ex.dom, w_implied, hh);
        auto [w0, z0] = build_symmetric_copy(s.u, s.v, ex.params);
        s.w = std::move(w0);
        s.z = std::move(z0);
    } else {
        s.w = build_density(cfg.init_w, ex.dom);
        s.v = build_signal(cfg.init_v, ex.dom, s.w, hh);
        s.z = build_signal(cfg.init_z, ex.dom, s.u, hh);
    }
    ex.state0 = std::move(s);

    double k_est, cgn_est;
    ConstantProvenance k_prov, cgn_prov;
    if (cfg.k_user) {
        k_est = *cfg.k_user;
        k_prov = ConstantProvenance::user_supplied;
    } else {
        const DomainSpec est_dom(cfg.lx, cfg.ly, cfg.est_nx, cfg.est_ny);
        k_est = estimate_k(est_dom, cfg.opt).value;
        k_prov = ConstantProvenance::estimated;
    }
    if (cfg.cgn_user) {
        cgn_est = *cfg.cgn_user;
        cgn_prov = ConstantProvenance::user_supplied;
    } else {
        const DomainSpec est_dom(cfg.lx, cfg.ly, cfg.est_nx, cfg.est_ny);
        cgn_est = std::pow(estimate_cgn(est_dom, cfg.opt).value, 0.25);
        cgn_prov = ConstantProvenance::estimated;
    }
    ex.dp = make_derived_params(ex.state0.u, ex.state0.w, ex.dom, ex.params, k_est,
                                k_prov, cgn_est, cgn_prov);
    return ex;
}

} // namespace chemotax
