#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "pool.hpp"
#include "qpol/qpol.hpp"

namespace qpol::cli {

void RunConfig::validate() const {
    if (theta_nodes < 8) throw UsageError("--theta-nodes must be >= 8");
    if (phi_nodes < 16) throw UsageError("--phi-nodes must be >= 16");
    if (!(tolerance > 0.0 && tolerance <= 1e-2)) throw UsageError("--tol must lie in (0, 1e-2]");
    if (cutoff && *cutoff < 1) throw UsageError("--cutoff must be >= 1");
}

namespace {

double parse_real(const std::string& flag, const std::string& text, std::size_t begin, std::size_t end) {
    const std::string piece = text.substr(begin, end - begin);
    if (piece.empty()) throw UsageError(flag, text, begin + 1, "expected a number");
    char* stop = nullptr;
    errno = 0;
    const double v = std::strtod(piece.c_str(), &stop);
    const auto used = static_cast<std::size_t>(stop - piece.c_str());
    if (used != piece.size()) throw UsageError(flag, text, begin + used + 1, "unexpected character");
    if (errno == ERANGE || !std::isfinite(v)) throw UsageError(flag, text, begin + 1, "number out of range");
    return v;
}

std::vector<double> split_reals(const std::string& flag, const std::string& text, char sep) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (true) {
        const auto end = text.find(sep, begin);
        out.push_back(parse_real(flag, text, begin, end == std::string::npos ? text.size() : end));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return out;
}

}  // namespace

std::vector<double> parse_reals(const std::string& flag, const std::string& text) {
    return split_reals(flag, text, ',');
}

std::vector<double> parse_range(const std::string& flag, const std::string& text) {
    const auto parts = split_reals(flag, text, ':');
    if (parts.size() != 3) throw UsageError(flag + ": expected lo:hi:step, got '" + text + "'");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0)) throw UsageError(flag + ": step must be positive");
    if (hi < lo) throw UsageError(flag + ": hi must be >= lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw UsageError(flag + ": range has too many points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
    return out;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (const auto* d = std::get_if<double>(&row[i]))
                out << format_number(*d);
            else
                out << std::get<std::string>(row[i]);
        }
        out << '\n';
    }
    for (const auto& line : footer) out << "# " << line << '\n';
}

void Table::write_json(std::ostream& out) const {
    nlohmann::ordered_json j;
    auto& m = j["meta"];
    for (const auto& [k, v] : meta) m[k] = v;
    m["columns"] = columns;
    m["flags"] = argv;
    if (!footer.empty()) m["footer"] = footer;
    auto rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) {
            if (const auto* d = std::get_if<double>(&c))
                r.push_back(std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr));
            else
                r.push_back(std::get<std::string>(c));
        }
        rows_json.push_back(std::move(r));
    }
    j["rows"] = std::move(rows_json);
    out << j.dump(1) << '\n';
}

namespace {

using State = std::variant<TwoModeCoherent, CatSuperposition, NamedState>;

struct Item {
    std::vector<double> params;
    State state;
};

struct StateArgs {
    std::string coherent, cat, named, sweep, alpha2_range, beta2_range;
    std::optional<double> alpha2, beta2;

    bool any() const {
        return !coherent.empty() || !cat.empty() || !named.empty() || !sweep.empty() || alpha2 || beta2 ||
               !alpha2_range.empty() || !beta2_range.empty();
    }
};

struct StateSet {
    std::string kind;  // coherent, cat, psi1, psi2, psi3, hv, diag
    std::vector<std::string> param_names;
    std::vector<Item> items;
};

std::vector<double> photon_numbers(const std::string& name, const std::optional<double>& single,
                                   const std::string& range) {
    if (single && !range.empty()) throw UsageError(name + " and " + name + "-range are exclusive");
    if (!single && range.empty()) throw UsageError("missing " + name + " or " + name + "-range");
    auto values = single ? std::vector<double>{*single} : parse_range(name + "-range", range);
    for (double v : values)
        if (v < 0.0) throw UsageError(name + ": mean photon numbers must be >= 0");
    return values;
}

StateSet build_states(const StateArgs& a) {
    const int sources = !a.coherent.empty() + !a.cat.empty() + !a.named.empty() + !a.sweep.empty();
    if (sources != 1) throw UsageError("give exactly one of --coherent, --cat, --named, --coherent-sweep");
    StateSet set;

    if (!a.coherent.empty() || !a.cat.empty()) {
        if (a.alpha2 || a.beta2 || !a.alpha2_range.empty() || !a.beta2_range.empty())
            throw UsageError("--alpha2/--beta2 apply to --named and --coherent-sweep only");
    }

    if (!a.coherent.empty()) {
        const auto v = parse_reals("--coherent", a.coherent);
        set.kind = "coherent";
        set.param_names = {"alpha_re", "alpha_im", "beta_re", "beta_im"};
        TwoModeCoherent s;
        if (v.size() == 2)
            s = {v[0], v[1]};
        else if (v.size() == 4)
            s = {complex(v[0], v[1]), complex(v[2], v[3])};
        else
            throw UsageError("--coherent takes two reals (real labels) or four (RE,IM of each label)");
        set.items.push_back({{s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag()}, s});
        return set;
    }

    if (!a.cat.empty()) {
        const auto v = parse_reals("--cat", a.cat);
        set.kind = "cat";
        set.param_names = {"alpha_re", "alpha_im", "beta_re", "beta_im", "eps_re", "eps_im", "lambda_re", "lambda_im"};
        std::array<complex, 4> z;
        if (v.size() == 4)
            for (int i = 0; i < 4; ++i) z[i] = v[i];
        else if (v.size() == 8)
            for (int i = 0; i < 4; ++i) z[i] = complex(v[2 * i], v[2 * i + 1]);
        else
            throw UsageError("--cat takes four reals (alpha,beta,eps,lambda) or eight (RE,IM of each)");
        std::vector<double> params;
        for (const auto& x : z) {
            params.push_back(x.real());
            params.push_back(x.imag());
        }
        set.items.push_back({params, CatSuperposition({z[0], z[1]}, {z[2], z[3]})});
        return set;
    }

    const auto alphas = photon_numbers("--alpha2", a.alpha2, a.alpha2_range);

    if (!a.sweep.empty()) {
        if (a.sweep != "hv" && a.sweep != "diag") throw UsageError("--coherent-sweep must be hv or diag");
        if (a.beta2 || !a.beta2_range.empty()) throw UsageError("--beta2 does not apply to --coherent-sweep");
        set.kind = a.sweep;
        set.param_names = {"alpha2"};
        for (double n : alphas) {
            const double r = std::sqrt(n);
            set.items.push_back({{n}, TwoModeCoherent{r, a.sweep == "hv" ? 0.0 : r}});
        }
        return set;
    }

    if (a.named == "psi1") {
        const auto betas = photon_numbers("--beta2", a.beta2, a.beta2_range);
        set.kind = a.named;
        set.param_names = {"alpha2", "beta2"};
        for (double n : alphas)
            for (double m : betas) set.items.push_back({{n, m}, NamedState::psi1(std::sqrt(n), std::sqrt(m))});
        return set;
    }
    if (a.named == "psi2" || a.named == "psi3") {
        if (a.beta2 || !a.beta2_range.empty()) throw UsageError("--beta2 applies to psi1 only");
        set.kind = a.named;
        set.param_names = {"alpha2"};
        for (double n : alphas)
            set.items.push_back({{n}, a.named == "psi2" ? NamedState::psi2(std::sqrt(n)) : NamedState::psi3(std::sqrt(n))});
        return set;
    }
    throw UsageError("--named must be psi1, psi2 or psi3, got '" + a.named + "'");
}

CatSuperposition as_cat(const State& s) {
    if (const auto* c = std::get_if<TwoModeCoherent>(&s)) return {*c, *c};
    if (const auto* k = std::get_if<NamedState>(&s)) return make_named_state(*k);
    return std::get<CatSuperposition>(s);
}

int cutoff_for(const RunConfig& config, const CatSuperposition& c) {
    return config.cutoff ? *config.cutoff : recommended_cutoff(c);
}

FockVector encode(const RunConfig& config, const State& s) {
    if (const auto* c = std::get_if<TwoModeCoherent>(&s))
        return encode_coherent(*c, config.cutoff ? *config.cutoff : recommended_cutoff(*c));
    const auto cat = as_cat(s);
    return encode_superposition(cat, cutoff_for(config, cat));
}

std::string grid_text(int t, int p) { return std::to_string(t) + "x" + std::to_string(p); }

void add_config_meta(Table& t, const std::string& command, const RunConfig& config) {
    t.meta.emplace_back("command", command);
    t.meta.emplace_back("cutoff", config.cutoff ? std::to_string(*config.cutoff) : "auto");
}

std::vector<Cell> leading(const Item& item) { return {item.params.begin(), item.params.end()}; }

// -- stokes

struct StokesArgs {
    bool printed = false;
    std::string reading = "inner";
};

Table cmd_stokes(const StateSet& set, const StokesArgs& args, const RunConfig& config) {
    Table t;
    add_config_meta(t, "stokes", config);
    t.meta.emplace_back("state", set.kind);
    if (args.printed && set.kind.rfind("psi", 0) != 0) throw UsageError("--printed applies to --named states only");
    if (args.reading != "inner" && args.reading != "outer") throw UsageError("--reading must be inner or outer");
    const auto reading = args.reading == "inner" ? PrintedReading::inner : PrintedReading::outer;
    std::string source = set.kind == "coherent" || set.kind == "hv" || set.kind == "diag" ? "stokes_coherent"
                         : args.printed ? "stokes_named:" + args.reading
                                        : "stokes_superposition";
    t.meta.emplace_back("source", source);
    if (config.oracle) t.meta.emplace_back("oracle", "oracle_stokes");

    t.columns = set.param_names;
    for (const char* c : {"mean0", "mean1", "mean2", "mean3", "var0", "var1", "var2", "var3"}) t.columns.push_back(c);
    if (config.oracle) {
        for (const char* c : {"oracle_mean0", "oracle_mean1", "oracle_mean2", "oracle_mean3", "oracle_var0",
                              "oracle_var1", "oracle_var2", "oracle_var3", "dmean0", "dmean1", "dmean2", "dmean3",
                              "dvar0", "dvar1", "dvar2", "dvar3"})
            t.columns.push_back(c);
    }

    t.rows = parallel_map(set.items.size(), [&](std::size_t i) {
        const auto& item = set.items[i];
        StokesMoments m;
        if (const auto* s = std::get_if<TwoModeCoherent>(&item.state))
            m = stokes_coherent(*s);
        else if (const auto* k = std::get_if<NamedState>(&item.state); k && args.printed)
            m = stokes_named(*k, reading);
        else
            m = stokes_superposition(as_cat(item.state));
        auto row = leading(item);
        for (double x : m.mean) row.emplace_back(x);
        for (double x : m.var) row.emplace_back(x);
        if (config.oracle) {
            const auto o = oracle_stokes(encode(config, item.state));
            for (double x : o.mean) row.emplace_back(x);
            for (double x : o.var) row.emplace_back(x);
            for (int k = 0; k < 4; ++k) row.emplace_back(std::abs(m.mean[k] - o.mean[k]));
            for (int k = 0; k < 4; ++k) row.emplace_back(std::abs(m.var[k] - o.var[k]));
        }
        return row;
    });
    return t;
}

// -- qfunc

using QFn = std::function<double(double, double)>;

QFn closed_q(const State& s, bool printed, std::string& source) {
    if (const auto* c = std::get_if<TwoModeCoherent>(&s)) {
        source = "q_coherent";
        return [c = *c](double t, double p) { return q_coherent(c, t, p); };
    }
    if (const auto* k = std::get_if<NamedState>(&s)) {
        if (printed) {
            if (k->kind != NamedKind::psi1) throw UsageError("--printed Q is available for psi1 only");
            source = "q_psi1_printed";
            return [k = *k](double t, double p) { return q_psi1_printed(k.alpha, k.beta, t, p); };
        }
        source = "q_named";
        return [k = *k](double t, double p) { return q_named(k, t, p); };
    }
    source = "q_superposition";
    return [c = std::get<CatSuperposition>(s)](double t, double p) { return q_superposition(c, t, p); };
}

Table cmd_qfunc(const StateSet& set, bool printed, const RunConfig& config) {
    if (set.items.size() != 1) throw UsageError("qfunc takes a single state, not a sweep");
    const auto& item = set.items.front();
    Table t;
    add_config_meta(t, "qfunc", config);
    t.meta.emplace_back("state", set.kind);
    std::string source;
    const QSampler q(set.kind, closed_q(item.state, printed, source));
    t.meta.emplace_back("source", source);
    t.meta.emplace_back("grid", "uniform " + grid_text(config.theta_nodes, config.phi_nodes) +
                                    " over [0,pi] x [0,2pi], endpoints included");
    t.meta.emplace_back("xyz", "x=Q sin(theta) cos(phi), y=Q sin(theta) sin(phi), z=Q cos(theta)");
    std::optional<FockVector> v;
    if (config.oracle) {
        v = encode(config, item.state);
        t.meta.emplace_back("oracle", "q_fock");
    }
    t.columns = {"theta", "phi", "q", "x", "y", "z"};
    if (config.oracle) {
        t.columns.emplace_back("q_oracle");
        t.columns.emplace_back("dq");
    }
    const int nt = config.theta_nodes, np = config.phi_nodes;
    const auto rings = parallel_map(static_cast<std::size_t>(nt), [&](std::size_t i) {
        std::vector<std::vector<Cell>> ring;
        const double theta = std::numbers::pi * static_cast<double>(i) / (nt - 1);
        for (int j = 0; j < np; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / (np - 1);
            const double val = q(theta, phi);
            std::vector<Cell> row{theta,
                                  phi,
                                  val,
                                  val * std::sin(theta) * std::cos(phi),
                                  val * std::sin(theta) * std::sin(phi),
                                  val * std::cos(theta)};
            if (v) {
                const double o = q_fock(*v, theta, phi);
                row.emplace_back(o);
                row.emplace_back(std::abs(val - o));
            }
            ring.push_back(std::move(row));
        }
        return ring;
    });
    for (const auto& ring : rings)
        for (const auto& row : ring) t.rows.push_back(row);
    return t;
}

// -- dop

Table cmd_dop(const StateSet& set, bool printed, const RunConfig& config) {
    Table t;
    add_config_meta(t, "dop", config);
    t.meta.emplace_back("state", set.kind);
    std::string source;
    closed_q(set.items.front().state, printed, source);
    t.meta.emplace_back("source", source + "; degree_of_polarization");
    t.meta.emplace_back("grid", "gauss-legendre x trapezoid, at least " + grid_text(config.theta_nodes, config.phi_nodes) +
                                    ", scaled by mean photon number");
    const bool analytic = set.kind == "hv";
    if (analytic) t.meta.emplace_back("analytic", "dop_h_analytic");
    t.columns = set.param_names;
    for (const char* c : {"theta_nodes", "phi_nodes", "D", "P"}) t.columns.push_back(c);
    if (analytic) t.columns.emplace_back("P_analytic");
    if (config.oracle) {
        t.meta.emplace_back("oracle", "q_fock");
        for (const char* c : {"oracle_D", "oracle_P", "dP"}) t.columns.push_back(c);
    }
    t.rows = parallel_map(set.items.size(), [&](std::size_t i) {
        const auto& item = set.items[i];
        std::string unused;
        const QSampler q(set.kind, closed_q(item.state, printed, unused));
        const auto grid = SphereGrid::for_photon_number(as_cat(item.state).max_total_photons(), config.theta_nodes,
                                                        config.phi_nodes);
        const auto d = degree_of_polarization(q, grid);
        auto row = leading(item);
        row.emplace_back(static_cast<double>(grid.theta_nodes().size()));
        row.emplace_back(static_cast<double>(grid.phi_count()));
        row.emplace_back(d.distance);
        row.emplace_back(d.degree);
        if (analytic) row.emplace_back(dop_h_analytic(item.params[0]));
        if (config.oracle) {
            const auto o = degree_of_polarization(fock_sampler(encode(config, item.state)), grid);
            row.emplace_back(o.distance);
            row.emplace_back(o.degree);
            row.emplace_back(std::abs(o.degree - d.degree));
        }
        return row;
    });
    return t;
}

// -- concurrence

struct CrcArgs {
    bool enabled = false;
    std::optional<double> dist2;
    std::string phi1, theta_range, theta;
    double phi2 = 0.0;
};

Table cmd_concurrence_crc(const CrcArgs& a, const RunConfig& config) {
    if (!a.dist2) throw UsageError("--crc needs --dist2");
    if (*a.dist2 < 0.0) throw UsageError("--dist2 must be >= 0");
    if (a.phi1.empty()) throw UsageError("--crc needs --phi1");
    if (a.theta.empty() == a.theta_range.empty()) throw UsageError("--crc needs exactly one of --theta, --theta-range");
    const auto phis = parse_reals("--phi1", a.phi1);
    const auto thetas = a.theta.empty() ? parse_range("--theta-range", a.theta_range) : parse_reals("--theta", a.theta);
    const double alpha = std::sqrt(*a.dist2), beta = 0.0;

    Table t;
    add_config_meta(t, "concurrence", config);
    t.meta.emplace_back("state", "psi1 after phase compensator, rotator, phase compensator");
    t.meta.emplace_back("source", "concurrence_after_crc");
    t.meta.emplace_back("labels", "alpha=sqrt(dist2), beta=0");
    t.columns = {"dist2", "phi1", "theta", "C"};
    if (config.oracle) {
        t.meta.emplace_back("oracle", "purity_concurrence of crc_transform, phi2=" + format_number(a.phi2));
        t.columns.emplace_back("oracle_C");
        t.columns.emplace_back("dC");
    }
    std::vector<std::pair<double, double>> grid;
    for (double p : phis)
        for (double th : thetas) grid.emplace_back(p, th);
    t.rows = parallel_map(grid.size(), [&](std::size_t i) {
        const auto [phi1, theta] = grid[i];
        const double c = concurrence_after_crc(alpha, beta, theta, phi1);
        std::vector<Cell> row{*a.dist2, phi1, theta, c};
        if (config.oracle) {
            const auto k = NamedState::psi1(alpha, beta);
            const auto out = crc_transform(k.first(), k.second(), {phi1, theta, a.phi2});
            const double o = purity_concurrence(encode_superposition(out, cutoff_for(config, out)));
            row.emplace_back(o);
            row.emplace_back(std::abs(o - c));
        }
        return row;
    });
    return t;
}

Table cmd_concurrence(const StateSet& set, const RunConfig& config) {
    Table t;
    add_config_meta(t, "concurrence", config);
    t.meta.emplace_back("state", set.kind);
    const bool named = set.kind.rfind("psi", 0) == 0;
    t.meta.emplace_back("source", named ? "concurrence_named" : "concurrence_general");
    t.columns = set.param_names;
    t.columns.emplace_back("C");
    if (config.oracle) {
        t.meta.emplace_back("oracle", "purity_concurrence");
        t.columns.emplace_back("oracle_C");
        t.columns.emplace_back("dC");
    }
    t.rows = parallel_map(set.items.size(), [&](std::size_t i) {
        const auto& item = set.items[i];
        const double c = named ? concurrence_named(std::get<NamedState>(item.state)).value()
                               : concurrence_general(as_cat(item.state)).value();
        auto row = leading(item);
        row.emplace_back(c);
        if (config.oracle) {
            const double o = purity_concurrence(encode(config, item.state));
            row.emplace_back(o);
            row.emplace_back(std::abs(o - c));
        }
        return row;
    });
    return t;
}

// -- amplitude

struct AmplitudeArgs {
    int points = 81;
    double half_width = 2.0;
};

Table cmd_amplitude(const StateSet& set, const AmplitudeArgs& a, const RunConfig& config) {
    if (set.kind != "coherent" && set.kind != "hv" && set.kind != "diag")
        throw UnsupportedState("amplitude densities are computed for product coherent states only");
    if (set.items.size() != 1) throw UsageError("amplitude takes a single state, not a sweep");
    if (a.points < 2) throw UsageError("--points must be >= 2");
    if (!(a.half_width > 0.0)) throw UsageError("--half-width must be positive");
    const auto s = std::get<TwoModeCoherent>(set.items.front().state);
    const auto [mx, my] = amplitude_means(s);

    Table t;
    add_config_meta(t, "amplitude", config);
    t.meta.emplace_back("state", set.kind);
    t.meta.emplace_back("source", "amplitude_density; amplitude_means");
    t.meta.emplace_back("convention", "x=(a+a^dagger)/2, variance 1/4 per axis");
    t.meta.emplace_back("grid", std::to_string(a.points) + "x" + std::to_string(a.points) + " centred on the means, half-width " +
                                    format_number(a.half_width));
    t.columns = {"x", "y", "density"};
    std::optional<FockVector> v;
    if (config.oracle) {
        v = encode(config, s);
        t.meta.emplace_back("oracle", "amplitude_density_fock; oracle_amplitude_means");
        t.columns.emplace_back("density_oracle");
        t.columns.emplace_back("ddensity");
    }
    const auto lines = parallel_map(static_cast<std::size_t>(a.points), [&](std::size_t i) {
        std::vector<std::vector<Cell>> out;
        const double x = mx - a.half_width + 2.0 * a.half_width * static_cast<double>(i) / (a.points - 1);
        for (int j = 0; j < a.points; ++j) {
            const double y = my - a.half_width + 2.0 * a.half_width * j / (a.points - 1);
            const double d = amplitude_density(s, x, y);
            std::vector<Cell> row{x, y, d};
            if (v) {
                const double o = amplitude_density_fock(*v, x, y);
                row.emplace_back(o);
                row.emplace_back(std::abs(o - d));
            }
            out.push_back(std::move(row));
        }
        return out;
    });
    for (const auto& l : lines)
        for (const auto& row : l) t.rows.push_back(row);
    t.footer.push_back("means," + format_number(mx) + "," + format_number(my));
    if (v) {
        const auto [ox, oy] = oracle_amplitude_means(*v);
        t.footer.push_back("oracle_means," + format_number(ox) + "," + format_number(oy));
    }
    return t;
}

// -- plumbing

void add_state_options(CLI::App* app, StateArgs& s) {
    app->add_option("--coherent", s.coherent, "RE_ALPHA,RE_BETA or RE,IM,RE,IM: the two-mode coherent state |alpha,beta>");
    app->add_option("--cat", s.cat, "four reals alpha,beta,eps,lambda or eight RE,IM pairs: N(|alpha,beta> + |eps,lambda>)");
    app->add_option("--named", s.named, "psi1, psi2 or psi3");
    app->add_option("--alpha2", s.alpha2, "|alpha|^2");
    app->add_option("--beta2", s.beta2, "|beta|^2 (psi1)");
    app->add_option("--alpha2-range", s.alpha2_range, "lo:hi:step sweep of |alpha|^2");
    app->add_option("--beta2-range", s.beta2_range, "lo:hi:step sweep of |beta|^2 (psi1)");
}

void add_common_options(CLI::App* app, RunConfig& c, std::string& format) {
    app->add_option("--output", c.output, "write to PATH instead of stdout");
    app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--cutoff", c.cutoff, "photons per mode kept by the oracle (default: tail bound)");
    app->add_option("--theta-nodes", c.theta_nodes, "theta nodes (>= 8)");
    app->add_option("--phi-nodes", c.phi_nodes, "phi nodes (>= 16)");
    app->add_flag("--oracle", c.oracle, "attach number-basis oracle columns");
    app->add_option("--tol", c.tolerance, "verification tolerance in (0, 1e-2]");
}

class WarningRedirect {
public:
    explicit WarningRedirect(std::ostream& err) : saved_(warning_sink()) {
        warning_sink() = [this, &err](std::string_view m) {
            std::lock_guard lock(mutex_);
            err << "warning: " << m << '\n';
        };
    }
    ~WarningRedirect() { warning_sink() = saved_; }

private:
    std::function<void(std::string_view)> saved_;
    std::mutex mutex_;
};

void emit(const Table& t, const RunConfig& c, std::ostream& out) {
    std::ofstream file;
    std::ostream* dest = &out;
    if (!c.output.empty()) {
        file.open(c.output, std::ios::binary);
        if (!file) throw UsageError("cannot open --output " + c.output);
        dest = &file;
    }
    if (c.format == Format::json)
        t.write_json(*dest);
    else
        t.write_csv(*dest);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Polarization and entanglement of two-mode coherent-state superpositions"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    RunConfig config;
    std::string format = "csv";
    StateArgs state;
    StokesArgs stokes_args;
    bool printed_q = false;
    CrcArgs crc;
    AmplitudeArgs amp;
    std::vector<std::string> only;

    auto* stokes = app.add_subcommand("stokes", "Stokes means and variances");
    add_state_options(stokes, state);
    add_common_options(stokes, config, format);
    stokes->add_flag("--printed", stokes_args.printed, "use the printed special forms of the named states");
    stokes->add_option("--reading", stokes_args.reading, "brace reading of the printed psi1/psi2 V2: inner or outer");

    auto* qfunc = app.add_subcommand("qfunc", "Q function surface");
    add_state_options(qfunc, state);
    add_common_options(qfunc, config, format);
    qfunc->add_flag("--printed", printed_q, "psi1 Q with the printed real interference exponent");

    auto* dop = app.add_subcommand("dop", "distance D and degree of polarization P");
    add_state_options(dop, state);
    add_common_options(dop, config, format);
    dop->add_option("--coherent-sweep", state.sweep, "hv: |alpha,0>, diag: |alpha,alpha>, swept over --alpha2-range");
    dop->add_flag("--printed", printed_q, "psi1 Q with the printed real interference exponent");

    auto* conc = app.add_subcommand("concurrence", "concurrence of superpositions");
    add_state_options(conc, state);
    add_common_options(conc, config, format);
    conc->add_flag("--crc", crc.enabled, "psi1 after the compensator-rotator-compensator device");
    conc->add_option("--dist2", crc.dist2, "|alpha - beta|^2 for --crc");
    conc->add_option("--phi1", crc.phi1, "comma-separated first compensator phases (radians)");
    conc->add_option("--phi2", crc.phi2, "second compensator phase (radians); C does not depend on it");
    conc->add_option("--theta-range", crc.theta_range, "lo:hi:step rotator angles (radians)");
    conc->add_option("--theta", crc.theta, "comma-separated rotator angles (radians)");

    auto* ampl = app.add_subcommand("amplitude", "amplitude probability density of |alpha,beta>");
    add_state_options(ampl, state);
    add_common_options(ampl, config, format);
    ampl->add_option("--points", amp.points, "grid points per axis");
    ampl->add_option("--half-width", amp.half_width, "grid half-width around the means");

    auto* verify = app.add_subcommand("verify", "closed forms against the number-basis oracle");
    add_common_options(verify, config, format);
    verify->add_option("--only", only, "comma-separated sections")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    WarningRedirect redirect(err);
    try {
        config.format = format == "json" ? Format::json : Format::csv;
        config.validate();
        Table table;
        int code = kOk;
        if (*verify) {
            auto result = run_verify(only, config);
            table = std::move(result.table);
            if (result.failed > 0) {
                err << result.failed << " verification check(s) failed\n";
                code = kVerification;
            }
        } else if (*conc && crc.enabled) {
            if (state.any()) throw UsageError("--crc takes --dist2, --phi1 and --theta[-range], not a state");
            table = cmd_concurrence_crc(crc, config);
        } else {
            if (!*dop && !state.sweep.empty()) throw UsageError("--coherent-sweep applies to dop only");
            const auto set = build_states(state);
            if (*stokes) table = cmd_stokes(set, stokes_args, config);
            if (*qfunc) table = cmd_qfunc(set, printed_q, config);
            if (*dop) table = cmd_dop(set, printed_q, config);
            if (*conc) table = cmd_concurrence(set, config);
            if (*ampl) table = cmd_amplitude(set, amp, config);
        }
        table.argv = args;
        emit(table, config, out);
        return code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    }
}

}  // namespace qpol::cli
