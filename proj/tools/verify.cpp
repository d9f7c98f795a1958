#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pool.hpp"
#include "qpol/qpol.hpp"

namespace qpol::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kSeed = 20240521;
constexpr int kRandomStates = 200;

struct Report {
    Table table;
    int failed = 0;

    void check(const std::string& section, const std::string& name, double delta, double tol,
               const std::string& note = "") {
        const bool pass = delta <= tol;
        if (!pass) ++failed;
        table.rows.push_back({section, name, delta, tol, std::string(pass ? "pass" : "fail"), note});
    }

    // Arbitration rows only fail when the reading the library uses disagrees.
    void arbitrate(const std::string& name, const std::string& reading, double delta, double tol, bool selected) {
        const bool ok = delta <= tol;
        if (selected && !ok) ++failed;
        table.rows.push_back({std::string("arbitration"), name + ":" + reading, delta, tol,
                              std::string(ok ? "consistent" : "inconsistent"),
                              std::string(selected ? "selected" : "not used")});
    }
};

int oracle_cutoff(const RunConfig& c, const CatSuperposition& s) { return c.cutoff ? *c.cutoff : recommended_cutoff(s); }

std::vector<CatSuperposition> random_states(int count, double radius) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto amp = [&] { return std::polar(radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng)); };
    std::vector<CatSuperposition> out;
    while (static_cast<int>(out.size()) < count) {
        const TwoModeCoherent a{amp(), amp()}, b{amp(), amp()};
        out.emplace_back(a, b);
    }
    return out;
}

double max_delta(const StokesMoments& a, const StokesMoments& b, const std::vector<int>& mean_idx,
                 const std::vector<int>& var_idx) {
    double d = 0.0;
    for (int i : mean_idx) d = std::max(d, std::abs(a.mean[i] - b.mean[i]));
    for (int i : var_idx) d = std::max(d, std::abs(a.var[i] - b.var[i]));
    return d;
}

template <class F>
double max_over(std::size_t n, F&& f) {
    const auto v = parallel_map(n, std::forward<F>(f));
    double d = 0.0;
    for (double x : v) d = std::max(d, x);
    return d;
}

double q_pointwise(const std::function<double(double, double)>& q, const FockVector& v, int n = 16) {
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double t = kPi * (i + 0.5) / n, p = 2.0 * kPi * j / n;
            d = std::max(d, std::abs(q(t, p) - q_fock(v, t, p)));
        }
    return d;
}

const std::vector<int> kAll{0, 1, 2, 3};

// -- sections

void section_stokes(Report& r, const RunConfig& c) {
    const auto states = random_states(kRandomStates, 2.5);
    struct D {
        double mean = 0, second = 0, var = 0;
    };
    const auto deltas = parallel_map(states.size(), [&](std::size_t i) {
        const auto closed = stokes_superposition(states[i]);
        const auto o = oracle_stokes(encode_superposition(states[i], oracle_cutoff(c, states[i])));
        D d;
        for (int k = 0; k < 4; ++k) {
            d.mean = std::max(d.mean, std::abs(closed.mean[k] - o.mean[k]));
            d.second = std::max(d.second, std::abs(closed.second[k] - o.second[k]));
            d.var = std::max(d.var, std::abs(closed.var[k] - o.var[k]));
        }
        return d;
    });
    D worst;
    for (const auto& d : deltas) {
        worst.mean = std::max(worst.mean, d.mean);
        worst.second = std::max(worst.second, d.second);
        worst.var = std::max(worst.var, d.var);
    }
    const std::string note = std::to_string(kRandomStates) + " random superpositions, |amplitude| <= 2.5";
    r.check("stokes", "superposition means", worst.mean, c.tolerance, note);
    r.check("stokes", "superposition second moments", worst.second, c.tolerance, note);
    r.check("stokes", "superposition variances", worst.var, c.tolerance, note);

    const double coh = max_over(50, [&](std::size_t i) {
        const auto s = states[i].first();
        const auto o = oracle_stokes(encode_coherent(s, c.cutoff ? *c.cutoff : recommended_cutoff(s)));
        return max_delta(stokes_coherent(s), o, kAll, kAll);
    });
    r.check("stokes", "coherent means and variances", coh, c.tolerance, "50 random coherent states");
}

std::vector<NamedState> named_grid() {
    std::vector<NamedState> out;
    for (double a : {0.3, 1.0, 1.5, 2.0})
        for (double b : {0.0, 0.7, 1.5}) out.push_back(NamedState::psi1(a, b));
    for (double a : {0.3, 1.0, 1.5, 2.0}) {
        out.push_back(NamedState::psi2(a));
        out.push_back(NamedState::psi3(a));
    }
    return out;
}

void section_named_stokes(Report& r, const RunConfig& c) {
    const auto grid = named_grid();
    double d1 = 0, d2 = 0, d3 = 0, zero = 0;
    for (const auto& k : grid) {
        const auto cat = make_named_state(k);
        const auto o = oracle_stokes(encode_superposition(cat, oracle_cutoff(c, cat)));
        const auto p = stokes_named(k, PrintedReading::inner);
        switch (k.kind) {
            case NamedKind::psi1: d1 = std::max(d1, max_delta(p, o, kAll, {0, 1, 2})); break;
            case NamedKind::psi2: d2 = std::max(d2, max_delta(p, o, {0, 1, 3}, {0, 1, 3})); break;
            case NamedKind::psi3: d3 = std::max(d3, max_delta(p, o, kAll, kAll)); break;
        }
        zero = std::max({zero, std::abs(p.mean[1]), std::abs(p.mean[3])});
    }
    r.check("named-stokes", "psi1 means, var0, var1, var2", d1, c.tolerance, "printed forms, inner reading");
    r.check("named-stokes", "psi2 mean0, mean1, mean3, var0, var1, var3", d2, c.tolerance, "printed forms");
    r.check("named-stokes", "psi3 means and variances", d3, c.tolerance, "printed forms");
    r.check("named-stokes", "<S1> = <S3> = 0", zero, 1e-12, "printed forms");
}

void section_concurrence(Report& r, const RunConfig& c) {
    const auto states = random_states(kRandomStates, 2.5);
    const double d = max_over(states.size(), [&](std::size_t i) {
        const double closed = concurrence_general(states[i]);
        return std::abs(closed - purity_concurrence(encode_superposition(states[i], oracle_cutoff(c, states[i]))));
    });
    r.check("concurrence", "general vs purity concurrence", d, c.tolerance,
            std::to_string(kRandomStates) + " random superpositions, |amplitude| <= 2.5");

    double named = 0.0;
    for (double a = -2.0; a <= 2.0; a += 0.25)
        for (double b : {-1.0, 0.0, 0.5, 2.0})
            for (const auto& k : {NamedState::psi1(a, b), NamedState::psi2(a), NamedState::psi3(a)})
                named = std::max(named, std::abs(concurrence_named(k) - concurrence_general(make_named_state(k))));
    r.check("concurrence", "named vs general", named, 1e-12, "real-parameter grid");

    double crc = 0.0;
    for (double a : {1.0, 2.0})
        for (double b : {0.0, -0.5})
            for (double t : {0.0, 0.3, kPi / 4, 1.2})
                for (double p1 : {0.0, 0.4, 1.3})
                    for (double p2 : {0.0, 1.0}) {
                        const auto k = NamedState::psi1(a, b);
                        const auto out = crc_transform(k.first(), k.second(), {p1, t, p2});
                        crc = std::max(crc, std::abs(concurrence_after_crc(a, b, t, p1) - concurrence_general(out)));
                    }
    r.check("concurrence", "after crc vs general path", crc, 1e-9, "phi2 in {0, 1}");
}

void section_q_pointwise(Report& r, const RunConfig& c) {
    auto encode_any = [&](const CatSuperposition& s) { return encode_superposition(s, oracle_cutoff(c, s)); };
    double coh = 0.0;
    for (const TwoModeCoherent s : {TwoModeCoherent{2.0, 0.0}, TwoModeCoherent{complex(1, 1), complex(0, -0.5)},
                                    TwoModeCoherent{}})
        coh = std::max(coh, q_pointwise([&](double t, double p) { return q_coherent(s, t, p); }, encode_any({s, s})));
    r.check("q-pointwise", "q_coherent vs q_fock", coh, c.tolerance, "16x16 grid");

    const auto states = random_states(6, 2.0);
    const double sup = max_over(states.size(), [&](std::size_t i) {
        return q_pointwise([&](double t, double p) { return q_superposition(states[i], t, p); }, encode_any(states[i]));
    });
    r.check("q-pointwise", "q_superposition vs q_fock", sup, c.tolerance, "6 random superpositions, 16x16 grid");

    double named = 0.0;
    for (const auto& k : named_grid())
        named = std::max(named, q_pointwise([&](double t, double p) { return q_named(k, t, p); },
                                            encode_any(make_named_state(k))));
    r.check("q-pointwise", "q_named vs q_fock", named, c.tolerance, "psi1, psi2, psi3 grid");
}

void section_q_normalization(Report& r, const RunConfig& c) {
    const SphereGrid grid(c.theta_nodes, c.phi_nodes);
    const auto cat = random_states(1, 2.0).front();
    const auto fixture = unpolarized_fixture([] {
        std::vector<double> p(31);
        p[0] = std::exp(-2.0);
        for (int n = 1; n <= 30; ++n) p[n] = p[n - 1] * 2.0 / n;
        return p;
    }(), 30);
    const std::vector<QSampler> samplers = {
        coherent_sampler({2.0, 2.0}),
        coherent_sampler({}),
        coherent_sampler({complex(1.5, -0.5), complex(0.2, 1.1)}),
        superposition_sampler(cat),
        named_sampler(NamedState::psi1(2.0, 1.0)),
        named_sampler(NamedState::psi2(1.5)),
        named_sampler(NamedState::psi3(2.0)),
        QSampler("psi1-printed", [](double t, double p) { return q_psi1_printed(2.0, 1.0, t, p); }),
        fock_sampler(encode_superposition(cat, oracle_cutoff(c, cat))),
        fock_sampler(encode_coherent({2.0, 0.0})),
        unpolarized_sampler(),
        density_sampler(fixture),
    };
    const auto deltas = parallel_map(samplers.size(), [&](std::size_t i) { return std::abs(q_integral(samplers[i], grid) - 1.0); });
    for (std::size_t i = 0; i < samplers.size(); ++i)
        r.check("q-normalization", samplers[i].tag(), deltas[i], c.tolerance, "grid " + std::to_string(c.theta_nodes) + "x" + std::to_string(c.phi_nodes));
}

void section_dop_analytic(Report& r, const RunConfig& c) {
    for (double n : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto grid = SphereGrid::for_photon_number(n, c.theta_nodes, c.phi_nodes);
        const double q = degree_of_polarization(coherent_sampler({std::sqrt(n), 0.0}), grid).degree;
        r.check("dop-analytic", "|alpha,0> with |alpha|^2=" + format_number(n), std::abs(q - dop_h_analytic(n)), 1e-6);
    }
}

void section_disentangler(Report& r, const RunConfig& c) {
    for (double d2 : {1.0, 4.0, 9.0}) {
        const double a = std::sqrt(d2);
        r.check("disentangler", "analytic C after crc, |alpha-beta|^2=" + format_number(d2),
                concurrence_after_crc(a, 0.0, kPi / 4, 0.0), 1e-12, "theta=pi/4, phi1=0");
        const auto k = NamedState::psi1(a, 0.0);
        const auto out = crc_transform(k.first(), k.second(), {0.0, kPi / 4, 0.0});
        r.check("disentangler", "oracle C after crc, |alpha-beta|^2=" + format_number(d2),
                purity_concurrence(encode_superposition(out, oracle_cutoff(c, out))), 1e-9, "theta=pi/4, phi1=0");
    }
}

void section_commutators(Report& r, const RunConfig&) {
    constexpr int cutoff = 40;
    const auto S = stokes_matrices(cutoff);
    double herm = 0.0;
    for (int i = 0; i < 4; ++i) herm = std::max(herm, ((*S)[i] - (*S)[i].adjoint()).norm());
    r.check("commutators", "Stokes matrices Hermitian", herm, 1e-14, "cutoff 40, Frobenius");

    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> g;
    double cyc = 0.0, s0 = 0.0;
    const complex two_i(0, 2);
    for (int k = 0; k < 5; ++k) {
        FockVector v(cutoff);
        for (int n1 = 0; n1 <= cutoff; ++n1)
            for (int n2 = 0; n1 + n2 <= cutoff - 2; ++n2) v(n1, n2) = complex(g(rng), g(rng));
        v.amplitudes() /= v.norm();
        auto apply = [&](int a, const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return (*S)[a].matrix() * x; };
        auto comm = [&](int a, int b) -> Eigen::VectorXcd {
            return apply(a, apply(b, v.amplitudes())) - apply(b, apply(a, v.amplitudes()));
        };
        cyc = std::max({cyc, (comm(1, 2) - two_i * apply(3, v.amplitudes())).norm(),
                        (comm(2, 3) - two_i * apply(1, v.amplitudes())).norm(),
                        (comm(3, 1) - two_i * apply(2, v.amplitudes())).norm()});
        for (int j = 1; j < 4; ++j) s0 = std::max(s0, comm(0, j).norm());
    }
    r.check("commutators", "[Sj, Sk] = 2i Sm", cyc, 1e-10, "cutoff 40, n1+n2 <= 38");
    r.check("commutators", "[S0, Sj] = 0", s0, 1e-10, "cutoff 40, n1+n2 <= 38");
}

std::vector<std::vector<double>> fixture_distributions() {
    std::vector<double> poisson(21);
    poisson[0] = std::exp(-2.0);
    for (int n = 1; n <= 20; ++n) poisson[n] = poisson[n - 1] * 2.0 / n;
    // thermal with mean 1, renormalized after truncation
    std::vector<double> thermal(21);
    double sum = 0.0;
    for (int n = 0; n <= 20; ++n) sum += thermal[n] = std::pow(0.5, n + 1);
    for (double& x : thermal) x /= sum;
    return {{1.0}, poisson, thermal};
}

void section_unpolarized(Report& r, const RunConfig& c) {
    constexpr int cutoff = 20;
    const auto S = stokes_matrices(cutoff);
    const SphereGrid grid(c.theta_nodes, c.phi_nodes);
    const char* names[] = {"vacuum", "poisson mean 2", "thermal mean 1"};
    const auto dists = fixture_distributions();
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const auto rho = unpolarized_fixture(dists[i], cutoff);
        const double comm = std::max({rho.commutator_norm((*S)[1]), rho.commutator_norm((*S)[2]), rho.commutator_norm((*S)[3])});
        r.check("unpolarized", std::string(names[i]) + ": [rho, Sj]", comm, 1e-10, "Frobenius");
        double flat = 0.0;
        for (const auto& t : grid.theta_nodes())
            for (int j = 0; j < grid.phi_count(); j += 8) flat = std::max(flat, std::abs(rho.q(t.theta, grid.phi(j)) - kUnpolarizedQ));
        r.check("unpolarized", std::string(names[i]) + ": Q = 1/4pi", flat, 1e-10);
        r.check("unpolarized", std::string(names[i]) + ": P", degree_of_polarization(density_sampler(rho), grid).degree, 1e-6);
    }
}

void section_amplitude(Report& r, const RunConfig& c) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<TwoModeCoherent> states;
    auto amp = [&] { return std::polar(2.5 * std::sqrt(u(rng)), 2.0 * kPi * u(rng)); };
    for (int i = 0; i < 50; ++i) states.push_back({amp(), amp()});
    const double d = max_over(states.size(), [&](std::size_t i) {
        const auto [x, y] = amplitude_means(states[i]);
        const auto [ox, oy] = oracle_amplitude_means(encode_coherent(states[i], c.cutoff ? *c.cutoff : recommended_cutoff(states[i])));
        return std::max(std::abs(x - ox), std::abs(y - oy));
    });
    r.check("amplitude", "amplitude_means vs oracle", d, 1e-9, "50 random coherent states");

    struct Reported {
        TwoModeCoherent s;
        double x, y;
    };
    const std::vector<Reported> reported = {{{2.0, 0.0}, 2, 0},  {{0.0, 2.0}, 0, 2},
                                            {{2.0, 2.0}, 2, 2},  {{2.0, -2.0}, 2, -2},
                                            {{2.0, complex(0, 2)}, 2, 0}, {{2.0, complex(0, -2)}, 2, 0}};
    double rep = 0.0;
    for (const auto& p : reported) {
        const auto [x, y] = amplitude_means(p.s);
        rep = std::max({rep, std::abs(x - p.x), std::abs(y - p.y)});
    }
    r.check("amplitude", "reported means of |2,0>, |0,2>, |2,2>, |2,-2>, |2,2i>, |2,-2i>", rep, 1e-12);
}

void section_rotator(Report& r, const RunConfig&) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double rot = 0.0, comp = 0.0;
    for (int k = 0; k < 4; ++k) {
        const TwoModeCoherent s{complex(u(rng), u(rng)), complex(u(rng), u(rng))};
        const int n = recommended_cutoff(2.0 * std::max(std::norm(s.alpha), std::norm(s.beta)) + 2.0);
        const auto S = stokes_matrices(n);
        const auto v = encode_coherent(s, n);
        for (double t : {0.35, kPi / 4, -1.2}) {
            rot = std::max(rot, 1.0 - fidelity(evolve((*S)[3], t, v), encode_coherent(rotate(s, t), n)));
            comp = std::max(comp, 1.0 - fidelity(evolve((*S)[1], 0.5 * t, v), encode_coherent(phase_shift(s, t), n)));
        }
    }
    r.check("rotator", "rotate = exp(i theta S3)", rot, 1e-9, "1 - fidelity");
    r.check("rotator", "phase_shift = exp(i phi S1 / 2)", comp, 1e-9, "1 - fidelity");
}

void section_cutoff(Report& r, const RunConfig&) {
    const auto states = random_states(5, 2.0);
    const double d = max_over(states.size(), [&](std::size_t i) {
        const int n = recommended_cutoff(states[i]);
        const auto a = oracle_stokes(encode_superposition(states[i], n));
        const auto b = oracle_stokes(encode_superposition(states[i], 2 * n));
        double m = max_delta(a, b, kAll, kAll);
        for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(a.second[k] - b.second[k]));
        return m;
    });
    r.check("cutoff", "doubling the cutoff", d, 1e-10, "Stokes moments of 5 random superpositions");
}

void section_arbitration(Report& r, const RunConfig& c) {
    const double tol = c.tolerance;
    struct Case {
        NamedState k;
        StokesMoments oracle;
        FockVector v;
    };
    std::vector<Case> cases;
    for (const auto& k : named_grid()) {
        const auto cat = make_named_state(k);
        auto v = encode_superposition(cat, oracle_cutoff(c, cat));
        cases.push_back({k, oracle_stokes(v), std::move(v)});
    }
    auto worst = [&](NamedKind kind, const std::function<double(const Case&)>& f) {
        double d = 0.0;
        for (const auto& cs : cases)
            if (cs.k.kind == kind) d = std::max(d, f(cs));
        return d;
    };
    auto var_of = [](int i, PrintedReading rd) {
        return [i, rd](const Case& cs) { return std::abs(stokes_named(cs.k, rd).var[i] - cs.oracle.var[i]); };
    };
    auto general_var = [](int i) {
        return [i](const Case& cs) { return std::abs(stokes_superposition(make_named_state(cs.k)).var[i] - cs.oracle.var[i]); };
    };

    r.arbitrate("psi1.var2", "printed-inner", worst(NamedKind::psi1, var_of(2, PrintedReading::inner)), tol, true);
    r.arbitrate("psi1.var2", "printed-outer", worst(NamedKind::psi1, var_of(2, PrintedReading::outer)), tol, false);
    r.arbitrate("psi1.var3", "printed", worst(NamedKind::psi1, var_of(3, PrintedReading::inner)), tol, false);
    r.arbitrate("psi1.var3", "general-superposition", worst(NamedKind::psi1, general_var(3)), tol, true);
    r.arbitrate("psi2.mean2", "printed",
                worst(NamedKind::psi2, [](const Case& cs) { return std::abs(stokes_named(cs.k).mean[2] - cs.oracle.mean[2]); }),
                tol, false);
    r.arbitrate("psi2.mean2", "general-superposition",
                worst(NamedKind::psi2,
                      [](const Case& cs) { return std::abs(stokes_superposition(make_named_state(cs.k)).mean[2] - cs.oracle.mean[2]); }),
                tol, true);
    r.arbitrate("psi2.var2", "printed-inner", worst(NamedKind::psi2, var_of(2, PrintedReading::inner)), tol, false);
    r.arbitrate("psi2.var2", "printed-outer", worst(NamedKind::psi2, var_of(2, PrintedReading::outer)), tol, false);
    r.arbitrate("psi2.var2", "general-superposition", worst(NamedKind::psi2, general_var(2)), tol, true);

    // bracket pairing of the superposition moments for complex labels
    const auto states = random_states(20, 2.0);
    double paired = 0.0, literal = 0.0;
    for (const auto& s : states) {
        const auto o = oracle_stokes(encode_superposition(s, oracle_cutoff(c, s)));
        paired = std::max(paired, max_delta(stokes_superposition(s), o, kAll, kAll));
        literal = std::max(literal, max_delta(stokes_superposition_literal(s), o, kAll, kAll));
    }
    r.arbitrate("superposition.stokes.bracket", "paired-conjugates", paired, tol, true);
    r.arbitrate("superposition.stokes.bracket", "literal-real-part", literal, tol, false);

    auto q_delta = [&](NamedKind kind, const std::function<double(const NamedState&, double, double)>& q) {
        return worst(kind, [&](const Case& cs) {
            return q_pointwise([&](double t, double p) { return q(cs.k, t, p); }, cs.v, 12);
        });
    };
    r.arbitrate("psi1.q.z12", "printed-real",
                q_delta(NamedKind::psi1, [](const NamedState& k, double t, double p) { return q_psi1_printed(k.alpha, k.beta, t, p); }),
                tol, false);
    r.arbitrate("psi1.q.z12", "general-superposition", q_delta(NamedKind::psi1, q_named), tol, true);
    r.arbitrate("psi2.q.prefactor", "1/(2pi)", q_delta(NamedKind::psi2, q_named), tol, true);
    r.arbitrate("psi2.q.prefactor", "1/(4pi)",
                q_delta(NamedKind::psi2, [](const NamedState& k, double t, double p) { return 0.5 * q_named(k, t, p); }), tol,
                false);
    r.arbitrate("psi3.q.interference", "2Re", q_delta(NamedKind::psi3, q_named), tol, true);

    double pair_bl = 0.0, pair_lb = 0.0;
    for (const auto& s : states) {
        const double o = purity_concurrence(encode_superposition(s, oracle_cutoff(c, s)));
        const complex p1 = coherent_overlap(s.first().alpha, s.second().alpha);
        const complex p2 = coherent_overlap(s.first().beta, s.second().beta);
        const double num = std::sqrt(std::max(0.0, (1.0 - std::norm(p1)) * (1.0 - std::norm(p2))));
        pair_bl = std::max(pair_bl, std::abs(concurrence_general(s) - o));
        pair_lb = std::max(pair_lb, std::abs(num / (1.0 + (p1 * std::conj(p2)).real()) - o));
    }
    r.arbitrate("concurrence.denominator", "<alpha|eps><beta|lambda>", pair_bl, tol, true);
    r.arbitrate("concurrence.denominator", "<alpha|eps><lambda|beta>", pair_lb, tol, false);
}

struct Section {
    const char* name;
    void (*run)(Report&, const RunConfig&);
};

const std::vector<Section>& sections() {
    static const std::vector<Section> all = {
        {"stokes", section_stokes},
        {"named-stokes", section_named_stokes},
        {"concurrence", section_concurrence},
        {"q-pointwise", section_q_pointwise},
        {"q-normalization", section_q_normalization},
        {"dop-analytic", section_dop_analytic},
        {"disentangler", section_disentangler},
        {"commutators", section_commutators},
        {"unpolarized", section_unpolarized},
        {"amplitude", section_amplitude},
        {"rotator", section_rotator},
        {"cutoff", section_cutoff},
        {"arbitration", section_arbitration},
    };
    return all;
}

}  // namespace

std::vector<std::string> verify_sections() {
    std::vector<std::string> out;
    for (const auto& s : sections()) out.emplace_back(s.name);
    return out;
}

VerifyResult run_verify(const std::vector<std::string>& only, const RunConfig& config) {
    const auto names = verify_sections();
    for (const auto& o : only)
        if (std::find(names.begin(), names.end(), o) == names.end()) {
            std::string list;
            for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
            throw UsageError("--only: unknown section '" + o + "' (known: " + list + ")");
        }
    Report r;
    r.table.meta.emplace_back("command", "verify");
    r.table.meta.emplace_back("tol", format_number(config.tolerance));
    r.table.meta.emplace_back("cutoff", config.cutoff ? std::to_string(*config.cutoff) : "auto");
    r.table.meta.emplace_back("seed", std::to_string(kSeed));
    r.table.columns = {"section", "check", "max_delta", "tol", "status", "note"};
    for (const auto& s : sections())
        if (only.empty() || std::find(only.begin(), only.end(), s.name) != only.end()) s.run(r, config);
    return {std::move(r.table), r.failed};
}

}  // namespace qpol::cli
