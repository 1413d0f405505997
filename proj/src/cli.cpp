#include "thermo/cli.hpp"

#include "thermo/error.hpp"
#include "thermo/majorization.hpp"
#include "thermo/noisy.hpp"
#include "thermo/qubit.hpp"
#include "thermo/serialize.hpp"
#include "thermo/thermal.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

namespace thermo::cli {

namespace {

struct Options {
    std::string p, q, gamma, ham_a, ham_b, mix, unitary, rho, sigma, subset;
    std::string family = "copies";
    std::string format = "json";
    std::string beta_de = "ln2";
    std::string preset;
    std::string coupling = "auto";
    std::size_t n = 3, m = 0, dim_a = 0, dim_b = 0, m_max = 10, max_bath_dim = 16;
    std::size_t cap = 1'000'000, samples = 10'000;
    double temperature = 1.0, delta_e = 1.0;
    bool serial = false;
    std::uint64_t seed = 0;
};

ProbabilityVector prob(const std::string& text, const char* name) {
    if (text.empty()) throw Error("invalid_argument", std::string("missing --") + name);
    return ProbabilityVector(parse_vector(text));
}

Hamiltonian ham(const std::string& text, const char* name) {
    if (text.empty()) throw Error("invalid_argument", std::string("missing --") + name);
    return hamiltonian_from_json(load_json(text));
}

double parse_beta_de(const std::string& s) {
    if (s.rfind("ln", 0) == 0) return std::log(to_double(parse_rational(s.substr(2))));
    return to_double(parse_rational(s));
}

ComplexMatrix matrix_arg(const std::string& text, const char* name) {
    if (text.empty()) throw Error("invalid_argument", std::string("missing --") + name);
    const Json j = load_json(text);
    if (j.is_array()) return real_matrix_from_json(j).cast<Complex>();
    return complex_matrix_from_json(j);
}

Json error_json(const std::string& code, const std::string& detail) { return Json{{"error", code}, {"detail", detail}}; }

Hamiltonian fig4_system() {
    return Hamiltonian::from_weights({Rational(5, 20), Rational(7, 20), Rational(8, 20)});
}

ProbabilityVector fig4_state() { return ProbabilityVector{0.65, 0.22, 0.13}; }

// ---------------------------------------------------------------------------

Json cmd_majorize(const Options& o) {
    const auto p = prob(o.p, "p");
    const auto q = prob(o.q, "q");
    if (p.dim() != q.dim()) throw Error("dimension_mismatch", "p and q differ in dimension");
    const auto k = first_violated_prefix(p.values(), q.values());
    Json j{{"majorizes", !k.has_value()}};
    j["first_violated_prefix"] = k ? Json(*k) : Json(nullptr);
    return j;
}

Json cmd_thermomajorize(const Options& o) {
    const auto p = prob(o.p, "p");
    const auto q = prob(o.q, "q");
    const ProbabilityVector gamma = !o.ham_a.empty() ? gibbs_vector(ham(o.ham_a, "ham-a")) : prob(o.gamma, "gamma");
    const auto d = thermomajorizes(p, q, gamma);
    Json j{{"thermomajorizes", d.has_value()}};
    j["witness"] = d ? to_json(*d) : Json(nullptr);
    return j;
}

Json cmd_horn(const Options& o) {
    const auto p = prob(o.p, "p");
    const auto q = prob(o.q, "q");
    const NoisyRealization r = horn_transition_unitary(p, q);
    const double err = max_abs(r.apply(DensityMatrix::diagonal(p)).matrix() - diagonal_matrix(q.values()));
    Json j = to_json(r);
    j["error"] = err;
    return j;
}

Json cmd_marginal(const Options& o) {
    const DensityMatrix rho(matrix_arg(o.rho, "rho"));
    const DensityMatrix sigma(matrix_arg(o.sigma, "sigma"));
    const ComplexMatrix u = marginal_transition_unitary(rho, sigma, o.dim_a, o.dim_b);
    const double err = max_abs(partial_trace_b(u * rho.matrix() * u.adjoint(), o.dim_a, o.dim_b) - sigma.matrix());
    return Json{{"U", to_json(u)}, {"error", err}};
}

Json cmd_noisy_witness(const Options& o) {
    const NoisyWitness w = noisy_not_unistochastic_witness(o.n);
    const RealMatrix induced = induced_stochastic_map(w.realization);
    return Json{{"D", to_json(w.d.matrix())},
                {"realization", to_json(w.realization)},
                {"realization_error", (induced - w.d.matrix()).cwiseAbs().maxCoeff()},
                {"certificate",
                 {{"row_a", w.certificate.row_a},
                  {"row_b", w.certificate.row_b},
                  {"column", w.certificate.column},
                  {"overlap_magnitude", w.certificate.overlap_magnitude}}}};
}

Json setup_json(const ThermalSetup& s) {
    return Json{{"joint_dim", s.joint_dim()},
                {"blocks", s.blocks},
                {"block_sizes", s.block_sizes()},
                {"log10_classical_count", log10_classical_count(s)},
                {"warnings", s.warnings}};
}

Json cmd_setup(const Options& o) { return setup_json(build_setup(ham(o.ham_a, "ham-a"), ham(o.ham_b, "ham-b"))); }

EnumerationOptions enum_opts(const Options& o) { return {o.cap, true, o.samples, o.seed}; }

ReachableSet reachable(const Options& o, const ProbabilityVector& p, const ThermalSetup& s) {
    return o.serial ? classical_reachable_set_serial(p, s, enum_opts(o)) : classical_reachable_set(p, s, enum_opts(o));
}

std::string cmd_reachable(const Options& o) {
    const ThermalSetup s = build_setup(ham(o.ham_a, "ham-a"), ham(o.ham_b, "ham-b"));
    const ReachableSet r = reachable(o, prob(o.p, "p"), s);
    if (o.format == "csv") return reachable_set_csv(r);
    return reachable_set_json(r).dump() + "\n";
}

Json synthesis_json(const Synthesis& syn) {
    Json j{{"U", to_json(syn.unitary)}, {"target", to_json(syn.target.values())}, {"error", syn.error}};
    j["gadget"] = syn.gadget ? to_json(*syn.gadget) : Json(nullptr);
    return j;
}

Json cmd_synthesize(const Options& o) {
    const ThermalSetup s = build_setup(ham(o.ham_a, "ham-a"), ham(o.ham_b, "ham-b"));
    if (o.mix.empty()) throw Error("invalid_argument", "missing --mix");
    return synthesis_json(synthesize_unitary(prob(o.p, "p"), combination_from_json(load_json(o.mix)), s));
}

Json cmd_decompose(const Options& o) {
    const ThermalSetup s = build_setup(ham(o.ham_a, "ham-a"), ham(o.ham_b, "ham-b"));
    Coupling c = Coupling::automatic;
    if (o.coupling == "product") c = Coupling::product;
    else if (o.coupling == "staircase") c = Coupling::staircase;
    else if (o.coupling != "auto") throw Error("invalid_argument", "coupling must be auto, product or staircase");
    return to_json(decompose_channel_to_classical(matrix_arg(o.unitary, "U"), s, c));
}

Json cmd_decohere(const Options& o) {
    const Hamiltonian h = ham(o.ham_a, "ham-a");
    std::vector<std::size_t> subset;
    if (o.subset.empty()) {
        subset = degenerate_subset(h);
    } else if (o.subset != "none") {
        for (double x : parse_vector(o.subset)) {
            if (x < 0 || x != std::floor(x)) throw Error("index_out_of_range", "subset entries must be nonnegative integers");
            subset.push_back(static_cast<std::size_t>(x));
        }
    }
    Json j = to_json(thermal_decoherence_gadget(h, subset));
    j["subset"] = subset;
    return j;
}

Json cmd_membership(const Options& o) {
    const ThermalSetup s = build_setup(ham(o.ham_a, "ham-a"), ham(o.ham_b, "ham-b"));
    const ReachableSet r = reachable(o, prob(o.p, "p"), s);
    const MembershipResult m = hull_membership(prob(o.q, "q"), r);
    Json j{{"location", to_string(m.location)}, {"margin", m.margin}, {"sampled", r.sampled}};
    j["combination"] = m.location == Location::exterior ? Json(nullptr) : to_json(m.combination);
    return j;
}

Json cmd_realize(const Options& o) {
    BathFamily fam;
    if (o.family == "copies") fam = BathFamily::copies;
    else if (o.family == "oscillator") fam = BathFamily::oscillator;
    else throw Error("invalid_argument", "family must be copies or oscillator");
    const auto r = realize_interior(prob(o.p, "p"), ham(o.ham_a, "ham-a"), prob(o.q, "q"), fam, o.max_bath_dim);
    if (!r) return Json{{"found", false}, {"reason", "budget exhausted"}};
    Json j{{"found", true}, {"bath", r->bath_description}, {"bath_dim", r->bath.dim()}};
    j["synthesis"] = synthesis_json(r->synthesis);
    j["combination"] = to_json(r->combination);
    return j;
}

Json cmd_qubit_alpha(const Options& o) {
    if (!o.ham_b.empty()) {
        const Hamiltonian hb = ham(o.ham_b, "ham-b");
        const QubitGibbs qg = make_qubit_gibbs(hb.quantum(), hb.beta());
        const BathSpectrumSummary s = summarize_bath(hb, EnergyLabel(Rational(1), Rational(1)));
        const AlphaBound b = alpha_bound_general(s, qg);
        return Json{{"bound", b.bound},         {"tight", b.tight},
                    {"g_max", s.g_max},         {"gamma_max", s.gamma_max},
                    {"matching_closure", s.matching_closure}, {"degeneracy_monotone", s.degeneracy_monotone},
                    {"limit", qg.ratio()}};
    }
    if (o.m < 2) throw Error("invalid_argument", "give --m >= 2 or --ham-b");
    const double bde = parse_beta_de(o.beta_de);
    return Json{{"m", o.m}, {"beta_delta_e", bde}, {"alpha_max", alpha_max_oscillator(o.m, bde)}, {"limit", std::exp(-bde)}};
}

Json cmd_third_law(const Options& o) {
    const double beta = 1.0 / o.temperature;
    Hamiltonian hb = Hamiltonian::trivial(1, beta);
    if (!o.ham_b.empty()) hb = ham(o.ham_b, "ham-b");
    else if (o.m >= 1) hb = Hamiltonian::oscillator(o.m, o.delta_e, beta);
    else throw Error("invalid_argument", "give --m or --ham-b");
    const BathSpectrumSummary s = summarize_bath(hb, EnergyLabel(Rational(1), Rational(1)));
    const ThirdLawBounds b = third_law_bounds(o.temperature, o.delta_e, s);
    auto num = [](double x) { return std::isinf(x) ? Json("inf") : Json(x); };
    Json j{{"free_energy_bound", num(b.free_energy_bound)}, {"coarse_bound", num(b.coarse_bound)}};
    if (o.ham_b.empty() && o.m >= 2) j["oscillator_temperature"] = oscillator_final_temperature(o.m, beta, o.delta_e);
    return j;
}

std::string cmd_fig3(const Options& o) {
    const double bde = parse_beta_de(o.beta_de);
    const QubitGibbs qg = make_qubit_gibbs(1.0, bde);
    const ProbabilityVector p = o.p.empty() ? ProbabilityVector{1.0, 0.0} : prob(o.p, "p");
    std::ostringstream out;
    out << "m,alpha_max,p1,p2\n";
    for (std::size_t m = 2; m <= o.m_max; ++m) {
        const double a = alpha_max_oscillator(m, bde);
        const ProbabilityVector q = d_alpha(a, qg).apply(p);
        out << m << ',' << format_number(a) << ',' << format_number(q[0]) << ',' << format_number(q[1]) << '\n';
    }
    return out.str();
}

std::string cmd_fig4(const Options& o) {
    if (o.preset != "paper") throw Error("invalid_argument", "only --preset paper is available");
    const Hamiltonian ha = fig4_system();
    const ThermalSetup s = build_setup(ha, copies(ha, 2));
    const ReachableSet r = reachable(o, fig4_state(), s);
    if (o.format == "csv") return reachable_set_csv(r);
    Json j = reachable_set_json(r);
    j["gamma_a"] = to_json(gibbs_vector(ha).values());
    j["block_sizes"] = s.block_sizes();
    return j.dump() + "\n";
}

const std::set<std::string>& commands() {
    static const std::set<std::string> c{"majorize", "thermomajorize", "horn",     "marginal", "noisy-witness", "setup",
                                         "reachable", "synthesize",    "decompose", "decohere", "membership",    "realize",
                                         "qubit-alpha", "third-law",   "fig3",     "fig4"};
    return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && args[0].rfind("-", 0) != 0 && !commands().count(args[0])) {
        out << error_json("unknown_subcommand", "unknown subcommand '" + args[0] + "'").dump() << "\n";
        return kExitUnknownCommand;
    }

    Options o;
    CLI::App app{"Finite-bath thermal and noisy operations", "thermo_cli"};
    app.require_subcommand(1);
    std::string tol;
    app.add_option("--tol", tol, "Override the matrix-identity tolerance (THERMO_HORN_TOL)");

    auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed")->capture_default_str(); };
    auto vec = [&](CLI::App* c, const char* flag, std::string& dst, const char* help) { c->add_option(flag, dst, help); };

    auto* maj = app.add_subcommand("majorize", "Prefix-sum majorization test. JSON: majorizes, first_violated_prefix");
    vec(maj, "--p", o.p, "comma-separated probabilities");
    vec(maj, "--q", o.q, "comma-separated probabilities");

    auto* tmaj = app.add_subcommand("thermomajorize", "Gibbs-preserving witness search. JSON: thermomajorizes, witness {D}");
    vec(tmaj, "--p", o.p, "initial state");
    vec(tmaj, "--q", o.q, "target state");
    vec(tmaj, "--gamma", o.gamma, "Gibbs state");
    vec(tmaj, "--ham-a", o.ham_a, "Hamiltonian JSON (alternative to --gamma)");

    auto* horn = app.add_subcommand("horn", "Noisy realization with an n-level bath. JSON: n, m, U, error");
    vec(horn, "--p", o.p, "initial state");
    vec(horn, "--q", o.q, "target state (majorized by p)");

    auto* marg = app.add_subcommand("marginal", "Global unitary with prescribed marginal. JSON: U, error");
    vec(marg, "--rho", o.rho, "joint state (matrix JSON or nested real rows)");
    vec(marg, "--sigma", o.sigma, "target marginal on A");
    marg->add_option("--dim-a", o.dim_a)->required();
    marg->add_option("--dim-b", o.dim_b)->required();

    auto* wit = app.add_subcommand("noisy-witness", "Bistochastic, noisy, not unistochastic. JSON: D, realization, certificate");
    wit->add_option("--n", o.n)->capture_default_str();

    auto* setup = app.add_subcommand("setup", "Energy blocks of H_A + H_B. JSON: joint_dim, blocks, block_sizes, warnings");
    vec(setup, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(setup, "--ham-b", o.ham_b, "bath Hamiltonian JSON");

    auto* reach = app.add_subcommand("reachable", "Classical reachable set T_C. CSV: p_1..p_n,is_hull_vertex");
    for (auto* c : {reach}) {
        vec(c, "--ham-a", o.ham_a, "system Hamiltonian JSON");
        vec(c, "--ham-b", o.ham_b, "bath Hamiltonian JSON");
        vec(c, "--p", o.p, "initial state");
        c->add_option("--format", o.format, "json or csv")->capture_default_str();
        c->add_flag("--serial", o.serial, "per-permutation enumeration");
        c->add_option("--cap", o.cap)->capture_default_str();
        c->add_option("--samples", o.samples)->capture_default_str();
        seed(c);
    }

    auto* syn = app.add_subcommand("synthesize", "Block-diagonal unitary for a permutation mixture. JSON: U, gadget, target, error");
    vec(syn, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(syn, "--ham-b", o.ham_b, "bath Hamiltonian JSON");
    vec(syn, "--p", o.p, "initial state");
    vec(syn, "--mix", o.mix, "{\"terms\":[{\"w\":..,\"perm\":[..]}]}");

    auto* dec = app.add_subcommand("decompose", "Energy-preserving unitary to permutation mixture. JSON: terms");
    vec(dec, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(dec, "--ham-b", o.ham_b, "bath Hamiltonian JSON");
    vec(dec, "--U", o.unitary, "matrix JSON");
    dec->add_option("--coupling", o.coupling, "auto, product or staircase")->capture_default_str();

    auto* deco = app.add_subcommand("decohere", "Thermal decoherence gadget. JSON: n, m, U, subset");
    vec(deco, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(deco, "--subset", o.subset, "0-based indices (default: degenerate subset; 'none' for empty)");

    auto* mem = app.add_subcommand("membership", "Locate q in conv T_C. JSON: location, margin, combination");
    vec(mem, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(mem, "--ham-b", o.ham_b, "bath Hamiltonian JSON");
    vec(mem, "--p", o.p, "initial state");
    vec(mem, "--q", o.q, "candidate state");
    mem->add_flag("--serial", o.serial, "per-permutation enumeration");
    seed(mem);

    auto* real = app.add_subcommand("realize", "Search a finite bath realizing q. JSON: found, bath, synthesis");
    vec(real, "--ham-a", o.ham_a, "system Hamiltonian JSON");
    vec(real, "--p", o.p, "initial state");
    vec(real, "--q", o.q, "target state");
    real->add_option("--family", o.family, "copies or oscillator")->capture_default_str();
    real->add_option("--max-bath-dim", o.max_bath_dim)->capture_default_str();

    auto* qa = app.add_subcommand("qubit-alpha", "alpha_max for an oscillator (--m) or the general bound (--ham-b)");
    qa->add_option("--beta-de", o.beta_de, "beta*dE, number or ln<x>")->capture_default_str();
    qa->add_option("--m", o.m);
    vec(qa, "--ham-b", o.ham_b, "bath Hamiltonian JSON (quantum = qubit gap)");

    auto* tl = app.add_subcommand("third-law", "Final-temperature bounds. JSON: free_energy_bound, coarse_bound[, oscillator_temperature]");
    tl->add_option("--temperature", o.temperature)->capture_default_str();
    tl->add_option("--delta-e", o.delta_e)->capture_default_str();
    tl->add_option("--m", o.m, "oscillator bath levels");
    vec(tl, "--ham-b", o.ham_b, "bath Hamiltonian JSON");

    auto* f3 = app.add_subcommand("fig3", "CSV: m,alpha_max,p1,p2 for m = 2..m-max");
    f3->add_option("--beta-de", o.beta_de, "beta*dE, number or ln<x>")->capture_default_str();
    f3->add_option("--m-max", o.m_max)->capture_default_str();
    vec(f3, "--p", o.p, "initial qubit state (default 1,0)");

    auto* f4 = app.add_subcommand("fig4", "Three-level reachable set. JSON: points, hull_vertices (or CSV p_1..p_3,is_hull_vertex)");
    f4->add_option("--preset", o.preset, "paper")->required();
    f4->add_option("--format", o.format, "json or csv")->capture_default_str();
    f4->add_flag("--serial", o.serial, "sampled per-permutation enumeration");
    f4->add_option("--samples", o.samples)->capture_default_str();
    seed(f4);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        out << error_json("invalid_argument", e.what()).dump() << "\n";
        return kExitPrecondition;
    }
    if (!tol.empty()) ::setenv("THERMO_HORN_TOL", tol.c_str(), 1);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        std::string payload;
        if (name == "majorize") payload = cmd_majorize(o).dump();
        else if (name == "thermomajorize") payload = cmd_thermomajorize(o).dump();
        else if (name == "horn") payload = cmd_horn(o).dump();
        else if (name == "marginal") payload = cmd_marginal(o).dump();
        else if (name == "noisy-witness") payload = cmd_noisy_witness(o).dump();
        else if (name == "setup") payload = cmd_setup(o).dump();
        else if (name == "reachable") payload = cmd_reachable(o);
        else if (name == "synthesize") payload = cmd_synthesize(o).dump();
        else if (name == "decompose") payload = cmd_decompose(o).dump();
        else if (name == "decohere") payload = cmd_decohere(o).dump();
        else if (name == "membership") payload = cmd_membership(o).dump();
        else if (name == "realize") payload = cmd_realize(o).dump();
        else if (name == "qubit-alpha") payload = cmd_qubit_alpha(o).dump();
        else if (name == "third-law") payload = cmd_third_law(o).dump();
        else if (name == "fig3") payload = cmd_fig3(o);
        else if (name == "fig4") payload = cmd_fig4(o);
        out << payload;
        if (payload.empty() || payload.back() != '\n') out << '\n';
        return kExitOk;
    } catch (const Json::parse_error& e) {
        out << error_json("malformed_json", e.what()).dump() << "\n";
        return kExitMalformedJson;
    } catch (const Error& e) {
        out << error_json(e.code(), e.what()).dump() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace thermo::cli
