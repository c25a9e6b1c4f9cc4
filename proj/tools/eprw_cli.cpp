// eprw: command-line front end for the EPR-witness toolkit.
//
// Subcommands: bounds, witness, baseline, teleport, sweep, detect-time,
// state.  All subcommands accept --config <file> with key=value lines
// (same keys as the long option names).  Exit codes: 0 success,
// 2 invalid configuration or arguments.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "eprw/eprw.hpp"

using json = nlohmann::json;
using namespace eprw;

namespace {

struct StateOptions {
    std::string spec = "vacuum";
    double eta = 1.0;
    double n_th = 0.0;
    std::string stage = "channel";
};

void add_state_options(CLI::App* cmd, StateOptions& opts) {
    cmd->add_option("--state", opts.spec,
                    "state spec, e.g. cat:nu=0.5,p=0.3 | tmss:s=0.5,op=subtract | "
                    "superpos:c0=0.6 | coherent:ar=..,ai=..,br=..,bi=.. | "
                    "thermal:na=.. | file:PATH | vacuum");
    cmd->add_option("--eta", opts.eta, "transmissivity of the noise channel (0,1]");
    cmd->add_option("--nth", opts.n_th, "thermal occupation of the noise channel");
    cmd->add_option("--stage", opts.stage, "noise stage tag: channel|detection");
}

TwoModeState build_state(const StateOptions& opts) {
    TwoModeState st = parse_state_spec(opts.spec);
    if (opts.stage != "channel" && opts.stage != "detection")
        throw std::invalid_argument("--stage must be channel or detection");
    if (opts.eta != 1.0 || opts.n_th != 0.0) {
        NoiseSpec ns;
        ns.eta = opts.eta;
        ns.n_th = opts.n_th;
        ns.stage = (opts.stage == "channel") ? NoiseSpec::Stage::Channel
                                             : NoiseSpec::Stage::Detection;
        st = apply_loss_thermal(st, ns);
    }
    return st;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

json estimate_to_json(const WitnessEstimate& est) {
    return json{{"mean", est.mean},
                {"delta_f", est.delta_f},
                {"delta_e", est.delta_e},
                {"mode", est.mode == WitnessEstimate::Mode::Exact ? "exact" : "empirical"},
                {"samples", est.samples_used},
                {"ok", est.ok}};
}

json bounds_to_json(const SeparabilityBounds& b) {
    return json{{"f_min", b.f_min},
                {"f_max", b.f_max},
                {"n_at_min", b.n_at_min},
                {"n_at_max", b.n_at_max},
                {"converged", b.converged},
                {"tail_bound", b.tail_bound}};
}

std::vector<HomodyneSample> read_samples_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open samples file " + path);
    std::vector<HomodyneSample> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line.rfind("x1", 0) == 0 || line[0] == '#') continue;
        HomodyneSample s;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.x1, &s.p2, &s.o_epr) != 3)
            throw std::runtime_error("bad samples row: " + line);
        out.push_back(s);
    }
    if (out.empty()) throw std::runtime_error("no samples in " + path);
    return out;
}

void write_samples_csv(std::ostream& os, const std::vector<HomodyneSample>& samples) {
    os << "x1,p2,o_epr\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", s.x1, s.p2, s.o_epr);
        os << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional EPR entanglement witnesses for two-mode optical states"};
    app.require_subcommand(1);
    // command-line values override config-file values
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // ---- bounds ------------------------------------------------------
    auto* cmd_bounds = app.add_subcommand("bounds", "separability bound table O_n");
    double b_c = 1.0, b_d = 0.0, b_g = 1.0;
    int b_nmax = 64;
    std::string b_out;
    cmd_bounds->add_option("--C", b_c, "decay rate C > 0");
    cmd_bounds->add_option("--D", b_d, "linear coefficient D");
    cmd_bounds->add_option("--nmax", b_nmax, "table size");
    cmd_bounds->add_option("--g", b_g, "EPR gain");
    cmd_bounds->add_option("--out", b_out, "output CSV path (default stdout)");

    // ---- witness -----------------------------------------------------
    auto* cmd_wit = app.add_subcommand("witness", "evaluate <F(O_EPR)> against the bounds");
    StateOptions w_state;
    add_state_options(cmd_wit, w_state);
    double w_c = 1.0, w_d = 0.0, w_phia = 0.0, w_phib = 0.0;
    long long w_n = 100000;
    std::uint64_t w_seed = 1;
    bool w_empirical = false;
    bool w_optimize = false;
    std::string w_data, w_samples_out, w_out;
    cmd_wit->add_option("--C", w_c, "decay rate C > 0");
    cmd_wit->add_option("--D", w_d, "linear coefficient D");
    cmd_wit->add_option("--phiA", w_phia, "local phase of mode A");
    cmd_wit->add_option("--phiB", w_phib, "local phase of mode B");
    cmd_wit->add_option("--N", w_n, "sample count");
    cmd_wit->add_option("--seed", w_seed, "RNG seed");
    cmd_wit->add_flag("--empirical", w_empirical, "Monte Carlo estimate instead of exact");
    cmd_wit->add_flag("--optimize", w_optimize, "optimize C, D before evaluating");
    cmd_wit->add_option("--data", w_data, "import recorded samples CSV (x1,p2,o_epr)");
    cmd_wit->add_option("--samples-out", w_samples_out, "export drawn samples CSV");
    cmd_wit->add_option("--out", w_out, "output JSON path (default stdout)");

    // ---- baseline ----------------------------------------------------
    auto* cmd_base = app.add_subcommand("baseline", "Simon / Duan reference criteria");
    StateOptions base_state;
    add_state_options(cmd_base, base_state);
    std::string base_crit = "simon";
    double base_g = 1.0, base_phia = 0.0, base_phib = 0.0;
    std::string base_out;
    cmd_base->add_option("--criterion", base_crit, "simon|duan");
    cmd_base->add_option("--g", base_g, "Duan gain");
    cmd_base->add_option("--phiA", base_phia, "Duan local phase A");
    cmd_base->add_option("--phiB", base_phib, "Duan local phase B");
    cmd_base->add_option("--out", base_out, "output JSON path");

    // ---- teleport ----------------------------------------------------
    auto* cmd_tel = app.add_subcommand("teleport", "BK teleportation fidelity report");
    std::string t_channel = "tmss:s=0.5", t_input = "vacuum", t_out;
    double t_eta = 1.0, t_nth = 0.0;
    cmd_tel->add_option("--channel", t_channel, "channel spec (state spec or pm:m=..)");
    cmd_tel->add_option("--input", t_input, "vacuum | coherent:re,im | fock:n");
    cmd_tel->add_option("--eta", t_eta, "channel transmissivity");
    cmd_tel->add_option("--nth", t_nth, "channel thermal occupation");
    cmd_tel->add_option("--out", t_out, "output JSON path");

    // ---- sweep -------------------------------------------------------
    auto* cmd_sweep = app.add_subcommand("sweep", "figure-style parameter sweeps");
    std::string s_fig = "1b", s_out;
    SweepConfig s_cfg;
    int s_res = 0;
    double s_eta = -1.0, s_nth = -1.0;
    cmd_sweep->add_option("--figure", s_fig, "1b|1c|1d|2a|2b");
    cmd_sweep->add_option("--seed", s_cfg.seed, "RNG seed");
    cmd_sweep->add_option("--N", s_cfg.n_samples, "samples per point");
    cmd_sweep->add_option("--res", s_res, "points per axis");
    cmd_sweep->add_option("--eta", s_eta, "override the figure's efficiency");
    cmd_sweep->add_option("--nth", s_nth, "override the figure's thermal occupation");
    cmd_sweep->add_option("--out", s_out, "output CSV path (default stdout)");

    // ---- detect-time -------------------------------------------------
    auto* cmd_dt = app.add_subcommand("detect-time",
                                      "decoherence time until detection is lost");
    StateOptions dt_state;
    add_state_options(cmd_dt, dt_state);
    std::string dt_crit = "ours", dt_out;
    double dt_nth = 0.0;
    int dt_m = 1;
    cmd_dt->add_option("--reservoir-nth", dt_nth, "thermal occupation of the reservoir");
    cmd_dt->add_option("--criterion", dt_crit, "ours|simon");
    cmd_dt->add_option("--M", dt_m, "polynomial order of the witness: 0|1");
    cmd_dt->add_option("--out", dt_out, "output JSON path");

    // ---- state -------------------------------------------------------
    auto* cmd_state = app.add_subcommand("state", "build, inspect, save states");
    StateOptions st_state;
    add_state_options(cmd_state, st_state);
    std::string st_in, st_save;
    bool st_info = false;
    cmd_state->add_option("--in", st_in, "load a saved state file");
    cmd_state->add_option("--save", st_save, "write the state to a file");
    cmd_state->add_flag("--info", st_info, "print diagnostics JSON");

    // Handle --config FILE ourselves: inject the file's key=value pairs
    // right after the subcommand token, before the explicit options.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        std::string cfg_path;
        for (size_t i = 0; i < args.size();) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                cfg_path = args[i + 1];
                args.erase(args.begin() + i, args.begin() + i + 2);
            } else if (args[i].rfind("--config=", 0) == 0) {
                cfg_path = args[i].substr(9);
                args.erase(args.begin() + i);
            } else {
                ++i;
            }
        }
        if (!cfg_path.empty()) {
            auto kv = load_config_file(cfg_path);
            size_t insert_at = 0;
            while (insert_at < args.size() && args[insert_at].rfind("-", 0) == 0)
                ++insert_at;
            if (insert_at < args.size()) ++insert_at;  // after the subcommand
            std::vector<std::string> injected;
            for (const auto& [k, v] : kv) {
                injected.push_back("--" + k);
                if (v != "true") injected.push_back(v);  // flags: key = true
            }
            args.insert(args.begin() + insert_at, injected.begin(), injected.end());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::reverse(args.begin(), args.end());  // CLI11 vector parse order
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return (code == 0) ? 0 : 2;
    }

    try {
        if (*cmd_bounds) {
            TestFunction f = (b_d == 0.0) ? TestFunction::exponential(b_c)
                                          : TestFunction::exponential(b_c, {b_d});
            auto b = separability_bounds(f, b_nmax, b_g);
            std::ofstream file;
            auto& os = open_output(file, b_out);
            os << "n,O_n\n";
            char buf[48];
            for (size_t n = 0; n < b.values.size(); ++n) {
                std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", n, b.values[n]);
                os << buf;
            }
            os << "# f_min=" << b.f_min << " n_at_min=" << b.n_at_min
               << " f_max=" << b.f_max << " n_at_max=" << b.n_at_max
               << " converged=" << (b.converged ? 1 : 0)
               << " tail_bound=" << b.tail_bound << "\n";
        } else if (*cmd_wit) {
            TwoModeState st = build_state(w_state);
            EprMeasurementConfig cfg;
            cfg.phi_a = w_phia;
            cfg.phi_b = w_phib;
            cfg.n_samples = w_n;
            cfg.seed = w_seed;

            json rep;
            rep["state"] = w_state.spec;
            WitnessEstimate est;
            TestFunction f = (w_d == 0.0) ? TestFunction::exponential(w_c)
                                          : TestFunction::exponential(w_c, {w_d});
            if (!w_data.empty()) {
                auto samples = read_samples_csv(w_data);
                est = empirical_witness(samples, f);
            } else if (w_optimize) {
                OptimizationSpec spec;
                spec.phi_a_min = spec.phi_a_max = w_phia;
                spec.phi_b_min = spec.phi_b_max = w_phib;
                auto r = optimize_witness(st, spec, cfg);
                w_c = r.c;
                w_d = r.d;
                f = TestFunction::exponential(r.c, {r.d});
                est = r.estimate;
            } else if (w_empirical) {
                auto samples = sample_homodyne(st, cfg);
                if (!w_samples_out.empty()) {
                    std::ofstream sf(w_samples_out);
                    if (!sf) throw std::runtime_error("cannot open " + w_samples_out);
                    write_samples_csv(sf, samples);
                }
                est = empirical_witness(samples, f);
            } else {
                est = exact_expectation(st, f, cfg);
            }
            auto bounds = separability_bounds(f);
            auto v = verdict(est, bounds);
            rep["C"] = w_c;
            rep["D"] = w_d;
            rep["phiA"] = w_phia;
            rep["phiB"] = w_phib;
            rep["estimate"] = estimate_to_json(est);
            rep["bounds"] = bounds_to_json(bounds);
            rep["verdict"] = {{"violation", v.violation},
                              {"significance", v.significance},
                              {"entangled", v.entangled}};
            std::ofstream file;
            open_output(file, w_out) << rep.dump(2) << "\n";
        } else if (*cmd_base) {
            TwoModeState st = build_state(base_state);
            json rep;
            rep["state"] = base_state.spec;
            rep["criterion"] = base_crit;
            if (base_crit == "simon") {
                auto r = simon_test(st);
                rep["nu_minus"] = r.nu_minus;
                rep["threshold"] = r.threshold;
                rep["entangled"] = r.entangled;
            } else if (base_crit == "duan") {
                auto r = duan_test(st, base_g, base_phia, base_phib);
                rep["E1_prime"] = r.e1_prime;
                rep["bound"] = r.bound;
                rep["entangled"] = r.entangled;
            } else {
                throw std::invalid_argument("--criterion must be simon or duan");
            }
            std::ofstream file;
            open_output(file, base_out) << rep.dump(2) << "\n";
        } else if (*cmd_tel) {
            json rep;
            rep["channel"] = t_channel;
            rep["input"] = t_input;
            if (t_channel.rfind("pm:", 0) == 0) {
                auto kv = detail::parse_kv_list(t_channel.substr(3));
                PmChannelSpec pm{static_cast<int>(detail::kv_num(kv, "m", 0, true))};
                rep["E1"] = pm_channel_e1(pm);
                rep["bound"] = em_fidelity_bound(rep["E1"].get<double>());
                if (t_input.rfind("fock:", 0) == 0) {
                    int n = std::stoi(t_input.substr(5));
                    rep["fidelity"] = fock_input_fidelity(pm, n);
                } else {
                    rep["fidelity"] = pm_vacuum_fidelity(pm);
                }
            } else {
                StateOptions ch;
                ch.spec = t_channel;
                ch.eta = t_eta;
                ch.n_th = t_nth;
                TwoModeState st = build_state(ch);
                if (t_input.rfind("fock:", 0) == 0)
                    throw std::invalid_argument(
                        "fock inputs are supported for pm channels only");
                auto r = fidelity_via_epr(st);
                rep["fidelity"] = r.fidelity;
                rep["E1"] = r.e1;
                rep["bound"] = r.lower_bound;
            }
            std::ofstream file;
            open_output(file, t_out) << rep.dump(2) << "\n";
        } else if (*cmd_sweep) {
            s_cfg.figure = parse_figure(s_fig);
            if (s_res > 0) s_cfg.resolution = s_res;
            if (s_eta >= 0.0) s_cfg.eta = s_eta;
            if (s_nth >= 0.0) s_cfg.n_th = s_nth;
            auto res = figure_sweep(s_cfg);
            std::ofstream file;
            res.to_csv(open_output(file, s_out));
        } else if (*cmd_dt) {
            TwoModeState st = build_state(dt_state);
            OptimizationSpec spec;
            spec.include_linear_term = (dt_m != 0);
            DetectionCriterion crit = (dt_crit == "simon")
                                          ? DetectionCriterion::Simon
                                          : DetectionCriterion::FunctionalWitness;
            if (dt_crit != "simon" && dt_crit != "ours")
                throw std::invalid_argument("--criterion must be ours or simon");
            double t = detection_time(st, dt_nth, crit, spec);
            json rep{{"state", dt_state.spec},
                     {"criterion", dt_crit},
                     {"reservoir_nth", dt_nth},
                     {"time", t}};
            std::ofstream file;
            open_output(file, dt_out) << rep.dump(2) << "\n";
        } else if (*cmd_state) {
            TwoModeState st = st_in.empty() ? build_state(st_state) : load_state(st_in);
            if (!st_save.empty()) save_state(st, st_save);
            if (st_info || st_save.empty()) {
                json rep{{"dim_a", st.dim_a},
                         {"dim_b", st.dim_b},
                         {"trace", st.trace()},
                         {"purity", st.purity()},
                         {"hermiticity_error", st.hermiticity_error()},
                         {"tail_a", st.tail(0)},
                         {"tail_b", st.tail(1)},
                         {"mean_photons_a", st.mean_photons(0)},
                         {"mean_photons_b", st.mean_photons(1)},
                         {"converged", st.converged}};
                std::cout << rep.dump(2) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
