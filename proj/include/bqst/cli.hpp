#pragma once

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bqst/amplitude.hpp"
#include "bqst/asymptotic.hpp"
#include "bqst/chain.hpp"
#include "bqst/dynamics.hpp"
#include "bqst/io.hpp"
#include "bqst/optimizer.hpp"
#include "bqst/oracle.hpp"
#include "bqst/parallel.hpp"
#include "bqst/spectral.hpp"

namespace bqst::cli {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline Range parse_range(const std::string& text, const char* flag) {
    Range r;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    if (!(in >> r.lo >> colon1 >> r.hi >> colon2 >> r.steps) || colon1 != ':' || colon2 != ':' ||
        !in.eof())
        throw std::invalid_argument(std::string(flag) + ": expected lo:hi:steps, got '" + text + "'");
    return r;
}

inline std::pair<double, double> parse_window(const std::string& text) {
    std::pair<double, double> w;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> w.first >> comma >> w.second) || comma != ',' || !in.eof())
        throw std::invalid_argument("--window: expected begin,end, got '" + text + "'");
    return w;
}

inline ChainSpec boundary_spec(int n, double x, double y) {
    if (x == 1.0 && y == 1.0) return ChainSpec::uniform(n);
    return ChainSpec::quasi_uniform(n, x, y);
}

inline std::string fmt(double v) { return format_double(v); }

// random doubles independent of libstdc++ distribution internals
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Sink {
    std::ostream& final_out;
    std::string path;
    std::ostringstream buffer;

    std::ostream& stream() { return buffer; }
    void flush() {
        if (path.empty() || path == "-") {
            final_out << buffer.str();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
        f << buffer.str();
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// subcommand emitters

inline void emit_spectrum(std::ostream& os, const std::string& format, const ModeSolution& ms) {
    using detail::fmt;
    const ChainSpec& s = ms.spec;
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst spectrum n=" + std::to_string(s.N) + " x=" + fmt(s.x) + " y=" + fmt(s.y) +
                    " schema=" + std::to_string(kSchemaVersion));
        csv.row({"m", "q", "omega", "density", "velocity"});
        for (const Mode& m : ms.modes)
            csv.row({fmt(m.m), fmt(m.q), fmt(m.omega), fmt(m.density), fmt(m.velocity)});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("spectrum");
    j.key("n").value(s.N);
    j.key("x").value(s.x);
    j.key("y").value(s.y);
    j.end_object();
    j.key("results").begin_object().key("modes").begin_array();
    for (const Mode& m : ms.modes) {
        j.begin_object();
        j.key("m").value(m.m);
        j.key("q").value(m.q);
        j.key("omega").value(m.omega);
        j.key("density").value(m.density);
        j.key("velocity").value(m.velocity);
        j.end_object();
    }
    j.end_array().end_object().end_object();
    os << '\n';
}

inline void emit_amplitude(std::ostream& os, const std::string& format, const AmplitudeResult& ar) {
    using detail::fmt;
    const FidelityPair fid = fidelities(ar.peak_amplitude);
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst amplitude n=" + std::to_string(ar.spec.N) + " x=" + fmt(ar.spec.x) +
                    " y=" + fmt(ar.spec.y) + " schema=" + std::to_string(kSchemaVersion));
        csv.comment("arrival_time=" + fmt(ar.arrival_time) + " peak=" + fmt(ar.peak_amplitude) +
                    " F=" + fmt(fid.average) + " F_E=" + fmt(fid.entanglement) +
                    " delay=" + fmt(ar.delay));
        csv.row({"t", "u"});
        for (std::size_t i = 0; i < ar.t_grid.size(); ++i)
            csv.row({fmt(ar.t_grid[i]), fmt(ar.u_values[i])});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("amplitude");
    j.key("n").value(ar.spec.N);
    j.key("x").value(ar.spec.x);
    j.key("y").value(ar.spec.y);
    j.end_object();
    j.key("results").begin_object();
    j.key("arrival_time").value(ar.arrival_time);
    j.key("peak").value(ar.peak_amplitude);
    j.key("F").value(fid.average);
    j.key("F_E").value(fid.entanglement);
    j.key("delay").value(ar.delay);
    j.key("trace").begin_array();
    for (std::size_t i = 0; i < ar.t_grid.size(); ++i)
        j.begin_array().value(ar.t_grid[i]).value(ar.u_values[i]).end_array();
    j.end_array().end_object().end_object();
    os << '\n';
}

inline void emit_optimum(std::ostream& os, const std::string& format, const OptimumReport& rep) {
    using detail::fmt;
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst optimize n=" + std::to_string(rep.N) + " mode=" + rep.mode.name() +
                    " schema=" + std::to_string(kSchemaVersion));
        csv.row({"n", "mode", "x_opt", "y_opt", "u_opt", "F_opt", "F_E_opt", "arrival_time",
                 "evaluations", "boundary"});
        csv.row({std::to_string(rep.N), rep.mode.name(), fmt(rep.x_opt), fmt(rep.y_opt),
                 fmt(rep.u_opt), fmt(rep.F_opt), fmt(rep.F_E_opt), fmt(rep.arrival_time),
                 std::to_string(rep.evaluations), rep.boundary ? "1" : "0"});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("optimize");
    j.key("n").value(rep.N);
    j.key("mode").value(rep.mode.name());
    j.end_object();
    j.key("results").begin_object();
    j.key("x_opt").value(rep.x_opt);
    j.key("y_opt").value(rep.y_opt);
    j.key("u_opt").value(rep.u_opt);
    j.key("F_opt").value(rep.F_opt);
    j.key("F_E_opt").value(rep.F_E_opt);
    j.key("arrival_time").value(rep.arrival_time);
    j.key("evaluations").value(static_cast<long long>(rep.evaluations));
    j.key("boundary").value(rep.boundary);
    j.end_object().end_object();
    os << '\n';
}

inline void emit_map(std::ostream& os, const std::string& format, int n, const FidelityMap& map) {
    using detail::fmt;
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst fidelity-map n=" + std::to_string(n) +
                    " schema=" + std::to_string(kSchemaVersion));
        csv.row({"x", "y", "F"});
        for (std::size_t ix = 0; ix < map.x_grid.size(); ++ix)
            for (std::size_t iy = 0; iy < map.y_grid.size(); ++iy)
                csv.row({fmt(map.x_grid[ix]), fmt(map.y_grid[iy]),
                         fmt(map.F[ix * map.y_grid.size() + iy])});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("fidelity-map");
    j.key("n").value(n);
    j.end_object();
    j.key("results").begin_object();
    j.key("x_grid").begin_array();
    for (double v : map.x_grid) j.value(v);
    j.end_array();
    j.key("y_grid").begin_array();
    for (double v : map.y_grid) j.value(v);
    j.end_array();
    j.key("F").begin_array();
    for (std::size_t ix = 0; ix < map.x_grid.size(); ++ix) {
        j.begin_array();
        for (std::size_t iy = 0; iy < map.y_grid.size(); ++iy)
            j.value(map.F[ix * map.y_grid.size() + iy]);
        j.end_array();
    }
    j.end_array().end_object().end_object();
    os << '\n';
}

inline void emit_asymptotic_point(std::ostream& os, const std::string& format,
                                  const AsymptoticParams& p, double u) {
    using detail::fmt;
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst asymptotic tau=" + fmt(p.tau) + " sigma=" + fmt(p.sigma) +
                    " schema=" + std::to_string(kSchemaVersion));
        csv.row({"tau", "sigma", "u_infinity"});
        csv.row({fmt(p.tau), fmt(p.sigma), fmt(u)});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("asymptotic");
    j.key("tau").value(p.tau);
    j.key("sigma").value(p.sigma);
    j.end_object();
    j.key("results").begin_object();
    j.key("u_infinity").value(u);
    j.end_object().end_object();
    os << '\n';
}

inline void emit_asymptotic_optimum(std::ostream& os, const std::string& format,
                                    const ScalingConstants& sc) {
    using detail::fmt;
    const double f_inf = fidelities(sc.optimum.value).average;
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst asymptotic optimize schema=" + std::to_string(kSchemaVersion));
        csv.row({"tau_opt", "sigma_opt", "u_infinity", "F_infinity", "x_coefficient",
                 "y_coefficient", "delay_coefficient"});
        csv.row({fmt(sc.optimum.params.tau), fmt(sc.optimum.params.sigma), fmt(sc.optimum.value),
                 fmt(f_inf), fmt(sc.x_coefficient), fmt(sc.y_coefficient),
                 fmt(sc.delay_coefficient)});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("asymptotic");
    j.key("optimize").value(true);
    j.end_object();
    j.key("results").begin_object();
    j.key("tau_opt").value(sc.optimum.params.tau);
    j.key("sigma_opt").value(sc.optimum.params.sigma);
    j.key("u_infinity").value(sc.optimum.value);
    j.key("F_infinity").value(f_inf);
    j.key("x_coefficient").value(sc.x_coefficient);
    j.key("y_coefficient").value(sc.y_coefficient);
    j.key("delay_coefficient").value(sc.delay_coefficient);
    j.end_object().end_object();
    os << '\n';
}

inline void emit_dynamics(std::ostream& os, const std::string& format, const WavepacketField& field) {
    using detail::fmt;
    const ChainSpec& s = field.spec;
    const std::string profile = s.profile == Profile::Uniform ? "uniform"
                                : s.profile == Profile::PerfectTransfer ? "perfect" : "quasi";
    if (format == "csv") {
        CsvWriter csv(os);
        csv.comment("bqst dynamics n=" + std::to_string(s.N) + " profile=" + profile +
                    (s.profile == Profile::QuasiUniform
                         ? " x=" + fmt(s.x) + " y=" + fmt(s.y)
                         : std::string()) +
                    " schema=" + std::to_string(kSchemaVersion));
        csv.row({"t", "site", "amplitude"});
        for (const auto& frame : field.frames)
            for (std::size_t i = 0; i < frame.amplitudes.size(); ++i)
                csv.row({fmt(frame.t), std::to_string(i + 1), fmt(frame.amplitudes[i])});
        return;
    }
    JsonWriter j(os);
    j.begin_object();
    j.key("schema_version").value(kSchemaVersion);
    j.key("config").begin_object();
    j.key("subcommand").value("dynamics");
    j.key("n").value(s.N);
    j.key("profile").value(profile);
    if (s.profile == Profile::QuasiUniform) {
        j.key("x").value(s.x);
        j.key("y").value(s.y);
    }
    j.end_object();
    j.key("results").begin_object();
    j.key("times").begin_array();
    for (const auto& frame : field.frames) j.value(frame.t);
    j.end_array();
    j.key("frames").begin_array();
    for (const auto& frame : field.frames) {
        j.begin_array();
        for (double a : frame.amplitudes) j.value(a);
        j.end_array();
    }
    j.end_array().end_object().end_object();
    os << '\n';
}

// ---------------------------------------------------------------------------
// verify: oracle-equivalence sweep over randomized chains

inline int run_verify(std::ostream& os, int n_max, int cases) {
    std::mt19937_64 gen(0x5eed0001u);
    double err_freq = 0, err_dens = 0, err_trace = 0, err_norm = 0, err_sum = 0, err_poly = 0,
           err_parity = 0;
    for (int c = 0; c < cases; ++c) {
        const int n = 5 + static_cast<int>(gen() % static_cast<unsigned>(n_max - 4));
        const double x = 0.02 + 0.98 * detail::uniform01(gen);
        const double y = 0.02 + 0.98 * detail::uniform01(gen);
        const ChainSpec spec = ChainSpec::quasi_uniform(n, x, y);
        const ModeSolution ms = solve_modes(spec);
        const EigenSystem eig = diagonalize(spec);

        double norm = 0.0, comp = 0.0;  // Kahan
        for (int i = 0; i < n; ++i) {
            const Mode& md = ms.modes[static_cast<std::size_t>(i)];
            const int r = n - 1 - i;  // oracle rows are descending in omega
            err_freq = std::max(err_freq, std::abs(md.omega - eig.frequencies[r]));
            err_dens = std::max(err_dens,
                                std::abs(md.density - eig.vectors(r, 0) * eig.vectors(r, 0)));
            const double t = md.density - comp;
            const double s = norm + t;
            comp = (s - norm) - t;
            norm = s;
        }
        err_norm = std::max(err_norm, std::abs(norm - 1.0));

        for (int k = 0; k < 100; ++k) {
            const double t = 2.0 * n * k / 99.0;
            err_trace = std::max(err_trace,
                                 std::abs(evaluate(ms, t) - std::abs(amplitude_direct(eig, n, t))));
        }
        for (int k = 0; k < 3; ++k) {
            const double t = 2.0 * n * detail::uniform01(gen);
            double total = 0.0;
            for (int i = 1; i <= n; ++i) total += std::norm(amplitude_direct(eig, i, t));
            err_sum = std::max(err_sum, std::abs(total - 1.0));
        }
        for (int k = 0; k < 3; ++k) {
            const int idx = static_cast<int>(gen() % static_cast<unsigned>(n));
            err_poly = std::max(err_poly, std::abs(char_poly_residual(spec, eig.eigenvalues[idx])));
        }
        for (int r = 0; r < n; ++r) {
            const double parity = (r % 2 == 0) ? 1.0 : -1.0;  // (-1)^{n+1}, 1-based n = r+1
            for (int i = 0; i < n; ++i)
                err_parity = std::max(err_parity, std::abs(eig.vectors(r, n - 1 - i) -
                                                           parity * eig.vectors(r, i)));
        }
    }

    struct Check {
        const char* name;
        double err, tol;
    };
    const Check checks[] = {
        {"eigenfrequencies  max|sin q - omega|      ", err_freq, 1e-10},
        {"mode densities    max|P - U_n1^2|         ", err_dens, 1e-9},
        {"amplitude traces  max|u_spec - u_oracle|  ", err_trace, 1e-9},
        {"density norm      max|sum P - 1|          ", err_norm, 1e-10},
        {"unitarity         max|sum|u_i|^2 - 1|     ", err_sum, 1e-12},
        {"char polynomial   max residual at eigs    ", err_poly, 1e-8},
        {"mirror parity     max|U_rev -+ U|         ", err_parity, 1e-8},
    };
    os << "verify: cases=" << cases << " n-max=" << n_max << "\n";
    bool ok = true;
    for (const Check& ch : checks) {
        const bool pass = ch.err <= ch.tol;
        ok = ok && pass;
        os << (pass ? "PASS " : "FAIL ") << ch.name << detail::fmt(ch.err) << "  (tol "
           << detail::fmt(ch.tol) << ")\n";
    }
    os << (ok ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ballistic quantum-state transfer through quasi-uniform chains"};
    app.require_subcommand(1);

    std::string format = "csv", output = "-";
    int threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", output, "output path ('-' = stdout)");
        sub->add_option("--threads", threads, "worker threads (0 = BQST_THREADS or hardware)");
    };

    int n = 0;
    double x = 1.0, y = 1.0;
    std::string window_text, x_range_text, y_range_text;

    CLI::App* spectrum = app.add_subcommand("spectrum", "solved modes of the chain");
    spectrum->add_option("--n", n, "chain length")->required();
    spectrum->add_option("--x", x, "outer boundary coupling");
    spectrum->add_option("--y", y, "inner boundary coupling");
    add_common(spectrum);

    CLI::App* amplitude = app.add_subcommand("amplitude", "end-to-end |u(t)| and arrival peak");
    amplitude->add_option("--n", n, "chain length")->required();
    amplitude->add_option("--x", x, "outer boundary coupling");
    amplitude->add_option("--y", y, "inner boundary coupling");
    amplitude->add_option("--window", window_text, "scan window begin,end");
    add_common(amplitude);

    double fix_y = 1.0;
    CLI::App* optimize_cmd = app.add_subcommand("optimize", "maximize the arrival amplitude");
    optimize_cmd->add_option("--n", n, "chain length")->required();
    CLI::Option* fix_opt = optimize_cmd->add_option("--fix-y", fix_y, "hold y fixed");
    CLI::Option* constrain_opt =
        optimize_cmd->add_flag("--constrain-Y", "tie y to the bimodal threshold Y(x)");
    fix_opt->excludes(constrain_opt);
    add_common(optimize_cmd);

    CLI::App* map_cmd = app.add_subcommand("fidelity-map", "average fidelity over an (x,y) grid");
    map_cmd->add_option("--n", n, "chain length")->required();
    map_cmd->add_option("--x", x_range_text, "x range lo:hi:steps")->required();
    map_cmd->add_option("--y", y_range_text, "y range lo:hi:steps")->required();
    add_common(map_cmd);

    double tau = 0.0, sigma = 0.0;
    CLI::App* asym = app.add_subcommand("asymptotic", "N->infinity amplitude");
    CLI::Option* tau_opt = asym->add_option("--tau", tau, "rescaled arrival time");
    CLI::Option* sigma_opt = asym->add_option("--sigma", sigma, "rescaled delay");
    CLI::Option* opt_flag = asym->add_flag("--optimize", "maximize over (tau, sigma)");
    opt_flag->excludes(tau_opt);
    opt_flag->excludes(sigma_opt);
    add_common(asym);

    double t_max = 0.0, dt = 1.0;
    int guard = 2000;
    CLI::App* dyn = app.add_subcommand("dynamics", "wavepacket |u_i(t)| frames");
    dyn->add_option("--n", n, "chain length")->required();
    CLI::Option* dx = dyn->add_option("--x", x, "outer boundary coupling");
    CLI::Option* dy = dyn->add_option("--y", y, "inner boundary coupling");
    CLI::Option* perfect = dyn->add_flag("--perfect", "perfect-transfer semicircle couplings");
    CLI::Option* uniform = dyn->add_flag("--uniform", "fully uniform chain");
    perfect->excludes(dx)->excludes(dy)->excludes(uniform);
    uniform->excludes(dx)->excludes(dy);
    dyn->add_option("--t-max", t_max, "final time")->required();
    dyn->add_option("--dt", dt, "frame step");
    dyn->add_option("--guard", guard, "dense-path size guard");
    add_common(dyn);

    int n_max = 200, cases = 50;
    CLI::App* verify = app.add_subcommand("verify", "spectral-vs-oracle equivalence suite");
    verify->add_option("--n-max", n_max, "largest chain length drawn");
    verify->add_option("--cases", cases, "number of randomized chains");
    add_common(verify);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        set_thread_count(threads);
        detail::Sink sink{out, output, {}};
        std::ostream& os = sink.stream();

        if (*spectrum) {
            emit_spectrum(os, format, solve_modes(detail::boundary_spec(n, x, y)));
        } else if (*amplitude) {
            std::optional<std::pair<double, double>> window;
            if (!window_text.empty()) window = detail::parse_window(window_text);
            emit_amplitude(os, format,
                           find_arrival(solve_modes(detail::boundary_spec(n, x, y)), window));
        } else if (*optimize_cmd) {
            SearchMode mode = SearchMode::two_param();
            if (fix_opt->count() > 0) mode = SearchMode::fixed(fix_y);
            if (constrain_opt->count() > 0) mode = SearchMode::constrained();
            emit_optimum(os, format, optimize(n, mode));
        } else if (*map_cmd) {
            emit_map(os, format, n,
                     fidelity_map(n, detail::parse_range(x_range_text, "--x"),
                                  detail::parse_range(y_range_text, "--y")));
        } else if (*asym) {
            if (opt_flag->count() > 0) {
                emit_asymptotic_optimum(os, format, scaling_constants());
            } else if (tau_opt->count() > 0 && sigma_opt->count() > 0) {
                const AsymptoticParams p{tau, sigma};
                emit_asymptotic_point(os, format, p, u_infinity(p));
            } else {
                throw std::invalid_argument("asymptotic: pass --tau and --sigma, or --optimize");
            }
        } else if (*dyn) {
            ChainSpec spec = perfect->count() > 0   ? ChainSpec::perfect_transfer(n)
                             : uniform->count() > 0 ? ChainSpec::uniform(n)
                                                    : detail::boundary_spec(n, x, y);
            emit_dynamics(os, format, propagate(spec, t_max, dt, guard));
        } else if (*verify) {
            const int code = run_verify(os, n_max, cases);
            sink.flush();
            return code;
        }
        sink.flush();
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bqst::cli
