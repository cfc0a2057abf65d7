// qot: run, sweep and verify continuous-variable teleportation circuits.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qot/dsl.hpp"
#include "qot/fock_oracle.hpp"
#include "qot/metrics.hpp"
#include "qot/presets.hpp"
#include "qot/verify.hpp"

using json = nlohmann::ordered_json;
using namespace qot;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

std::string g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

struct Range {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log = false;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(std::size_t(count));
        if (count == 1) {
            v.push_back(start);
            return v;
        }
        for (int i = 0; i < count; ++i) {
            const double t = double(i) / double(count - 1);
            if (log) {
                v.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
            } else {
                v.push_back(start + t * (stop - start));
            }
        }
        return v;
    }
};

Range parse_range(const std::string& text, const std::string& flag) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    if (parts.size() < 1 || parts.size() > 4) {
        throw CLI::ValidationError(flag, "expected start[,stop,count[,log|lin]]");
    }
    try {
        r.start = std::stod(parts[0]);
        r.stop = parts.size() > 1 ? std::stod(parts[1]) : r.start;
        r.count = parts.size() > 2 ? std::stoi(parts[2]) : 1;
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "bad number in range '" + text + "'");
    }
    if (parts.size() > 3) {
        if (parts[3] == "log") {
            r.log = true;
        } else if (parts[3] != "lin") {
            throw CLI::ValidationError(flag, "spacing must be 'lin' or 'log'");
        }
    }
    if (r.count < 1) throw CLI::ValidationError(flag, "count must be >= 1");
    if (r.start > r.stop) throw CLI::ValidationError(flag, "start must be <= stop");
    if (r.log && !(r.start > 0.0 && r.stop > 0.0)) {
        throw CLI::ValidationError(flag, "log spacing needs positive endpoints");
    }
    return r;
}

struct Target {
    std::string scheme;  // eo-classical | ao-classical | ao-quantum | file
    std::optional<Circuit> file_circuit;
};

Target resolve_target(const std::string& name) {
    if (name == "eo-classical" || name == "ao-classical" || name == "ao-quantum") {
        return {name, std::nullopt};
    }
    std::ifstream in(name, std::ios::binary);
    if (!in.good()) {
        throw std::runtime_error("file not found: " + name);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return {"file", parse(ss.str())};
    } catch (const ParseError& e) {
        throw std::runtime_error(name + ":" + std::to_string(e.line()) + ":" +
                                 std::to_string(e.column()) + ": expected " + e.expected() +
                                 ", found " + e.found());
    }
}

struct PointParams {
    double gain = 2.0;
    double parametric_gain = 2.0;
    double k_constant = 1.0;
    double lambda_gain = 1.0;
    Complex alpha{};
    bool composite = false;
};

Circuit circuit_for(const Target& target, const PointParams& p) {
    if (target.scheme == "eo-classical") {
        return build_eo_classical(p.k_constant, p.lambda_gain, p.alpha);
    }
    if (target.scheme == "ao-classical") return build_ao_classical(p.gain, p.alpha);
    if (target.scheme == "ao-quantum") {
        return build_ao_quantum(p.gain, p.parametric_gain, p.composite, p.alpha);
    }
    Circuit c = *target.file_circuit;
    return c;
}

// The asymptotic (infinite-pump-gain) added noise for preset schemes; the
// file case has no closed form and stays unset.
std::optional<double> asymptotic_noise(const Target& target, const PointParams& p) {
    if (target.scheme == "eo-classical") {
        const double lk = p.lambda_gain * p.k_constant;
        return 2.0 * lk * lk;
    }
    if (target.scheme == "ao-classical") return 2.0;
    if (target.scheme == "ao-quantum") {
        const double s = std::sqrt(p.parametric_gain) - std::sqrt(p.parametric_gain - 1.0);
        return 2.0 * s * s;
    }
    return std::nullopt;
}

bool uses_param(const Target& t, char which) {
    if (t.scheme == "eo-classical") return which == 'K' || which == 'L' || which == 'a';
    if (t.scheme == "ao-classical") return which == 'G' || which == 'a';
    if (t.scheme == "ao-quantum") return which == 'G' || which == 'H' || which == 'a';
    return which == 'a';
}

struct Row {
    PointParams params;
    TeleportReport report;
    std::optional<double> asymptotic;
    // oracle comparison, when requested
    std::string oracle_status;  // "", "ok", "untrusted", "refused"
    double err_mean_plus{}, err_mean_minus{}, err_var_plus{}, err_var_minus{}, err_fidelity{};
};

Row evaluate_point(const Target& target, const PointParams& p, bool alpha_overridden,
                   double classical_threshold, bool oracle, int cutoff) {
    Row row;
    row.params = p;
    Circuit circuit = circuit_for(target, p);
    const Complex alpha = target.scheme == "file" && !alpha_overridden
                              ? circuit.input_displacement
                              : p.alpha;
    row.params.alpha = alpha;
    RunResult result = run(circuit, alpha);
    ReportOptions options;
    options.classical_threshold = classical_threshold;
    row.report = make_report(result, alpha, options);
    row.asymptotic = asymptotic_noise(target, p);
    if (oracle) {
        try {
            Circuit oracle_circuit = circuit;
            oracle_circuit.input_displacement = alpha;
            fock::CircuitFockRun fr = fock::run_circuit(oracle_circuit, cutoff);
            fock::ModeMoments m = fock::measure(fr.state, fr.output_slot);
            QuadratureStats s = quadrature_stats(result.output);
            row.err_mean_plus = std::abs(m.quad.mean_plus - s.mean_plus);
            row.err_mean_minus = std::abs(m.quad.mean_minus - s.mean_minus);
            row.err_var_plus = std::abs(m.quad.var_plus - s.var_plus);
            row.err_var_minus = std::abs(m.quad.var_minus - s.var_minus);
            const double f = coherent_fidelity(row.report.signal_gain, s.var_plus, s.var_minus,
                                               alpha);
            row.err_fidelity = std::abs(fock::overlap(fr.state, alpha, fr.output_slot) - f);
            row.oracle_status = fr.state.trusted() ? "ok" : "untrusted";
        } catch (const std::invalid_argument&) {
            row.oracle_status = "refused";
        }
    }
    return row;
}

const char* kSweepColumns[] = {"scheme",
                               "G",
                               "H",
                               "K",
                               "lambda",
                               "alpha_re",
                               "alpha_im",
                               "signal_gain",
                               "added_noise_plus",
                               "added_noise_minus",
                               "added_noise_asymptotic_plus",
                               "added_noise_asymptotic_minus",
                               "fidelity",
                               "transfer_plus",
                               "transfer_minus",
                               "conditional_variance_plus",
                               "conditional_variance_minus",
                               "classical_channel",
                               "beats_classical_fidelity",
                               "beats_classical_transfer"};

std::vector<std::string> row_fields(const Target& target, const Row& row) {
    const auto& p = row.params;
    const auto& r = row.report;
    auto opt = [&](char which, double v) {
        return uses_param(target, which) ? g17(v) : std::string{};
    };
    std::vector<std::string> fields = {
        target.scheme,
        opt('G', p.gain),
        opt('H', p.parametric_gain),
        opt('K', p.k_constant),
        opt('L', p.lambda_gain),
        g17(p.alpha.real()),
        g17(p.alpha.imag()),
        g17(r.signal_gain),
        g17(r.added_noise_plus),
        g17(r.added_noise_minus),
        row.asymptotic ? g17(*row.asymptotic) : std::string{},
        row.asymptotic ? g17(*row.asymptotic) : std::string{},
        g17(r.fidelity),
        g17(r.transfer_plus),
        g17(r.transfer_minus),
        g17(r.conditional_variance_plus),
        g17(r.conditional_variance_minus),
        r.classical_channel_flag ? "true" : "false",
        r.beats_classical_fidelity ? "true" : "false",
        r.beats_classical_transfer ? "true" : "false",
    };
    return fields;
}

void append_oracle_fields(const Row& row, std::vector<std::string>& fields) {
    fields.push_back(row.oracle_status);
    const bool have = row.oracle_status == "ok" || row.oracle_status == "untrusted";
    auto err = [&](double v) { return have ? g17(v) : std::string{}; };
    fields.push_back(err(row.err_mean_plus));
    fields.push_back(err(row.err_mean_minus));
    fields.push_back(err(row.err_var_plus));
    fields.push_back(err(row.err_var_minus));
    fields.push_back(err(row.err_fidelity));
}

json row_to_json(const Target& target, const Row& row, bool oracle) {
    json j;
    j["scheme"] = target.scheme;
    json params;
    if (uses_param(target, 'G')) params["G"] = row.params.gain;
    if (uses_param(target, 'H')) params["H"] = row.params.parametric_gain;
    if (uses_param(target, 'K')) params["K"] = row.params.k_constant;
    if (uses_param(target, 'L')) params["lambda"] = row.params.lambda_gain;
    params["alpha_re"] = row.params.alpha.real();
    params["alpha_im"] = row.params.alpha.imag();
    j["parameters"] = params;
    const auto& r = row.report;
    json rep;
    rep["signal_gain"] = r.signal_gain;
    rep["added_noise_plus"] = r.added_noise_plus;
    rep["added_noise_minus"] = r.added_noise_minus;
    if (row.asymptotic) {
        rep["added_noise_asymptotic_plus"] = *row.asymptotic;
        rep["added_noise_asymptotic_minus"] = *row.asymptotic;
    }
    rep["fidelity"] = r.fidelity;
    rep["transfer_plus"] = r.transfer_plus;
    rep["transfer_minus"] = r.transfer_minus;
    rep["conditional_variance_plus"] = r.conditional_variance_plus;
    rep["conditional_variance_minus"] = r.conditional_variance_minus;
    rep["classical_channel"] = r.classical_channel_flag;
    rep["beats_classical_fidelity"] = r.beats_classical_fidelity;
    rep["beats_classical_transfer"] = r.beats_classical_transfer;
    j["report"] = rep;
    if (oracle) {
        json o;
        o["status"] = row.oracle_status;
        if (row.oracle_status == "ok" || row.oracle_status == "untrusted") {
            o["err_mean_plus"] = row.err_mean_plus;
            o["err_mean_minus"] = row.err_mean_minus;
            o["err_var_plus"] = row.err_var_plus;
            o["err_var_minus"] = row.err_var_minus;
            o["err_fidelity"] = row.err_fidelity;
        }
        j["oracle"] = o;
    }
    return j;
}

int cmd_run(const std::string& target_name, PointParams p, bool alpha_overridden,
            const std::string& out_format, double classical_threshold, bool oracle, int cutoff) {
    Target target = resolve_target(target_name);
    Row row = evaluate_point(target, p, alpha_overridden, classical_threshold, oracle, cutoff);

    Circuit circuit = circuit_for(target, p);
    RunResult result = run(circuit, row.params.alpha);

    if (out_format == "json") {
        json j = row_to_json(target, row, oracle);
        json modes;
        for (const auto& [name, mode] : result.modes) {
            QuadratureStats s = quadrature_stats(mode);
            json m;
            m["mean_plus"] = s.mean_plus;
            m["mean_minus"] = s.mean_minus;
            m["var_plus"] = s.var_plus;
            m["var_minus"] = s.var_minus;
            m["commutator_norm"] = mode.commutator_norm();
            modes[name] = m;
        }
        j["modes"] = modes;
        const BogoliubovMode* b1 = result.find("b1");
        const BogoliubovMode* b2 = result.find("b2");
        if (b1 && b2) {
            EprCorrelations epr = epr_correlations(*b1, *b2);
            json e;
            e["difference_variance_plus"] = epr.difference_variance_plus;
            e["sum_variance_minus"] = epr.sum_variance_minus;
            e["ratio_to_separable_plus"] = epr.ratio_to_separable_plus;
            e["ratio_to_separable_minus"] = epr.ratio_to_separable_minus;
            j["epr"] = e;
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::vector<std::string> header(std::begin(kSweepColumns), std::end(kSweepColumns));
        std::vector<std::string> fields = row_fields(target, row);
        if (oracle) {
            for (const char* c : {"oracle_status", "oracle_err_mean_plus",
                                  "oracle_err_mean_minus", "oracle_err_var_plus",
                                  "oracle_err_var_minus", "oracle_err_fidelity"}) {
                header.push_back(c);
            }
            append_oracle_fields(row, fields);
        }
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ',';
                s += v[i];
            }
            return s;
        };
        std::cout << join(header) << '\n' << join(fields) << '\n';
        std::cout << '\n' << "mode,mean_plus,mean_minus,var_plus,var_minus,commutator_norm\n";
        for (const auto& [name, mode] : result.modes) {
            QuadratureStats s = quadrature_stats(mode);
            std::cout << name << ',' << g17(s.mean_plus) << ',' << g17(s.mean_minus) << ','
                      << g17(s.var_plus) << ',' << g17(s.var_minus) << ','
                      << g17(mode.commutator_norm()) << '\n';
        }
    }
    return kExitSuccess;
}

int cmd_sweep(const std::string& target_name, const std::string& g_range,
              const std::string& h_range, const std::string& k_range,
              const std::string& l_range, const std::string& a_range, double alpha_im,
              bool composite, const std::string& out_format, double classical_threshold,
              bool oracle, int cutoff) {
    Target target = resolve_target(target_name);
    const std::vector<double> gains = parse_range(g_range, "--G").values();
    const std::vector<double> h_gains = parse_range(h_range, "--H").values();
    const std::vector<double> ks = parse_range(k_range, "--K").values();
    const std::vector<double> lambdas = parse_range(l_range, "--lambda").values();
    const std::vector<double> alphas = parse_range(a_range, "--alpha").values();

    std::vector<Row> rows;
    for (double g : gains) {
        for (double h : h_gains) {
            for (double k : ks) {
                for (double l : lambdas) {
                    for (double a : alphas) {
                        PointParams p;
                        p.gain = g;
                        p.parametric_gain = h;
                        p.k_constant = k;
                        p.lambda_gain = l;
                        p.alpha = Complex{a, alpha_im};
                        p.composite = composite;
                        rows.push_back(evaluate_point(target, p, true, classical_threshold,
                                                      oracle, cutoff));
                    }
                }
            }
        }
    }

    if (out_format == "json") {
        json arr = json::array();
        for (const Row& row : rows) arr.push_back(row_to_json(target, row, oracle));
        std::cout << arr.dump(2) << '\n';
    } else {
        std::vector<std::string> header(std::begin(kSweepColumns), std::end(kSweepColumns));
        if (oracle) {
            for (const char* c : {"oracle_status", "oracle_err_mean_plus",
                                  "oracle_err_mean_minus", "oracle_err_var_plus",
                                  "oracle_err_var_minus", "oracle_err_fidelity"}) {
                header.push_back(c);
            }
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << header[i];
        }
        std::cout << '\n';
        for (const Row& row : rows) {
            std::vector<std::string> fields = row_fields(target, row);
            if (oracle) append_oracle_fields(row, fields);
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) std::cout << ',';
                std::cout << fields[i];
            }
            std::cout << '\n';
        }
    }
    return kExitSuccess;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            values.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, "bad number '" + part + "'");
        }
    }
    if (values.empty()) throw CLI::ValidationError(flag, "empty list");
    return values;
}

int cmd_verify(const std::string& g_list, const std::string& h_list, const std::string& a_list,
               int cutoff, double tolerance) {
    VerifyOptions options;
    options.gains = parse_list(g_list, "--G");
    options.parametric_gains = parse_list(h_list, "--H");
    options.displacements.clear();
    for (double a : parse_list(a_list, "--alpha")) options.displacements.push_back(Complex{a, 0});
    options.cutoff = cutoff;
    options.tolerance = tolerance;

    check_verify_boundary(options);  // throws out of the trusted region
    std::vector<VerifyCheck> checks = verify_grid(options);

    std::printf("%-22s %-6s %-6s %-6s %-22s %13s %13s %10s  %s\n", "scheme", "G", "H", "alpha",
                "quantity", "algebra", "oracle", "abs_err", "status");
    std::size_t failures = 0;
    for (const auto& c : checks) {
        const char* status = c.status == CheckStatus::pass        ? "pass"
                             : c.status == CheckStatus::fail      ? "FAIL"
                             : c.status == CheckStatus::untrusted ? "UNTRUSTED"
                                                                  : "REFUSED";
        if (c.status != CheckStatus::pass) ++failures;
        if (c.status == CheckStatus::refused) {
            std::printf("%-22s %-6g %-6g %-6g %-22s %13s %13s %10s  %s (%s)\n", c.scheme.c_str(),
                        c.gain, c.parametric_gain, c.displacement.real(), c.quantity.c_str(), "-",
                        "-", "-", status, c.note.c_str());
        } else {
            std::printf("%-22s %-6g %-6g %-6g %-22s %13.6e %13.6e %10.3e  %s\n", c.scheme.c_str(),
                        c.gain, c.parametric_gain, c.displacement.real(), c.quantity.c_str(),
                        c.algebra_value, c.oracle_value, c.abs_error, status);
        }
    }
    std::printf("%zu checks, %zu not passing, tolerance %g, cutoff %d\n", checks.size(), failures,
                tolerance, cutoff);
    return failures == 0 ? kExitSuccess : kExitCheckFailure;
}

int cmd_fmt(const std::string& path) {
    Target target = resolve_target(path);
    if (!target.file_circuit) {
        throw std::runtime_error("fmt needs a .qot file, got a preset name");
    }
    std::cout << format(*target.file_circuit);
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-variable optical teleportation simulator"};
    app.require_subcommand(1);

    std::string target = "ao-quantum";
    PointParams params;
    double alpha_re = 0.0, alpha_im = 0.0;
    std::string out_format = "json";
    double classical_threshold = 100.0;
    bool oracle = false;
    int cutoff = 40;

    CLI::App* run_cmd = app.add_subcommand("run", "run one circuit and print its report");
    run_cmd->add_option("target", target, "preset name (eo-classical, ao-classical, ao-quantum) "
                                          "or .qot file");
    run_cmd->add_option("--G", params.gain, "amplifier gain");
    run_cmd->add_option("--H", params.parametric_gain, "parametric gain of the EPR source");
    run_cmd->add_option("--K", params.k_constant, "dual-homodyne channel constant");
    run_cmd->add_option("--lambda", params.lambda_gain, "reconstruction gain");
    run_cmd->add_option("--alpha-re", alpha_re, "input displacement, real part");
    run_cmd->add_option("--alpha-im", alpha_im, "input displacement, imaginary part");
    run_cmd->add_flag("--composite", params.composite,
                      "realize the sender amplifier from twin degenerate PAs");
    run_cmd->add_option("--out", out_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_flag("--oracle", oracle, "cross-check against the truncated-Fock simulation");
    run_cmd->add_option("--cutoff", cutoff, "Fock cutoff for --oracle");
    run_cmd->add_option("--classical-threshold", classical_threshold,
                        "variance level that marks the channel classical");

    std::string g_range = "2", h_range = "2", k_range = "1", l_range = "1", a_range = "0";
    std::string sweep_out = "csv";
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a parameter grid, one row per "
                                                      "point");
    sweep_cmd->add_option("target", target, "preset name or .qot file");
    sweep_cmd->add_option("--G", g_range, "range start,stop,count[,log|lin]");
    sweep_cmd->add_option("--H", h_range, "range start,stop,count[,log|lin]");
    sweep_cmd->add_option("--K", k_range, "range start,stop,count[,log|lin]");
    sweep_cmd->add_option("--lambda", l_range, "range start,stop,count[,log|lin]");
    sweep_cmd->add_option("--alpha", a_range, "range for the real displacement");
    sweep_cmd->add_option("--alpha-im", alpha_im, "fixed imaginary displacement");
    sweep_cmd->add_flag("--composite", params.composite, "composite sender amplifier");
    sweep_cmd->add_option("--out", sweep_out, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    sweep_cmd->add_flag("--oracle", oracle, "add oracle error columns");
    sweep_cmd->add_option("--cutoff", cutoff, "Fock cutoff for --oracle");
    sweep_cmd->add_option("--classical-threshold", classical_threshold,
                          "variance level that marks the channel classical");

    std::string verify_g = "1.0,1.2,2.0", verify_h = "1.0,1.2,2.0", verify_a = "0,0.3,1.0";
    double tolerance = 1e-6;
    CLI::App* verify_cmd = app.add_subcommand("verify", "compare the coefficient algebra with "
                                                        "the truncated-Fock oracle");
    verify_cmd->add_option("--G", verify_g, "comma-separated gains");
    verify_cmd->add_option("--H", verify_h, "comma-separated parametric gains");
    verify_cmd->add_option("--alpha", verify_a, "comma-separated real displacements");
    verify_cmd->add_option("--cutoff", cutoff, "Fock cutoff");
    verify_cmd->add_option("--tolerance", tolerance, "pass threshold on absolute error");

    std::string fmt_path;
    CLI::App* fmt_cmd = app.add_subcommand("fmt", "canonicalize a .qot file to stdout");
    fmt_cmd->add_option("file", fmt_path, "circuit file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    params.alpha = Complex{alpha_re, alpha_im};
    try {
        if (*run_cmd) {
            const bool alpha_overridden = run_cmd->count("--alpha-re") > 0 ||
                                          run_cmd->count("--alpha-im") > 0;
            return cmd_run(target, params, alpha_overridden, out_format, classical_threshold,
                           oracle, cutoff);
        }
        if (*sweep_cmd) {
            return cmd_sweep(target, g_range, h_range, k_range, l_range, a_range, alpha_im,
                             params.composite, sweep_out, classical_threshold, oracle, cutoff);
        }
        if (*verify_cmd) {
            return cmd_verify(verify_g, verify_h, verify_a, cutoff, tolerance);
        }
        if (*fmt_cmd) {
            return cmd_fmt(fmt_path);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
