// noisycheb: fit noisy samples on the Chebyshev grid, scan Mallows' Cp and
// reproduce the convergence/concentration experiments from the command line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisycheb/analysis.hpp"
#include "noisycheb/noisycheb.hpp"
#include "noisycheb/parallel.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct InputSpec {
    std::string function;
    std::string input_path;
    int n_samples = 8193;
    bool n_samples_given = false;
    double sigma = 0.0;
    std::string noise = "";
    std::uint64_t seed = 0;
    int nbar = 0;  // 0 = default cap
};

void add_input_flags(CLI::App* cmd, InputSpec& in) {
    cmd->add_option("--function", in.function, "Built-in target: runge, abs or abs3");
    cmd->add_option("--input", in.input_path,
                    "CSV of y-values sampled at the Chebyshev points, descending x; "
                    "N is inferred as line count - 1");
    cmd->add_option("--n-samples", in.n_samples, "Number of samples N+1 (with --function)")
        ->default_val(8193)
        ->each([&in](const std::string&) { in.n_samples_given = true; });
    cmd->add_option("--sigma", in.sigma, "Noise scale (sigma, half-width, b or gamma)");
    cmd->add_option("--noise", in.noise, "gaussian, uniform, laplace, cauchy or none")
        ->check(CLI::IsMember({"gaussian", "uniform", "laplace", "cauchy", "none"}));
    cmd->add_option("--seed", in.seed, "Base RNG seed")->default_val(0);
    cmd->add_option("--nbar", in.nbar, "Degree cap for the Cp scan (default (N+1)/2)");
}

noisycheb::NoiseModel make_noise(const InputSpec& in) {
    using noisycheb::NoiseModel;
    std::string kind = in.noise;
    if (kind.empty()) kind = in.sigma > 0.0 ? "gaussian" : "none";
    if (kind == "none") return NoiseModel::none();
    if (!(in.sigma > 0.0)) throw CLI::ValidationError("--sigma must be positive for noise " + kind);
    if (kind == "gaussian") return NoiseModel::gaussian(in.sigma);
    if (kind == "uniform") return NoiseModel::uniform(in.sigma);
    if (kind == "laplace") return NoiseModel::laplace(in.sigma);
    return NoiseModel::cauchy(in.sigma);
}

std::vector<double> read_csv_values(const std::string& path) {
    std::ifstream file(path);
    if (!file.good()) throw CLI::ValidationError("cannot open input file: " + path);
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#') continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError("non-numeric value at line " + std::to_string(line_no) +
                                       " of " + path);
        }
    }
    if (values.size() < 3) {
        throw CLI::ValidationError("need at least 3 sample lines in " + path);
    }
    return values;
}

struct ResolvedInput {
    std::vector<double> values;
    noisycheb::NoiseModel noise;
    std::string function_label;
    int num_intervals = 0;
    int nbar = 0;
};

ResolvedInput resolve_input(const InputSpec& in) {
    const bool has_function = !in.function.empty();
    const bool has_input = !in.input_path.empty();
    if (has_function == has_input) {
        throw CLI::ValidationError("exactly one of --function or --input is required");
    }
    ResolvedInput out;
    if (has_input) {
        if (in.n_samples_given) {
            throw CLI::ValidationError("--n-samples conflicts with --input (N is inferred)");
        }
        if (!in.noise.empty() || in.sigma > 0.0) {
            throw CLI::ValidationError("--noise/--sigma conflict with --input (samples carry "
                                       "their own noise)");
        }
        out.values = read_csv_values(in.input_path);
        out.noise = noisycheb::NoiseModel::none();
        out.function_label = "external";
    } else {
        if (in.n_samples < 3) throw CLI::ValidationError("--n-samples must be at least 3");
        const auto f = noisycheb::TargetFunction::by_name(in.function);
        out.noise = make_noise(in);
        out.values = noisycheb::sample(f, out.noise, in.n_samples - 1, in.seed);
        out.function_label = in.function;
    }
    out.num_intervals = static_cast<int>(out.values.size()) - 1;
    out.nbar = in.nbar > 0 ? in.nbar : noisycheb::default_nbar(out.num_intervals);
    if (out.nbar < 1 || out.nbar >= out.num_intervals) {
        throw CLI::ValidationError("--nbar must satisfy 1 <= nbar < N");
    }
    return out;
}

const char* noise_name(noisycheb::NoiseKind kind) {
    switch (kind) {
        case noisycheb::NoiseKind::none: return "none";
        case noisycheb::NoiseKind::gaussian: return "gaussian";
        case noisycheb::NoiseKind::uniform: return "uniform";
        case noisycheb::NoiseKind::laplace: return "laplace";
        case noisycheb::NoiseKind::cauchy: return "cauchy";
    }
    return "none";
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file.good()) throw CLI::ValidationError("cannot open output file: " + path);
    return file;
}

/// FitDocument JSON, schema v1. Reals carry 17 significant digits so that
/// parsing reproduces the doubles bitwise.
void write_fit_document(std::ostream& os, const noisycheb::FitResult& fit,
                        const noisycheb::NoiseModel& noise, const std::string& function_label,
                        bool emit_cp_curve) {
    os << "{\n";
    os << "  \"schema_version\": 1,\n";
    os << "  \"N\": " << fit.num_intervals << ",\n";
    os << "  \"nbar\": " << fit.cp_curve.nbar << ",\n";
    os << "  \"selected_degree\": " << fit.selected_degree << ",\n";
    os << "  \"sigma_hat_sq\": " << fmt_real(fit.sigma_hat_sq) << ",\n";
    os << "  \"coefficients\": [";
    for (std::size_t j = 0; j < fit.truncated.coeffs.size(); ++j) {
        if (j) os << ", ";
        os << fmt_real(fit.truncated.coeffs[j]);
    }
    os << "],\n";
    if (emit_cp_curve) {
        os << "  \"cp_curve\": [";
        for (std::size_t l = 0; l < fit.cp_curve.cp_values.size(); ++l) {
            if (l) os << ", ";
            os << fmt_real(fit.cp_curve.cp_values[l]);
        }
        os << "],\n";
    }
    os << "  \"seed\": " << fit.seed << ",\n";
    os << "  \"noise\": {\"kind\": \"" << noise_name(noise.kind) << "\", \"scale\": "
       << fmt_real(noise.scale) << "},\n";
    os << "  \"function\": \"" << function_label << "\"\n";
    os << "}\n";
}

int run_fit(const InputSpec& in, const std::string& output, bool emit_cp_curve) {
    const auto resolved = resolve_input(in);
    auto fit = noisycheb::fit(resolved.values, resolved.nbar);
    fit.seed = in.seed;
    std::ofstream file;
    auto& os = open_output(file, output);
    write_fit_document(os, fit, resolved.noise, resolved.function_label, emit_cp_curve);
    return 0;
}

int run_cp_scan(const InputSpec& in, const std::string& output) {
    const auto resolved = resolve_input(in);
    const auto coeffs = noisycheb::values_to_coeffs(resolved.values);
    const auto scan = noisycheb::cp_scan(coeffs, resolved.nbar);
    std::ofstream file;
    auto& os = open_output(file, output);
    os << "# ell,cp_value,is_min\n";
    os << "# sigma_hat_sq = " << fmt_real(scan.sigma_hat_sq) << "\n";
    for (int ell = 0; ell <= scan.nbar; ++ell) {
        os << ell << ',' << fmt_real(scan.cp_values[ell]) << ','
           << (ell == scan.selected ? 1 : 0) << '\n';
    }
    return 0;
}

struct TrialRecord {
    std::uint64_t seed = 0;
    int degree = 0;
    double inf_error = 0.0;
    double l2_error = 0.0;
};

int run_convergence(const InputSpec& in, int exp_min, int exp_max, int trials, bool force,
                    const std::string& output) {
    if (!in.input_path.empty() || in.function.empty()) {
        throw CLI::ValidationError("experiment-convergence requires --function");
    }
    if (exp_min < 2 || exp_max < exp_min) {
        throw CLI::ValidationError("need 2 <= --exp-min <= --exp-max");
    }
    if (exp_max > 24 && !force) {
        throw CLI::ValidationError("--exp-max above 24 needs --force (memory guard)");
    }
    if (trials < 1) throw CLI::ValidationError("--trials must be positive");
    const auto f = noisycheb::TargetFunction::by_name(in.function);
    const auto noise = make_noise(in);

    std::ofstream file;
    auto& os = open_output(file, output);
    os << "# N,trial,seed,selected_degree,inf_error,l2_error\n";
    for (int k = exp_min; k <= exp_max; ++k) {
        const int n_intervals = 1 << k;
        std::vector<TrialRecord> records(trials);
        noisycheb::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
            const std::uint64_t seed = noisycheb::substream_seed(
                in.seed, (static_cast<std::uint64_t>(k) << 32) | t);
            const auto fit = noisycheb::fit_function(f, noise, n_intervals, seed);
            const auto err = noisycheb::inf_norm_error(fit.truncated, f);
            records[t] = {seed, fit.selected_degree, err.inf_norm_error, err.l2_error};
        });
        for (int t = 0; t < trials; ++t) {
            os << n_intervals << ',' << t << ',' << records[t].seed << ',' << records[t].degree
               << ',' << fmt_real(records[t].inf_error) << ',' << fmt_real(records[t].l2_error)
               << '\n';
        }
        os.flush();
    }
    return 0;
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (idx - lo) * (v[hi] - v[lo]);
}

int run_histogram(const InputSpec& in, int trials, const std::string& output) {
    if (!in.input_path.empty() || in.function.empty()) {
        throw CLI::ValidationError("experiment-histogram requires --function");
    }
    if (trials < 1) throw CLI::ValidationError("--trials must be positive");
    if (in.n_samples < 3) throw CLI::ValidationError("--n-samples must be at least 3");
    const auto f = noisycheb::TargetFunction::by_name(in.function);
    const auto noise = make_noise(in);
    const int n_intervals = in.n_samples - 1;

    std::vector<TrialRecord> records(trials);
    noisycheb::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const std::uint64_t seed = noisycheb::substream_seed(in.seed, t);
        const auto fit = noisycheb::fit_function(f, noise, n_intervals, seed);
        const auto err = noisycheb::inf_norm_error(fit.truncated, f);
        records[t] = {seed, fit.selected_degree, err.inf_norm_error, err.l2_error};
    });

    std::ofstream file;
    auto& os = open_output(file, output);
    os << "# trial,seed,selected_degree,inf_error\n";
    for (int t = 0; t < trials; ++t) {
        os << t << ',' << records[t].seed << ',' << records[t].degree << ','
           << fmt_real(records[t].inf_error) << '\n';
    }

    std::vector<double> errors(trials), degrees(trials);
    double degree_mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        errors[t] = records[t].inf_error;
        degrees[t] = records[t].degree;
        degree_mean += records[t].degree;
    }
    degree_mean /= trials;

    std::ostringstream summary;
    summary << "{\"trials\": " << trials
            << ", \"median_error\": " << fmt_real(quantile(errors, 0.5))
            << ", \"iqr_error\": " << fmt_real(quantile(errors, 0.75) - quantile(errors, 0.25))
            << ", \"mean_degree\": " << fmt_real(degree_mean)
            << ", \"median_degree\": " << fmt_real(quantile(degrees, 0.5))
            << ", \"iqr_degree\": " << fmt_real(quantile(degrees, 0.75) - quantile(degrees, 0.25));
    if (noise.is_subgaussian()) {
        // Dashed-line estimate: t=1 and the sqrt(8) r_inf term divided by
        // sqrt(N); r_inf from the truncation proxy at the rounded mean degree.
        const int n_est = static_cast<int>(std::lround(degree_mean));
        const auto proxy = noisycheb::residual_proxy(f, n_est);
        noisycheb::BoundInputs bi;
        bi.n = n_est;
        bi.num_intervals = n_intervals;
        bi.sigma = noise.kind == noisycheb::NoiseKind::none ? 0.0 : noise.subgaussian_sigma();
        bi.r_inf = proxy.value;
        bi.t = 1.0;
        const auto est = noisycheb::uniform_bound_subgaussian(bi, true);
        summary << ", \"estimate_degree\": " << n_est
                << ", \"residual_proxy\": " << fmt_real(proxy.value)
                << ", \"uniform_estimate\": " << fmt_real(est.threshold);
    } else {
        summary << ", \"uniform_estimate\": null";
    }
    summary << "}";

    if (output.empty()) {
        os << "# summary " << summary.str() << '\n';
    } else {
        std::cout << summary.str() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NoisyChebtrunc: noise-aware Chebyshev approximation on [-1,1]"};
    app.require_subcommand(1);

    InputSpec fit_in, scan_in, conv_in, hist_in;
    std::string fit_output, scan_output, conv_output, hist_output;
    bool emit_cp_curve = false;
    int exp_min = 4, exp_max = 12, conv_trials = 10, hist_trials = 1000;
    bool force = false;

    auto* fit_cmd = app.add_subcommand("fit", "Fit samples and emit a FitDocument JSON");
    add_input_flags(fit_cmd, fit_in);
    fit_cmd->add_flag("--emit-cp-curve", emit_cp_curve, "Include the full Cp curve");
    fit_cmd->add_option("--output", fit_output, "Write JSON here instead of stdout");

    auto* scan_cmd = app.add_subcommand("cp-scan", "Emit the Cp curve as CSV");
    add_input_flags(scan_cmd, scan_in);
    scan_cmd->add_option("--output", scan_output, "Write CSV here instead of stdout");

    auto* conv_cmd = app.add_subcommand("experiment-convergence",
                                        "Error vs N = 2^k sweep, CSV per trial");
    add_input_flags(conv_cmd, conv_in);
    conv_cmd->add_option("--exp-min", exp_min, "Smallest exponent k")->default_val(4);
    conv_cmd->add_option("--exp-max", exp_max, "Largest exponent k")->default_val(12);
    conv_cmd->add_option("--trials", conv_trials, "Trials per N")->default_val(10);
    conv_cmd->add_flag("--force", force, "Allow k > 24");
    conv_cmd->add_option("--output", conv_output, "Write CSV here instead of stdout");

    auto* hist_cmd = app.add_subcommand("experiment-histogram",
                                        "Error/degree histogram rows plus a summary JSON");
    add_input_flags(hist_cmd, hist_in);
    hist_cmd->add_option("--trials", hist_trials, "Number of independent runs")->default_val(1000);
    hist_cmd->add_option("--output", hist_output,
                         "Write CSV rows here; summary JSON then goes to stdout");

    try {
        app.parse(argc, argv);
        if (fit_cmd->parsed()) return run_fit(fit_in, fit_output, emit_cp_curve);
        if (scan_cmd->parsed()) return run_cp_scan(scan_in, scan_output);
        if (conv_cmd->parsed()) {
            return run_convergence(conv_in, exp_min, exp_max, conv_trials, force, conv_output);
        }
        return run_histogram(hist_in, hist_trials, hist_output);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}
