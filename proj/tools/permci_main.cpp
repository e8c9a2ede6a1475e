// permci: non-parametric confidence intervals from a single permutation-test
// run, joint coverage of several such intervals under arbitrary dependence,
// and the level adjustment that hits a target joint coverage.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permci/bootstrap.hpp"
#include "permci/dataset.hpp"
#include "permci/errors.hpp"
#include "permci/multivariate.hpp"
#include "permci/report.hpp"
#include "permci/simulate.hpp"
#include "permci/univariate.hpp"

using nlohmann::json;
using namespace permci;

namespace {

// Exit codes, one per error class.
enum ExitCode {
    kOk = 0,
    kUnexpected = 1,
    kUsage = 2,
    kParse = 3,
    kResourceLimit = 4,
    kInfeasible = 5,
    kNumeric = 6,
};

struct CommonOptions {
    std::string input;
    std::string statistic = "two-sample";
    std::string group_col;
    std::string x_col;
    double alpha = 0.05;
    std::size_t permutations = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string format = "json";
    std::string output;
    std::string save_plan_path;
    std::string load_plan_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool needs_input) {
    if (needs_input) {
        cmd->add_option("--input", opt.input, "CSV input file (header row, comma separator)")
            ->required();
        cmd->add_option("--statistic", opt.statistic, "two-sample or linreg")
            ->check(CLI::IsMember({"two-sample", "linreg"}))
            ->capture_default_str();
        cmd->add_option("--group-col", opt.group_col, "group label column (two-sample mode)");
        cmd->add_option("--x-col", opt.x_col, "regressor column (linreg mode)");
    }
    cmd->add_option("--alpha", opt.alpha, "marginal level / joint target")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12))
        ->capture_default_str();
    cmd->add_option("--permutations", opt.permutations, "number of sampled permutations M")
        ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}))
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "RNG seed; reruns with the same seed are bit-identical")
        ->capture_default_str();
    cmd->add_option("--threads", opt.threads, "worker thread bound (never changes results)")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "results file format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--output", opt.output, "results file path (manifest lands beside it)");
    if (needs_input) {
        cmd->add_option("--save-plan", opt.save_plan_path, "write the permutation plan to a file");
        cmd->add_option("--load-plan", opt.load_plan_path,
                        "replay a saved permutation plan instead of sampling");
    }
}

std::string default_output(const std::string& sub, const std::string& format) {
    return "permci_" + sub + (format == "json" ? ".json" : ".csv");
}

Dataset load_dataset(const CommonOptions& opt) {
    const AnalysisMode mode =
        opt.statistic == "two-sample" ? AnalysisMode::two_sample : AnalysisMode::regression;
    if (mode == AnalysisMode::two_sample && opt.group_col.empty())
        throw parse_error("two-sample mode requires --group-col");
    if (mode == AnalysisMode::regression && opt.x_col.empty())
        throw parse_error("linreg mode requires --x-col");
    return ingest_csv(opt.input, mode, opt.group_col, opt.x_col);
}

PermutationPlan make_plan(const CommonOptions& opt, std::size_t n) {
    if (!opt.load_plan_path.empty()) {
        PermutationPlan plan = load_plan(opt.load_plan_path);
        if (plan.n != n)
            throw parse_error("loaded plan population size does not match the dataset");
        return plan;
    }
    if (opt.permutations < 1000)
        std::cerr << "warning: --permutations below 1000 gives noticeably noisy intervals\n";
    auto plan = sample_permutations(static_cast<std::uint32_t>(n), opt.permutations, opt.seed);
    if (!opt.save_plan_path.empty()) save_plan(plan, opt.save_plan_path);
    return plan;
}

json dataset_meta(const Dataset& ds, const CommonOptions& opt, const PermutationPlan& plan) {
    json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["tool_version"] = kToolVersion;
    meta["statistic"] = opt.statistic;
    meta["n"] = ds.rows();
    meta["k"] = ds.k();
    meta["permutations"] = plan.size();
    meta["seed"] = plan.seed;
    meta["exhaustive_plan"] = plan.exhaustive;
    if (ds.mode == AnalysisMode::two_sample) {
        meta["n1"] = ds.n1;
        meta["n2"] = ds.n2;
        meta["groups"] = {ds.first_label, ds.second_label};
    } else {
        meta["x_col"] = ds.x_column;
    }
    return meta;
}

json options_json(const CommonOptions& opt) {
    json j;
    j["input"] = opt.input;
    j["statistic"] = opt.statistic;
    j["group_col"] = opt.group_col;
    j["x_col"] = opt.x_col;
    j["alpha"] = opt.alpha;
    j["permutations"] = opt.permutations;
    j["seed"] = opt.seed;
    j["format"] = opt.format;
    j["output"] = opt.output;
    return j;
}

void write_manifest(const std::string& sub, const std::vector<std::string>& argv,
                    const json& options, const std::string& input,
                    const std::string& output_path) {
    write_json_file(output_path + ".manifest.json", make_manifest(sub, argv, options, input));
}

std::vector<std::string> collect_argv(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) out.emplace_back(argv[i]);
    return out;
}

void print_interval_line(const std::string& name, const CiResult& ci) {
    std::printf("  %-12s theta_hat=%-12s [%s, %s]\n", name.c_str(),
                format_double(ci.theta_hat).c_str(), format_double(ci.lower).c_str(),
                format_double(ci.upper).c_str());
}

// ---------------------------------------------------------------- ci

int run_ci(const CommonOptions& opt, const std::vector<std::string>& argv) {
    const Dataset ds = load_dataset(opt);
    const Model model = ds.model();
    const PermutationPlan plan = make_plan(opt, ds.rows());
    const std::string output = opt.output.empty() ? default_output("ci", opt.format) : opt.output;

    json result = dataset_meta(ds, opt, plan);
    result["subcommand"] = "ci";
    result["alpha"] = opt.alpha;
    result["duplicate_draws"] = duplicate_count(plan);

    std::vector<std::vector<std::string>> csv_rows;
    std::printf("permci ci: %zu coordinate(s), N=%zu, M=%zu, alpha=%s\n", ds.k(), ds.rows(),
                plan.size(), format_double(opt.alpha).c_str());
    json coords = json::array();
    for (std::size_t c = 0; c < ds.k(); ++c) {
        const auto ep = compute_endpoints(ds.columns[c], model, plan, opt.threads);
        const auto ci = confidence_interval(ep, opt.alpha);
        json jc;
        jc["name"] = ds.column_names[c];
        jc["theta_hat"] = encode_double(ci.theta_hat);
        jc["lower"] = encode_double(ci.lower);
        jc["upper"] = encode_double(ci.upper);
        jc["negligible"] = ep.negligible_count;
        jc["degenerate"] = ep.degenerate_count;
        coords.push_back(jc);

        const CsvCell lo = csv_endpoint(ci.lower);
        const CsvCell hi = csv_endpoint(ci.upper);
        csv_rows.push_back({std::to_string(c + 1), ds.column_names[c],
                            format_double(ci.theta_hat), lo.value, std::to_string(lo.unbounded),
                            hi.value, std::to_string(hi.unbounded),
                            std::to_string(ep.negligible_count)});
        print_interval_line(ds.column_names[c], ci);
    }
    result["coordinates"] = coords;

    if (opt.format == "json") {
        write_json_file(output, result);
    } else {
        write_csv_file(output,
                       {"coordinate", "name", "theta_hat", "lower", "lower_unbounded", "upper",
                        "upper_unbounded", "negligible"},
                       csv_rows);
    }
    write_manifest("ci", argv, options_json(opt), opt.input, output);
    std::printf("results written to %s\n", output.c_str());
    return kOk;
}

// ---------------------------------------------------------------- joint

int run_joint(const CommonOptions& opt, double threshold,
              const std::vector<std::string>& argv) {
    const Dataset ds = load_dataset(opt);
    const Model model = ds.model();
    const PermutationPlan plan = make_plan(opt, ds.rows());
    const std::string output =
        opt.output.empty() ? default_output("joint", opt.format) : opt.output;

    const JointEndpoints je = compute_joint_endpoints(ds.columns, model, plan, opt.threads);
    const JointCoverageResult jc = joint_alpha_multiple(je, opt.alpha);
    const AdjustmentResult ar = adjust_alpha(je, opt.alpha, threshold);
    const auto unadjusted = marginal_intervals(je, opt.alpha);
    const auto adjusted = adjusted_intervals(je, ar);

    const double sidak = sidak_alpha_multiple(opt.alpha, ds.k());
    const double bonferroni = bonferroni_alpha_multiple(opt.alpha, ds.k());

    json result = dataset_meta(ds, opt, plan);
    result["subcommand"] = "joint";
    result["alpha"] = opt.alpha;
    result["alpha_multiple"] = encode_double(jc.alpha_multiple);
    result["joint_coverage"] = encode_double(1.0 - jc.alpha_multiple);
    result["sidak_alpha_multiple"] = encode_double(sidak);
    result["sidak_coverage"] = encode_double(1.0 - sidak);
    result["bonferroni_alpha_multiple"] = encode_double(bonferroni);
    result["bonferroni_coverage"] = encode_double(1.0 - bonferroni);
    result["alpha_star"] = encode_double(ar.alpha_star);
    result["achieved_alpha_multiple"] = encode_double(ar.achieved_alpha_multiple);
    result["adjust_iterations"] = ar.iterations;
    result["adjust_threshold"] = encode_double(ar.threshold);

    json coords = json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (std::size_t c = 0; c < ds.k(); ++c) {
        json row;
        row["name"] = ds.column_names[c];
        row["theta_hat"] = encode_double(unadjusted[c].theta_hat);
        row["lower"] = encode_double(unadjusted[c].lower);
        row["upper"] = encode_double(unadjusted[c].upper);
        row["adjusted_lower"] = encode_double(adjusted[c].lower);
        row["adjusted_upper"] = encode_double(adjusted[c].upper);
        row["negligible"] = je.coords[c].negligible_count;
        coords.push_back(row);

        const CsvCell lo = csv_endpoint(unadjusted[c].lower);
        const CsvCell hi = csv_endpoint(unadjusted[c].upper);
        const CsvCell alo = csv_endpoint(adjusted[c].lower);
        const CsvCell ahi = csv_endpoint(adjusted[c].upper);
        csv_rows.push_back({std::to_string(c + 1), ds.column_names[c],
                            format_double(unadjusted[c].theta_hat), lo.value,
                            std::to_string(lo.unbounded), hi.value, std::to_string(hi.unbounded),
                            alo.value, std::to_string(alo.unbounded), ahi.value,
                            std::to_string(ahi.unbounded), format_double(opt.alpha),
                            format_double(jc.alpha_multiple), format_double(ar.alpha_star),
                            format_double(sidak), format_double(bonferroni)});
    }
    result["coordinates"] = coords;

    if (opt.format == "json") {
        write_json_file(output, result);
    } else {
        write_csv_file(
            output,
            {"coordinate", "name", "theta_hat", "lower", "lower_unbounded", "upper",
             "upper_unbounded", "adjusted_lower", "adjusted_lower_unbounded", "adjusted_upper",
             "adjusted_upper_unbounded", "alpha", "alpha_multiple", "alpha_star",
             "sidak_alpha_multiple", "bonferroni_alpha_multiple"},
            csv_rows);
    }
    write_manifest("joint", argv, options_json(opt), opt.input, output);

    std::printf("permci joint: K=%zu, N=%zu, M=%zu\n", ds.k(), ds.rows(), plan.size());
    std::printf("  marginal level        alpha          = %s\n",
                format_double(opt.alpha).c_str());
    std::printf("  joint non-coverage    alpha_multiple = %s  (coverage %.1f%%)\n",
                format_double(jc.alpha_multiple).c_str(), 100.0 * (1.0 - jc.alpha_multiple));
    std::printf("  Sidak reference       %.4f  (coverage %.1f%%)\n", sidak,
                100.0 * (1.0 - sidak));
    std::printf("  Bonferroni reference  %.4f  (coverage %.1f%%)\n", bonferroni,
                100.0 * (1.0 - bonferroni));
    std::printf("  adjusted level        alpha_star     = %s  (achieved joint %s, %zu probes)\n",
                format_double(ar.alpha_star).c_str(),
                format_double(ar.achieved_alpha_multiple).c_str(), ar.iterations);
    std::printf("  adjusted intervals at alpha_star:\n");
    for (std::size_t c = 0; c < ds.k(); ++c) print_interval_line(ds.column_names[c], adjusted[c]);
    std::printf("results written to %s\n", output.c_str());
    return kOk;
}

// ---------------------------------------------------------------- bootstrap

int run_bootstrap(const CommonOptions& opt, std::size_t replicates, double level,
                  const std::vector<std::string>& argv) {
    const Dataset ds = load_dataset(opt);
    const Model model = ds.model();
    const PermutationPlan plan = make_plan(opt, ds.rows());
    const std::string output =
        opt.output.empty() ? default_output("bootstrap", opt.format) : opt.output;

    json result = dataset_meta(ds, opt, plan);
    result["subcommand"] = "bootstrap";
    result["alpha"] = opt.alpha;
    result["replicates"] = replicates;
    result["level"] = level;

    std::printf("permci bootstrap: %zu coordinate(s), B=%zu, level=%s\n", ds.k(), replicates,
                format_double(level).c_str());
    json coords = json::array();
    std::vector<std::vector<std::string>> csv_rows;
    for (std::size_t c = 0; c < ds.k(); ++c) {
        const auto ep = compute_endpoints(ds.columns[c], model, plan, opt.threads);
        const auto bs =
            bootstrap_endpoints(ep, opt.alpha, replicates, level, opt.seed, opt.threads);
        json row;
        row["name"] = ds.column_names[c];
        row["lower"] = encode_double(bs.lower_point);
        row["lower_interval"] = {encode_double(bs.lower_lo), encode_double(bs.lower_hi)};
        row["upper"] = encode_double(bs.upper_point);
        row["upper_interval"] = {encode_double(bs.upper_lo), encode_double(bs.upper_hi)};
        coords.push_back(row);

        const CsvCell lp = csv_endpoint(bs.lower_point);
        const CsvCell ll = csv_endpoint(bs.lower_lo);
        const CsvCell lh = csv_endpoint(bs.lower_hi);
        const CsvCell up = csv_endpoint(bs.upper_point);
        const CsvCell ul = csv_endpoint(bs.upper_lo);
        const CsvCell uh = csv_endpoint(bs.upper_hi);
        csv_rows.push_back({std::to_string(c + 1), ds.column_names[c], lp.value,
                            std::to_string(lp.unbounded), ll.value, lh.value, up.value,
                            std::to_string(up.unbounded), ul.value, uh.value});
        std::printf("  %-12s L=%s in [%s, %s]   U=%s in [%s, %s]\n", ds.column_names[c].c_str(),
                    format_double(bs.lower_point).c_str(), format_double(bs.lower_lo).c_str(),
                    format_double(bs.lower_hi).c_str(), format_double(bs.upper_point).c_str(),
                    format_double(bs.upper_lo).c_str(), format_double(bs.upper_hi).c_str());
    }
    result["coordinates"] = coords;

    if (opt.format == "json") {
        write_json_file(output, result);
    } else {
        write_csv_file(output,
                       {"coordinate", "name", "lower", "lower_unbounded", "lower_lo", "lower_hi",
                        "upper", "upper_unbounded", "upper_lo", "upper_hi"},
                       csv_rows);
    }
    json options = options_json(opt);
    options["bootstrap"] = replicates;
    options["level"] = level;
    write_manifest("bootstrap", argv, options, opt.input, output);
    std::printf("results written to %s\n", output.c_str());
    return kOk;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const SimConfig& config, const std::vector<double>& rhos,
                 const std::string& format, std::string output,
                 const std::vector<std::string>& argv) {
    if (output.empty()) output = default_output("simulate", format);

    const auto x = table1_regressors(config.n);
    const Table1Result table = run_table1(config, rhos, x);

    std::printf("permci simulate: N=%zu, K=%zu, M=%zu, runs=%zu, alpha=%s\n", config.n, config.k,
                config.m, config.runs, format_double(config.alpha).c_str());
    std::printf("  %-6s %-20s %-20s %-14s %-14s\n", "rho", "mean_alpha_multiple",
                "iqr_alpha_multiple", "mean_alpha_star", "iqr_alpha_star");
    std::vector<std::vector<std::string>> csv_rows;
    json rows = json::array();
    for (const auto& row : table.rows) {
        std::printf("  %-6s %-20s %-20s %-14s %-14s\n", format_double(row.rho).c_str(),
                    format_double(row.mean_alpha_multiple).c_str(),
                    format_double(row.iqr_alpha_multiple).c_str(),
                    format_double(row.mean_alpha_star).c_str(),
                    format_double(row.iqr_alpha_star).c_str());
        csv_rows.push_back({format_double(row.rho), format_double(row.mean_alpha_multiple),
                            format_double(row.iqr_alpha_multiple),
                            format_double(row.mean_alpha_star),
                            format_double(row.iqr_alpha_star)});
        json jr;
        jr["rho"] = encode_double(row.rho);
        jr["mean_alpha_multiple"] = encode_double(row.mean_alpha_multiple);
        jr["iqr_alpha_multiple"] = encode_double(row.iqr_alpha_multiple);
        jr["mean_alpha_star"] = encode_double(row.mean_alpha_star);
        jr["iqr_alpha_star"] = encode_double(row.iqr_alpha_star);
        jr["runs"] = row.runs;
        jr["infeasible"] = row.infeasible;
        rows.push_back(jr);
    }

    if (format == "json") {
        json result;
        result["schema_version"] = kSchemaVersion;
        result["tool_version"] = kToolVersion;
        result["subcommand"] = "simulate";
        result["n"] = config.n;
        result["k"] = config.k;
        result["permutations"] = config.m;
        result["runs"] = config.runs;
        result["alpha"] = config.alpha;
        result["threshold"] = config.threshold;
        result["seed"] = config.seed;
        result["regressors"] = x;
        result["rows"] = rows;
        write_json_file(output, result);
    } else {
        write_csv_file(output,
                       {"rho", "mean_alpha_multiple", "iqr_alpha_multiple", "mean_alpha_star",
                        "iqr_alpha_star"},
                       csv_rows);
    }

    // Per-replicate detail next to the summary.
    std::vector<std::vector<std::string>> run_rows;
    for (const auto& r : table.runs)
        run_rows.push_back({format_double(r.rho), std::to_string(r.run),
                            format_double(r.alpha_multiple), format_double(r.alpha_star)});
    write_csv_file(output + ".runs.csv", {"rho", "run", "alpha_multiple", "alpha_star"},
                   run_rows);

    json options;
    options["n"] = config.n;
    options["k"] = config.k;
    options["permutations"] = config.m;
    options["runs"] = config.runs;
    options["alpha"] = config.alpha;
    options["threshold"] = config.threshold;
    options["seed"] = config.seed;
    options["rho"] = rhos;
    options["format"] = format;
    options["output"] = output;
    write_manifest("simulate", argv, options, "", output);
    std::printf("results written to %s (replicate rows in %s.runs.csv)\n", output.c_str(),
                output.c_str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation-test confidence intervals with joint-coverage adjustment"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CommonOptions ci_opt, joint_opt, boot_opt;
    double joint_threshold = kDefaultAdjustThreshold;
    std::size_t boot_replicates = 1000;
    double boot_level = 0.95;

    SimConfig sim;
    std::string sim_rho = "0.90,0.95,0.99";
    std::string sim_format = "csv";
    std::string sim_output;

    CLI::App* ci_cmd = app.add_subcommand("ci", "marginal confidence intervals");
    add_common_options(ci_cmd, ci_opt, true);

    CLI::App* joint_cmd =
        app.add_subcommand("joint", "joint coverage and adjusted confidence intervals");
    add_common_options(joint_cmd, joint_opt, true);
    joint_cmd->add_option("--threshold", joint_threshold, "adjustment stopping threshold")
        ->check(CLI::Range(1e-12, 1.0))
        ->capture_default_str();

    CLI::App* boot_cmd =
        app.add_subcommand("bootstrap", "endpoint uncertainty from permutation sampling");
    add_common_options(boot_cmd, boot_opt, true);
    boot_cmd->add_option("--bootstrap", boot_replicates, "bootstrap replicates B")
        ->check(CLI::Range(std::size_t{100}, std::size_t{10000000}))
        ->capture_default_str();
    boot_cmd->add_option("--level", boot_level, "percentile interval level")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12))
        ->capture_default_str();

    CLI::App* sim_cmd = app.add_subcommand("simulate", "equicorrelated regression study");
    sim_cmd->add_option("--rho", sim_rho, "comma-separated correlation values")
        ->capture_default_str();
    sim_cmd->add_option("--runs", sim.runs, "replicates per rho")->capture_default_str();
    sim_cmd->add_option("--n", sim.n, "observations per dataset")->capture_default_str();
    sim_cmd->add_option("--k", sim.k, "coordinates")->capture_default_str();
    sim_cmd->add_option("--permutations", sim.m, "permutations per run")
        ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}))
        ->capture_default_str();
    sim_cmd->add_option("--alpha", sim.alpha, "target joint level")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12))
        ->capture_default_str();
    sim_cmd->add_option("--threshold", sim.threshold, "adjustment stopping threshold")
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    sim_cmd->add_option("--threads", sim.threads, "worker thread bound")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    sim_cmd->add_option("--format", sim_format, "results file format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sim_cmd->add_option("--output", sim_output, "summary file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    const std::vector<std::string> raw_argv = collect_argv(argc, argv);
    try {
        if (ci_cmd->parsed()) return run_ci(ci_opt, raw_argv);
        if (joint_cmd->parsed()) return run_joint(joint_opt, joint_threshold, raw_argv);
        if (boot_cmd->parsed())
            return run_bootstrap(boot_opt, boot_replicates, boot_level, raw_argv);
        if (sim_cmd->parsed()) {
            std::vector<double> rhos;
            std::stringstream ss(sim_rho);
            std::string tok;
            while (std::getline(ss, tok, ',')) rhos.push_back(std::stod(tok));
            return run_simulate(sim, rhos, sim_format, sim_output, raw_argv);
        }
    } catch (const parse_error& e) {
        if (e.row > 0)
            std::cerr << "error: " << e.what() << " (line " << e.row
                      << (e.col > 0 ? ", column " + std::to_string(e.col) : "") << ")\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const resource_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceLimit;
    } catch (const infeasible_adjustment_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasible;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kUnexpected;
    }
    return kUsage;
}
