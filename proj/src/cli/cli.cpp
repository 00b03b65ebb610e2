#include "pvaudit/cli.hpp"

#include "pvaudit/corrstats.hpp"
#include "pvaudit/csv.hpp"
#include "pvaudit/dataset.hpp"
#include "pvaudit/errors.hpp"
#include "pvaudit/multiplicity.hpp"
#include "pvaudit/numerics.hpp"
#include "pvaudit/pvplot.hpp"
#include "pvaudit/reproduce.hpp"
#include "pvaudit/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace pvaudit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

// Thrown by command handlers to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

std::vector<double> split_reals(const std::string& list) {
    std::vector<double> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("'" + item + "' is not a number");
        }
        if (used != item.size()) {
            throw UsageError("'" + item + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError("empty value list");
    }
    return out;
}

std::string format_p(double p, int digits) {
    if (p != 0.0 && p < std::pow(10.0, -digits)) {
        return fmt::format("{:.{}e}", p, digits);
    }
    return fmt::format("{:.{}f}", p, digits);
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << content;
}

// --- audit -----------------------------------------------------------------

struct AuditOptions {
    std::string input;
    std::string out_dir;
    double alpha = 0.05;
    std::optional<std::size_t> family;
    std::size_t top = 10;
    std::string delimiter = "comma";
    bool one_sided = false;
    std::string title;
};

int cmd_audit(const AuditOptions& opt, const Environment& env, std::ostream& out) {
    const fs::path out_dir = !opt.out_dir.empty() ? fs::path(opt.out_dir)
                             : env.out_dir          ? fs::path(*env.out_dir)
                                                    : fs::path("pvaudit_out");
    const char delim = opt.delimiter == "tab" ? '\t' : ',';
    const auto sidedness = opt.one_sided ? corrstats::Sidedness::one_sided : corrstats::Sidedness::two_sided;

    const dataset::Dataset data = dataset::load_correlation_csv(opt.input);
    if (data.records.empty()) {
        throw ValidationError(0, "'" + opt.input + "' contains no data rows");
    }
    const pvplot::PValuePlot plot = pvplot::build_plot(data, opt.alpha, sidedness);
    if (opt.top == 0) {
        throw UsageError("--top must be at least 1");
    }
    const auto adj = pvplot::adjust_top(plot, opt.top, opt.family.value_or(plot.k));

    std::vector<numerics::LogTail> logs;
    for (const auto& e : plot.entries) {
        logs.push_back(e.log_p);
    }
    const auto combined = multiplicity::fisher_combine(logs);

    std::vector<std::optional<double>> adjusted_by_rank(plot.k);
    for (const auto& e : adj.entries) {
        adjusted_by_rank[e.original_index] = e.adjusted;
    }

    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / "pvalues.csv";
    const fs::path svg_path = out_dir / "plot.svg";
    const fs::path json_path = out_dir / "report.json";

    ordered_json records = ordered_json::array();
    const std::string d(1, delim);
    std::string csv = fmt::format("rank{0}study{0}criterion{0}instrument{0}category{0}r{0}n{0}z{0}se{0}"
                                  "z_ratio{0}p{0}neg_log10_p{0}sign{0}p_adjusted\n",
                                  d);
    for (const auto& e : plot.entries) {
        const auto& rec = data.records[e.record_ref];
        const auto t = corrstats::correlation_p(rec.effect, sidedness);
        const auto& adjusted = adjusted_by_rank[e.rank - 1];
        csv += fmt::format("{1}{0}{2}{0}{3}{0}{4}{0}{5}{0}{6}{0}{7}{0}{8:.17g}{0}{9:.17g}{0}{10:.17g}{0}"
                           "{11:.17g}{0}{12:.17g}{0}{13}{0}{14}\n",
                           d, e.rank, csv::escape(rec.study, delim), csv::escape(rec.criterion, delim),
                           dataset::to_string(rec.instrument), csv::escape(rec.category, delim),
                           rec.effect.r(), rec.effect.n(), t.z, t.se, t.z_ratio, e.p,
                           e.log_p.neg_log10_p(), corrstats::to_string(e.sign),
                           adjusted ? fmt::format("{:.17g}", *adjusted) : std::string{});
        ordered_json row = {{"rank", e.rank},
                            {"record_index", e.record_ref},
                            {"study", rec.study},
                            {"criterion", rec.criterion},
                            {"instrument", dataset::to_string(rec.instrument)},
                            {"category", rec.category},
                            {"r", rec.effect.r()},
                            {"n", rec.effect.n()},
                            {"z", t.z},
                            {"se", t.se},
                            {"z_ratio", t.z_ratio},
                            {"p", e.p},
                            {"neg_log10_p", e.log_p.neg_log10_p()},
                            {"sign", corrstats::to_string(e.sign)}};
        row["p_adjusted"] = adjusted ? ordered_json(*adjusted) : ordered_json(nullptr);
        records.push_back(std::move(row));
    }

    pvplot::SvgOptions svg_opt;
    svg_opt.title = !opt.title.empty() ? opt.title : fmt::format("P-value plot of {} correlations", plot.k);
    write_text(csv_path, csv);
    write_text(svg_path, pvplot::render_svg(plot, svg_opt));

    ordered_json fdr = ordered_json::array();
    for (const auto& e : adj.by_rank()) {
        const auto& rec = data.records[plot.entries[e.original_index].record_ref];
        fdr.push_back({{"rank", e.rank},
                       {"study", rec.study},
                       {"criterion", rec.criterion},
                       {"r", rec.effect.r()},
                       {"n", rec.effect.n()},
                       {"p", e.unadjusted},
                       {"p_adjusted", e.adjusted}});
    }

    ordered_json report = {
        {"schema", "pvaudit.audit_report"},
        {"schema_version", kReportSchemaVersion},
        {"input", opt.input},
        {"source", data.source},
        {"alpha", opt.alpha},
        {"sidedness", opt.one_sided ? "one_sided" : "two_sided"},
        {"plot",
         {{"k", plot.k},
          {"n_positive", plot.n_positive},
          {"n_negative", plot.n_negative},
          {"n_zero", plot.n_zero},
          {"n_below_alpha", plot.n_below_alpha},
          {"ks_d", plot.ks_d}}},
        {"combined",
         {{"chi_square", combined.chi_square},
          {"df", combined.df},
          {"k", combined.k},
          {"p", combined.p},
          {"independence_warning", combined.independence_warning}}},
        {"adjustment", {{"method", "benjamini_hochberg"}, {"m", adj.m}, {"top", adj.entries.size()}, {"entries", fdr}}},
        {"records", records},
        {"artifacts",
         {{"pvalues_csv", csv_path.string()}, {"plot_svg", svg_path.string()}, {"report_json", json_path.string()}}},
    };
    write_text(json_path, report.dump(2) + "\n");

    out << fmt::format("records: {}\n", plot.k);
    out << fmt::format("positive: {}  negative: {}  zero: {}\n", plot.n_positive, plot.n_negative, plot.n_zero);
    out << fmt::format("p < {}: {}\n", opt.alpha, plot.n_below_alpha);
    out << fmt::format("KS distance from uniform: {:.6f}\n", plot.ks_d);
    out << fmt::format("Fisher combined: chi-square {:.2f}, df {}, p {}\n", combined.chi_square, combined.df,
                       combined.p < 1e-4 ? "< 0.0001" : fmt::format("{:.4f}", combined.p));
    out << "warning: " << combined.independence_warning << "\n";
    out << fmt::format("BH adjustment of the {} smallest p-values, family m = {}\n", adj.entries.size(), adj.m);
    out << pvplot::render_table(plot, adj, data, {delim, 6});
    out << fmt::format("wrote {}\nwrote {}\nwrote {}\n", csv_path.string(), svg_path.string(), json_path.string());
    return kOk;
}

// --- tail ------------------------------------------------------------------

struct TailOptions {
    std::optional<double> r;
    std::optional<int> n;
    std::optional<double> mean;
    std::optional<double> se;
    std::optional<double> x;
    std::optional<int> df;
    bool log10 = false;
    bool one_sided = false;
    int digits = 6;
};

int cmd_tail(const TailOptions& opt, std::ostream& out) {
    const int corr = (opt.r ? 1 : 0) + (opt.n ? 1 : 0);
    const int one = (opt.mean ? 1 : 0) + (opt.se ? 1 : 0);
    const int chi = (opt.x ? 1 : 0) + (opt.df ? 1 : 0);
    const int complete = (corr == 2) + (one == 2) + (chi == 2);
    const bool partial = corr == 1 || one == 1 || chi == 1;
    if (complete != 1 || partial) {
        throw UsageError("tail needs exactly one of the pairs --r/--n, --mean/--se, --x/--df");
    }
    if (opt.digits < 0 || opt.digits > 17) {
        throw UsageError("--digits must lie in [0, 17]");
    }
    if (chi == 2 && opt.one_sided) {
        throw UsageError("--one-sided applies to --r/--n and --mean/--se only");
    }

    numerics::LogTail log_p;
    double p = 1.0;
    if (corr == 2) {
        const auto sided = opt.one_sided ? corrstats::Sidedness::one_sided : corrstats::Sidedness::two_sided;
        const auto t = corrstats::correlation_p(corrstats::EffectSize(*opt.r, *opt.n), sided);
        log_p = t.log_p;
        p = log_p.probability();
    } else if (one == 2) {
        const corrstats::OneSampleSummary summary{*opt.mean, opt.se, std::nullopt, std::nullopt};
        log_p = corrstats::one_sample_neglog10(summary);
        if (opt.one_sided) {
            log_p = numerics::normal_sf_log10(std::abs(*opt.mean) / summary.effective_se());
        }
        p = log_p.probability();
    } else {
        p = numerics::chisq_sf(*opt.x, *opt.df);
        log_p = p > 0.0 ? numerics::LogTail::from_probability(p) : numerics::LogTail::from_neg_log10(HUGE_VAL);
    }

    if (opt.log10) {
        out << fmt::format("{:.{}f}\n", log_p.neg_log10_p(), opt.digits);
    } else {
        out << format_p(p, opt.digits) << "\n";
    }
    return kOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
    int k = 100;
    std::string n_list = "50";
    std::string n_range;
    double rho = 0.0;
    int cluster = 1;
    std::uint64_t seed = 0;
    std::string out_path;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    simulate::SimSpec spec;
    spec.k = opt.k;
    spec.rho = opt.rho;
    spec.cluster_size = opt.cluster;
    spec.seed = opt.seed;
    if (!opt.n_range.empty()) {
        const auto colon = opt.n_range.find(':');
        if (colon == std::string::npos) {
            throw UsageError("--n-range expects lo:hi");
        }
        try {
            spec.sample_sizes = simulate::SampleSizeRange{std::stoi(opt.n_range.substr(0, colon)),
                                                          std::stoi(opt.n_range.substr(colon + 1))};
        } catch (const std::logic_error&) {
            throw UsageError("--n-range expects integers lo:hi");
        }
    } else {
        std::vector<int> sizes;
        for (double v : split_reals(opt.n_list)) {
            if (v != std::floor(v)) {
                throw UsageError("--n values must be integers");
            }
            sizes.push_back(static_cast<int>(v));
        }
        spec.sample_sizes = sizes;
    }

    const std::string csv = dataset::serialize_correlation_csv(simulate::generate(spec));
    if (opt.out_path.empty() || opt.out_path == "-") {
        out << csv;
    } else {
        write_text(opt.out_path, csv);
        out << fmt::format("wrote {} ({} records, seed {})\n", opt.out_path, spec.k, spec.seed);
    }
    return kOk;
}

// --- reproduce -------------------------------------------------------------

int cmd_reproduce(const std::string& id, const std::string& data_dir, const std::string& out_dir,
                  const Environment& env, std::ostream& out) {
    std::optional<fs::path> data;
    if (!data_dir.empty()) {
        data = data_dir;
    } else if (env.supplemental_dir) {
        data = *env.supplemental_dir;
    }
    std::optional<fs::path> dest;
    if (!out_dir.empty()) {
        dest = out_dir;
    } else if (env.out_dir) {
        dest = *env.out_dir;
    }
    const auto result = reproduce::run(id, data, dest);
    out << reproduce::format(result);
    if (result.incomplete) {
        return kFixtureIncomplete;
    }
    return result.has_mismatch() ? kValidationFailure : kOk;
}

// --- adjust / combine ------------------------------------------------------

std::vector<dataset::LabeledPValue> gather_pvalues(const std::string& file, const std::string& list) {
    if (!file.empty() && !list.empty()) {
        throw UsageError("give either a p-value file or --p, not both");
    }
    if (!file.empty()) {
        return dataset::parse_pvalue_csv(dataset::read_text_file(file));
    }
    if (list.empty()) {
        throw UsageError("no p-values: give a CSV file with a p column or --p v1,v2,...");
    }
    std::vector<dataset::LabeledPValue> out;
    for (double p : split_reals(list)) {
        out.push_back({std::to_string(out.size() + 1), p});
    }
    return out;
}

int cmd_adjust(const std::string& file, const std::string& list, std::optional<std::size_t> family,
               std::ostream& out) {
    const auto values = gather_pvalues(file, list);
    std::vector<double> ps;
    for (const auto& v : values) {
        ps.push_back(v.p);
    }
    const auto adj = multiplicity::bh_adjust(ps, family);
    out << fmt::format("# Benjamini-Hochberg, family m = {}\n", adj.m);
    out << "rank,index,label,p,p_adjusted\n";
    for (const auto& e : adj.by_rank()) {
        out << fmt::format("{},{},{},{:.6f},{:.6f}\n", e.rank, e.original_index + 1,
                           csv::escape(values[e.original_index].label), e.unadjusted, e.adjusted);
    }
    return kOk;
}

int cmd_combine(const std::string& file, const std::string& list, std::ostream& out) {
    const auto values = gather_pvalues(file, list);
    std::vector<double> ps;
    for (const auto& v : values) {
        ps.push_back(v.p);
    }
    const auto result = multiplicity::fisher_combine(ps);
    out << fmt::format("chi_square {:.6f}\ndf {}\np {}\n", result.chi_square, result.df, format_p(result.p, 6));
    out << "warning: " << result.independence_warning << "\n";
    return kOk;
}

} // namespace

Environment Environment::from_process() {
    Environment env;
    if (const char* v = std::getenv("PVAUDIT_OUT"); v && *v) {
        env.out_dir = v;
    }
    if (const char* v = std::getenv("PVAUDIT_SUPPLEMENTAL_DIR"); v && *v) {
        env.supplemental_dir = v;
    }
    return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    CLI::App app{"pvaudit: p-value plot auditing of correlation meta-analyses"};
    app.name(args.empty() ? "pvaudit" : fs::path(args.front()).filename().string());
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 validation failure or reproduction mismatch, 2 usage error, "
               "3 fixture incomplete.");

    std::function<int()> action;

    AuditOptions audit;
    auto* audit_cmd = app.add_subcommand("audit", "Full audit of a correlations.csv file");
    audit_cmd->add_option("input", audit.input, "correlations.csv (study,criterion,instrument,category,r,n)")
        ->required();
    audit_cmd->add_option("--out", audit.out_dir, "Output directory (default $PVAUDIT_OUT or ./pvaudit_out)");
    audit_cmd->add_option("--alpha", audit.alpha, "Threshold for counting small p-values")->capture_default_str();
    audit_cmd->add_option("--family", audit.family, "BH family size m (default: number of records)");
    audit_cmd->add_option("--top", audit.top, "Number of smallest p-values to adjust")->capture_default_str();
    audit_cmd->add_option("--delimiter", audit.delimiter, "Console table delimiter")
        ->check(CLI::IsMember({"comma", "tab"}))
        ->capture_default_str();
    audit_cmd->add_flag("--one-sided", audit.one_sided, "Use one-sided p-values (default two-sided)");
    audit_cmd->add_option("--title", audit.title, "Plot title");
    audit_cmd->callback([&] { action = [&] { return cmd_audit(audit, env, out); }; });

    TailOptions tail;
    auto* tail_cmd = app.add_subcommand("tail", "Single tail probability");
    tail_cmd->add_option("--r", tail.r, "Correlation coefficient");
    tail_cmd->add_option("--n", tail.n, "Sample size");
    tail_cmd->add_option("--mean", tail.mean, "One-sample mean");
    tail_cmd->add_option("--se", tail.se, "Standard error of the mean");
    tail_cmd->add_option("--x", tail.x, "Chi-square statistic");
    tail_cmd->add_option("--df", tail.df, "Chi-square degrees of freedom");
    tail_cmd->add_flag("--log10", tail.log10, "Print -log10 p");
    tail_cmd->add_flag("--one-sided", tail.one_sided, "One-sided normal tail");
    tail_cmd->add_option("--digits", tail.digits, "Decimals to print")->capture_default_str();
    tail_cmd->callback([&] { action = [&] { return cmd_tail(tail, out); }; });

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Synthetic correlations.csv for calibration");
    sim_cmd->add_option("--k", sim.k, "Number of studies")->capture_default_str();
    sim_cmd->add_option("--n", sim.n_list, "Sample sizes, comma separated, cycled by study")->capture_default_str();
    sim_cmd->add_option("--n-range", sim.n_range, "Sample sizes drawn uniformly from lo:hi");
    sim_cmd->add_option("--rho", sim.rho, "True correlation")->capture_default_str();
    sim_cmd->add_option("--cluster", sim.cluster, "Studies per cluster sharing a latent draw")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
    sim_cmd->add_option("--out", sim.out_path, "Output CSV path (default stdout)");
    sim_cmd->callback([&] { action = [&] { return cmd_simulate(sim, out); }; });

    std::string repro_id;
    std::string repro_data;
    std::string repro_out;
    auto* repro_cmd = app.add_subcommand("reproduce", "Regenerate a printed table or figure and diff it");
    repro_cmd->add_option("target", repro_id, "table1..table5 or fig1..fig4")->required();
    repro_cmd->add_option("--data-dir", repro_data,
                          "Directory with fig1.csv..fig4.csv (default $PVAUDIT_SUPPLEMENTAL_DIR)");
    repro_cmd->add_option("--out", repro_out, "Write regenerated artifacts here (default $PVAUDIT_OUT)");
    repro_cmd->callback([&] { action = [&] { return cmd_reproduce(repro_id, repro_data, repro_out, env, out); }; });

    std::string adjust_file;
    std::string adjust_list;
    std::optional<std::size_t> adjust_family;
    auto* adjust_cmd = app.add_subcommand("adjust", "Benjamini-Hochberg adjusted p-values");
    adjust_cmd->add_option("file", adjust_file, "CSV with a p column (optional label column)");
    adjust_cmd->add_option("--p", adjust_list, "Comma-separated p-values");
    adjust_cmd->add_option("--family", adjust_family, "Family size m >= number of p-values");
    adjust_cmd->callback([&] { action = [&] { return cmd_adjust(adjust_file, adjust_list, adjust_family, out); }; });

    std::string combine_file;
    std::string combine_list;
    auto* combine_cmd = app.add_subcommand("combine", "Fisher's combined probability test");
    combine_cmd->add_option("file", combine_file, "CSV with a p column");
    combine_cmd->add_option("--p", combine_list, "Comma-separated p-values");
    combine_cmd->callback([&] { action = [&] { return cmd_combine(combine_file, combine_list, out); }; });

    std::vector<const char*> argv;
    argv.push_back(args.empty() ? "pvaudit" : args.front().c_str());
    for (std::size_t i = 1; i < args.size(); ++i) {
        argv.push_back(args[i].c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    try {
        return action ? action() : kUsageError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
}

} // namespace pvaudit::cli
