// uwr: chronological segmentation of count time series by correspondence
// analysis, sequence-constrained clustering, and dendrogram Haar wavelet
// regression of external signals. Every subcommand is a deterministic
// file-in/file-out stage; `pipeline` chains them all.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uwr/cluster.hpp"
#include "uwr/correspondence.hpp"
#include "uwr/haar.hpp"
#include "uwr/ingest.hpp"
#include "uwr/regress.hpp"
#include "uwr/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// All artifacts are buffered and written together once the run has fully
// succeeded, so a failing stage leaves no partial output behind.
class OutputBundle {
public:
    void add(std::string name, std::string content) {
        names_.push_back(name);
        files_.emplace_back(std::move(name), std::move(content));
    }

    const std::vector<std::string>& names() const { return names_; }

    void flush(const fs::path& dir) const {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw uwr::data_error("cannot create output directory '" + dir.string() + "'");
        std::vector<fs::path> written;
        for (const auto& [name, content] : files_) {
            const fs::path path = dir / name;
            std::ofstream out(path, std::ios::binary);
            if (!out || !(out << content) || !out.flush()) {
                for (const auto& p : written) fs::remove(p, ec);
                fs::remove(path, ec);
                throw uwr::data_error("cannot write '" + path.string() + "'");
            }
            written.push_back(path);
        }
    }

private:
    std::vector<std::string> names_;
    std::vector<std::pair<std::string, std::string>> files_;
};

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
    const std::string msg = "[" + stage + "] " + e.what();
    if (dynamic_cast<const uwr::validation_error*>(&e)) throw uwr::validation_error(msg);
    if (dynamic_cast<const uwr::numeric_error*>(&e)) throw uwr::numeric_error(msg);
    throw uwr::data_error(msg);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw uwr::data_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json conventions_json() {
    ordered_json c;
    c["mse"] = "mean of squared residuals over all positions";
    c["detail_sign"] = "left child = parent + detail";
    c["constrained_tie_break"] = "leftmost adjacent pair";
    c["median_tie_break"] = "smallest cluster index pair, smaller index left";
    c["median_heights"] = "squared Euclidean merge distances";
    c["factor_sign"] = "largest-magnitude row coordinate positive";
    c["factor_cutoff"] = 1e-12;
    c["threshold_tie_break"] = "later merge wins equal magnitudes";
    return c;
}

struct Options {
    std::string events_path;
    std::string table_path;
    std::string granularity = "month";
    std::string from;
    std::string to;
    int dims = 2;
    std::string linkage = "constrained-complete";
    std::vector<std::string> signal_paths;
    std::string policy = "magnitude";
    std::vector<int> keeps;
    bool sweep = false;
    std::string out_dir;

    std::string factors_path;  // cluster
    std::string tree_path;     // haar / regress / sweep
    std::string data_path;     // haar
};

struct RunState {
    OutputBundle bundle;
    ordered_json manifest;
    std::vector<std::string> warnings;

    void warn(const std::string& message) {
        warnings.push_back(message);
        std::cerr << "warning: " << message << '\n';
    }

    void finish(const Options& opt, const std::string& subcommand) {
        ordered_json m;
        m["tool"] = "uwr";
        m["version"] = kVersion;
        m["subcommand"] = subcommand;
        m["parameters"] = manifest.contains("parameters") ? manifest["parameters"]
                                                          : ordered_json::object();
        m["conventions"] = conventions_json();
        for (const auto& key : {"dropped_rows", "dropped_cols", "transition_max_deviation"})
            if (manifest.contains(key)) m[key] = manifest[key];
        m["warnings"] = warnings;
        ordered_json outputs = ordered_json::array();
        for (const auto& name : bundle.names()) outputs.push_back(name);
        outputs.push_back("manifest.json");
        m["outputs"] = std::move(outputs);
        bundle.add("manifest.json", dump_json(m));
        bundle.flush(opt.out_dir);
    }
};

std::string signal_stem(const std::string& path) {
    return fs::path(path).stem().string();
}

uwr::Granularity parse_granularity(const std::string& g) {
    if (g == "month") return uwr::Granularity::month;
    if (g == "year") return uwr::Granularity::year;
    throw uwr::validation_error("granularity must be 'month' or 'year'");
}

// ---------------------------------------------------------------------------
// Stages. Each returns its product and records artifacts on the RunState.

uwr::ContingencyTable stage_ingest(const Options& opt, RunState& run) {
    try {
        uwr::ContingencyTable table;
        if (!opt.events_path.empty()) {
            std::istringstream in(slurp(opt.events_path));
            const uwr::EventList events = uwr::parse_events(in);
            table = uwr::aggregate(events, parse_granularity(opt.granularity), opt.from, opt.to);
        } else {
            std::istringstream in(slurp(opt.table_path));
            table = uwr::load_table(in);
        }
        if (!table.dropped_rows.empty())
            run.warn("dropped " + std::to_string(table.dropped_rows.size()) + " zero row(s)");
        if (!table.dropped_cols.empty())
            run.warn("dropped " + std::to_string(table.dropped_cols.size()) + " zero column(s)");
        run.manifest["dropped_rows"] = table.dropped_rows;
        run.manifest["dropped_cols"] = table.dropped_cols;

        std::ostringstream csv;
        uwr::write_table_csv(csv, table);
        run.bundle.add("table.csv", csv.str());
        return table;
    } catch (const std::exception& e) {
        stage_fail("ingest", e);
    }
}

uwr::FactorDecomposition stage_ca(const uwr::ContingencyTable& table, RunState& run) {
    try {
        const uwr::FrequencyModel model = uwr::frequency_model(table);
        const uwr::FactorDecomposition dec = uwr::factor_decomposition(model);
        const uwr::TransitionReport report = uwr::transition_consistency(dec, model);
        run.manifest["transition_max_deviation"] = report.max_deviation;
        if (!report.within(1e-9))
            run.warn("transition formulas deviate by " +
                     uwr::format_double(report.max_deviation));
        run.bundle.add("factors.json", dump_json(uwr::factors_to_json(dec)));
        return dec;
    } catch (const std::exception& e) {
        stage_fail("ca", e);
    }
}

// Leading factor coordinates used as clustering input.
uwr::Matrix truncate_coords(const uwr::Matrix& coords, int dims, RunState& run) {
    if (coords.cols() == 0) throw uwr::data_error("no factors retained; nothing to cluster");
    std::size_t width = static_cast<std::size_t>(dims);
    if (width > coords.cols()) {
        run.warn("only " + std::to_string(coords.cols()) + " factor(s) retained; using those");
        width = coords.cols();
    }
    uwr::Matrix trimmed(coords.rows(), width);
    for (std::size_t i = 0; i < coords.rows(); ++i)
        for (std::size_t a = 0; a < width; ++a) trimmed(i, a) = coords(i, a);
    return trimmed;
}

uwr::Dendrogram stage_cluster(const uwr::Matrix& coords, std::vector<std::string> labels,
                              const Options& opt, RunState& run) {
    try {
        uwr::Dendrogram tree;
        if (opt.linkage == "constrained-complete")
            tree = uwr::constrained_complete_link(coords, std::move(labels));
        else if (opt.linkage == "median")
            tree = uwr::median_linkage(coords, std::move(labels));
        else
            throw uwr::validation_error(
                "linkage must be 'constrained-complete' or 'median'");
        run.bundle.add("dendrogram.json", dump_json(uwr::dendrogram_to_json(tree)));
        run.bundle.add("dendrogram.newick", uwr::to_newick(tree) + "\n");
        return tree;
    } catch (const std::exception& e) {
        stage_fail("cluster", e);
    }
}

void stage_haar(const uwr::Dendrogram& tree, const uwr::Matrix& data,
                const std::vector<std::string>& dim_names, RunState& run) {
    try {
        const uwr::HaarDecomposition dec = uwr::forward(tree, data);
        std::ostringstream csv;
        uwr::write_decomposition_csv(csv, dec, dim_names);
        run.bundle.add("decomposition.csv", csv.str());
    } catch (const std::exception& e) {
        stage_fail("haar", e);
    }
}

void stage_regress(const uwr::Dendrogram& tree, const Options& opt, RunState& run) {
    try {
        const uwr::ThresholdPolicy policy = uwr::parse_policy(opt.policy);
        std::vector<std::string> stems;
        for (const auto& path : opt.signal_paths) {
            const std::string stem = signal_stem(path);
            if (std::find(stems.begin(), stems.end(), stem) != stems.end())
                throw uwr::validation_error("duplicate signal name '" + stem + "'");
            stems.push_back(stem);

            uwr::ExternalSignal signal;
            try {
                std::istringstream in(slurp(path));
                signal = uwr::load_signal(in);

                if (opt.sweep) {
                    const auto entries = uwr::mse_sweep(tree, signal, policy);
                    std::ostringstream sweep_csv, fits_csv, breaks;
                    uwr::write_sweep_csv(sweep_csv, entries);
                    uwr::write_sweep_fits_csv(fits_csv, signal, entries);
                    for (const auto& entry : entries)
                        breaks << "keep " << entry.keep << ": "
                               << uwr::format_segment_table(entry.fit) << '\n';
                    run.bundle.add("sweep_" + stem + ".csv", sweep_csv.str());
                    run.bundle.add("sweep_fits_" + stem + ".csv", fits_csv.str());
                    run.bundle.add("breakpoints_" + stem + ".txt", breaks.str());
                } else {
                    for (int keep : opt.keeps) {
                        const uwr::PiecewiseFit fit =
                            uwr::fold_and_regress(tree, signal, keep, policy);
                        std::ostringstream fit_csv;
                        uwr::write_fit_csv(fit_csv, signal, fit);
                        const std::string suffix = stem + "_k" + std::to_string(keep);
                        run.bundle.add("fit_" + suffix + ".csv", fit_csv.str());
                        run.bundle.add("breakpoints_" + suffix + ".txt",
                                       uwr::format_segment_table(fit) + "\n");
                    }
                }
            } catch (const uwr::validation_error& e) {
                throw uwr::validation_error("signal '" + path + "': " + e.what());
            } catch (const uwr::data_error& e) {
                throw uwr::data_error("signal '" + path + "': " + e.what());
            }
        }
    } catch (const std::exception& e) {
        stage_fail("regress", e);
    }
}

// ---------------------------------------------------------------------------
// Subcommand drivers.

void echo_range_params(const Options& opt, ordered_json& params) {
    params["granularity"] = opt.granularity;
    params["from"] = opt.from;
    params["to"] = opt.to;
}

void run_ingest(const Options& opt) {
    RunState run;
    ordered_json params;
    params["events"] = opt.events_path;
    echo_range_params(opt, params);
    run.manifest["parameters"] = params;
    stage_ingest(opt, run);
    run.finish(opt, "ingest");
}

void run_ca(const Options& opt) {
    RunState run;
    ordered_json params;
    params["table"] = opt.table_path;
    run.manifest["parameters"] = params;
    const uwr::ContingencyTable table = [&] {
        try {
            std::istringstream in(slurp(opt.table_path));
            return uwr::load_table(in);
        } catch (const std::exception& e) {
            stage_fail("ingest", e);
        }
    }();
    stage_ca(table, run);
    run.finish(opt, "ca");
}

void run_cluster(const Options& opt) {
    RunState run;
    ordered_json params;
    params["factors"] = opt.factors_path;
    params["dims"] = opt.dims;
    params["linkage"] = opt.linkage;
    run.manifest["parameters"] = params;
    const uwr::FactorTable factors = [&] {
        try {
            std::istringstream in(slurp(opt.factors_path));
            return uwr::parse_factors_json(in);
        } catch (const std::exception& e) {
            stage_fail("cluster", e);
        }
    }();
    const uwr::Matrix coords = truncate_coords(factors.coords, opt.dims, run);
    stage_cluster(coords, factors.labels, opt, run);
    run.finish(opt, "cluster");
}

void run_haar(const Options& opt) {
    RunState run;
    ordered_json params;
    params["tree"] = opt.tree_path;
    params["data"] = opt.data_path;
    run.manifest["parameters"] = params;
    const auto [tree, data] = [&] {
        try {
            std::istringstream tree_in(slurp(opt.tree_path));
            uwr::Dendrogram t = uwr::dendrogram_from_json(tree_in);
            std::istringstream data_in(slurp(opt.data_path));
            uwr::LabeledMatrix d = uwr::load_labeled_csv(data_in);
            if (d.labels != t.leaf_labels)
                throw uwr::validation_error("data labels do not match tree leaves");
            return std::make_pair(std::move(t), std::move(d));
        } catch (const std::exception& e) {
            stage_fail("haar", e);
        }
    }();
    stage_haar(tree, data.values, data.col_names, run);
    run.finish(opt, "haar");
}

void run_regress(const Options& opt, bool sweep) {
    RunState run;
    ordered_json params;
    params["tree"] = opt.tree_path;
    params["signals"] = opt.signal_paths;
    params["policy"] = opt.policy;
    if (sweep)
        params["sweep"] = true;
    else
        params["keep"] = opt.keeps;
    run.manifest["parameters"] = params;
    const uwr::Dendrogram tree = [&] {
        try {
            std::istringstream in(slurp(opt.tree_path));
            return uwr::dendrogram_from_json(in);
        } catch (const std::exception& e) {
            stage_fail("regress", e);
        }
    }();
    stage_regress(tree, opt, run);
    run.finish(opt, sweep ? "sweep" : "regress");
}

void run_pipeline(const Options& opt) {
    const bool has_events = !opt.events_path.empty();
    const bool has_table = !opt.table_path.empty();
    if (has_events == has_table)
        throw uwr::validation_error("supply exactly one of --events or --table");
    if (has_events && (opt.from.empty() || opt.to.empty()))
        throw uwr::validation_error("--events requires --from and --to");
    if (!opt.signal_paths.empty() && !opt.sweep && opt.keeps.empty())
        throw uwr::validation_error("signals need --keep or --sweep");
    if (opt.sweep && !opt.keeps.empty())
        throw uwr::validation_error("--keep and --sweep are mutually exclusive");

    RunState run;
    ordered_json params;
    if (has_events) {
        params["events"] = opt.events_path;
        echo_range_params(opt, params);
    } else {
        params["table"] = opt.table_path;
    }
    params["dims"] = opt.dims;
    params["linkage"] = opt.linkage;
    if (!opt.signal_paths.empty()) {
        params["signals"] = opt.signal_paths;
        params["policy"] = opt.policy;
        if (opt.sweep)
            params["sweep"] = true;
        else
            params["keep"] = opt.keeps;
    }
    run.manifest["parameters"] = params;

    const uwr::ContingencyTable table = stage_ingest(opt, run);
    const uwr::FactorDecomposition dec = stage_ca(table, run);
    const uwr::Matrix coords = truncate_coords(dec.row_factors, opt.dims, run);
    const uwr::Dendrogram tree = stage_cluster(coords, dec.row_labels, opt, run);

    std::vector<std::string> dim_names;
    for (std::size_t a = 0; a < coords.cols(); ++a)
        dim_names.push_back("f" + std::to_string(a + 1));
    stage_haar(tree, coords, dim_names, run);

    stage_regress(tree, opt, run);
    run.finish(opt, "pipeline");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chronological segmentation and dendrogram wavelet regression"};
    app.set_version_flag("--version", std::string("uwr ") + kVersion);
    app.require_subcommand(1);

    Options opt;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_dir, "output directory")->required();
    };

    CLI::App* ingest = app.add_subcommand("ingest", "aggregate events into a table");
    ingest->add_option("--events", opt.events_path, "event CSV")->required();
    ingest->add_option("--granularity", opt.granularity, "month|year");
    ingest->add_option("--from", opt.from, "first bin label")->required();
    ingest->add_option("--to", opt.to, "last bin label")->required();
    add_out(ingest);

    CLI::App* ca = app.add_subcommand("ca", "correspondence analysis of a table");
    ca->add_option("--table", opt.table_path, "table CSV")->required();
    add_out(ca);

    CLI::App* cluster = app.add_subcommand("cluster", "build the dendrogram");
    cluster->add_option("--factors", opt.factors_path, "factors JSON")->required();
    cluster->add_option("--dims", opt.dims, "leading factors to use")
        ->check(CLI::PositiveNumber);
    cluster->add_option("--linkage", opt.linkage, "constrained-complete|median");
    add_out(cluster);

    CLI::App* haar = app.add_subcommand("haar", "Haar decomposition of leaf data");
    haar->add_option("--tree", opt.tree_path, "dendrogram JSON")->required();
    haar->add_option("--data", opt.data_path, "labeled data CSV")->required();
    add_out(haar);

    CLI::App* regress = app.add_subcommand("regress", "threshold regression of signals");
    regress->add_option("--tree", opt.tree_path, "dendrogram JSON")->required();
    regress->add_option("--signal", opt.signal_paths, "signal CSV (repeatable)")->required();
    regress->add_option("--keep", opt.keeps, "details to retain (repeatable)")->required();
    regress->add_option("--policy", opt.policy, "magnitude|subtree-closed");
    add_out(regress);

    CLI::App* sweep = app.add_subcommand("sweep", "MSE sweep over all keep values");
    sweep->add_option("--tree", opt.tree_path, "dendrogram JSON")->required();
    sweep->add_option("--signal", opt.signal_paths, "signal CSV (repeatable)")->required();
    sweep->add_option("--policy", opt.policy, "magnitude|subtree-closed");
    add_out(sweep);

    CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage");
    pipeline->add_option("--events", opt.events_path, "event CSV");
    pipeline->add_option("--table", opt.table_path, "table CSV");
    pipeline->add_option("--granularity", opt.granularity, "month|year");
    pipeline->add_option("--from", opt.from, "first bin label");
    pipeline->add_option("--to", opt.to, "last bin label");
    pipeline->add_option("--dims", opt.dims, "leading factors to use")
        ->check(CLI::PositiveNumber);
    pipeline->add_option("--linkage", opt.linkage, "constrained-complete|median");
    pipeline->add_option("--signal", opt.signal_paths, "signal CSV (repeatable)");
    pipeline->add_option("--policy", opt.policy, "magnitude|subtree-closed");
    pipeline->add_option("--keep", opt.keeps, "details to retain (repeatable)");
    pipeline->add_flag("--sweep", opt.sweep, "evaluate every keep value");
    add_out(pipeline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ingest->parsed()) run_ingest(opt);
        if (ca->parsed()) run_ca(opt);
        if (cluster->parsed()) run_cluster(opt);
        if (haar->parsed()) run_haar(opt);
        if (regress->parsed()) run_regress(opt, false);
        if (sweep->parsed()) {
            opt.sweep = true;
            run_regress(opt, true);
        }
        if (pipeline->parsed()) run_pipeline(opt);
    } catch (const uwr::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const uwr::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
