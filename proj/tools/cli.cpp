#include "cli.hpp"

#include "metro/dataset.hpp"
#include "metro/errors.hpp"
#include "metro/experiment.hpp"
#include "metro/json_io.hpp"
#include "metro/oracle.hpp"

#include <CLI11.hpp>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace metro::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << text;
    if (!f) throw InputError("failed writing " + path.string());
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Shared training flags
// ---------------------------------------------------------------------------

struct TrainFlags {
    std::string metric = "f_beta:1";
    std::string phi = "logistic";
    std::string arch = "linear";
    std::uint64_t seed = 0;
    double lr = 0.1;
    int epochs = 500;
    int batch = 64;
    double weight_decay = 1e-4;
    double momentum = 0.9;
    bool no_standardize = false;
    std::optional<double> epsilon;
    std::optional<double> epsilon_m;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    double split = 0.2;
    bool select_on_train = false;
    bool warm_start = false;
    int resolution = 19;

    void add(CLI::App* app) {
        app->add_option("--metric", metric, "Preset (f_beta:<b>, jaccard, am[:p], accuracy, "
                                            "weighted_accuracy:w_tp,w_tn,w_fp,w_fn) or JSON {alpha, beta}")
            ->capture_default_str();
        app->add_option("--phi", phi, "exp | logistic | quadratic | hinge | sigmoid[:k] | rho[:r]")
            ->capture_default_str();
        app->add_option("--arch", arch, "linear | mlp:h1[,h2]")->capture_default_str();
        app->add_option("--seed", seed, "Training and split seed")->capture_default_str();
        app->add_option("--lr", lr)->capture_default_str();
        app->add_option("--epochs", epochs)->capture_default_str();
        app->add_option("--batch", batch)->capture_default_str();
        app->add_option("--weight-decay", weight_decay)->capture_default_str();
        app->add_option("--momentum", momentum)->capture_default_str();
        app->add_flag("--no-standardize", no_standardize);
        app->add_option("--epsilon", epsilon, "Bisection tolerance / grid step (0.01 / 0.05)");
        app->add_option("--epsilon-m", epsilon_m, "Band half-width (sqrt(ln m / m))");
        app->add_option("--lambda-min", lambda_min);
        app->add_option("--lambda-max", lambda_max);
        app->add_option("--split", split, "Held-out share for lambda selection")->capture_default_str();
        app->add_flag("--select-on-train", select_on_train, "Fit and select on the whole training set");
        app->add_flag("--warm-start", warm_start, "Grid scan: start each fit from the previous one");
        app->add_option("--resolution", resolution, "Theta grid size of the weighted baselines")
            ->capture_default_str();
    }

    MethodConfig config(const std::string& method) const {
        MethodConfig c;
        c.method = method;
        c.kind = PhiKind::parse(phi);
        c.arch = arch;
        c.train.learning_rate = lr;
        c.train.epochs = epochs;
        c.train.batch_size = batch;
        c.train.weight_decay = weight_decay;
        c.train.momentum = momentum;
        c.train.seed = seed;
        c.train.standardize = !no_standardize;
        c.search.epsilon = epsilon.value_or(method == "metro_bisect" ? 0.01 : 0.05);
        c.search.epsilon_m = epsilon_m;
        c.search.lambda_min = lambda_min;
        c.search.lambda_max = lambda_max;
        c.search.split_fraction = split;
        c.search.seed = seed;
        c.search.select_on_train = select_on_train;
        c.search.warm_start = warm_start;
        c.resolution = resolution;
        return c;
    }

    MetricSpec spec(const Dataset& train) const {
        MetricSpec s = parse_metric_arg(metric, train.positive_rate());
        return normalize_denominator(s, train.labels);
    }
};

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

void save_dataset(const Dataset& d, const fs::path& out, std::ostream& os) {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_csv(d, out);
    write_metadata(d, metadata_path(out));
    os << "wrote " << out.string() << " (" << d.rows << " rows, " << d.positives()
       << " positive) and " << metadata_path(out).string() << '\n';
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct Cell {
    std::optional<double> value;
    std::string error;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

int default_jobs() {
    if (const char* env = std::getenv("METRO_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

const std::vector<std::string> kTheorems = {"zero_crossing", "excess_equivalence", "sign",
                                            "perturbation", "consistency"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Metric-aware training via lambda search and verification tools", "metro"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    gen->require_subcommand(1);
    auto* g2 = gen->add_subcommand("two-gaussians", "Imbalanced class-conditional Gaussians");
    std::size_t g_m = 2000, g_d = 2;
    double g_rate = 0.1, g_sep = 2.0, g_scale = 1.0;
    std::uint64_t g_seed = 0;
    std::string g_out;
    g2->add_option("--m", g_m)->capture_default_str();
    g2->add_option("--d", g_d)->capture_default_str();
    g2->add_option("--rate", g_rate)->capture_default_str();
    g2->add_option("--separation", g_sep)->capture_default_str();
    g2->add_option("--scale", g_scale)->capture_default_str();
    g2->add_option("--seed", g_seed)->capture_default_str();
    g2->add_option("--out", g_out, "Output CSV")->required();
    auto* gf = gen->add_subcommand("figure1", "2-D mixture with non-parallel optimal boundaries");
    std::size_t f_m = 3000;
    std::uint64_t f_seed = 0;
    int f_retries = 20;
    std::string f_out;
    gf->add_option("--m", f_m)->capture_default_str();
    gf->add_option("--seed", f_seed)->capture_default_str();
    gf->add_option("--max-retries", f_retries)->capture_default_str();
    gf->add_option("--out", f_out, "Output CSV")->required();

    // train
    auto* train = app.add_subcommand("train", "Train with the lambda search");
    TrainFlags tf;
    tf.add(train);
    std::string t_data, t_test, t_algo = "grid", t_out_dir = ".";
    std::string t_model, t_report, t_trace;
    train->add_option("--data", t_data, "Training CSV")->required();
    train->add_option("--test", t_test, "Optional test CSV");
    train->add_option("--algo", t_algo, "bisect | grid")
        ->check(CLI::IsMember({"bisect", "grid"}))
        ->capture_default_str();
    train->add_option("--out-dir", t_out_dir, "Directory for model.json, report.json, trace.jsonl")
        ->capture_default_str();
    train->add_option("--model-out", t_model);
    train->add_option("--report-out", t_report);
    train->add_option("--trace-out", t_trace);

    // compare
    auto* compare = app.add_subcommand("compare", "Compare methods over several seeds");
    TrainFlags cf;
    cf.add(compare);
    std::string c_data, c_methods = "erm,threshold_sweep,weighted_grid,metro_grid", c_json;
    int c_runs = 5, c_jobs = default_jobs();
    double c_test_fraction = 0.3;
    compare->add_option("--data", c_data, "CSV split into train/test per run")->required();
    compare->add_option("--methods", c_methods, "Comma-separated methods")->capture_default_str();
    compare->add_option("--runs", c_runs)->capture_default_str();
    compare->add_option("--jobs", c_jobs, "Parallel cells (default METRO_JOBS or 1)")->capture_default_str();
    compare->add_option("--test-fraction", c_test_fraction)->capture_default_str();
    compare->add_option("--json-out", c_json, "Write the table as JSON");

    // verify
    auto* verify = app.add_subcommand("verify", "Check the theorems on finite fixtures");
    bool v_builtin = false;
    std::string v_theorem = "all";
    std::size_t v_grid = 101, v_count = 60;
    std::uint64_t v_seed = 0;
    std::vector<std::string> v_files;
    std::string v_json;
    verify->add_flag("--builtin", v_builtin, "Use the seeded randomized fixture corpus");
    verify->add_option("--theorem", v_theorem,
                       "all | zero_crossing | excess_equivalence | sign | perturbation | consistency")
        ->capture_default_str();
    verify->add_option("--lambda-grid", v_grid, "Grid points for the sign table")->capture_default_str();
    verify->add_option("--fixtures", v_count, "Number of builtin fixtures per family")->capture_default_str();
    verify->add_option("--seed", v_seed)->capture_default_str();
    verify->add_option("--json-out", v_json);
    verify->add_option("files", v_files, "Fixture JSON files");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (g2->parsed()) {
            save_dataset(gen_two_gaussians(g_m, g_d, g_rate, g_sep, g_scale, g_seed), g_out, out);
            return kOk;
        }
        if (gf->parsed()) {
            Figure1Params p;
            p.max_retries = f_retries;
            save_dataset(gen_figure1_like(f_m, f_seed, p), f_out, out);
            return kOk;
        }

        if (train->parsed()) {
            const Dataset data = read_csv(t_data);
            data.validate();
            std::optional<Dataset> test;
            if (!t_test.empty()) test = read_csv(t_test);
            const MetricSpec spec = tf.spec(data);
            const std::string method = t_algo == "bisect" ? "metro_bisect" : "metro_grid";
            MethodConfig mc = tf.config(method);
            const fs::path dir(t_out_dir);
            const fs::path model_path = t_model.empty() ? dir / "model.json" : fs::path(t_model);
            const fs::path report_path = t_report.empty() ? dir / "report.json" : fs::path(t_report);
            const fs::path trace_path = t_trace.empty() ? dir / "trace.jsonl" : fs::path(t_trace);
            RunOutput run = run_method(mc, data, spec, test ? &*test : nullptr);
            run.report.trace_path = trace_path.string();
            write_text(model_path, to_json(run.classifier.model).dump(2) + "\n");
            write_text(report_path, to_json(run.report).dump(2) + "\n");
            write_text(trace_path, run.trace ? trace_to_jsonl(*run.trace) : std::string());
            out << method << " " << spec.name << ": lambda " << fmt(run.report.lambda.value_or(0.0))
                << ", train " << fmt(run.report.train.value);
            if (run.report.validation) out << ", validation " << fmt(run.report.validation->value);
            if (run.report.test) out << ", test " << fmt(run.report.test->value);
            out << "\nwrote " << model_path.string() << ", " << report_path.string() << ", "
                << trace_path.string() << '\n';
            return kOk;
        }

        if (compare->parsed()) {
            const auto methods = split_list(c_methods);
            if (methods.empty()) {
                err << "usage error: no methods given\n";
                return kUsage;
            }
            for (const auto& m : methods) {
                if (!is_method(m)) {
                    err << "usage error: unknown method '" << m << "'\n";
                    return kUsage;
                }
            }
            if (c_runs < 1 || c_jobs < 1) {
                err << "usage error: --runs and --jobs must be positive\n";
                return kUsage;
            }
            const Dataset data = read_csv(c_data);
            data.validate();
            PhiKind::parse(cf.phi);
            parse_metric_arg(cf.metric, data.positive_rate());

            const std::size_t nm = methods.size();
            const auto runs = static_cast<std::size_t>(c_runs);
            std::vector<Cell> cells(nm * runs);
            std::string metric_name;
            const auto total = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(c_jobs)
            for (std::ptrdiff_t k = 0; k < total; ++k) {
                const std::size_t mi = static_cast<std::size_t>(k) / runs;
                const std::size_t r = static_cast<std::size_t>(k) % runs;
                try {
                    const std::uint64_t seed = cf.seed + r;
                    auto [test_idx, train_idx] = stratified_split(data.labels, c_test_fraction, seed);
                    const Dataset tr = data.subset(train_idx);
                    const Dataset te = data.subset(test_idx);
                    const MetricSpec spec = cf.spec(tr);
                    MethodConfig mc = cf.config(methods[mi]);
                    mc.train.seed = seed;
                    mc.search.seed = seed;
                    const RunOutput o = run_method(mc, tr, spec, &te);
                    cells[static_cast<std::size_t>(k)].value = o.report.test->value;
                } catch (const std::exception& e) {
                    cells[static_cast<std::size_t>(k)].error = e.what();
                }
            }
            metric_name = cf.spec(data).name;

            Json table;
            table["metric"] = metric_name;
            table["runs"] = c_runs;
            table["methods"] = Json::array();
            out << std::left << std::setw(18) << "method" << std::setw(22) << ("test " + metric_name)
                << "ok/runs\n";
            for (std::size_t mi = 0; mi < nm; ++mi) {
                std::vector<double> vals;
                Json failures = Json::array();
                for (std::size_t r = 0; r < runs; ++r) {
                    const Cell& c = cells[mi * runs + r];
                    if (c.value) {
                        vals.push_back(*c.value);
                    } else {
                        failures.push_back({{"run", r}, {"error", c.error}});
                    }
                }
                Json row;
                row["method"] = methods[mi];
                row["values"] = vals;
                row["mean"] = vals.empty() ? Json(nullptr) : Json(mean_of(vals));
                row["std"] = vals.empty() ? Json(nullptr) : Json(std_of(vals));
                row["failures"] = failures;
                table["methods"].push_back(row);
                const std::string cell =
                    vals.empty() ? "failed" : fmt(mean_of(vals)) + " +- " + fmt(std_of(vals));
                out << std::left << std::setw(18) << methods[mi] << std::setw(22) << cell
                    << vals.size() << "/" << runs << '\n';
            }
            if (!c_json.empty()) write_text(c_json, table.dump(2) + "\n");
            return kOk;
        }

        if (verify->parsed()) {
            std::vector<std::string> theorems;
            if (v_theorem == "all") {
                theorems = kTheorems;
            } else if (std::find(kTheorems.begin(), kTheorems.end(), v_theorem) != kTheorems.end()) {
                theorems = {v_theorem};
            } else {
                err << "usage error: unknown theorem '" << v_theorem << "'\n";
                return kUsage;
            }
            if (!v_builtin && v_files.empty()) {
                err << "usage error: give --builtin or fixture files\n";
                return kUsage;
            }
            std::vector<Fixture> sign_fx, score_fx;
            if (v_builtin) {
                sign_fx = random_sign_fixtures(v_count, v_seed);
                score_fx = random_surrogate_fixtures(std::max<std::size_t>(v_count / 2, 1), v_seed,
                                                     kDefaultScoreGrid);
            }
            for (const auto& f : v_files) {
                Fixture fx = load_fixture(f);
                if (fx.hypotheses.has_scores() && fx.hypotheses.regular()) score_fx.push_back(fx);
                sign_fx.push_back(std::move(fx));
            }

            if (v_theorem == "sign") {
                out << "fixture lambda E* sign expected\n";
                for (const auto& f : sign_fx) {
                    double star = 0.0;
                    const auto rows = sign_table(f.spec, f.hypotheses, f.dist, v_grid, &star);
                    out << "# " << f.name << " lambda* = " << fmt(star, 6) << '\n';
                    for (const auto& r : rows) {
                        out << f.name << ' ' << fmt(r.lambda, 6) << ' ' << std::setprecision(6)
                            << r.best_ell << ' ' << r.sign << ' '
                            << (r.skipped ? std::string("skip") : std::to_string(r.expected)) << '\n';
                    }
                }
            }

            bool all_pass = true;
            Json reports = Json::array();
            for (const auto& th : theorems) {
                const auto& fx = th == "consistency" ? score_fx : sign_fx;
                const VerificationReport rep = verify_theorem(th, fx, v_seed);
                all_pass = all_pass && rep.pass;
                reports.push_back(to_json(rep));
                out << (rep.pass ? "PASS " : "FAIL ") << std::left << std::setw(20) << th
                    << " fixtures=" << rep.fixtures << " worst_slack=" << std::setprecision(6)
                    << rep.worst_slack << '\n';
                for (const auto& f : rep.failures) out << "  " << f << '\n';
            }
            if (!v_json.empty()) write_text(v_json, reports.dump(2) + "\n");
            return all_pass ? kOk : kVerifyFail;
        }
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

}  // namespace metro::cli
