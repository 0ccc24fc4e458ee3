#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "repclust/cluster_metrics.hpp"
#include "repclust/gcn.hpp"
#include "repclust/linear_probe.hpp"
#include "repclust/overlap.hpp"
#include "repclust/report.hpp"
#include "repclust/rld_graph.hpp"
#include "repclust/synthetic.hpp"
#include "repclust/tsne.hpp"

namespace repclust::cli {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const Dataset& require_labels(const Dataset& ds, const std::string& path) {
    if (!ds.labeled()) throw InvalidArgument(path + ": dataset has no labels");
    return ds;
}

json ch_to_json(const ChScore& ch) {
    return {{"value", finite_or_null(ch.value)},
            {"between", ch.between},
            {"within", ch.within},
            {"zero_within_dispersion", ch.zero_within_dispersion}};
}

// ---- metrics ---------------------------------------------------------------

struct MetricsOptions {
    std::string dataset;
    std::vector<double> temperatures{kDefaultTemperature};
    std::vector<std::size_t> ks{1, 10, 100};
    std::string distance = "euclidean";
};

void run_metrics(RunContext& ctx, const MetricsOptions& o) {
    const DistanceKind kind = parse_distance_kind(o.distance);
    for (double t : o.temperatures)
        if (!(t > 0.0)) throw InvalidArgument("--t must be positive, got " + format_double(t));
    for (std::size_t k : o.ks)
        if (k < 1) throw InvalidArgument("--k values must be at least 1");
    ctx.manifest.config = {{"dataset", o.dataset}, {"t", o.temperatures}, {"k", o.ks}, {"distance", o.distance}};

    const Dataset ds = ctx.read_dataset(o.dataset);
    require_labels(ds, o.dataset);
    const std::size_t n = ds.features.rows();

    json out = report_header("metrics");
    out["dataset"] = ds.name;
    out["n"] = n;
    out["d"] = ds.features.cols();
    out["C"] = ds.labels.num_classes();
    out["distance"] = to_string(kind);

    const SimilarityMatrix s = similarity_matrix(ds.features, kind);
    json rlds = json::array();
    for (double t : o.temperatures) rlds.push_back({{"t", t}, {"value", modularity(adjacency_matrix(s, t), ds.labels)}});
    out["rld"] = rlds;

    out["ch_score"] = ch_to_json(ch_score(ds.features, ds.labels));

    json chis = json::array(), capped = json::array();
    for (std::size_t k : o.ks) {
        const std::size_t used = std::min(k, n - 1);
        if (used != k) {
            const std::string notice = "k=" + std::to_string(k) + " capped at n-1=" + std::to_string(used);
            std::cerr << "notice: " << notice << "\n";
            capped.push_back({{"requested_k", k}, {"k", used}, {"notice", notice}});
        }
        chis.push_back({{"requested_k", k}, {"k", used}, {"value", chi(ds.features, ds.labels, used).value}});
    }
    out["chi"] = chis;
    out["capped"] = capped;

    // Graph modularity under the cosine geometry used by the neighbor index.
    const double t0 = o.temperatures.front();
    out["modularity"] = {{"t", t0},
                         {"distance", to_string(DistanceKind::cosine_distance)},
                         {"value", rld(ds.features, ds.labels, t0, DistanceKind::cosine_distance)}};
    ctx.write_json("metrics.json", out);
}

// ---- synth -----------------------------------------------------------------

struct SynthOptions {
    std::string kind = "local_blobs";
    std::size_t n = 400;
    std::size_t classes = 4;
    std::uint64_t seed = 0;
    std::vector<std::string> params;
    bool suite = false;
    double t = kDefaultTemperature;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InvalidArgument("--param expects name=value, got '" + item + "'");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item.substr(eq + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || eq + 1 + used != item.size()) throw InvalidArgument("--param value is not a number: '" + item + "'");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

void run_synth(RunContext& ctx, const SynthOptions& o) {
    if (!(o.t > 0.0)) throw InvalidArgument("--t must be positive");
    ctx.manifest.seed = o.seed;
    const std::string ext = ctx.dataset_extension();
    const FileFormat fmt = ctx.format.value_or(FileFormat::binary);

    if (o.suite) {
        ctx.manifest.config = {{"suite", true}, {"n", o.n}, {"classes", o.classes}, {"seed", o.seed}, {"t", o.t}};
        json out = report_header("synth");
        out["suite"] = true;
        out["seed"] = o.seed;
        out["t"] = o.t;
        json entries = json::array();
        for (const SuiteEntry& e : figure2_suite(o.seed, o.n, o.classes, o.t)) {
            const std::string file = e.name + ext;
            save_dataset(e.data, ctx.output_path(file).string(), fmt);
            ctx.record_output(file);
            entries.push_back({{"name", e.name},
                               {"kind", to_string(e.config.kind)},
                               {"file", file},
                               {"n", e.config.n},
                               {"classes", e.config.classes},
                               {"rld", e.rld},
                               {"ch_score", ch_to_json(e.ch)}});
        }
        out["entries"] = entries;
        ctx.write_json("synth.json", out);
        return;
    }

    SynthConfig cfg;
    cfg.kind = parse_synth_kind(o.kind);
    cfg.n = o.n;
    cfg.classes = o.classes;
    cfg.seed = o.seed;
    cfg.params = parse_params(o.params);
    std::map<std::string, double> resolved = default_params(cfg.kind);
    for (const auto& [k, v] : cfg.params) resolved[k] = v;
    ctx.manifest.config = {{"kind", o.kind}, {"n", o.n}, {"classes", o.classes}, {"seed", o.seed},
                           {"params", resolved}, {"t", o.t}};

    const Dataset ds = generate(cfg);
    const std::string file = std::string(to_string(cfg.kind)) + ext;
    save_dataset(ds, ctx.output_path(file).string(), fmt);
    ctx.record_output(file);

    json out = report_header("synth");
    out["suite"] = false;
    out["kind"] = to_string(cfg.kind);
    out["file"] = file;
    out["n"] = cfg.n;
    out["classes"] = cfg.classes;
    out["seed"] = cfg.seed;
    out["params"] = resolved;
    out["t"] = o.t;
    out["rld"] = rld(ds.features, ds.labels, o.t);
    out["ch_score"] = cfg.classes >= 2 && cfg.classes < cfg.n ? ch_to_json(ch_score(ds.features, ds.labels)) : json(nullptr);
    ctx.write_json("synth.json", out);
}

// ---- gcn -------------------------------------------------------------------

struct GcnOptions {
    std::string dataset;
    double t = kDefaultTemperature;
    std::uint64_t seed = 0;
    std::size_t epochs = 300;
    double lr = 0.01;
    std::vector<std::size_t> hidden{64, 64};
    double mask_lo = 0.05;
    double mask_hi = 0.5;
    double test_fraction = 0.2;
    std::string distance = "euclidean";
};

void run_gcn(RunContext& ctx, const GcnOptions& o) {
    if (!(o.t > 0.0)) throw InvalidArgument("--t must be positive");
    const DistanceKind kind = parse_distance_kind(o.distance);
    ctx.manifest.seed = o.seed;
    ctx.manifest.config = {{"dataset", o.dataset}, {"t", o.t}, {"seed", o.seed}, {"epochs", o.epochs},
                           {"lr", o.lr}, {"hidden", o.hidden}, {"mask_lo", o.mask_lo}, {"mask_hi", o.mask_hi},
                           {"test_fraction", o.test_fraction}, {"distance", o.distance}};

    TrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.learning_rate = o.lr;
    cfg.hidden = o.hidden;
    cfg.mask_lo = o.mask_lo;
    cfg.mask_hi = o.mask_hi;
    cfg.seed = o.seed;
    cfg.validate();
    if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) throw InvalidArgument("--test-fraction must lie in (0, 1)");

    const Dataset ds = ctx.read_dataset(o.dataset);
    require_labels(ds, o.dataset);
    const AdjacencyMatrix a = adjacency_matrix(similarity_matrix(ds.features, kind), o.t);
    const Split split = train_test_split(ds.features.rows(), o.test_fraction, o.seed);
    const GcnTrainResult r = train_gcn(a, ds.labels, cfg, split.test);
    const double accuracy = evaluate_gcn(r.model, a, ds.labels, split.test);

    save_gcn_model(r.model, ctx.output_path("model.gcn").string());
    ctx.record_output("model.gcn");

    json out = report_header("gcn");
    out["dataset"] = ds.name;
    out["n"] = ds.features.rows();
    out["C"] = ds.labels.num_classes();
    out["t"] = o.t;
    out["distance"] = to_string(kind);
    out["seed"] = o.seed;
    out["dims"] = r.model.dims();
    out["alpha"] = r.model.alpha;
    out["test_size"] = split.test.size();
    out["accuracy"] = accuracy;
    out["final_loss"] = r.loss_trace.back();
    out["loss_trace"] = r.loss_trace;
    out["model"] = "model.gcn";
    ctx.write_json("gcn.json", out);
}

// ---- probe -----------------------------------------------------------------

struct ProbeOptions {
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t epochs = 1000;
    double lr = 0.5;
    double test_fraction = 0.2;
};

void run_probe(RunContext& ctx, const ProbeOptions& o) {
    ctx.manifest.seed = o.seed;
    ctx.manifest.config = {{"dataset", o.dataset}, {"seed", o.seed}, {"epochs", o.epochs}, {"lr", o.lr},
                           {"test_fraction", o.test_fraction}};
    ProbeConfig cfg;
    cfg.epochs = o.epochs;
    cfg.learning_rate = o.lr;
    cfg.test_fraction = o.test_fraction;
    cfg.validate();

    const Dataset ds = ctx.read_dataset(o.dataset);
    require_labels(ds, o.dataset);
    const ProbeResult r = train_linear_probe(ds.features, ds.labels, o.seed, cfg);

    json weights = json::array();
    for (Eigen::Index i = 0; i < r.probe.weights.rows(); ++i) {
        std::vector<double> row(r.probe.weights.row(i).begin(), r.probe.weights.row(i).end());
        weights.push_back(row);
    }
    json out = report_header("probe");
    out["dataset"] = ds.name;
    out["n"] = ds.features.rows();
    out["d"] = ds.features.cols();
    out["C"] = ds.labels.num_classes();
    out["seed"] = o.seed;
    out["test_size"] = r.split.test.size();
    out["accuracy"] = r.accuracy;
    out["final_loss"] = r.loss_trace.empty() ? json(nullptr) : json(r.loss_trace.back());
    out["weights"] = weights;
    out["bias"] = std::vector<double>(r.probe.bias.begin(), r.probe.bias.end());
    ctx.write_json("probe.json", out);
}

// ---- overlap ---------------------------------------------------------------

struct OverlapOptions {
    std::string demo;
    std::string image1;
    std::string image2;
    std::optional<std::size_t> pad;
    std::optional<std::size_t> crop_height;
    std::optional<std::size_t> crop_width;
    std::optional<double> flip;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    double level = 0.95;
};

struct OverlapCase {
    ToyImage x1, x2;
    AugmentationPipeline pipeline;
};

OverlapCase demo_case(const std::string& name) {
    if (name == "demo-flip") {
        ToyImage a(1, 2, 1, {10, 200}), b(1, 2, 1, {200, 10});
        AugmentationPipeline p = AugmentationPipeline::identity(a);
        p.flip_probability = 0.5;
        return {a, b, p};
    }
    if (name == "demo-disjoint") {
        const ToyImage black = ToyImage::filled(32, 32, 3, 0), white = ToyImage::filled(32, 32, 3, 255);
        return {black, white, AugmentationPipeline{4, 32, 32, 0.5}};
    }
    if (name == "demo-identical") {
        const ToyImage g = ToyImage::filled(8, 8, 1, 128);
        return {g, g, AugmentationPipeline::identity(g)};
    }
    throw InvalidArgument("unknown overlap demo '" + name + "' (expected demo-flip, demo-disjoint or demo-identical)");
}

void run_overlap(RunContext& ctx, const OverlapOptions& o) {
    ctx.manifest.seed = o.seed;
    OverlapCase c;
    json source;
    if (!o.demo.empty()) {
        if (!o.image1.empty() || !o.image2.empty()) throw InvalidArgument("give either a demo name or --image1/--image2");
        c = demo_case(o.demo);
        source = {{"demo", o.demo}};
    } else {
        if (o.image1.empty() || o.image2.empty()) throw InvalidArgument("overlap needs a demo name or both --image1 and --image2");
        c.x1 = load_netpbm(o.image1);
        ctx.record_input(o.image1);
        c.x2 = load_netpbm(o.image2);
        ctx.record_input(o.image2);
        c.pipeline = AugmentationPipeline{4, c.x1.height, c.x1.width, 0.5};
        source = {{"image1", o.image1}, {"image2", o.image2}};
    }
    if (o.pad) c.pipeline.pad = *o.pad;
    if (o.crop_height) c.pipeline.crop_height = *o.crop_height;
    if (o.crop_width) c.pipeline.crop_width = *o.crop_width;
    if (o.flip) c.pipeline.flip_probability = *o.flip;

    json pipeline = {{"pad", c.pipeline.pad},
                     {"crop_height", c.pipeline.crop_height},
                     {"crop_width", c.pipeline.crop_width},
                     {"flip_probability", c.pipeline.flip_probability}};
    ctx.manifest.config = {{"source", source}, {"pipeline", pipeline}, {"trials", o.trials}, {"seed", o.seed},
                           {"level", o.level}};

    const TrialResult r = overlap_probability(c.x1, c.x2, c.pipeline, o.trials, o.seed, o.level);
    json exact = nullptr;
    const std::size_t outcomes = c.pipeline.offsets_y(c.x1) * c.pipeline.offsets_x(c.x1) * 2;
    if (outcomes <= kMaxEnumeratedOutcomes) exact = exact_overlap_enumerate(c.x1, c.x2, c.pipeline);

    json out = report_header("overlap");
    out["source"] = source;
    out["pipeline"] = pipeline;
    out["seed"] = o.seed;
    out["trials"] = r.trials;
    out["matches"] = r.matches;
    out["estimate"] = r.estimate;
    out["interval"] = {{"lo", r.interval.lo}, {"hi", r.interval.hi}, {"level", r.interval.level}};
    out["exact"] = exact;
    ctx.write_json("overlap.json", out);
}

// ---- tsne ------------------------------------------------------------------

struct TsneOptions {
    std::string dataset;
    TsneConfig cfg;
};

void run_tsne(RunContext& ctx, const TsneOptions& o) {
    const TsneConfig& c = o.cfg;
    ctx.manifest.seed = c.seed;
    ctx.manifest.config = {{"dataset", o.dataset}, {"perplexity", c.perplexity}, {"iterations", c.iterations},
                           {"lr", c.learning_rate}, {"exaggeration", c.exaggeration},
                           {"exaggeration_iterations", c.exaggeration_iterations}, {"seed", c.seed}};
    const Dataset ds = ctx.read_dataset(o.dataset);
    c.validate(ds.features.rows());
    const Embedding e = tsne(ds.features, c);

    std::string csv = "x,y,label\n";
    for (Eigen::Index i = 0; i < e.coords.rows(); ++i) {
        csv += format_double(e.coords(i, 0)) + "," + format_double(e.coords(i, 1)) + ",";
        if (ds.labeled()) csv += std::to_string(ds.labels[std::size_t(i)]);
        csv += "\n";
    }
    ctx.write_text("embedding.csv", csv);

    json out = report_header("tsne");
    out["dataset"] = ds.name;
    out["n"] = ds.features.rows();
    out["perplexity"] = c.perplexity;
    out["iterations"] = c.iterations;
    out["seed"] = c.seed;
    out["kl"] = e.kl;
    out["visibility"] = ds.labeled() ? json(cluster_visibility(e.coords, ds.labels)) : json(nullptr);
    out["embedding"] = "embedding.csv";
    ctx.write_json("tsne.json", out);
}

// ---- report ----------------------------------------------------------------

struct ReportOptions {
    std::vector<std::string> runs;
    std::string metric = "rld";
    std::string accuracy = "probe";
};

double pick_metric(const json& m, const std::string& metric, const std::string& where) {
    const auto value = [&](const json& v) {
        if (!v.is_number()) throw InvalidArgument(where + ": metric '" + metric + "' is not finite");
        return v.get<double>();
    };
    if (metric == "rld") return value(m.at("rld").at(0).at("value"));
    if (metric == "ch_score") return value(m.at("ch_score").at("value"));
    if (metric == "chi") return value(m.at("chi").at(0).at("value"));
    if (metric == "modularity") return value(m.at("modularity").at("value"));
    throw InvalidArgument("unknown --metric '" + metric + "'");
}

// Setting of the selected metric that must agree across runs.
json metric_setting(const json& m, const std::string& metric) {
    if (metric == "rld") return {m.at("distance"), m.at("rld").at(0).at("t")};
    if (metric == "chi") return m.at("chi").at(0).at("k");
    if (metric == "modularity") return m.at("modularity").at("t");
    return nullptr;
}

void run_report(RunContext& ctx, const ReportOptions& o) {
    if (o.accuracy != "probe" && o.accuracy != "gcn") throw InvalidArgument("--accuracy must be probe or gcn");
    ctx.manifest.config = {{"runs", o.runs}, {"metric", o.metric}, {"accuracy", o.accuracy}};

    std::vector<double> xs, ys;
    std::vector<ScatterPoint> points;
    json runs = json::array();
    json setting;
    std::string csv = "run," + o.metric + ",accuracy\n";
    for (std::size_t i = 0; i < o.runs.size(); ++i) {
        const fs::path dir(o.runs[i]);
        const json m = ctx.read_json(dir / "metrics.json");
        const json a = ctx.read_json(dir / (o.accuracy + ".json"));
        double x = 0.0, y = 0.0;
        try {
            x = pick_metric(m, o.metric, (dir / "metrics.json").string());
            y = a.at("accuracy").get<double>();
            const json s = metric_setting(m, o.metric);
            if (i == 0) setting = s;
            else if (s != setting)
                throw InvalidArgument("run " + dir.string() + " reports " + o.metric + " under a different setting (" +
                                      s.dump() + " vs " + setting.dump() + ")");
        } catch (const json::exception& e) {
            throw FormatError(FormatErrorKind::malformed, dir.string(), std::string("incomplete run outputs: ") + e.what());
        }
        std::string name = dir.filename().string();
        if (name.empty() || name == ".") name = fs::absolute(dir).parent_path().filename().string();
        xs.push_back(x);
        ys.push_back(y);
        points.push_back({x, y, name});
        runs.push_back({{"run", name}, {"metric", x}, {"accuracy", y}});
        csv += name + "," + format_double(x) + "," + format_double(y) + "\n";
    }
    const double rho = spearman(xs, ys);
    ctx.write_text("report.csv", csv);
    ctx.write_text("report.svg", scatter_svg(points, o.metric, o.accuracy + " accuracy",
                                             o.metric + " vs " + o.accuracy + " accuracy"));
    json out = report_header("report");
    out["metric"] = o.metric;
    out["accuracy_source"] = o.accuracy;
    out["runs"] = runs;
    out["spearman"] = finite_or_null(rho);
    out["csv"] = "report.csv";
    out["svg"] = "report.svg";
    ctx.write_json("report.json", out);
}

template <class Options, class Fn>
CLI::App* command(CLI::App& app, std::function<void()>& action, RunContext& ctx, const std::string& name,
                  const std::string& help, std::shared_ptr<Options> opts, Fn fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&action, &ctx, opts, fn, name] {
        action = [&ctx, opts, fn, name] {
            ctx.manifest.command = name;
            fn(ctx, *opts);
        };
    });
    return sub;
}

}  // namespace

void register_commands(CLI::App& app, RunContext& ctx, std::function<void()>& action) {
    {
        auto o = std::make_shared<MetricsOptions>();
        auto* sub = command(app, action, ctx, "metrics", "RLD, CH score, CHI and modularity of a labeled dataset", o, run_metrics);
        sub->add_option("--dataset", o->dataset, "Dataset file")->required();
        sub->add_option("--t", o->temperatures, "Graph temperature(s)")->delimiter(',')->capture_default_str();
        sub->add_option("--k", o->ks, "CHI neighborhood size(s), capped at n-1")->delimiter(',')->capture_default_str();
        sub->add_option("--distance", o->distance, "euclidean or cosine_distance")->capture_default_str();
    }
    {
        auto o = std::make_shared<SynthOptions>();
        auto* sub = command(app, action, ctx, "synth", "Generate a synthetic cluster configuration", o, run_synth);
        sub->add_option("--kind", o->kind, "uniform, circle, lines, local_blobs, random_lines, gaussian_mixture")
            ->capture_default_str();
        sub->add_option("--n", o->n, "Number of points")->capture_default_str();
        sub->add_option("--classes", o->classes, "Number of classes")->capture_default_str();
        sub->add_option("--seed", o->seed, "RNG seed")->capture_default_str();
        sub->add_option("--param", o->params, "Generator parameter override name=value (repeatable)");
        sub->add_flag("--suite", o->suite, "Write all six reference configurations");
        sub->add_option("--t", o->t, "Temperature for the RLD summary")->capture_default_str();
    }
    {
        auto o = std::make_shared<GcnOptions>();
        auto* sub = command(app, action, ctx, "gcn", "Train the graph classifier on the temperature graph", o, run_gcn);
        sub->add_option("--dataset", o->dataset, "Dataset file")->required();
        sub->add_option("--t", o->t, "Graph temperature")->capture_default_str();
        sub->add_option("--seed", o->seed, "Seed for the split, initialization and masks")->capture_default_str();
        sub->add_option("--epochs", o->epochs)->capture_default_str();
        sub->add_option("--lr", o->lr, "Adam step size")->capture_default_str();
        sub->add_option("--hidden", o->hidden, "Hidden layer widths")->delimiter(',')->capture_default_str();
        sub->add_option("--mask-lo", o->mask_lo)->capture_default_str();
        sub->add_option("--mask-hi", o->mask_hi)->capture_default_str();
        sub->add_option("--test-fraction", o->test_fraction)->capture_default_str();
        sub->add_option("--distance", o->distance, "euclidean or cosine_distance")->capture_default_str();
    }
    {
        auto o = std::make_shared<ProbeOptions>();
        auto* sub = command(app, action, ctx, "probe", "Linear probe accuracy on a held-out split", o, run_probe);
        sub->add_option("--dataset", o->dataset, "Dataset file")->required();
        sub->add_option("--seed", o->seed, "Split seed")->capture_default_str();
        sub->add_option("--epochs", o->epochs)->capture_default_str();
        sub->add_option("--lr", o->lr)->capture_default_str();
        sub->add_option("--test-fraction", o->test_fraction)->capture_default_str();
    }
    {
        auto o = std::make_shared<OverlapOptions>();
        auto* sub = command(app, action, ctx, "overlap", "Monte Carlo augmentation overlap with exact bounds", o, run_overlap);
        sub->add_option("demo", o->demo, "demo-flip, demo-disjoint or demo-identical");
        sub->add_option("--image1", o->image1, "First PGM/PPM image");
        sub->add_option("--image2", o->image2, "Second PGM/PPM image");
        sub->add_option("--pad", o->pad, "Zero padding in pixels");
        sub->add_option("--crop-height", o->crop_height);
        sub->add_option("--crop-width", o->crop_width);
        sub->add_option("--flip", o->flip, "Horizontal flip probability");
        sub->add_option("--trials", o->trials, "Number of augmented pairs")->capture_default_str();
        sub->add_option("--seed", o->seed)->capture_default_str();
        sub->add_option("--level", o->level, "Confidence level")->capture_default_str();
    }
    {
        auto o = std::make_shared<TsneOptions>();
        auto* sub = command(app, action, ctx, "tsne", "Exact t-SNE embedding", o, run_tsne);
        sub->add_option("--dataset", o->dataset, "Dataset file")->required();
        sub->add_option("--perplexity", o->cfg.perplexity)->capture_default_str();
        sub->add_option("--iterations", o->cfg.iterations)->capture_default_str();
        sub->add_option("--lr", o->cfg.learning_rate)->capture_default_str();
        sub->add_option("--exaggeration", o->cfg.exaggeration)->capture_default_str();
        sub->add_option("--exaggeration-iterations", o->cfg.exaggeration_iterations)->capture_default_str();
        sub->add_option("--seed", o->cfg.seed)->capture_default_str();
    }
    {
        auto o = std::make_shared<ReportOptions>();
        auto* sub = command(app, action, ctx, "report", "Metric vs accuracy scatter over run directories", o, run_report);
        sub->add_option("runs", o->runs, "Run directories holding metrics.json and probe.json/gcn.json")->required();
        sub->add_option("--metric", o->metric, "rld, ch_score, chi or modularity")->capture_default_str();
        sub->add_option("--accuracy", o->accuracy, "probe or gcn")->capture_default_str();
    }
}

}  // namespace repclust::cli
