#include "manifest.hpp"

#include "goalspot/baseline_glm.hpp"
#include "goalspot/csv_util.hpp"
#include "goalspot/exploratory_diag.hpp"
#include "goalspot/gibbs_sampler.hpp"
#include "goalspot/kernels.hpp"
#include "goalspot/model_selection.hpp"
#include "goalspot/player_metrics.hpp"
#include "goalspot/predictor.hpp"
#include "goalspot/scoring_eval.hpp"
#include "goalspot/shot_ingest.hpp"
#include "goalspot/spatial_kernel.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef GOALSPOT_VERSION
#define GOALSPOT_VERSION "0.0.0"
#endif

namespace gs = goalspot;
using gs::cli::OutputSet;
using gs::cli::RunManifest;

namespace {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int workers = 1;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--workers", c.workers, "Upper bound on worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::string read_input(const std::string& path, RunManifest& manifest)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw InputError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    std::string bytes = ss.str();
    manifest.inputs.emplace_back(path, gs::cli::sha256_hex(bytes));
    return bytes;
}

void require_file(const std::string& path)
{
    if (!std::filesystem::is_regular_file(path))
        throw InputError("cannot open input file: " + path);
}

std::vector<double> parse_range(const std::string& spec, const char* what)
{
    const auto parts = gs::csv::split(spec, ':');
    if (parts.size() != 3)
        throw InputError(std::string(what) + " must look like lo:hi:step");
    const double lo = gs::csv::to_double(parts[0]);
    const double hi = gs::csv::to_double(parts[1]);
    const double step = gs::csv::to_double(parts[2]);
    if (!(step > 0.0) || hi < lo)
        throw InputError(std::string(what) + " has an empty or invalid range");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k)
        v.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);
    return v;
}

std::vector<std::string> parse_list(const std::string& text)
{
    std::vector<std::string> out;
    if (text.empty())
        return out;
    for (auto& s : gs::csv::split(text, ','))
        if (!s.empty())
            out.push_back(s);
    return out;
}

gs::ParseResult ingest(const std::string& path, RunManifest& manifest, OutputSet& outputs)
{
    const auto bytes = read_input(path, manifest);
    std::istringstream in(bytes);
    auto parsed = gs::parse_shots(in);
    std::ostringstream rej;
    gs::write_rejects_csv(rej, parsed.rejects);
    outputs.add("rejects.csv") = rej.str();
    return parsed;
}

struct DuplicateOptions {
    std::string mode = "random";
};

/// Exclusions, subset filter and duplicate resolution.
std::vector<gs::ShotRecord> prepare(const std::vector<gs::ShotRecord>& records,
                                    gs::SubsetTag tag, const DuplicateOptions& dup,
                                    std::uint64_t seed, double phi,
                                    const std::vector<std::string>& columns,
                                    const gs::PriorConfig& prior)
{
    auto kept = gs::apply_exclusions(records).kept;
    auto annotated = kept;
    gs::annotate_opponent_proportions(annotated);
    std::vector<gs::ShotRecord> subset;
    for (const auto& r : annotated)
        if (gs::in_subset(r, tag))
            subset.push_back(r);

    gs::DuplicateConfig cfg;
    cfg.seed = gs::derive_seed(seed, 0x647570ULL);
    gs::FitContext context;
    if (dup.mode == "refit") {
        cfg.mode = gs::DuplicateMode::refit;
        context = [=](const std::vector<gs::ShotRecord>& train,
                      const std::vector<gs::ShotRecord>& test) {
            auto d_train = gs::build_design(train, tag);
            auto d_test = gs::build_design(test, tag);
            if (!columns.empty()) {
                d_train = gs::select_columns(d_train, columns);
                d_test = gs::select_columns(d_test, columns);
            }
            const auto kernel = gs::build_kernel(d_train.locations, phi);
            const auto draws = gs::run_chain(d_train, kernel, prior, gs::search_chain_defaults(seed));
            return gs::predict_design(draws, kernel, d_test, seed);
        };
    } else if (dup.mode != "random") {
        throw InputError("unknown duplicate mode: " + dup.mode);
    }
    return gs::resolve_duplicates(subset, cfg, context);
}

gs::EncodedDesign encode(const std::vector<gs::ShotRecord>& records, gs::SubsetTag tag,
                         const std::vector<std::string>& columns)
{
    auto d = gs::build_design(records, tag);
    return columns.empty() ? d : gs::select_columns(d, columns);
}

std::string design_csv(const gs::EncodedDesign& d)
{
    std::ostringstream out;
    out << "x,y,outcome";
    for (const auto& c : d.column_names)
        out << ',' << c;
    out << '\n';
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        const auto& loc = d.locations[static_cast<std::size_t>(i)];
        out << gs::csv::num(loc.x) << ',' << gs::csv::num(loc.y) << ','
            << static_cast<int>(d.Y[i]);
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            out << ',' << gs::csv::num(d.X(i, j));
        out << '\n';
    }
    return out.str();
}

gs::EncodedDesign read_design_csv(const std::string& bytes, gs::SubsetTag tag)
{
    std::istringstream in(bytes);
    const auto t = gs::csv::read_table(in);
    if (t.header.size() < 4 || t.header[0] != "x" || t.header[1] != "y" ||
        t.header[2] != "outcome")
        throw InputError("design.csv has an unexpected header");
    gs::EncodedDesign d;
    d.subset_tag = tag;
    d.column_names.assign(t.header.begin() + 3, t.header.end());
    const auto n = static_cast<Eigen::Index>(t.rows.size());
    const auto p = static_cast<Eigen::Index>(d.column_names.size());
    d.X.resize(n, p);
    d.Y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = t.rows[static_cast<std::size_t>(i)];
        if (row.size() != t.header.size())
            throw InputError("design.csv row " + std::to_string(i + 2) + " has the wrong width");
        d.locations.push_back({gs::csv::to_double(row[0]), gs::csv::to_double(row[1])});
        d.Y[i] = gs::csv::to_double(row[2]);
        for (Eigen::Index j = 0; j < p; ++j)
            d.X(i, j) = gs::csv::to_double(row[static_cast<std::size_t>(j + 3)]);
    }
    return d;
}

std::map<std::string, std::string> read_keyed(const std::string& bytes)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(bytes);
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

template <class F>
std::string render(F&& f)
{
    std::ostringstream out;
    f(out);
    return out.str();
}

// ---------------------------------------------------------------- explore

struct ExploreOptions {
    Common common;
    std::string input;
    std::string subset = "all";
    int k_neighbors = 0;
    int perms = 999;
    int sims = 99;
    std::string radii = "1:30:1";
};

int cmd_explore(const ExploreOptions& o, RunManifest& m)
{
    require_file(o.input);
    const auto radii = parse_range(o.radii, "--radii");
    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto parsed = ingest(o.input, m, out);
    const auto kept = gs::apply_exclusions(parsed.records).kept;
    std::vector<gs::ShotRecord> shots;
    for (const auto& r : kept)
        if (o.subset == "all" || gs::in_subset(r, gs::parse_subset(o.subset)))
            shots.push_back(r);
    if (shots.size() < 2)
        throw InputError("explore needs at least two shots after exclusions");

    std::vector<gs::PitchLocation> pts;
    std::vector<int> labels;
    for (const auto& s : shots) {
        pts.push_back(s.location);
        labels.push_back(s.outcome);
    }
    out.add("factor_summary.csv") =
        render([&](auto& os) { gs::write_factor_summary_csv(os, gs::factor_summary(shots)); });

    const gs::Window window;
    const auto kf = gs::ripley_k(pts, window, radii, o.sims, gs::derive_seed(o.common.seed, 1));
    out.add("kfunction.csv") = render([&](auto& os) { gs::write_kfunction_csv(os, kf); });

    const int k = o.k_neighbors > 0 ? o.k_neighbors : gs::default_k_neighbors(pts.size());
    const auto jc = gs::join_count_test(pts, labels, k, o.perms, gs::derive_seed(o.common.seed, 2));
    out.add("joincount.csv") = render([&](auto& os) { gs::write_joincount_csv(os, jc); });

    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "explore: " << shots.size() << " shots, k=" << k
              << ", unlike-join p=" << jc.n01.p_value << '\n';
    return 0;
}

// ---------------------------------------------------------------- fit

struct ModelOptions {
    std::string subset = "others";
    std::string columns;
    double prior_a = 2.0;
    double prior_b = 1.0;
    DuplicateOptions dup;
};

void add_model_options(CLI::App* sub, ModelOptions& mo)
{
    sub->add_option("--subset", mo.subset, "headers | others")
        ->check(CLI::IsMember({"headers", "others"}))
        ->capture_default_str();
    sub->add_option("--columns", mo.columns,
                    "Comma-separated design columns to keep (default: all)");
    sub->add_option("--prior-a", mo.prior_a, "Inverse-gamma shape")->capture_default_str();
    sub->add_option("--prior-b", mo.prior_b, "Inverse-gamma rate")->capture_default_str();
    sub->add_option("--duplicates", mo.dup.mode, "random | refit")
        ->check(CLI::IsMember({"random", "refit"}))
        ->capture_default_str();
}

struct FitOptions {
    Common common;
    ModelOptions model;
    std::string input;
    double phi = 0.1;
    bool phi_search = false;
    std::string phi_grid = "0.05:1:0.05";
    double split = 0.30;
    int search_burnin = 2000;
    int search_samples = 200;
    int burnin = 10000;
    int samples = 500;
    int thin = 1;
    double grid_step = 1.0;
};

gs::PhiSearchResult run_phi_search(const gs::EncodedDesign& design, const gs::PriorConfig& prior,
                                   const std::string& grid, double split, int burnin,
                                   int samples, std::uint64_t seed)
{
    gs::PhiSearchConfig sc;
    sc.grid = parse_range(grid, "--phi-grid");
    sc.split_fraction = split;
    sc.seed = gs::derive_seed(seed, 0x706869ULL);
    auto chain = gs::search_chain_defaults(sc.seed);
    chain.burn_in = burnin;
    chain.n_samples = samples;
    return gs::select_phi(design, prior, chain, sc);
}

void warn_prior(const gs::PriorConfig& prior, Eigen::Index p)
{
    if (prior.a <= 0.5 * static_cast<double>(p))
        std::cerr << "warning: prior shape " << prior.a << " <= p/2 = " << 0.5 * p
                  << "; the scale of theta, w and sigma2 is then weakly identified and may drift"
                     " (probabilities are unaffected)\n";
}

int cmd_fit(const FitOptions& o, RunManifest& m)
{
    require_file(o.input);
    const auto tag = gs::parse_subset(o.model.subset);
    const auto columns = parse_list(o.model.columns);
    const gs::PriorConfig prior{o.model.prior_a, o.model.prior_b};
    prior.validate();
    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto parsed = ingest(o.input, m, out);
    const auto shots = prepare(parsed.records, tag, o.model.dup, o.common.seed, o.phi, columns,
                               prior);
    if (shots.empty())
        throw InputError(std::string("no shots in subset ") + gs::to_string(tag));
    const auto design = encode(shots, tag, columns);
    warn_prior(prior, design.X.cols());

    double phi = o.phi;
    if (o.phi_search) {
        const auto res = run_phi_search(design, prior, o.phi_grid, o.split, o.search_burnin,
                                        o.search_samples, o.common.seed);
        phi = res.phi_star;
        out.add("phi_search.csv") = render([&](auto& os) { gs::write_phi_search_csv(os, res); });
        m.timings.emplace_back("phi_search", clock.seconds());
    }

    const auto kernel = gs::build_kernel(design.locations, phi);
    gs::ChainConfig chain;
    chain.burn_in = o.burnin;
    chain.n_samples = o.samples;
    chain.thin = o.thin;
    chain.seed = gs::derive_seed(o.common.seed, 0x6669ULL);
    const auto draws = gs::run_chain(design, kernel, prior, chain);
    m.timings.emplace_back("sampler", draws.elapsed_seconds);

    out.add("summary.csv") =
        render([&](auto& os) { gs::write_summary_csv(os, gs::summarize(draws)); });
    out.add("draws.csv") = render([&](auto& os) { gs::write_draws_csv(os, draws); });
    out.add("w_draws.csv") = render([&](auto& os) { gs::write_w_draws_csv(os, draws); });
    out.add("design.csv") = design_csv(design);
    out.add("model.txt") = render([&](auto& os) {
        os << "subset=" << gs::to_string(tag) << "\nphi=" << gs::csv::num(phi)
           << "\nprior_a=" << gs::csv::num(prior.a) << "\nprior_b=" << gs::csv::num(prior.b)
           << "\nn=" << design.rows() << '\n';
    });

    gs::Situation baseline;
    if (tag == gs::SubsetTag::headers)
        baseline.body_part = gs::BodyPart::header;
    gs::GridSpec grid;
    grid.step = o.grid_step;
    const auto heat =
        gs::heatmap_grid(draws, kernel, grid, baseline, tag, gs::derive_seed(o.common.seed, 3));
    out.add("heatmap.csv") = render([&](auto& os) { gs::write_heatmap_csv(os, heat); });
    out.add("heatmap.pgm") = render([&](auto& os) { gs::write_heatmap_pgm(os, heat); });

    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "fit: " << design.rows() << " shots, phi=" << phi << ", "
              << draws.n_samples() << " draws\n";
    return 0;
}

// ---------------------------------------------------------------- phi-search

struct PhiSearchOptions {
    Common common;
    ModelOptions model;
    std::string input;
    std::string grid = "0.05:1:0.05";
    double split = 0.30;
    int burnin = 2000;
    int samples = 200;
};

int cmd_phi_search(const PhiSearchOptions& o, RunManifest& m)
{
    require_file(o.input);
    const auto tag = gs::parse_subset(o.model.subset);
    const auto columns = parse_list(o.model.columns);
    const gs::PriorConfig prior{o.model.prior_a, o.model.prior_b};
    prior.validate();
    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto parsed = ingest(o.input, m, out);
    const auto shots = prepare(parsed.records, tag, o.model.dup, o.common.seed, 0.1, columns,
                               prior);
    if (shots.empty())
        throw InputError(std::string("no shots in subset ") + gs::to_string(tag));
    const auto design = encode(shots, tag, columns);
    warn_prior(prior, design.X.cols());
    const auto res = run_phi_search(design, prior, o.grid, o.split, o.burnin, o.samples,
                                    o.common.seed);
    out.add("phi_search.csv") = render([&](auto& os) { gs::write_phi_search_csv(os, res); });
    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "phi-search: phi*=" << res.phi_star << '\n';
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
    Common common;
    std::string fit_dir;
    std::string input;
    bool with_baseline = false;
    std::string costs = "0.05:0.95:0.05";
};

int cmd_evaluate(const EvaluateOptions& o, RunManifest& m)
{
    namespace fs = std::filesystem;
    const fs::path dir(o.fit_dir);
    for (const char* f : {"model.txt", "design.csv", "draws.csv", "w_draws.csv"})
        require_file((dir / f).string());
    require_file(o.input);
    const auto costs = parse_range(o.costs, "--costs");

    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto meta = read_keyed(read_input((dir / "model.txt").string(), m));
    if (!meta.count("subset") || !meta.count("phi"))
        throw InputError("model.txt lacks subset or phi");
    const auto tag = gs::parse_subset(meta.at("subset"));
    const double phi = gs::csv::to_double(meta.at("phi"));
    const auto train = read_design_csv(read_input((dir / "design.csv").string(), m), tag);
    std::istringstream theta_in(read_input((dir / "draws.csv").string(), m));
    std::istringstream w_in(read_input((dir / "w_draws.csv").string(), m));
    auto draws = gs::read_draws_csv(theta_in, w_in);
    if (draws.column_names != train.column_names || draws.w.cols() != train.rows())
        throw InputError("fit artifacts disagree with each other");

    const auto parsed = ingest(o.input, m, out);
    if (!parsed.rejects.empty())
        throw InputError("evaluation file has " + std::to_string(parsed.rejects.size()) +
                         " malformed rows");
    auto kept = gs::apply_exclusions(parsed.records).kept;
    std::vector<gs::ShotRecord> shots;
    for (const auto& r : kept)
        if (gs::in_subset(r, tag))
            shots.push_back(r);
    if (shots.empty())
        throw InputError(std::string("no evaluation shots in subset ") + gs::to_string(tag));
    const auto eval = encode(shots, tag, train.column_names);

    const auto kernel = gs::build_kernel(train.locations, phi);
    const auto p_spatial = gs::predict_design(draws, kernel, eval, gs::derive_seed(o.common.seed, 4));
    std::vector<double> y(eval.Y.data(), eval.Y.data() + eval.Y.size());

    std::vector<gs::ModelPredictions> preds{{"spatial", gs::to_string(tag), y, p_spatial}};
    if (o.with_baseline) {
        const auto glm = gs::fit_glm(train);
        const Eigen::VectorXd p = gs::predict_glm(glm, eval.X);
        preds.push_back({"baseline", gs::to_string(tag), y,
                         std::vector<double>(p.data(), p.data() + p.size())});
        out.add("baseline_fit.csv") = render([&](auto& os) { gs::write_glm_csv(os, glm); });
    }
    const auto table = gs::compare_models(preds);
    out.add("scores.csv") = render([&](auto& os) { gs::write_scores_csv(os, table); });

    std::vector<std::string> names;
    std::vector<gs::BetaScoreCurve> curves;
    for (const auto& p : preds) {
        names.push_back(p.model);
        curves.push_back(gs::beta_score_curve(p.y, p.p, costs));
    }
    out.add("beta_curve.csv") =
        render([&](auto& os) { gs::write_beta_curves_csv(os, names, curves); });

    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "evaluate: " << shots.size() << " shots scored\n";
    return 0;
}

// ---------------------------------------------------------------- rate

struct RateOptions {
    Common common;
    ModelOptions model;
    std::string input;
    double phi = 0.1;
    int burnin = 10000;
    int samples = 500;
    int min_shots = -1;
    std::string players;
    int bins = 20;
};

int cmd_rate(const RateOptions& o, RunManifest& m)
{
    require_file(o.input);
    const auto tag = gs::parse_subset(o.model.subset);
    const auto columns = parse_list(o.model.columns);
    gs::RatingFitConfig cfg;
    cfg.phi = o.phi;
    cfg.prior = {o.model.prior_a, o.model.prior_b};
    cfg.prior.validate();
    cfg.chain.burn_in = o.burnin;
    cfg.chain.n_samples = o.samples;
    cfg.chain.seed = gs::derive_seed(o.common.seed, 0x7261ULL);
    cfg.columns = columns;

    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto parsed = ingest(o.input, m, out);
    const auto shots =
        prepare(parsed.records, tag, o.model.dup, o.common.seed, o.phi, columns, cfg.prior);
    if (shots.empty())
        throw InputError(std::string("no shots in subset ") + gs::to_string(tag));

    const auto filter = parse_list(o.players);
    std::vector<gs::PlayerRating> ratings;
    bool filtered_out = false;
    if (!filter.empty()) {
        filtered_out = std::none_of(shots.begin(), shots.end(), [&](const auto& s) {
            return std::find(filter.begin(), filter.end(), s.player_id) != filter.end();
        });
    }
    if (!filtered_out)
        ratings = gs::rate_all(shots, tag, cfg, o.common.workers, filter);

    const int min_shots = o.min_shots >= 0 ? o.min_shots : gs::default_min_shots(tag);
    const std::string sub = tag == gs::SubsetTag::headers ? "headers" : "others";
    out.add("ratings_" + sub + ".csv") =
        render([&](auto& os) { gs::write_ratings_csv(os, ratings); });
    for (auto measure : {gs::Measure::sp, gs::Measure::ps}) {
        const auto ranked = gs::rank_players(ratings, measure, min_shots);
        out.add(std::string("rankings_") + gs::to_string(measure) + ".csv") =
            render([&](auto& os) { gs::write_rankings_csv(os, ranked); });
    }
    if (!ratings.empty())
        out.add("histograms_" + sub + ".csv") = render([&](auto& os) {
            gs::write_histograms_csv(os, gs::rating_histograms(ratings, o.bins));
        });

    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "rate: " << ratings.size() << " players rated\n";
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    Common common;
    int n = 1000;
    std::string theta =
        "intercept=1,log_distance=-0.8,cos_angle=0.5,keeper_reach=-0.1,home=0.05";
    double phi = 0.1;
    double sigma2 = 1.0;
    std::string process = "uniform_half";
    double header_share = 0.0;
    int players = 50;
    int matches = 100;
    double dispersion = 2.0;
};

int cmd_simulate(const SimulateOptions& o, RunManifest& m)
{
    gs::SyntheticSpec spec;
    spec.n_shots = o.n;
    spec.columns.clear();
    std::vector<double> values;
    for (const auto& item : parse_list(o.theta)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError("--theta entries must be name=value");
        spec.columns.push_back(item.substr(0, eq));
        values.push_back(gs::csv::to_double(item.substr(eq + 1)));
    }
    spec.theta = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    spec.phi = o.phi;
    spec.sigma2 = o.sigma2;
    spec.location_process = gs::parse_location_process(o.process);
    spec.cluster.dispersion = o.dispersion;
    spec.header_share = o.header_share;
    spec.n_players = o.players;
    spec.n_matches = o.matches;
    spec.seed = o.common.seed;
    spec.validate();

    OutputSet out;
    gs::cli::Stopwatch clock;
    const auto data = gs::generate(spec);
    out.add("synthetic.csv") = render([&](auto& os) { gs::write_shots_csv(os, data.records); });
    out.add("truth.csv") = render([&](auto& os) { gs::write_truth_csv(os, data); });
    m.timings.emplace_back("total", clock.seconds());
    gs::cli::commit(o.common.out_dir, out, m);
    std::cout << "simulate: " << data.records.size() << " shots\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatial probit modelling of shot conversion"};
    app.set_version_flag("--version", GOALSPOT_VERSION);
    app.set_config("--config", "", "Keyed text config file; command-line flags take precedence");
    app.require_subcommand(1);

    ExploreOptions ex;
    auto* explore = app.add_subcommand("explore", "Point-pattern and autocorrelation diagnostics");
    add_common(explore, ex.common);
    explore->add_option("input", ex.input, "Shot CSV")->required();
    explore->add_option("--subset", ex.subset, "all | headers | others")
        ->check(CLI::IsMember({"all", "headers", "others"}))
        ->capture_default_str();
    explore->add_option("--k-neighbors", ex.k_neighbors, "Neighbours per shot (0: floor(sqrt n))")
        ->capture_default_str();
    explore->add_option("--perms", ex.perms, "Join-count permutations")->capture_default_str();
    explore->add_option("--sims", ex.sims, "CSR simulations for the K envelope")
        ->capture_default_str();
    explore->add_option("--radii", ex.radii, "K-function radii lo:hi:step")->capture_default_str();

    FitOptions fo;
    auto* fit = app.add_subcommand("fit", "Fit the spatial probit model");
    add_common(fit, fo.common);
    add_model_options(fit, fo.model);
    fit->add_option("input", fo.input, "Shot CSV")->required();
    auto* phi_opt = fit->add_option("--phi", fo.phi, "Spatial decay")
                        ->check(CLI::PositiveNumber)
                        ->capture_default_str();
    fit->add_flag("--phi-search", fo.phi_search, "Select phi by held-out MSE")->excludes(phi_opt);
    fit->add_option("--phi-grid", fo.phi_grid, "Search grid lo:hi:step")->capture_default_str();
    fit->add_option("--split", fo.split, "Held-out share for the search")->capture_default_str();
    fit->add_option("--search-burnin", fo.search_burnin)->capture_default_str();
    fit->add_option("--search-samples", fo.search_samples)->capture_default_str();
    fit->add_option("--burnin", fo.burnin)->capture_default_str();
    fit->add_option("--samples", fo.samples)->capture_default_str();
    fit->add_option("--thin", fo.thin)->capture_default_str();
    fit->add_option("--grid-step", fo.grid_step, "Heat-map resolution in yards")
        ->capture_default_str();

    PhiSearchOptions po;
    auto* phis = app.add_subcommand("phi-search", "Held-out MSE over a phi grid");
    add_common(phis, po.common);
    add_model_options(phis, po.model);
    phis->add_option("input", po.input, "Shot CSV")->required();
    phis->add_option("--grid", po.grid, "lo:hi:step")->capture_default_str();
    phis->add_option("--split", po.split)->capture_default_str();
    phis->add_option("--burnin", po.burnin)->capture_default_str();
    phis->add_option("--samples", po.samples)->capture_default_str();

    EvaluateOptions eo;
    auto* evaluate = app.add_subcommand("evaluate", "Score a fitted model on held-out shots");
    add_common(evaluate, eo.common);
    evaluate->add_option("--fit-dir", eo.fit_dir, "Output directory of a fit run")->required();
    evaluate->add_option("input", eo.input, "Evaluation shot CSV")->required();
    evaluate->add_flag("--with-baseline", eo.with_baseline, "Add the independent probit baseline");
    evaluate->add_option("--costs", eo.costs, "Cost grid lo:hi:step")->capture_default_str();

    RateOptions ro;
    auto* rate = app.add_subcommand("rate", "Shooting prowess and positioning sense");
    add_common(rate, ro.common);
    add_model_options(rate, ro.model);
    rate->add_option("input", ro.input, "Shot CSV")->required();
    rate->add_option("--phi", ro.phi)->check(CLI::PositiveNumber)->capture_default_str();
    rate->add_option("--burnin", ro.burnin)->capture_default_str();
    rate->add_option("--samples", ro.samples)->capture_default_str();
    rate->add_option("--min-shots", ro.min_shots, "Ranking filter (default 10 headers, 20 others)");
    rate->add_option("--players", ro.players, "Comma-separated player ids to rate");
    rate->add_option("--bins", ro.bins)->capture_default_str();

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic shot data set");
    add_common(simulate, so.common);
    simulate->add_option("--n", so.n)->capture_default_str();
    simulate->add_option("--theta", so.theta, "name=value list")->capture_default_str();
    simulate->add_option("--phi", so.phi)->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--sigma2", so.sigma2)->capture_default_str();
    simulate->add_option("--process", so.process, "uniform_half | clustered | grid")
        ->capture_default_str();
    simulate->add_option("--header-share", so.header_share)->capture_default_str();
    simulate->add_option("--players", so.players)->capture_default_str();
    simulate->add_option("--matches", so.matches)->capture_default_str();
    simulate->add_option("--dispersion", so.dispersion)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* used = app.get_subcommands().front();
    RunManifest manifest;
    manifest.command = used->get_name();
    manifest.version = GOALSPOT_VERSION;
    manifest.config = used->config_to_str(true, false);

    try {
        const auto run = [&](const Common& c, auto&& body) {
            manifest.seed = c.seed;
            gs::kernels::set_max_threads(c.workers);
            return body();
        };
        if (*explore)
            return run(ex.common, [&] { return cmd_explore(ex, manifest); });
        if (*fit)
            return run(fo.common, [&] { return cmd_fit(fo, manifest); });
        if (*phis)
            return run(po.common, [&] { return cmd_phi_search(po, manifest); });
        if (*evaluate)
            return run(eo.common, [&] { return cmd_evaluate(eo, manifest); });
        if (*rate)
            return run(ro.common, [&] { return cmd_rate(ro, manifest); });
        if (*simulate)
            return run(so.common, [&] { return cmd_simulate(so, manifest); });
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const gs::IngestError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
