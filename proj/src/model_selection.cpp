#include "goalspot/model_selection.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/kernels.hpp"
#include "goalspot/predictor.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace goalspot {

std::vector<double> PhiSearchConfig::default_phi_grid()
{
    std::vector<double> g;
    for (int k = 1; k <= 20; ++k)
        g.push_back(0.05 * k);
    return g;
}

void PhiSearchConfig::validate() const
{
    if (grid.empty())
        throw std::invalid_argument("phi grid is empty");
    for (double phi : grid)
        if (!(phi > 0.0))
            throw std::invalid_argument("phi grid values must be positive");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("phi grid must be ascending");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw std::invalid_argument("split fraction must lie in (0, 1)");
}

ChainConfig search_chain_defaults(std::uint64_t seed)
{
    ChainConfig c;
    c.burn_in = 2000;
    c.n_samples = 200;
    c.thin = 1;
    c.seed = seed;
    return c;
}

double validation_mse(std::span<const double> y_true, std::span<const double> p_hat)
{
    if (y_true.size() != p_hat.size())
        throw std::invalid_argument("validation_mse: length mismatch");
    if (y_true.empty())
        throw std::invalid_argument("validation_mse: empty validation set");
    double s = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - p_hat[i];
        s += d * d;
    }
    return s / static_cast<double>(y_true.size());
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
split_rows(Eigen::Index n, double validation_fraction, std::uint64_t seed)
{
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    Rng rng = make_rng(seed, 0x73706c6974ULL);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto m = static_cast<Eigen::Index>(std::llround(validation_fraction * static_cast<double>(n)));
    m = std::clamp<Eigen::Index>(m, 1, n - 1);
    std::vector<Eigen::Index> val(idx.begin(), idx.begin() + m);
    std::vector<Eigen::Index> train(idx.begin() + m, idx.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
    return {train, val};
}

PhiSearchResult select_phi(const EncodedDesign& design, const PriorConfig& prior,
                           const ChainConfig& chain_cfg, const PhiSearchConfig& search_cfg)
{
    search_cfg.validate();
    if (design.rows() < 4)
        throw std::invalid_argument("design too small for a train/validation split");

    PhiSearchResult result;
    std::tie(result.train_rows, result.validation_rows) =
        split_rows(design.rows(), search_cfg.split_fraction, search_cfg.seed);
    const EncodedDesign train = subset_rows(design, result.train_rows);
    const EncodedDesign valid = subset_rows(design, result.validation_rows);
    const std::vector<double> y_valid(valid.Y.data(), valid.Y.data() + valid.Y.size());

    const auto n_grid = static_cast<int>(search_cfg.grid.size());
    result.table.resize(search_cfg.grid.size());
    std::vector<std::string> errors(search_cfg.grid.size());

    const auto evaluate = [&](int g) {
        const double phi = search_cfg.grid[static_cast<std::size_t>(g)];
        try {
            const SpatialKernel kernel = build_kernel(train.locations, phi, {!search_cfg.parallel});
            const PosteriorDraws draws = run_chain(train, kernel, prior, chain_cfg);
            PredictOptions po;
            po.parallel = !search_cfg.parallel;
            const auto p = predict_design(draws, kernel, valid,
                                          derive_seed(search_cfg.seed, 0x70726564ULL), po);
            result.table[static_cast<std::size_t>(g)] = {phi, validation_mse(y_valid, p)};
        }
        catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "phi " << phi << ": " << e.what();
            errors[static_cast<std::size_t>(g)] = msg.str();
        }
    };

    if (search_cfg.parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::max_threads())
        for (int g = 0; g < n_grid; ++g)
            evaluate(g);
    }
    else {
        for (int g = 0; g < n_grid; ++g)
            evaluate(g);
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw SamplerError(e);

    const auto best = std::min_element(result.table.begin(), result.table.end(),
                                       [](const PhiScore& a, const PhiScore& b) {
                                           return a.mse < b.mse;
                                       });
    result.phi_star = best->phi;
    return result;
}

void write_phi_search_csv(std::ostream& out, const PhiSearchResult& result)
{
    out << "phi,mse\n";
    for (const auto& row : result.table)
        out << csv::num(row.phi) << ',' << csv::num(row.mse) << '\n';
}

}  // namespace goalspot
