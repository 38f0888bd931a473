#pragma once

#include "goalspot/gibbs_sampler.hpp"
#include "goalspot/shot_ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace goalspot {

struct PhiSearchConfig {
    std::vector<double> grid = default_phi_grid();
    double split_fraction = 0.30;  // held-out share
    std::uint64_t seed = 0;
    bool parallel = false;         // run grid points concurrently

    void validate() const;
    static std::vector<double> default_phi_grid();  // 0.05, 0.10, ..., 1.00
};

/// Chain settings used during the search unless overridden.
ChainConfig search_chain_defaults(std::uint64_t seed = 0);

struct PhiScore {
    double phi = 0.0;
    double mse = 0.0;
};

struct PhiSearchResult {
    std::vector<PhiScore> table;
    double phi_star = 0.0;
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> validation_rows;
};

double validation_mse(std::span<const double> y_true, std::span<const double> p_hat);

/// Seeded split: returns (train, validation) row indices, each ascending.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
split_rows(Eigen::Index n, double validation_fraction, std::uint64_t seed);

/// One split shared by every phi; for each phi fit on the training rows and
/// score held-out probabilities. Ties in MSE go to the smaller phi.
PhiSearchResult select_phi(const EncodedDesign& design, const PriorConfig& prior,
                           const ChainConfig& chain_cfg, const PhiSearchConfig& search_cfg);

void write_phi_search_csv(std::ostream& out, const PhiSearchResult& result);

}  // namespace goalspot
