#pragma once

#include <string>
#include <vector>

#include "mpindep/eigcore.hpp"

namespace mpindep {

// Numeric matrix CSV: comma-separated, optional header row, rows are
// observations. Rejects NaN/Inf and ragged rows (with line numbers).
Eigen::MatrixXd load_matrix_csv(const std::string& path);

// Daily close-price panel. Dense ticker x date matrix; missing cells are
// tracked so only complete series over a requested range are used.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    Eigen::MatrixXd close;           // tickers x dates
    std::vector<std::vector<bool>> present;

    bool usable(Eigen::Index ticker, Eigen::Index first, Eigen::Index count,
                Eigen::Index stride) const;
};

// Long format (date,ticker,close) or wide format (date column first, one
// column per ticker), auto-detected from the header.
PricePanel load_price_panel(const std::string& path);

// Strided subsequence s[0], s[stride], ..., standardized to sample mean 0 /
// standard deviation 1.
Eigen::VectorXd subsample_series(const PricePanel& panel,
                                 Eigen::Index ticker, Eigen::Index n,
                                 Eigen::Index stride = 50,
                                 bool standardize = true);

}  // namespace mpindep
