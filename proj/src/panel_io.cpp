#include "mpindep/panel_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mpindep/errors.hpp"

namespace mpindep {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    const auto lines = read_lines(path);
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank(lines[i]) || lines[i][0] == '#') continue;
        const auto cells = split_csv_line(lines[i]);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j)
            if (!parse_double(cells[j], row[j])) { numeric = false; break; }
        if (!numeric) {
            if (rows.empty()) continue;  // header row
            throw ParseError(path + ":" + std::to_string(i + 1) +
                             ": non-numeric cell");
        }
        for (double v : row)
            if (!std::isfinite(v))
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": NaN/Inf entry rejected");
        if (rows.empty())
            width = row.size();
        else if (row.size() != width)
            throw ParseError(path + ":" + std::to_string(i + 1) +
                             ": expected " + std::to_string(width) +
                             " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no rows");
    Eigen::MatrixXd m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    return m;
}

bool PricePanel::usable(Eigen::Index ticker, Eigen::Index first,
                        Eigen::Index count, Eigen::Index stride) const {
    for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index idx = first + k * stride;
        if (idx >= static_cast<Eigen::Index>(dates.size())) return false;
        if (!present[ticker][idx]) return false;
    }
    return true;
}

PricePanel load_price_panel(const std::string& path) {
    const auto lines = read_lines(path);
    std::size_t first = 0;
    while (first < lines.size() && (blank(lines[first]) || lines[first][0] == '#'))
        ++first;
    if (first >= lines.size()) throw ParseError(path + ": no rows");
    const auto header = split_csv_line(lines[first]);
    if (header.size() < 2) throw ParseError(path + ": need at least 2 columns");

    std::vector<std::string> hl(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) hl[i] = lower(header[i]);
    const bool long_format =
        header.size() == 3 && hl[0] == "date" && hl[1] == "ticker" &&
        hl[2] == "close";

    PricePanel panel;
    if (long_format) {
        std::map<std::string, std::map<std::string, double>> by_ticker;
        std::set<std::string> date_set;
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = first + 1; i < lines.size(); ++i) {
            if (blank(lines[i]) || lines[i][0] == '#') continue;
            const auto cells = split_csv_line(lines[i]);
            if (cells.size() != 3)
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": expected date,ticker,close");
            double price;
            if (!parse_double(cells[2], price))
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": bad close value");
            if (!(price > 0.0))
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": non-positive price rejected");
            if (!seen.insert({cells[0], cells[1]}).second)
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": duplicate (date, ticker) row");
            by_ticker[cells[1]][cells[0]] = price;
            date_set.insert(cells[0]);
        }
        if (by_ticker.empty()) throw ParseError(path + ": no rows");
        panel.dates.assign(date_set.begin(), date_set.end());  // ISO order
        for (const auto& [tk, _] : by_ticker) panel.tickers.push_back(tk);
        panel.close.setZero(panel.tickers.size(), panel.dates.size());
        panel.present.assign(panel.tickers.size(),
                             std::vector<bool>(panel.dates.size(), false));
        for (std::size_t t = 0; t < panel.tickers.size(); ++t) {
            const auto& series = by_ticker[panel.tickers[t]];
            for (std::size_t d = 0; d < panel.dates.size(); ++d) {
                const auto it = series.find(panel.dates[d]);
                if (it != series.end()) {
                    panel.close(t, d) = it->second;
                    panel.present[t][d] = true;
                }
            }
        }
    } else {
        // Wide: first column is the date, remaining columns are tickers.
        panel.tickers.assign(header.begin() + 1, header.end());
        std::vector<std::vector<double>> cols(panel.tickers.size());
        std::vector<std::vector<bool>> mask(panel.tickers.size());
        std::set<std::string> date_set;
        for (std::size_t i = first + 1; i < lines.size(); ++i) {
            if (blank(lines[i]) || lines[i][0] == '#') continue;
            const auto cells = split_csv_line(lines[i]);
            if (cells.size() != header.size())
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": ragged row");
            if (!date_set.insert(cells[0]).second)
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": duplicate date row");
            if (!panel.dates.empty() && !(panel.dates.back() < cells[0]))
                throw ParseError(path + ":" + std::to_string(i + 1) +
                                 ": dates must be strictly increasing");
            panel.dates.push_back(cells[0]);
            for (std::size_t j = 1; j < cells.size(); ++j) {
                double price = 0.0;
                const bool ok = parse_double(cells[j], price);
                if (ok && !(price > 0.0))
                    throw ParseError(path + ":" + std::to_string(i + 1) +
                                     ": non-positive price rejected");
                cols[j - 1].push_back(ok ? price : 0.0);
                mask[j - 1].push_back(ok);
            }
        }
        if (panel.dates.empty()) throw ParseError(path + ": no rows");
        panel.close.setZero(panel.tickers.size(), panel.dates.size());
        panel.present = std::move(mask);
        for (std::size_t t = 0; t < panel.tickers.size(); ++t)
            for (std::size_t d = 0; d < panel.dates.size(); ++d)
                panel.close(t, d) = cols[t][d];
    }
    return panel;
}

Eigen::VectorXd subsample_series(const PricePanel& panel, Eigen::Index ticker,
                                 Eigen::Index n, Eigen::Index stride,
                                 bool standardize) {
    const auto len = static_cast<Eigen::Index>(panel.dates.size());
    const Eigen::Index required = 1 + stride * (n - 1);
    if (len < required)
        throw SeriesTooShort("series has " + std::to_string(len) +
                             " observations; need " + std::to_string(required));
    if (!panel.usable(ticker, 0, n, stride))
        throw SeriesTooShort("missing values at sampled indices for ticker " +
                             panel.tickers[ticker]);
    Eigen::VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) out[k] = panel.close(ticker, k * stride);
    if (standardize) {
        if (n < 2)
            throw DegenerateSeries("standardization needs n >= 2");
        const double mean = out.mean();
        const double sd =
            std::sqrt((out.array() - mean).square().sum() / double(n - 1));
        if (!(sd > 0.0))
            throw DegenerateSeries("constant series cannot be standardized");
        out = (out.array() - mean) / sd;
    }
    return out;
}

}  // namespace mpindep
