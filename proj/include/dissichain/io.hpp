// io.hpp: CSV and JSON artifact writers
//
// All numbers are written with 17 significant digits so that a fixed
// configuration reproduces byte-identical files.

#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "dissichain/state.hpp"

namespace dissichain::io {

// Opens for writing (truncating), creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

// Throws IoError if the stream is bad after writing.
void finish(std::ofstream& os, const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Header "k,1,2,...,n", then one row per k.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

// Columns t, k, rho_kk, re_coh, im_coh, W, F, total_population; one row per
// (sample, site). W and F are real parts.
void write_site_series_csv(std::ostream& os, std::span<const double> times,
                           std::span<const SingleExcState> trajectory);

// Columns given by `header`; one row per entry of `rows`.
void write_table_csv(std::ostream& os, std::span<const std::string> header,
                     std::span<const std::vector<double>> rows);

} // namespace dissichain::io
