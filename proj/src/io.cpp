// io.cpp: Artifact writers

#include "dissichain/io.hpp"

#include <iomanip>
#include <ostream>
#include <system_error>

#include "dissichain/errors.hpp"
#include "dissichain/single_excitation.hpp"

namespace dissichain::io {

std::ofstream open_output(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream os(path, std::ios::out | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << std::setprecision(17);
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path)
{
    os.flush();
    if (!os) throw IoError("write failed for " + path.string());
    os.close();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    auto os = open_output(path);
    os << j.dump(2) << '\n';
    finish(os, path);
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m)
{
    os << std::setprecision(17) << 'k';
    for (Eigen::Index l = 0; l < m.cols(); ++l) os << ',' << l + 1;
    os << '\n';
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        os << k + 1;
        for (Eigen::Index l = 0; l < m.cols(); ++l) os << ',' << m(k, l);
        os << '\n';
    }
}

void write_site_series_csv(std::ostream& os, std::span<const double> times,
                           std::span<const SingleExcState> trajectory)
{
    os << "t,k,rho_kk,re_coh,im_coh,W,F,total_population\n" << std::setprecision(17);
    for (std::size_t s = 0; s < trajectory.size(); ++s) {
        const auto& st = trajectory[s];
        const auto sums = conserved_sums(st);
        const double pop = total_population(st);
        for (int k = 0; k < st.n_sites(); ++k) {
            os << times[s] << ',' << k + 1 << ',' << st.rho(k, k).real() << ',' << st.coh(k).real() << ','
               << st.coh(k).imag() << ',' << sums.W.real() << ',' << sums.F.real() << ',' << pop << '\n';
        }
    }
}

void write_table_csv(std::ostream& os, std::span<const std::string> header,
                     std::span<const std::vector<double>> rows)
{
    os << std::setprecision(17);
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << '\n';
    }
}

} // namespace dissichain::io
