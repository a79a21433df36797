// state.cpp: SingleExcState helpers

#include "dissichain/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dissichain {

SingleExcState SingleExcState::zero(int n_sites)
{
    SingleExcState s;
    s.rho = Eigen::MatrixXcd::Zero(n_sites, n_sites);
    s.coh = Eigen::VectorXcd::Zero(n_sites);
    s.vac = 0.0;
    return s;
}

double hermiticity_defect(const SingleExcState& s)
{
    return (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
}

double trace_defect(const SingleExcState& s)
{
    return std::abs(s.rho.trace().real() + s.vac - 1.0);
}

double sup_distance(const SingleExcState& a, const SingleExcState& b)
{
    if (a.rho.rows() != b.rho.rows() || a.coh.size() != b.coh.size()) {
        throw std::invalid_argument("sup_distance: dimension mismatch");
    }
    double d = (a.rho - b.rho).cwiseAbs().maxCoeff();
    if (a.coh.size() > 0) d = std::max(d, (a.coh - b.coh).cwiseAbs().maxCoeff());
    return std::max(d, std::abs(a.vac - b.vac));
}

} // namespace dissichain
