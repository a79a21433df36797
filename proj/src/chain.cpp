// chain.cpp: Chain geometry, rate profile and initial-state construction

#include "dissichain/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dissichain {

namespace {

constexpr double kNormTolerance = 1e-10;

void require_site(const ChainSpec& spec, int site, const char* what)
{
    if (site < 1 || site > spec.n_sites) {
        throw std::out_of_range(std::string(what) + ": site " + std::to_string(site) +
                                " outside [1, " + std::to_string(spec.n_sites) + "]");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

void ChainSpec::validate() const
{
    if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites must be >= 2");
    if (!(gamma > 0.0)) throw std::invalid_argument("ChainSpec: gamma must be > 0");
    if (!(lattice_a > 0.0)) throw std::invalid_argument("ChainSpec: lattice_a must be > 0");
}

ChainSpec make_chain(int n_sites, double gamma, double lattice_a)
{
    ChainSpec spec{n_sites, gamma, lattice_a};
    spec.validate();
    return spec;
}

double gamma_profile(const ChainSpec& spec, int j)
{
    return (j >= 1 && j <= spec.n_sites - 1) ? spec.gamma : 0.0;
}

BondRates bond_rates(const ChainSpec& spec)
{
    BondRates r;
    r.right.resize(static_cast<std::size_t>(spec.n_sites));
    r.left.resize(static_cast<std::size_t>(spec.n_sites));
    for (int k = 1; k <= spec.n_sites; ++k) {
        r.right[k - 1] = gamma_profile(spec, k);
        r.left[k - 1] = gamma_profile(spec, k - 1);
    }
    return r;
}

std::vector<double> binomial_amplitudes(int m)
{
    if (m < 0) throw std::invalid_argument("binomial_amplitudes: m must be >= 0");
    std::vector<double> f(static_cast<std::size_t>(m) + 1);
    // Pascal row built multiplicatively; exact in double up to m ~ 50.
    f[0] = 1.0;
    for (int i = 1; i <= m; ++i) f[i] = f[i - 1] * static_cast<double>(m - i + 1) / i;
    double norm2 = 0.0;
    for (double x : f) norm2 += x * x;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : f) x *= inv;
    return f;
}

void validate_initial(const ChainSpec& spec, const InitialStateSpec& init)
{
    std::visit(overloaded{
                   [&](const init::SingleSite& s) { require_site(spec, s.site, "single_site"); },
                   [&](const init::EntangledPair& s) {
                       require_site(spec, s.site, "entangled_pair");
                       require_site(spec, s.site + 1, "entangled_pair");
                       if (s.sign != 1 && s.sign != -1) {
                           throw std::invalid_argument("entangled_pair: sign must be +1 or -1");
                       }
                   },
                   [&](const init::Binomial& s) {
                       if (s.m < 0) throw std::invalid_argument("binomial: m must be >= 0");
                       require_site(spec, s.site, "binomial");
                       if (s.site + s.m > spec.n_sites) {
                           throw std::out_of_range("binomial: k + m exceeds n_sites");
                       }
                   },
                   [&](const init::Custom& s) {
                       if (static_cast<int>(s.amplitudes.size()) != spec.n_sites) {
                           throw std::invalid_argument("custom: amplitude count must equal n_sites");
                       }
                       double norm2 = std::norm(s.vacuum);
                       for (const auto& a : s.amplitudes) norm2 += std::norm(a);
                       if (std::abs(norm2 - 1.0) > kNormTolerance) {
                           throw std::invalid_argument("custom: amplitudes are not normalized");
                       }
                   },
                   [&](const init::StationaryMixture& s) {
                       if (!(s.W >= 0.0 && s.W <= spec.n_sites)) {
                           throw std::invalid_argument("stationary_mixture: W must lie in [0, n_sites]");
                       }
                   },
               },
               init);
}

std::vector<cplx> initial_amplitudes(const ChainSpec& spec, const InitialStateSpec& init)
{
    validate_initial(spec, init);
    std::vector<cplx> amp(static_cast<std::size_t>(spec.n_sites), cplx{0.0, 0.0});
    std::visit(overloaded{
                   [&](const init::SingleSite& s) { amp[s.site - 1] = 1.0; },
                   [&](const init::EntangledPair& s) {
                       const double h = 1.0 / std::sqrt(2.0);
                       amp[s.site - 1] = h;
                       amp[s.site] = s.sign * h;
                   },
                   [&](const init::Binomial& s) {
                       const auto f = binomial_amplitudes(s.m);
                       for (int i = 0; i <= s.m; ++i) amp[s.site - 1 + i] = (i % 2 == 0 ? 1.0 : -1.0) * f[i];
                   },
                   [&](const init::Custom& s) { amp = s.amplitudes; },
                   [&](const init::StationaryMixture&) { amp.clear(); },
               },
               init);
    return amp;
}

SingleExcState build_initial_single(const ChainSpec& spec, const InitialStateSpec& init)
{
    spec.validate();
    const int n = spec.n_sites;
    SingleExcState s = SingleExcState::zero(n);

    if (const auto* mix = std::get_if<init::StationaryMixture>(&init)) {
        validate_initial(spec, init);
        const double element = mix->W / (static_cast<double>(n) * n);
        s.rho.setConstant(cplx{element, 0.0});
        s.vac = 1.0 - mix->W / n;
        return s;
    }

    const auto amp = initial_amplitudes(spec, init);
    Eigen::Map<const Eigen::VectorXcd> phi(amp.data(), n);
    s.rho = phi * phi.adjoint();
    if (const auto* custom = std::get_if<init::Custom>(&init)) {
        s.coh = phi * std::conj(custom->vacuum);
        s.vac = std::norm(custom->vacuum);
    }
    return s;
}

SingleExcState stationary_state(const ChainSpec& spec)
{
    spec.validate();
    const int n = spec.n_sites;
    SingleExcState s = SingleExcState::zero(n);
    s.rho.setConstant(cplx{1.0 / n, 0.0});
    return s;
}

nlohmann::json to_json(const InitialStateSpec& init)
{
    using nlohmann::json;
    auto pair = [](cplx z) { return json::array({z.real(), z.imag()}); };
    return std::visit(overloaded{
                          [](const init::SingleSite& s) { return json{{"kind", "single_site"}, {"site", s.site}}; },
                          [](const init::EntangledPair& s) {
                              return json{{"kind", "entangled_pair"}, {"site", s.site}, {"sign", s.sign > 0 ? "+" : "-"}};
                          },
                          [](const init::Binomial& s) { return json{{"kind", "binomial"}, {"site", s.site}, {"m", s.m}}; },
                          [&](const init::Custom& s) {
                              json amps = json::array();
                              for (const auto& a : s.amplitudes) amps.push_back(pair(a));
                              return json{{"kind", "custom"}, {"amplitudes", amps}, {"vacuum", pair(s.vacuum)}};
                          },
                          [](const init::StationaryMixture& s) { return json{{"kind", "stationary_mixture"}, {"W", s.W}}; },
                      },
                      init);
}

InitialStateSpec initial_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("initial state record needs a \"kind\" field");
    }
    auto to_cplx = [](const nlohmann::json& p) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
        return cplx{p[0].get<double>(), p[1].get<double>()};
    };
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "single_site") return init::SingleSite{j.at("site").get<int>()};
    if (kind == "entangled_pair") {
        int sign = +1;
        if (j.contains("sign")) {
            const auto& sg = j.at("sign");
            if (sg.is_string()) {
                const auto str = sg.get<std::string>();
                if (str == "+") sign = +1;
                else if (str == "-") sign = -1;
                else throw std::invalid_argument("entangled_pair: sign must be \"+\" or \"-\"");
            } else {
                sign = sg.get<int>();
            }
        }
        return init::EntangledPair{j.at("site").get<int>(), sign};
    }
    if (kind == "binomial") return init::Binomial{j.at("site").get<int>(), j.at("m").get<int>()};
    if (kind == "custom") {
        init::Custom c;
        for (const auto& p : j.at("amplitudes")) c.amplitudes.push_back(to_cplx(p));
        if (j.contains("vacuum")) c.vacuum = to_cplx(j.at("vacuum"));
        return c;
    }
    if (kind == "stationary_mixture") return init::StationaryMixture{j.at("W").get<double>()};
    throw std::invalid_argument("unknown initial state kind: " + kind);
}

} // namespace dissichain
