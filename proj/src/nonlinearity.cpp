#include "gkdv/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace gkdv {

namespace {
bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

double pow_signed(double s, double e) {
    if (is_integer(e)) {
        const int n = static_cast<int>(std::llround(e));
        double r = 1.0;
        double b = s;
        int k = n;
        for (; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return r;
    }
    if (s == 0.0) return 0.0;
    return (s < 0.0 ? -1.0 : 1.0) * std::pow(std::abs(s), e);
}
}  // namespace

Nonlinearity Nonlinearity::pure_power(int m) {
    if (m != 2 && m != 3)
        throw std::invalid_argument("pure_power: m must be 2 or 3");
    Nonlinearity nl;
    nl.m_ = m;
    nl.family_ = Family::PurePower;
    nl.monomials_ = {{1.0, static_cast<double>(m)}};
    return nl;
}

Nonlinearity Nonlinearity::gardner(double mu) {
    Nonlinearity nl;
    nl.m_ = 2;
    nl.mu_hat_ = mu;
    nl.p_ = 3.0;
    nl.family_ = Family::Gardner;
    nl.monomials_ = {{1.0, 2.0}, {-mu, 3.0}};
    return nl;
}

Nonlinearity Nonlinearity::epsilon_family(int m, double epsilon, double p,
                                          double mu_hat) {
    if (m != 2 && m != 3)
        throw std::invalid_argument("epsilon_family: m must be 2 or 3");
    if (p < 3.0)
        throw std::invalid_argument("epsilon_family: p must be at least 3");
    Nonlinearity nl;
    nl.m_ = m;
    nl.epsilon_ = epsilon;
    nl.p_ = p;
    nl.mu_hat_ = (m == 2) ? mu_hat : 0.0;
    nl.family_ = Family::EpsilonFamily;
    nl.monomials_.clear();
    if (m == 2) {
        nl.monomials_.push_back({1.0, 2.0});
        const double mu_eps =
            (mu_hat == 0.0 || p == 2.0)
                ? 0.0
                : mu_hat * pow_signed(epsilon, 1.0 / (p - 2.0));
        if (mu_eps != 0.0) nl.monomials_.push_back({mu_eps, 3.0});
        if (epsilon != 0.0) nl.monomials_.push_back({epsilon, p});
    } else {
        nl.monomials_.push_back({1.0, 3.0});
        if (epsilon != 0.0) nl.monomials_.push_back({epsilon, p});
    }
    return nl;
}

Nonlinearity Nonlinearity::custom(int m, std::vector<Monomial> monomials) {
    if (m != 2 && m != 3)
        throw std::invalid_argument("custom: m must be 2 or 3");
    Nonlinearity nl;
    nl.m_ = m;
    nl.family_ = Family::Custom;
    nl.monomials_ = std::move(monomials);
    return nl;
}

double Nonlinearity::cubic_coef() const {
    for (const auto& mo : monomials_)
        if (std::abs(mo.expo - 3.0) < 1e-12 && mo.expo != m_) return mo.coef;
    return 0.0;
}

double Nonlinearity::gardner_mu() const {
    if (m_ != 2) return 0.0;
    for (const auto& mo : monomials_)
        if (std::abs(mo.expo - 3.0) < 1e-12) return -mo.coef;
    return 0.0;
}

double Nonlinearity::f(double s, int order) const {
    if (order < 0 || order > 4)
        throw std::invalid_argument("f: derivative order must be 0..4");
    double acc = 0.0;
    for (const auto& mo : monomials_) {
        double c = mo.coef;
        double e = mo.expo;
        bool vanished = false;
        for (int k = 0; k < order; ++k) {
            if (std::abs(e) < 1e-12) { vanished = true; break; }
            c *= e;
            e -= 1.0;
        }
        if (vanished) continue;
        acc += c * pow_signed(s, e);
    }
    return acc;
}

double Nonlinearity::F(double s) const {
    double acc = 0.0;
    for (const auto& mo : monomials_)
        acc += mo.coef / (mo.expo + 1.0) * pow_signed(s, mo.expo + 1.0) *
               (is_integer(mo.expo) ? 1.0 : (s < 0 ? -1.0 : 1.0));
    return acc;
}

std::string Nonlinearity::to_json() const {
    nlohmann::json j;
    j["m"] = m_;
    j["epsilon"] = epsilon_;
    j["mu_hat"] = mu_hat_;
    j["p"] = p_;
    switch (family_) {
        case Family::PurePower: j["family"] = "pure_power"; break;
        case Family::Gardner: j["family"] = "gardner"; break;
        case Family::EpsilonFamily: j["family"] = "epsilon_family"; break;
        case Family::Custom: {
            j["family"] = "custom";
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& mo : monomials_)
                arr.push_back({{"coef", mo.coef}, {"expo", mo.expo}});
            j["monomials"] = arr;
            break;
        }
    }
    return j.dump();
}

Nonlinearity Nonlinearity::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "pure_power") return pure_power(j.at("m").get<int>());
    if (fam == "gardner") return gardner(j.at("mu_hat").get<double>());
    if (fam == "epsilon_family")
        return epsilon_family(j.at("m").get<int>(),
                              j.at("epsilon").get<double>(),
                              j.at("p").get<double>(),
                              j.value("mu_hat", 0.0));
    if (fam == "custom") {
        std::vector<Monomial> mos;
        for (const auto& e : j.at("monomials"))
            mos.push_back({e.at("coef").get<double>(),
                           e.at("expo").get<double>()});
        return custom(j.at("m").get<int>(), std::move(mos));
    }
    throw std::invalid_argument("nonlinearity: unknown family " + fam);
}

double eval_f(const Nonlinearity& nl, double s, int order) {
    return nl.f(s, order);
}

double primitive_F(const Nonlinearity& nl, double s) { return nl.F(s); }

}  // namespace gkdv
