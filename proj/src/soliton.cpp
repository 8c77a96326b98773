#include "gkdv/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

double SolitonEvaluator::deriv(double x) const {
    const double q = value(x);
    const double g = std::max(0.0, c_ * q * q - 2.0 * nl_.F(q));
    const double s = std::sqrt(g);
    return x <= 0.0 ? s : -s;
}

double SolitonEvaluator::second(double x) const {
    const double q = value(x);
    return c_ * q - nl_.f(q);
}

double SolitonEvaluator::third(double x) const {
    const double q = value(x);
    return (c_ - nl_.f(q, 1)) * deriv(x);
}

namespace {

class PowerSoliton final : public SolitonEvaluator {
  public:
    PowerSoliton(int m, double c)
        : SolitonEvaluator(Nonlinearity::pure_power(m), c), m_(m) {
        amp_ = std::pow(c, 1.0 / (m - 1)) *
               std::pow(0.5 * (m + 1), 1.0 / (m - 1));
    }
    double value(double x) const override {
        const double u = 0.5 * (m_ - 1) * std::sqrt(c_) * x;
        // sech^{2/(m-1)}: exact powers for m = 2, 3.
        const double sech = 1.0 / std::cosh(u);
        return m_ == 2 ? amp_ * sech * sech : amp_ * sech;
    }

  private:
    int m_;
    double amp_;
};

class GardnerSoliton final : public SolitonEvaluator {
  public:
    GardnerSoliton(double mu, double c)
        : SolitonEvaluator(Nonlinearity::gardner(mu), c) {
        const double disc = 1.0 - 4.5 * mu * c;
        if (disc <= 0.0)
            throw NoSolitonError(
                "gardner soliton: speed outside admissible range c < 2/(9 mu)");
        rho_ = std::sqrt(disc);
    }
    double value(double x) const override {
        return 3.0 * c_ / (1.0 + rho_ * std::cosh(std::sqrt(c_) * x));
    }

  private:
    double rho_;
};

// Inverts x(Q) = int_Q^{q*} dq / sqrt(c q^2 - 2F(q)). The substitution
// q = q* sin^2(theta) removes the square-root singularity at the apex; the
// table is log-spaced in theta so the far tail (Q/q* down to ~1e-18) is
// still resolved. Beyond the table the profile continues as a pure
// exponential with rate sqrt(c).
class TurningPointSoliton final : public SolitonEvaluator {
  public:
    TurningPointSoliton(const Nonlinearity& nl, double c)
        : SolitonEvaluator(nl, c) {
        qstar_ = find_turning_point();
        build_table();
    }

    double value(double x) const override {
        x = std::abs(x);
        if (x >= xs_.back())
            return tail_amp_ * std::exp(-std::sqrt(c_) * x);
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        size_t i = static_cast<size_t>(it - xs_.begin());
        // Quintic Lagrange through six neighboring table points.
        size_t s = i >= 3 ? i - 3 : 0;
        s = std::min(s, xs_.size() - 6);
        double acc = 0.0;
        for (size_t j = s; j < s + 6; ++j) {
            double lj = qs_[j];
            for (size_t k = s; k < s + 6; ++k)
                if (k != j) lj *= (x - xs_[k]) / (xs_[j] - xs_[k]);
            acc += lj;
        }
        return acc;
    }

    double deriv(double x) const override {
        // First integral with the apex root factored: the direct
        // c q^2 - 2F(q) cancels near the apex, and differentiating the
        // table is roundoff-rough; this form stays smooth in both regimes.
        const double q = value(x);
        const double d = qstar_ - q;
        if (d <= 0.0) return 0.0;
        const double G = root_factor(q);
        const double s = std::sqrt(std::max(0.0, d * G));
        return x <= 0.0 ? s : -s;
    }

    double amplitude() const { return qstar_; }

  private:
    double g(double q) const { return c_ * q * q - 2.0 * nl_.F(q); }

    double find_turning_point() const {
        // Smallest positive root of g; g > 0 near 0 because F(q) = o(q^2).
        double prev = 1e-8;
        if (g(prev) <= 0.0)
            throw NoSolitonError("turning point: g not positive near zero");
        const double factor = 1.01;
        double q = prev;
        for (int i = 0; i < 6000; ++i) {
            q *= factor;
            if (g(q) <= 0.0) {
                // Bisect [prev, q].
                double lo = prev, hi = q;
                for (int k = 0; k < 200; ++k) {
                    const double mid = 0.5 * (lo + hi);
                    if (g(mid) > 0.0) lo = mid; else hi = mid;
                }
                return 0.5 * (lo + hi);
            }
            prev = q;
        }
        throw NoSolitonError("turning point: no positive root of c q^2 - 2F(q)");
    }

    // dx = w dtheta with w = 2 sqrt(q*) sin(theta) / sqrt(G(q)) where
    // G = (c q^2 - 2F(q)) / (q* - q) carries the simple apex root
    // analytically, so the integrand is smooth and free of cancellation.
    double root_factor(double q) const {
        const double d = q - qstar_;
        if (std::abs(d) <= 0.25 * qstar_) {
            const double g1 = 2.0 * (c_ * qstar_ - nl_.f(qstar_));
            const double g2 = 2.0 * (c_ - nl_.f(qstar_, 1));
            const double g3 = -2.0 * nl_.f(qstar_, 2);
            const double g4 = -2.0 * nl_.f(qstar_, 3);
            const double g5 = -2.0 * nl_.f(qstar_, 4);
            return -(g1 + d * (0.5 * g2 +
                               d * (g3 / 6.0 +
                                    d * (g4 / 24.0 + d * g5 / 120.0))));
        }
        return g(q) / (qstar_ - q);
    }

    double integrand(double th) const {
        const double s = std::sin(th);
        const double q = qstar_ * s * s;
        double G = root_factor(q);
        if (G <= 0.0) G = 1e-300;
        return 2.0 * std::sqrt(qstar_) * s / std::sqrt(G);
    }

    double panel_integral(double a, double b) const {
        // 16-point Gauss-Legendre.
        static const double gx[8] = {0.0950125098376374, 0.2816035507792589,
                                     0.4580167776572274, 0.6178762444026438,
                                     0.7554044083550030, 0.8656312023878318,
                                     0.9445750230732326, 0.9894009349916499};
        static const double gw[8] = {0.1894506104550685, 0.1826034150449236,
                                     0.1691565193950025, 0.1495959888165767,
                                     0.1246289712555339, 0.0951585116824928,
                                     0.0622535239386479, 0.0271524594117541};
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 8; ++i) {
            acc += gw[i] * (integrand(mid + half * gx[i]) +
                            integrand(mid - half * gx[i]));
        }
        return acc * half;
    }

    void build_table() {
        const double theta_min = 1e-9;
        const int n_log = 10000, n_lin = 8000;
        thetas_.clear();
        const double theta_split = 0.7853981633974483;  // pi/4
        const double ratio = std::pow(theta_split / theta_min, 1.0 / n_log);
        double th = theta_min;
        for (int i = 0; i <= n_log; ++i) {
            thetas_.push_back(th);
            th *= ratio;
        }
        const double half_pi = 1.5707963267948966;
        for (int i = 1; i <= n_lin; ++i)
            thetas_.push_back(theta_split +
                              (half_pi - theta_split) * i / double(n_lin));
        std::reverse(thetas_.begin(), thetas_.end());  // pi/2 -> theta_min
        xs_.assign(thetas_.size(), 0.0);
        qs_.assign(thetas_.size(), 0.0);
        qs_[0] = qstar_;
        for (size_t i = 1; i < thetas_.size(); ++i) {
            xs_[i] = xs_[i - 1] + panel_integral(thetas_[i], thetas_[i - 1]);
            const double s = std::sin(thetas_[i]);
            qs_[i] = qstar_ * s * s;
        }
        tail_amp_ = qs_.back() * std::exp(std::sqrt(c_) * xs_.back());
    }

    double qstar_ = 0.0;
    double tail_amp_ = 0.0;
    std::vector<double> thetas_;  // decreasing from pi/2
    std::vector<double> xs_;      // increasing from 0
    std::vector<double> qs_;      // profile values at xs_
};

}  // namespace

SolitonPtr power_soliton(int m, double c) {
    if (c <= 0.0) throw std::invalid_argument("soliton: c must be positive");
    return std::make_shared<PowerSoliton>(m, c);
}

SolitonPtr gardner_soliton(double mu, double c) {
    if (c <= 0.0) throw std::invalid_argument("soliton: c must be positive");
    return std::make_shared<GardnerSoliton>(mu, c);
}

SolitonPtr turning_point_soliton(const Nonlinearity& nl, double c) {
    if (c <= 0.0) throw std::invalid_argument("soliton: c must be positive");
    return std::make_shared<TurningPointSoliton>(nl, c);
}

SolitonPtr make_soliton_evaluator(const Nonlinearity& nl, double c) {
    if (c <= 0.0) throw std::invalid_argument("soliton: c must be positive");
    switch (nl.family()) {
        case Family::PurePower:
            return power_soliton(nl.m(), c);
        case Family::Gardner:
            return gardner_soliton(nl.gardner_mu(), c);
        case Family::EpsilonFamily:
            if (nl.epsilon() == 0.0) {
                if (nl.m() == 3 || nl.cubic_coef() == 0.0)
                    return power_soliton(nl.m(), c);
                return gardner_soliton(-nl.cubic_coef(), c);
            }
            return turning_point_soliton(nl, c);
        case Family::Custom:
        default:
            return turning_point_soliton(nl, c);
    }
}

SolitonProfile soliton_profile(const Nonlinearity& nl, double c,
                               const Grid& grid) {
    SolitonProfile sp;
    sp.evaluator = make_soliton_evaluator(nl, c);
    sp.c = c;
    sp.nl = nl;
    sp.profile = make_profile(
        grid, [&](double x) { return sp.evaluator->value(x); }, Parity::Even);
    sp.amplitude = sp.evaluator->value(0.0);
    return sp;
}

Grid default_grid(double c, int n_points) {
    return make_grid(40.0 / std::sqrt(c), n_points);
}

Profile lambda_q(const Nonlinearity& nl, const Grid& grid) {
    if (stability_derivative(nl, 1.0) <= 0.0)
        throw DegenerateFamilyError(
            "lambda_q: mass is not increasing along the family at c=1");
    const double h = 1e-4;
    const SolitonPtr qp1 = make_soliton_evaluator(nl, 1.0 + h);
    const SolitonPtr qm1 = make_soliton_evaluator(nl, 1.0 - h);
    const SolitonPtr qp2 = make_soliton_evaluator(nl, 1.0 + 2.0 * h);
    const SolitonPtr qm2 = make_soliton_evaluator(nl, 1.0 - 2.0 * h);
    Profile r = make_profile(
        grid,
        [&](double x) {
            return (8.0 * (qp1->value(x) - qm1->value(x)) -
                    (qp2->value(x) - qm2->value(x))) /
                   (12.0 * h);
        },
        Parity::Even);
    return r;
}

double soliton_power_integral(const Nonlinearity& nl, double c, double k) {
    const SolitonPtr q = make_soliton_evaluator(nl, c);
    const Grid g = default_grid(c, 4096);
    const Profile pk = make_profile(
        g, [&](double x) { return std::pow(q->value(x), k); }, Parity::Even);
    return integrate(pk);
}

double stability_derivative(const Nonlinearity& nl, double c) {
    if (c <= 0.0) throw std::invalid_argument("stability_derivative: c > 0");
    const double h = std::min(1e-4, 0.5 * c * 1e-2);
    auto mass = [&](double cc) {
        return soliton_power_integral(nl, cc, 2.0);
    };
    double mp1, mm1, mp2, mm2;
    try {
        mp1 = mass(c + h);
        mm1 = mass(c - h);
        mp2 = mass(c + 2.0 * h);
        mm2 = mass(c - 2.0 * h);
    } catch (const NoSolitonError&) {
        throw std::invalid_argument(
            "stability_derivative: family not defined on both sides of c");
    }
    return (8.0 * (mp1 - mm1) - (mp2 - mm2)) / (12.0 * h);
}

}  // namespace gkdv
