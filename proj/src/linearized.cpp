#include "gkdv/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {
// Simpson-type weights matching gkdv::simpson for the constraint row.
std::vector<double> quadrature_weights(int n, double h) {
    std::vector<double> w(n, 0.0);
    int last = n - 1;
    if ((n - 1) % 2 == 1 && n >= 4) {
        w[n - 4] += 3.0 * h / 8.0;
        w[n - 3] += 9.0 * h / 8.0;
        w[n - 2] += 9.0 * h / 8.0;
        w[n - 1] += 3.0 * h / 8.0;
        last = n - 4;
    }
    w[0] += h / 3.0;
    w[last] += h / 3.0;
    for (int i = 1; i < last; ++i) w[i] += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    return w;
}
}  // namespace

struct LinearizedOperator::Impl {
    Eigen::SparseMatrix<double> op;        // n x n operator with Dirichlet rows
    std::vector<double> qprime;            // kernel direction samples
    std::vector<double> qw;                // quadrature weights
    mutable std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>
        bordered_lu;
    mutable Eigen::SparseMatrix<double> bordered;

    void build(const Grid& g, const Profile& potential,
               const SolitonProfile& q) {
        // Eighth-order interior stencil: the inversion accuracy bounds the
        // cross-checks between the two defect pipelines, which must agree
        // to 1e-8; a fourth-order band leaves h^4-scale profile errors.
        const int n = g.n_points;
        const double h = g.spacing;
        const int half = 4;
        std::vector<double> xs(2 * half + 1);
        for (int k = 0; k <= 2 * half; ++k) xs[k] = (k - half) * h;
        const std::vector<double> d2 = fornberg_weights(0.0, xs, 2);

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve((2 * half + 2) * n);
        for (int i = 0; i < n; ++i) {
            if (i == 0 || i == n - 1) {
                trip.emplace_back(i, i, 1.0);
                continue;
            }
            const double d = 1.0 - potential.values[i];
            if (i >= half && i < n - half) {
                for (int k = 0; k <= 2 * half; ++k) {
                    double v = -d2[k];
                    if (k == half) v += d;
                    trip.emplace_back(i, i - half + k, v);
                }
            } else {
                // Narrow second-order rows next to the boundary, where the
                // profiles have decayed to the 1e-17 level.
                trip.emplace_back(i, i - 1, -1.0 / (h * h));
                trip.emplace_back(i, i, 2.0 / (h * h) + d);
                trip.emplace_back(i, i + 1, -1.0 / (h * h));
            }
        }
        op.resize(n, n);
        op.setFromTriplets(trip.begin(), trip.end());
        qprime.resize(n);
        for (int i = 0; i < n; ++i) qprime[i] = q.evaluator->deriv(g.x(i));
        qw = quadrature_weights(n, h);
    }

    void ensure_bordered() const {
        if (bordered_lu) return;
        const int n = op.rows();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(op.nonZeros() + 2 * n + 1);
        for (int k = 0; k < op.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(op, k); it;
                 ++it)
                trip.emplace_back(it.row(), it.col(), it.value());
        for (int i = 1; i < n - 1; ++i)
            trip.emplace_back(i, n, qprime[i]);
        for (int i = 0; i < n; ++i)
            if (qw[i] * qprime[i] != 0.0)
                trip.emplace_back(n, i, qw[i] * qprime[i]);
        bordered.resize(n + 1, n + 1);
        bordered.setFromTriplets(trip.begin(), trip.end());
        bordered_lu =
            std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        bordered_lu->compute(bordered);
        if (bordered_lu->info() != Eigen::Success)
            throw std::runtime_error("linearized operator: factorization failed");
    }
};

LinearizedOperator::LinearizedOperator(const Nonlinearity& nl, const Grid& grid)
    : nl_(nl), grid_(grid), impl_(std::make_unique<Impl>()) {
    q_ = soliton_profile(nl, 1.0, grid);
    potential_ = make_profile(
        grid, [&](double x) { return nl.f(q_.evaluator->value(x), 1); },
        Parity::Even);
    impl_->build(grid_, potential_, q_);
}

LinearizedOperator::~LinearizedOperator() = default;
LinearizedOperator::LinearizedOperator(LinearizedOperator&&) noexcept = default;
LinearizedOperator& LinearizedOperator::operator=(LinearizedOperator&&) noexcept =
    default;

Profile LinearizedOperator::apply(const Profile& w) const {
    Profile w2 = differentiate(w, 2);
    Profile r = w;
    for (int i = 0; i < r.size(); ++i)
        r.values[i] = -w2.values[i] + w.values[i] -
                      potential_.values[i] * w.values[i];
    if (w.parity != Parity::None) r.parity = w.parity;
    retag(r);
    return r;
}

Profile LinearizedOperator::invert(const Profile& h, Parity parity) const {
    if (!(h.grid == grid_))
        throw std::invalid_argument("invert: grid mismatch");
    const int n = grid_.n_points;
    double hq = 0.0;
    for (int i = 0; i < n; ++i)
        hq += impl_->qw[i] * h.values[i] * impl_->qprime[i];
    if (parity == Parity::Odd) {
        const double scale =
            std::max(1.0, max_abs(h)) * std::max(1.0, max_abs(impl_->qprime));
        if (std::abs(hq) > 1e-8 * scale)
            throw NotSolvableError(
                "invert: right-hand side is not orthogonal to the kernel");
    }
    impl_->ensure_bordered();
    Eigen::VectorXd rhs(n + 1);
    for (int i = 0; i < n; ++i) rhs[i] = h.values[i];
    rhs[0] = 0.0;
    rhs[n - 1] = 0.0;
    rhs[n] = 0.0;
    Eigen::VectorXd sol = impl_->bordered_lu->solve(rhs);
    Profile w = h;
    for (int i = 0; i < n; ++i) w.values[i] = sol[i];
    symmetrize(w, parity);
    retag(w);
    return w;
}

EigenPair LinearizedOperator::ground_state() const {
    const int n = grid_.n_points;
    // Trial close to the true ground state for power-type potentials.
    Profile trial = make_profile(
        grid_,
        [&](double x) {
            return std::pow(std::max(q_.evaluator->value(x), 0.0),
                            0.5 * (nl_.m() + 1));
        },
        Parity::Even);
    auto rayleigh = [&](const Profile& v) {
        const Profile lv = apply(v);
        std::vector<double> num(n), den(n);
        for (int i = 0; i < n; ++i) {
            num[i] = v.values[i] * lv.values[i];
            den[i] = v.values[i] * v.values[i];
        }
        return simpson(num, grid_.spacing) / simpson(den, grid_.spacing);
    };
    double shift = rayleigh(trial);
    if (shift >= 0.0) shift = -1.0;
    shift *= 2.0;

    Eigen::SparseMatrix<double> shifted = impl_->op;
    for (int i = 1; i < n - 1; ++i) shifted.coeffRef(i, i) -= shift;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("ground_state: factorization failed");

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = trial.values[i];
    double lambda_prev = 0.0;
    Profile chi = trial;
    for (int iter = 0; iter < 200; ++iter) {
        v = lu.solve(v);
        v /= v.norm();
        for (int i = 0; i < n; ++i) chi.values[i] = v[i];
        const double lambda = rayleigh(chi);
        if (iter > 2 && std::abs(lambda - lambda_prev) < 1e-14) break;
        lambda_prev = lambda;
    }
    symmetrize(chi, Parity::Even);
    double lambda = rayleigh(chi);
    if (lambda >= 0.0)
        throw SpectralAnomalyError(
            "ground_state: discretized operator has no negative eigenvalue");
    // Positive sign and unit L2 norm.
    double center = chi.values[n / 2];
    if (center < 0.0)
        for (double& x : chi.values) x = -x;
    const double nrm = l2_norm(chi);
    for (double& x : chi.values) x /= nrm;
    retag(chi);
    return EigenPair{-lambda, chi};
}

const Profile& LinearizedOperator::lambda_q_profile() const {
    if (!lambda_q_ready_) {
        // The family derivative solves L w = -Q. Invert for it so the
        // profile is smooth at solver precision (the c-difference route
        // leaves ~1e-12 point noise that high derivatives amplify), then
        // cross-check against differencing the family in c.
        Profile minus_q = -1.0 * q_.profile;
        Profile w = invert(minus_q, Parity::Even);
        const Profile by_family = gkdv::lambda_q(nl_, grid_);
        double diff = 0.0;
        for (int i = 0; i < grid_.n_points; ++i)
            diff = std::max(diff,
                            std::abs(w.values[i] - by_family.values[i]));
        if (diff > 1e-6)
            throw DegenerateFamilyError(
                "lambda_q: operator inverse and family derivative disagree");
        lambda_q_cache_ = std::move(w);
        lambda_q_ready_ = true;
    }
    return lambda_q_cache_;
}

const Profile& LinearizedOperator::phi() const {
    if (!phi_ready_) {
        phi_cache_ = resonance_phi(q_);
        phi_ready_ = true;
    }
    return phi_cache_;
}

Profile LinearizedOperator::apply_phi() const {
    // phi = -Q'/Q; phi'' expressed through the profile equation, so the
    // result carries no finite-difference error.
    Profile r = make_profile(
        grid_,
        [&](double x) {
            const double q = q_.evaluator->value(x);
            const double q1 = q_.evaluator->deriv(x);
            const double q2 = q_.evaluator->second(x);
            const double q3 = q_.evaluator->third(x);
            const double phi = -q1 / q;
            const double phi2 =
                -q3 / q + 3.0 * q1 * q2 / (q * q) - 2.0 * std::pow(q1 / q, 3);
            return -phi2 + phi - nl_.f(q, 1) * phi;
        },
        Parity::Odd);
    return r;
}

SpecialSolutions LinearizedOperator::special_solutions() const {
    const Profile& lq = lambda_q_profile();
    Profile xqp = make_profile(
        grid_, [&](double x) { return x * q_.evaluator->deriv(x); },
        Parity::Even);
    SpecialSolutions s;
    s.P = xqp;
    s.P_hat = xqp;
    for (int i = 0; i < grid_.n_points; ++i) {
        s.P.values[i] = -(xqp.values[i] + lq.values[i] + q_.profile.values[i]);
        s.P_hat.values[i] = -(xqp.values[i] + lq.values[i]);
    }
    retag(s.P);
    retag(s.P_hat);
    s.P.parity = Parity::Even;
    s.P_hat.parity = Parity::Even;
    s.P_bar = invert(potential_, Parity::Even);
    return s;
}

Profile resonance_phi(const SolitonProfile& q) {
    const Grid& g = q.profile.grid;
    for (int i = 0; i < g.n_points; ++i)
        if (!(q.profile.values[i] > 0.0))
            throw DivisionDomainError(
                "resonance_phi: profile touches zero on the grid");
    Profile r = make_profile(
        g,
        [&](double x) {
            return -q.evaluator->deriv(x) / q.evaluator->value(x);
        },
        Parity::Odd);
    r.decay = Decay::Bounded;
    return r;
}

}  // namespace gkdv
