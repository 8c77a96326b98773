#include "gkdv/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

// Uniform samples of an even or odd function on [0, xmax], evaluated
// through |y| and the parity sign so mirrored arguments give bit-equal
// magnitudes. Beyond the table the value settles to a constant limit or an
// exponential tail.
class HalfTable {
  public:
    HalfTable() = default;
    HalfTable(const std::function<double(double)>& fn, double xmax, double h,
              Parity parity, double limit, double exp_rate = 0.0)
        : h_(h), parity_(parity), limit_(limit), rate_(exp_rate) {
        const int n = static_cast<int>(std::ceil(xmax / h)) + 1;
        v_.resize(n);
        for (int i = 0; i < n; ++i) v_[i] = fn(i * h);
        if (rate_ > 0.0)
            tail_amp_ = v_.back() * std::exp(rate_ * (n - 1) * h_);
    }

    double operator()(double y) const {
        const double a = std::abs(y);
        const double s = (parity_ == Parity::Odd && y < 0.0) ? -1.0 : 1.0;
        const int n = static_cast<int>(v_.size());
        const int pts = 12;
        if (a >= (n - 1) * h_) {
            if (rate_ > 0.0) return s * tail_amp_ * std::exp(-rate_ * a);
            return s * limit_;
        }
        int j = static_cast<int>(a / h_);
        int start = std::clamp(j - pts / 2 + 1, 0, n - pts);
        double num = 0.0, den = 0.0, sign = 1.0;
        for (int k = 0; k < pts; ++k) {
            double wk = sign;
            for (int m = 1; m <= k; ++m) wk /= m;
            for (int m = 1; m <= pts - 1 - k; ++m) wk /= m;
            sign = -sign;
            const double dx = a - (start + k) * h_;
            if (std::abs(dx) < 1e-15) return s * v_[start + k];
            const double t = wk / dx;
            num += t * v_[start + k];
            den += t;
        }
        return s * num / den;
    }

  private:
    std::vector<double> v_;
    double h_ = 1.0;
    Parity parity_ = Parity::Even;
    double limit_ = 0.0;
    double rate_ = 0.0;
    double tail_amp_ = 0.0;
};

}  // namespace

struct ApproxSolution::Tables {
    SolitonPtr qc;
    SolitonPtr q1;
    HalfTable q;       // big soliton
    HalfTable qc_tab;  // small soliton
    std::vector<std::tuple<int, int, HalfTable, HalfTable>> pairs;  // A, B
    HalfTable pbar;
    std::vector<std::pair<double, HalfTable>> alpha_parts;  // int_0^s Qc^k
};

ApproxSolution::~ApproxSolution() = default;
ApproxSolution::ApproxSolution(ApproxSolution&&) noexcept = default;

ApproxSolution::ApproxSolution(CascadeSolution cascade, double c,
                               ApproxVariant variant)
    : cascade_(std::move(cascade)), c_(c), variant_(variant) {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("approx: need 0 < c < 1");
    for (const SigmaIndex idx : sigma_indices(cascade_.nl.m()))
        if (!cascade_.has(idx.k, idx.l))
            throw OrderViolationError("approx: cascade is not fully solved");
    t_c_ = std::pow(c_, -0.5 - 0.01);

    tables_ = std::make_unique<Tables>();
    Tables& tb = *tables_;
    tb.qc = make_soliton_evaluator(cascade_.nl, c_);
    tb.q1 = cascade_.op->base_soliton().evaluator;

    const double sqc = std::sqrt(c_);
    const double reach = (1.0 - c_) * 2.2 * t_c_ + 60.0 / sqc + 80.0;
    tb.q = HalfTable([&](double x) { return tb.q1->value(x); }, 60.0, 0.01,
                     Parity::Even, 0.0, 1.0);
    tb.qc_tab = HalfTable([&](double x) { return tb.qc->value(x); }, reach,
                          0.01 / sqc, Parity::Even, 0.0, sqc);

    const Grid& cg = cascade_.grid;
    const double hy = cg.spacing;
    for (const auto& [kl, sol] : cascade_.solutions) {
        HalfTable at([&](double y) { return interp_eval(sol.A, y); },
                     cg.half_length - 2.0 * hy, hy, Parity::Even, sol.gamma);
        HalfTable bt([&](double y) { return interp_eval(sol.B, y); },
                     cg.half_length - 2.0 * hy, hy, Parity::Odd, sol.b);
        tb.pairs.emplace_back(kl.first, kl.second, std::move(at),
                              std::move(bt));
    }
    tb.pbar = HalfTable(
        [&](double y) { return interp_eval(cascade_.specials->P_bar, y); },
        cg.half_length - 2.0 * hy, hy, Parity::Even, 0.0);

    // Cumulative primitives of Qc^k feeding the shift function alpha.
    std::vector<double> ks;
    for (const auto& [kl, sol] : cascade_.solutions)
        if (std::find(ks.begin(), ks.end(), double(kl.first)) == ks.end())
            ks.push_back(kl.first);
    const double smax = 60.0 / sqc;
    const Grid sg = make_grid(smax, (1 << 15) + 1);
    for (double k : ks) {
        Profile pk = make_profile(
            sg, [&](double s) { return std::pow(tb.qc->value(s), k); },
            Parity::Even);
        Profile prim = cumulative_primitive(pk);
        const double limit = prim.values.back();
        HalfTable tab([&](double s) { return interp_eval(prim, s); }, smax,
                      sg.spacing, Parity::Odd, limit);
        tb.alpha_parts.emplace_back(k, std::move(tab));
    }
}

double ApproxSolution::defect_value() const { return cascade_.d_epsilon; }

std::pair<double, double> ApproxSolution::beta_alpha(double s) const {
    double beta = 0.0, alpha = 0.0;
    for (const auto& [kl, sol] : cascade_.solutions) {
        const double cl = std::pow(c_, kl.second);
        beta += sol.a * cl *
                std::pow(tables_->qc_tab(s), double(kl.first));
        for (const auto& [k, tab] : tables_->alpha_parts)
            if (k == double(kl.first)) {
                alpha += sol.a * cl * tab(s);
                break;
            }
    }
    return {beta, alpha};
}

double ApproxSolution::value(double t, double x) const {
    const Tables& tb = *tables_;
    const double yc = x + (1.0 - c_) * t;
    double alpha = 0.0;
    for (const auto& [kl, sol] : cascade_.solutions) {
        const double cl = std::pow(c_, kl.second);
        for (const auto& [k, tab] : tb.alpha_parts)
            if (k == double(kl.first)) {
                alpha += sol.a * cl * tab(yc);
                break;
            }
    }
    const double y = x - alpha;
    const double qc_yc = tb.qc_tab(yc);
    // Derivative of Qc through the first integral; odd in yc.
    const double g =
        std::max(0.0, c_ * qc_yc * qc_yc - 2.0 * cascade_.nl.F(qc_yc));
    const double qc_p = (yc <= 0.0 ? 1.0 : -1.0) * std::sqrt(g);

    double u = tb.q(y) + qc_yc;
    for (const auto& [kidx, lidx, at, btab] : tb.pairs) {
        const double cl = std::pow(c_, lidx);
        const double qk = std::pow(qc_yc, kidx);
        const double qk_p = kidx * std::pow(qc_yc, kidx - 1) * qc_p;
        u += cl * (qk * at(y) + qk_p * btab(y));
    }
    if (variant_ == ApproxVariant::Modified)
        u += -cascade_.d_epsilon * (2.0 * qc_yc * qc_p) * (1.0 + tb.pbar(y));
    return u;
}

Profile ApproxSolution::eval(double t, const Grid& grid) const {
    if (std::abs(t) > 2.0 * t_c_ + 1e-9)
        throw std::invalid_argument(
            "approx eval: time outside the modeled window |t| <= 2 Tc");
    Profile p;
    p.grid = grid;
    p.values.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
        p.values[i] = value(t, grid.x(i));
    p.parity = Parity::None;
    retag(p);
    return p;
}

ShiftObservables ApproxSolution::shifts() const {
    ShiftObservables s;
    for (const auto& [kl, sol] : cascade_.solutions) {
        const double cl = std::pow(c_, kl.second);
        for (const auto& [k, tab] : tables_->alpha_parts)
            if (k == double(kl.first)) {
                s.delta1 += sol.a * cl * 2.0 * tab(1e18);
                break;
            }
    }
    const double b10 = cascade_.at(1, 0).b;
    s.delta2 =
        2.0 * (b10 + (cascade_.delta_m2 ? c_ * cascade_.b_tilde_11 : 0.0));
    return s;
}

Profile residual_S(const Nonlinearity& nl,
                   const std::function<Profile(double)>& u_of_t, double t,
                   double delta_t) {
    const Profile up = u_of_t(t + delta_t);
    const Profile um = u_of_t(t - delta_t);
    const Profile uc = u_of_t(t);
    const int n = uc.size();

    Profile fu = uc;
    for (int i = 0; i < n; ++i) fu.values[i] = nl.f(uc.values[i]);
    Profile uxx = differentiate(uc, 2, 6);
    Profile inner = uc;
    for (int i = 0; i < n; ++i)
        inner.values[i] = uxx.values[i] - uc.values[i] + fu.values[i];
    Profile s = differentiate(inner, 1, 6);
    for (int i = 0; i < n; ++i)
        s.values[i] += (up.values[i] - um.values[i]) / (2.0 * delta_t);
    retag(s);
    return s;
}

double residual_h1_max(const ApproxSolution& approx, const Grid& grid,
                       int n_times) {
    const double tc = approx.interaction_time();
    const double dt = 1e-5 * tc;
    auto u_of_t = [&](double t) { return approx.eval(t, grid); };
    double worst = 0.0;
    for (int i = 0; i < n_times; ++i) {
        const double t = -tc + 2.0 * tc * i / (n_times - 1);
        const Profile s = residual_S(approx.cascade().nl, u_of_t, t, dt);
        worst = std::max(worst, h1_norm(s, {}, 1.0));
    }
    return worst;
}

Grid approx_eval_grid(double c, double target_spacing) {
    const double tc = std::pow(c, -0.51);
    const double half = (1.0 - c) * tc + 30.0 / std::sqrt(c) + 30.0;
    int n = static_cast<int>(std::ceil(2.0 * half / target_spacing));
    if (n % 2 == 0) ++n;  // put x = 0 on a node
    return make_grid(half, n);
}

}  // namespace gkdv
