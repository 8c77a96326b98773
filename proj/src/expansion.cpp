#include "gkdv/expansion.hpp"

#include <cmath>
#include <stdexcept>

namespace gkdv {

namespace {
constexpr double kQuantum = 1048576.0;  // 2^20
}

double term_exponent(const TermKey& key) { return key.kq / kQuantum; }

TermKey make_key(double k, int l, int d) {
    return TermKey{static_cast<long long>(std::llround(k * kQuantum)), l, d};
}

Expansion::Expansion(const Grid& grid, std::vector<Monomial> f_monomials,
                     double k_max, int l_max)
    : grid_(grid), fmono_(std::move(f_monomials)), k_max_(k_max),
      l_max_(l_max) {}

Expansion Expansion::fresh() const {
    return Expansion(grid_, fmono_, k_max_, l_max_);
}

void Expansion::add(double k, int l, int d, const std::vector<double>& w,
                    double scale) {
    if (k > k_max_ || l > l_max_) return;  // only ever moves further out
    if (scale == 0.0) return;
    if (d == 1 && k < 0.5) return;  // (Qc^0)' vanishes
    const TermKey key = make_key(k, l, d);
    auto it = terms_.find(key);
    if (it == terms_.end())
        it = terms_.emplace(key, std::vector<double>(w.size())).first;
    std::vector<double>& dst = it->second;
    for (size_t i = 0; i < w.size(); ++i) dst[i] += scale * w[i];
}

void Expansion::add_constant(double k, int l, int d, double value) {
    std::vector<double> w(grid_.n_points, value);
    add(k, l, d, w);
}

Expansion& Expansion::operator+=(const Expansion& other) {
    for (const auto& [key, w] : other.terms_)
        add(term_exponent(key), key.l, key.d, w);
    return *this;
}

Expansion Expansion::operator+(const Expansion& other) const {
    Expansion r = *this;
    r += other;
    return r;
}

Expansion Expansion::scaled(double s) const {
    Expansion r = *this;
    for (auto& [key, w] : r.terms_)
        for (double& v : w) v *= s;
    return r;
}

Expansion Expansion::times_profile(const std::vector<double>& w) const {
    Expansion r = *this;
    for (auto& [key, v] : r.terms_)
        for (size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
    return r;
}

Expansion Expansion::shifted_l(int dl) const {
    Expansion r = fresh();
    for (const auto& [key, w] : terms_)
        r.add(term_exponent(key), key.l + dl, key.d, w);
    return r;
}

Expansion Expansion::product(const Expansion& other) const {
    Expansion r = fresh();
    for (const auto& [ka, wa] : terms_) {
        const double k1 = term_exponent(ka);
        for (const auto& [kb, wb] : other.terms_) {
            const double k2 = term_exponent(kb);
            const double k = k1 + k2;
            const int l = ka.l + kb.l;
            if (k > k_max_ || l > l_max_) continue;
            std::vector<double> w(wa.size());
            for (size_t i = 0; i < w.size(); ++i) w[i] = wa[i] * wb[i];
            if (ka.d == 0 && kb.d == 0) {
                r.add(k, l, 0, w);
            } else if (ka.d + kb.d == 1) {
                // Qc^a (Qc^b)' = (b/(a+b)) (Qc^{a+b})'
                const double kp = ka.d == 1 ? k1 : k2;
                r.add(k, l, 1, w, kp / k);
            } else {
                // (Qc^a)'(Qc^b)' = ab [c Qc^{a+b} - 2 Qc^{a+b-2} F(Qc)]
                const double ab = k1 * k2;
                r.add(k, l + 1, 0, w, ab);
                for (const auto& mo : fmono_)
                    r.add(k - 1.0 + mo.expo, l, 0, w,
                          -2.0 * ab * mo.coef / (mo.expo + 1.0));
            }
        }
    }
    return r;
}

Expansion Expansion::power(int j) const {
    if (j < 1) throw std::invalid_argument("expansion power needs j >= 1");
    Expansion r = *this;
    for (int i = 1; i < j; ++i) r = r.product(*this);
    return r;
}

// (Qc^k)'' = c k^2 Qc^k - 2k(k-1) Qc^{k-2} F(Qc) - k f(Qc) Qc^{k-1}
void Expansion::raise_d(double k, int l, const std::vector<double>& w,
                        double scale, Expansion& out) const {
    out.add(k, l + 1, 0, w, scale * k * k);
    for (const auto& mo : fmono_) {
        out.add(k - 1.0 + mo.expo, l, 0, w,
                -scale * 2.0 * k * (k - 1.0) * mo.coef / (mo.expo + 1.0));
        out.add(k - 1.0 + mo.expo, l, 0, w, -scale * k * mo.coef);
    }
}

Expansion Expansion::dx(const Expansion& beta) const {
    Expansion r = fresh();
    for (const auto& [key, w] : terms_) {
        const double k = term_exponent(key);
        Profile wp;
        wp.grid = grid_;
        wp.values = w;
        const std::vector<double> dw = differentiate(wp, 1, 8).values;
        // w'(y)(1 - beta)
        r.add(k, key.l, key.d, dw);
        Expansion piece = fresh();
        piece.add(k, key.l, key.d, dw);
        r += piece.product(beta).scaled(-1.0);
        // y_c derivative
        if (key.d == 0)
            r.add(k, key.l, 1, w);
        else
            raise_d(k, key.l, w, 1.0, r);
    }
    return r;
}

Expansion Expansion::dt(const Expansion& beta) const {
    Expansion r = fresh();
    for (const auto& [key, w] : terms_) {
        const double k = term_exponent(key);
        Profile wp;
        wp.grid = grid_;
        wp.values = w;
        const std::vector<double> dw = differentiate(wp, 1, 8).values;
        // -(1-c) beta w'(y)
        Expansion piece = fresh();
        piece.add(k, key.l, key.d, dw);
        Expansion bw = piece.product(beta);
        r += bw.scaled(-1.0);
        r += bw.shifted_l(1);
        // +(1-c) d/dy_c
        Expansion up = fresh();
        if (key.d == 0)
            up.add(k, key.l, 1, w);
        else
            raise_d(k, key.l, w, 1.0, up);
        r += up;
        r += up.shifted_l(1).scaled(-1.0);
    }
    return r;
}

std::vector<double> Expansion::coefficient(double k, int l, int d) const {
    const auto it = terms_.find(make_key(k, l, d));
    if (it == terms_.end()) return std::vector<double>(grid_.n_points, 0.0);
    return it->second;
}

}  // namespace gkdv
