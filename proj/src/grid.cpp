#include "gkdv/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gkdv {

namespace {
constexpr double kLocalizedThreshold = 1e-8;
}

Grid make_grid(double half_length, int n_points) {
    if (half_length <= 0.0)
        throw std::invalid_argument("make_grid: half_length must be positive");
    if (n_points < 16)
        throw std::invalid_argument("make_grid: need at least 16 points");
    Grid g;
    g.half_length = half_length;
    g.n_points = n_points;
    g.spacing = 2.0 * half_length / (n_points - 1);
    return g;
}

Profile make_profile(const Grid& g, const std::function<double(double)>& f,
                     Parity parity) {
    Profile p;
    p.grid = g;
    p.values.resize(g.n_points);
    for (int i = 0; i < g.n_points; ++i) p.values[i] = f(g.x(i));
    p.parity = parity;
    p.decay = classify_decay(g, p.values);
    return p;
}

Profile zero_profile(const Grid& g) {
    Profile p;
    p.grid = g;
    p.values.assign(g.n_points, 0.0);
    p.parity = Parity::Even;
    p.decay = Decay::Localized;
    return p;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const Profile& p) { return max_abs(p.values); }

Decay classify_decay(const Grid& g, const std::vector<double>& v) {
    (void)g;
    const double m = max_abs(v);
    if (m == 0.0) return Decay::Localized;
    const double edge = std::max(std::abs(v.front()), std::abs(v.back()));
    return edge < kLocalizedThreshold * m ? Decay::Localized : Decay::Bounded;
}

void retag(Profile& p) { p.decay = classify_decay(p.grid, p.values); }

double parity_defect(const Profile& p, Parity parity) {
    if (parity == Parity::None) return 0.0;
    const double s = parity == Parity::Even ? 1.0 : -1.0;
    double d = 0.0;
    const int n = p.size();
    for (int i = 0; i < n / 2; ++i)
        d = std::max(d, std::abs(p.values[i] - s * p.values[n - 1 - i]));
    return d;
}

void symmetrize(Profile& p, Parity parity) {
    if (parity == Parity::None) return;
    const double s = parity == Parity::Even ? 1.0 : -1.0;
    const int n = p.size();
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double a = 0.5 * (p.values[i] + s * p.values[j]);
        p.values[i] = a;
        p.values[j] = s * a;
    }
    if (parity == Parity::Odd && n % 2 == 1) p.values[n / 2] = 0.0;
    p.parity = parity;
}

namespace {
void require_same_grid(const Profile& a, const Profile& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("profile grids do not match");
}

Parity combine_add(Parity a, Parity b) { return a == b ? a : Parity::None; }
}  // namespace

Profile operator+(const Profile& a, const Profile& b) {
    require_same_grid(a, b);
    Profile r = a;
    for (int i = 0; i < r.size(); ++i) r.values[i] += b.values[i];
    r.parity = combine_add(a.parity, b.parity);
    retag(r);
    return r;
}

Profile operator-(const Profile& a, const Profile& b) {
    require_same_grid(a, b);
    Profile r = a;
    for (int i = 0; i < r.size(); ++i) r.values[i] -= b.values[i];
    r.parity = combine_add(a.parity, b.parity);
    retag(r);
    return r;
}

Profile operator*(double s, const Profile& a) {
    Profile r = a;
    for (double& v : r.values) v *= s;
    return r;
}

Profile pointwise(const Profile& a, const Profile& b,
                  const std::function<double(double, double)>& op) {
    require_same_grid(a, b);
    Profile r = a;
    for (int i = 0; i < r.size(); ++i)
        r.values[i] = op(a.values[i], b.values[i]);
    r.parity = Parity::None;
    retag(r);
    return r;
}

double simpson(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size());
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (v[0] + v[1]);
    int intervals = n - 1;
    double total = 0.0;
    int last = n - 1;
    if (intervals % 2 == 1) {
        // 3/8 rule on the final three cells keeps fourth order throughout.
        if (n >= 4) {
            total += 3.0 * h / 8.0 *
                     (v[n - 4] + 3.0 * v[n - 3] + 3.0 * v[n - 2] + v[n - 1]);
            last = n - 4;
        } else {
            total += 0.5 * h * (v[n - 2] + v[n - 1]);
            last = n - 2;
        }
    }
    double s = v[0] + v[last];
    for (int i = 1; i < last; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    total += h / 3.0 * s;
    return total;
}

double integrate(const Profile& p) {
    if (p.decay == Decay::Unbounded)
        throw std::domain_error("integrate: profile grows at the grid ends");
    return simpson(p.values, p.grid.spacing);
}

std::vector<double> fornberg_weights(double z, const std::vector<double>& xs,
                                     int m) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(
        xs.size(), std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) w[i] = c[i][m];
    return w;
}

Profile differentiate(const Profile& p, int order, int accuracy) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("differentiate: order must be 1, 2 or 3");
    if (accuracy != 4 && accuracy != 6 && accuracy != 8)
        throw std::invalid_argument("differentiate: accuracy must be 4, 6 or 8");
    const int n = p.size();
    const double h = p.grid.spacing;
    int stencil = order + accuracy;
    if (stencil % 2 == 0) ++stencil;
    const int half = stencil / 2;
    if (n < stencil)
        throw std::invalid_argument("differentiate: grid too small");

    Profile r = p;
    // Interior weights computed once (uniform grid).
    std::vector<double> xs(stencil);
    for (int k = 0; k < stencil; ++k) xs[k] = (k - half) * h;
    const std::vector<double> wc = fornberg_weights(0.0, xs, order);

    for (int i = 0; i < n; ++i) {
        int start = std::clamp(i - half, 0, n - stencil);
        double acc = 0.0;
        if (start == i - half) {
            for (int k = 0; k < stencil; ++k)
                acc += wc[k] * p.values[start + k];
        } else {
            std::vector<double> xl(stencil);
            for (int k = 0; k < stencil; ++k)
                xl[k] = (start + k - i) * h;
            const std::vector<double> wl = fornberg_weights(0.0, xl, order);
            for (int k = 0; k < stencil; ++k)
                acc += wl[k] * p.values[start + k];
        }
        r.values[i] = acc;
    }
    if (p.parity == Parity::Even)
        r.parity = (order % 2 == 1) ? Parity::Odd : Parity::Even;
    else if (p.parity == Parity::Odd)
        r.parity = (order % 2 == 1) ? Parity::Even : Parity::Odd;
    else
        r.parity = Parity::None;
    retag(r);
    return r;
}

namespace {
constexpr int kCellPts = 8;  // septic marching cells, eighth order

// Integral over one cell of the quintic through kCellPts nodes; offset is
// the index of the cell's left node within the window.
std::array<double, kCellPts> cell_weights(double h, int offset) {
    std::vector<double> t(kCellPts);
    for (int k = 0; k < kCellPts; ++k) t[k] = (k - offset) * h;
    std::array<double, kCellPts> w{};
    // Integrate each Lagrange basis polynomial over [0, h] by 8-pt Gauss.
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    auto accumulate = [&](double xq, double wq) {
        for (int j = 0; j < kCellPts; ++j) {
            double lj = 1.0;
            for (int k = 0; k < kCellPts; ++k)
                if (k != j) lj *= (xq - t[k]) / (t[j] - t[k]);
            w[j] += 0.5 * h * wq * lj;
        }
    };
    for (int q = 0; q < 4; ++q) {
        accumulate(0.5 * h * (1.0 + gx[q]), gw[q]);
        accumulate(0.5 * h * (1.0 - gx[q]), gw[q]);
    }
    return w;
}
}  // namespace

Profile cumulative_primitive(const Profile& p) {
    const int n = p.size();
    const double h = p.grid.spacing;
    Profile r = p;
    r.values.assign(n, 0.0);
    if (n < kCellPts)
        throw std::invalid_argument("cumulative_primitive: grid too small");

    std::array<std::array<double, kCellPts>, kCellPts - 1> weights;
    for (int off = 0; off < kCellPts - 1; ++off)
        weights[off] = cell_weights(h, off);
    double acc = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const int start = std::clamp(i - 3, 0, n - kCellPts);
        const auto& w = weights[i - start];
        double cell = 0.0;
        for (int k = 0; k < kCellPts; ++k) cell += w[k] * p.values[start + k];
        acc += cell;
        r.values[i + 1] = acc;
    }

    // Anchor the primitive at x = 0 (interpolated when 0 is between nodes).
    const double at_zero = interp_eval(r, 0.0);
    for (double& v : r.values) v -= at_zero;

    if (p.parity == Parity::Even) r.parity = Parity::Odd;
    else if (p.parity == Parity::Odd) r.parity = Parity::Even;
    else r.parity = Parity::None;
    retag(r);
    return r;
}

namespace {
double window_quadrature(const Profile& p, double a, double b,
                         const std::vector<double>& f2) {
    const Grid& g = p.grid;
    a = std::max(a, -g.half_length);
    b = std::min(b, g.half_length);
    if (a >= b) return 0.0;
    int i0 = static_cast<int>(std::ceil((a + g.half_length) / g.spacing - 1e-12));
    int i1 = static_cast<int>(std::floor((b + g.half_length) / g.spacing + 1e-12));
    i0 = std::clamp(i0, 0, g.n_points - 1);
    i1 = std::clamp(i1, 0, g.n_points - 1);
    if (i1 - i0 + 1 < 2) return 0.0;
    std::vector<double> sub(f2.begin() + i0, f2.begin() + i1 + 1);
    return simpson(sub, g.spacing);
}
}  // namespace

double h1_norm_window(const Profile& p, double a, double b, double c_weight) {
    if (c_weight < 0.0)
        throw std::invalid_argument("h1_norm: c_weight must be nonnegative");
    const Profile dp = differentiate(p, 1);
    std::vector<double> d2(p.size()), v2(p.size());
    for (int i = 0; i < p.size(); ++i) {
        d2[i] = dp.values[i] * dp.values[i];
        v2[i] = p.values[i] * p.values[i];
    }
    const double a1 = window_quadrature(p, a, b, d2);
    const double a0 = window_quadrature(p, a, b, v2);
    return std::sqrt(std::max(0.0, a1 + c_weight * a0));
}

double h1_norm(const Profile& p, std::optional<double> window, double c_weight) {
    double a = -p.grid.half_length;
    if (window) {
        if (*window >= p.grid.half_length)
            throw std::invalid_argument("h1_norm: window outside grid");
        a = *window;
    }
    return h1_norm_window(p, a, p.grid.half_length, c_weight);
}

double l2_norm(const Profile& p) {
    std::vector<double> v2(p.size());
    for (int i = 0; i < p.size(); ++i) v2[i] = p.values[i] * p.values[i];
    return std::sqrt(std::max(0.0, simpson(v2, p.grid.spacing)));
}

double interp_eval(const Profile& p, double y, double left_limit,
                   double right_limit) {
    const Grid& g = p.grid;
    if (y <= -g.half_length) return left_limit;
    if (y >= g.half_length) return right_limit;
    const int n = g.n_points;
    const int pts = std::min(12, n);
    int j = static_cast<int>(std::floor((y + g.half_length) / g.spacing));
    int start = std::clamp(j - pts / 2 + 1, 0, n - pts);
    // Barycentric Lagrange on a local uniform window.
    double num = 0.0, den = 0.0;
    double sign = 1.0;
    for (int k = 0; k < pts; ++k) {
        double wk = sign;
        for (int m = 1; m <= k; ++m) wk /= m;
        for (int m = 1; m <= pts - 1 - k; ++m) wk /= m;
        sign = -sign;
        const double dx = y - g.x(start + k);
        if (std::abs(dx) < 1e-14) return p.values[start + k];
        const double t = wk / dx;
        num += t * p.values[start + k];
        den += t;
    }
    return num / den;
}

double interp_eval(const Profile& p, double y) {
    return interp_eval(p, y, p.values.front(), p.values.back());
}

double tail_limit(const Profile& p, int side) {
    const int n = p.size();
    const int m = std::max(2, n / 100);
    double s = 0.0;
    if (side > 0)
        for (int i = n - m; i < n; ++i) s += p.values[i];
    else
        for (int i = 0; i < m; ++i) s += p.values[i];
    return s / m;
}

void write_csv(const std::string& path, const Profile& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "x,value\n";
    char buf[80];
    for (int i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x(i), p.values[i]);
        out << buf;
    }
}

Profile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        xs.push_back(std::stod(a));
        vs.push_back(std::stod(b));
    }
    if (xs.size() < 16) throw std::runtime_error("read_csv: too few rows");
    Profile p;
    p.grid = make_grid(std::abs(xs.front()), static_cast<int>(xs.size()));
    p.values = std::move(vs);
    retag(p);
    return p;
}

}  // namespace gkdv
