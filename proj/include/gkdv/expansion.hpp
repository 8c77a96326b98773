#pragma once

#include <map>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"

namespace gkdv {

// One term  c^l * w(y) * Qc^k(y_c)        (d = 0)
//        or c^l * w(y) * (Qc^k)'(y_c)     (d = 1)
// k is real to accommodate non-integer powers of the nonlinearity.
struct TermKey {
    long long kq = 0;  // k quantized at 2^-20
    int l = 0;
    int d = 0;
    auto operator<=>(const TermKey&) const = default;
};

double term_exponent(const TermKey& key);
TermKey make_key(double k, int l, int d);

// Finite sum of such terms with numeric coefficient profiles on a fixed
// y-grid. Products and derivatives close over the basis thanks to the
// profile identities (Qc^k)'' = c k^2 Qc^k - 2k(k-1) Qc^{k-2} F(Qc)
// - k f(Qc) Qc^{k-1} and Qc'^2 = c Qc^2 - 2F(Qc); both reductions expand
// f and F monomial by monomial. Terms beyond the retained exponent window
// only ever move further out, so dropping them is loss-free for the
// retained buckets.
class Expansion {
  public:
    Expansion(const Grid& grid, std::vector<Monomial> f_monomials,
              double k_max = 6.2, int l_max = 3);

    const Grid& grid() const { return grid_; }

    void add(double k, int l, int d, const std::vector<double>& w,
             double scale = 1.0);
    void add_constant(double k, int l, int d, double value);

    Expansion& operator+=(const Expansion& other);
    Expansion operator+(const Expansion& other) const;
    Expansion scaled(double s) const;
    Expansion times_profile(const std::vector<double>& w) const;
    Expansion shifted_l(int dl) const;  // multiply by c^dl

    Expansion product(const Expansion& other) const;
    Expansion power(int j) const;

    // d/dx and d/dt with y = x - alpha(y_c), alpha' = beta; beta is itself
    // an expansion (sum of a_{k,l} c^l Qc^k terms).
    Expansion dx(const Expansion& beta) const;
    Expansion dt(const Expansion& beta) const;

    // Coefficient profile of bucket (k, l, d); zeros when absent.
    std::vector<double> coefficient(double k, int l, int d) const;
    const std::map<TermKey, std::vector<double>>& terms() const {
        return terms_;
    }

  private:
    Expansion fresh() const;  // empty expansion with the same context
    void raise_d(double k, int l, const std::vector<double>& w, double scale,
                 Expansion& out) const;

    Grid grid_;
    std::vector<Monomial> fmono_;
    double k_max_;
    int l_max_;
    std::map<TermKey, std::vector<double>> terms_;
};

}  // namespace gkdv
