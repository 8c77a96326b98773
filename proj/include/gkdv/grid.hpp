#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gkdv {

enum class Parity { Even, Odd, None };
enum class Decay { Localized, Bounded, Unbounded };

// Uniform symmetric grid on [-half_length, half_length], both endpoints
// included. x=0 is a node exactly when n_points is odd.
struct Grid {
    double half_length = 0.0;
    int n_points = 0;
    double spacing = 0.0;

    // Centered form keeps mirrored nodes bit-exact negatives of each other.
    double x(int i) const { return spacing * (i - 0.5 * (n_points - 1)); }
    int mirror(int i) const { return n_points - 1 - i; }
    bool operator==(const Grid& o) const {
        return n_points == o.n_points && half_length == o.half_length;
    }
};

Grid make_grid(double half_length, int n_points);

// Real-valued function sampled on a Grid, tagged with its symmetry and
// decay class. Values are immutable by convention; all operations return
// fresh profiles.
struct Profile {
    Grid grid;
    std::vector<double> values;
    Parity parity = Parity::None;
    Decay decay = Decay::Bounded;

    int size() const { return grid.n_points; }
    double x(int i) const { return grid.x(i); }
};

Profile make_profile(const Grid& g, const std::function<double(double)>& f,
                     Parity parity = Parity::None);
Profile zero_profile(const Grid& g);

double max_abs(const Profile& p);
double max_abs(const std::vector<double>& v);

// Relative endpoint magnitude; below 1e-8 classifies as localized.
Decay classify_decay(const Grid& g, const std::vector<double>& v);
void retag(Profile& p);  // re-derive decay tag from the samples

// Largest deviation from even/odd symmetry across mirrored nodes.
double parity_defect(const Profile& p, Parity parity);
void symmetrize(Profile& p, Parity parity);

// Pointwise arithmetic (grids must match).
Profile operator+(const Profile& a, const Profile& b);
Profile operator-(const Profile& a, const Profile& b);
Profile operator*(double s, const Profile& a);
Profile pointwise(const Profile& a, const Profile& b,
                  const std::function<double(double, double)>& op);

// Composite Simpson over the full grid. Throws std::domain_error when the
// profile is tagged Unbounded.
double integrate(const Profile& p);
double simpson(const std::vector<double>& v, double h);

// x -> integral of p from 0 to x, fourth order, exact zero at x=0.
// Parity flips; an odd input yields an even primitive and vice versa.
Profile cumulative_primitive(const Profile& p);

// Central fourth-order differences, lopsided at the ends; order in {1,2,3}.
// accuracy in {4,6,8} widens the stencil for internal high-precision use.
Profile differentiate(const Profile& p, int order, int accuracy = 4);

// (int_W p'^2 + c_weight int_W p^2)^{1/2} with W the half line x > *window
// or the whole grid when window is empty.
double h1_norm(const Profile& p, std::optional<double> window = {},
               double c_weight = 1.0);
// Same norm restricted to [a, b] (endpoints clipped to the grid).
double h1_norm_window(const Profile& p, double a, double b, double c_weight);
double l2_norm(const Profile& p);

// Finite-difference weights for the m-th derivative at z on nodes xs.
std::vector<double> fornberg_weights(double z, const std::vector<double>& xs,
                                     int m);

// Evaluate the profile at an arbitrary abscissa: 12-point local Lagrange
// inside the grid, constant tail limits outside.
double interp_eval(const Profile& p, double y, double left_limit,
                   double right_limit);
double interp_eval(const Profile& p, double y);

// Mean of the outermost 1% of samples on one side; reads the limit of a
// converged bounded profile.
double tail_limit(const Profile& p, int side);  // side<0 left, side>0 right

// Two-column CSV "x,value" with 17 significant digits.
void write_csv(const std::string& path, const Profile& p);
Profile read_csv(const std::string& path);

}  // namespace gkdv
