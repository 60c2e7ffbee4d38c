#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "brdim/coeff.hpp"
#include "brdim/path.hpp"

namespace brdim {

// Drift/diffusion descriptor. Evaluators must be total on the reachable
// state domain; diffusion(t, x) is d x q and its Gram matrix is the
// instantaneous covariance the simulator records.
struct ModelSpec {
    std::string name;
    int dim = 0;        // d
    int noise_dim = 0;  // q
    Eigen::VectorXd x0;
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> drift;
    std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> diffusion;
};

// Catalog:
//   sv2d     two lognormal-type prices, second driven by a rho-mix of the
//            first Brownian motion and an independent one
//            (rho [0.5], sigma1 [0.1], sigma2 [0.2], r1 [0.05], r2 [0.15],
//             x01 [1], x02 [1])
//   energy3d three mean-reverting indices with C^1-smoothed hinge volatility
//            (alpha1..3 [1], nu1..3 [1], mu1..3 [1], beta1..2 [1], beta3 [0],
//             k1..2 [3], k3 [0.9], x0 [0.29, 0.89, 0.62])
//   osc2d    oscillating drift integral over a single Brownian motion
//            (eta [1], theta [1], x0 [0, 0])
//   homog    Brownian motion with constant covariance Sigma
//            (d [2], c11.. upper triangle [identity], x0i [0])
//   drift    deterministic line, no noise (d [2], a1..ad [i], x0i [0])
// Unknown names or keys, and invalid values (|rho| > 1, non-PSD Sigma, ...),
// raise ConfigError.
ModelSpec make_model(const std::string& name,
                     const std::map<std::string, double>& params = {});

struct SimResult {
    SamplePath fine;   // Euler grid, T/h + 1 rows
    CoeffPath coeff;   // sigma sigma* at every grid point
    std::uint64_t seed = 0;
    double step = 0.0;  // h
};

// Explicit Euler with left-endpoint coefficients:
//   X_{k+1} = X_k + a(t_k, X_k) h + sigma(t_k, X_k) sqrt(h) G_k,
// G_k i.i.d. standard normal q-vectors from the seeded stream. Bit-identical
// output for identical (model, T, h, seed). Throws DivergenceError naming
// the step when the state leaves the finite range.
SimResult simulate_euler(const ModelSpec& model, double T, double h, std::uint64_t seed);

// Same scheme driven by the given Brownian increments (T/h rows, q columns);
// lets callers refine or couple resolutions on one noise draw.
SimResult simulate_euler_with_increments(const ModelSpec& model, double T, double h,
                                         const Eigen::MatrixXd& dw);

// Validation series for the osc2d first component from the Brownian path b
// on the same grid: 2 eta / theta^2 * (1 - cos(theta B_t)) minus the
// discretized stochastic integral (2 eta / theta) sum sin(theta B_k) dB_k.
std::vector<double> osc_closed_form(const std::vector<double>& b, double eta, double theta);

// C^1 smoothing of the positive part used by energy3d: 0 below 0,
// 2.5 x^2 on (0, 0.2), x - 0.1 above.
double smooth_pos(double x);

}  // namespace brdim
