#include "brdim/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>
#include <stdexcept>

#include "brdim/errors.hpp"
#include "brdim/minors.hpp"
#include "brdim/rng.hpp"

namespace brdim {

double smooth_pos(double x) {
    if (x <= 0.0) return 0.0;
    if (x < 0.2) return 2.5 * x * x;
    return x - 0.1;
}

namespace {

// Parameter map with defaults and an unknown-key check.
class Params {
public:
    Params(const std::string& model, const std::map<std::string, double>& given)
        : model_(model), given_(given) {}

    double get(const std::string& key, double fallback) {
        seen_.insert(key);
        auto it = given_.find(key);
        return it == given_.end() ? fallback : it->second;
    }

    void finish() const {
        for (const auto& [key, value] : given_) {
            (void)value;
            if (!seen_.count(key)) {
                throw ConfigError(model_ + ": unknown parameter '" + key + "'");
            }
        }
    }

private:
    std::string model_;
    std::map<std::string, double> given_;
    std::set<std::string> seen_;
};

ModelSpec make_sv2d(Params& p) {
    const double rho = p.get("rho", 0.5);
    const double s1 = p.get("sigma1", 0.1);
    const double s2 = p.get("sigma2", 0.2);
    const double r1 = p.get("r1", 0.05);
    const double r2 = p.get("r2", 0.15);
    Eigen::VectorXd x0(2);
    x0 << p.get("x01", 1.0), p.get("x02", 1.0);
    p.finish();
    if (std::abs(rho) > 1.0) throw ConfigError("sv2d: |rho| must be <= 1");

    ModelSpec m;
    m.name = "sv2d";
    m.dim = 2;
    m.noise_dim = 2;
    m.x0 = x0;
    m.drift = [r1, r2](double, const Eigen::VectorXd& x) {
        Eigen::VectorXd a(2);
        a << r1 * x[0], r2 * x[1];
        return a;
    };
    const double rho_c = std::sqrt(1.0 - rho * rho);
    m.diffusion = [s1, s2, rho, rho_c](double, const Eigen::VectorXd& x) {
        Eigen::MatrixXd s(2, 2);
        s << s1 * x[0], 0.0,
             s2 * x[1] * rho, s2 * x[1] * rho_c;
        return s;
    };
    return m;
}

ModelSpec make_energy3d(Params& p) {
    Eigen::Vector3d alpha, nu, mu, beta, knee, x0;
    const double beta_default[3] = {1.0, 1.0, 0.0};
    const double knee_default[3] = {3.0, 3.0, 0.9};
    const double x0_default[3] = {0.29, 0.89, 0.62};
    for (int i = 0; i < 3; ++i) {
        const std::string s = std::to_string(i + 1);
        alpha[i] = p.get("alpha" + s, 1.0);
        nu[i] = p.get("nu" + s, 1.0);
        mu[i] = p.get("mu" + s, 1.0);
        beta[i] = p.get("beta" + s, beta_default[i]);
        knee[i] = p.get("k" + s, knee_default[i]);
        x0[i] = p.get("x0" + s, x0_default[i]);
    }
    p.finish();

    ModelSpec m;
    m.name = "energy3d";
    m.dim = 3;
    m.noise_dim = 3;
    m.x0 = x0;
    m.drift = [nu, mu](double, const Eigen::VectorXd& x) {
        Eigen::VectorXd a(3);
        for (int i = 0; i < 3; ++i) a[i] = nu[i] * (mu[i] - x[i]);
        return a;
    };
    m.diffusion = [alpha, beta, knee](double, const Eigen::VectorXd& x) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
        for (int i = 0; i < 3; ++i) {
            s(i, i) = alpha[i] * smooth_pos(x[i] - knee[i]) + beta[i];
        }
        return s;
    };
    return m;
}

ModelSpec make_osc2d(Params& p) {
    const double eta = p.get("eta", 1.0);
    const double theta = p.get("theta", 1.0);
    Eigen::VectorXd x0(2);
    x0 << p.get("x01", 0.0), p.get("x02", 0.0);
    p.finish();
    if (!(eta > 0.0) || !(theta > 0.0)) throw ConfigError("osc2d: eta, theta must be > 0");

    ModelSpec m;
    m.name = "osc2d";
    m.dim = 2;
    m.noise_dim = 1;
    m.x0 = x0;
    m.drift = [eta, theta](double, const Eigen::VectorXd& x) {
        Eigen::VectorXd a(2);
        a << eta * std::cos(theta * x[1]), 0.0;
        return a;
    };
    m.diffusion = [](double, const Eigen::VectorXd&) {
        Eigen::MatrixXd s(2, 1);
        s << 0.0, 1.0;
        return s;
    };
    return m;
}

ModelSpec make_homog(Params& p) {
    const int d = static_cast<int>(p.get("d", 2.0));
    if (d < 1 || d > 12) throw ConfigError("homog: d must lie in 1..12");
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d);
    for (int i = 1; i <= d; ++i) {
        for (int j = i; j <= d; ++j) {
            const double dflt = (i == j) ? 1.0 : 0.0;
            const double v = p.get("c" + std::to_string(i) + std::to_string(j), dflt);
            cov(i - 1, j - 1) = v;
            cov(j - 1, i - 1) = v;
        }
    }
    Eigen::VectorXd x0(d);
    for (int i = 0; i < d; ++i) x0[i] = p.get("x0" + std::to_string(i + 1), 0.0);
    p.finish();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw ConfigError("homog: eigensolver failed on Sigma");
    const Eigen::VectorXd lam = solver.eigenvalues();
    const double lam_max = lam.maxCoeff();
    if (lam.minCoeff() < -1e-10 * (1.0 + cov.trace())) {
        throw ConfigError("homog: Sigma is not positive semi-definite");
    }
    // Rank-truncated symmetric square root: directions below the rank cut
    // are zeroed rather than carried as sqrt-of-noise columns.
    Eigen::VectorXd root = lam;
    for (int i = 0; i < d; ++i) {
        root[i] = (lam[i] > kRankTol * std::max(lam_max, 0.0)) ? std::sqrt(lam[i]) : 0.0;
    }
    Eigen::MatrixXd sigma =
        solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();

    ModelSpec m;
    m.name = "homog";
    m.dim = d;
    m.noise_dim = d;
    m.x0 = x0;
    m.drift = [d](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); };
    m.diffusion = [sigma](double, const Eigen::VectorXd&) { return sigma; };
    return m;
}

ModelSpec make_drift(Params& p) {
    const int d = static_cast<int>(p.get("d", 2.0));
    if (d < 1) throw ConfigError("drift: d must be >= 1");
    Eigen::VectorXd slope(d), x0(d);
    for (int i = 0; i < d; ++i) {
        slope[i] = p.get("a" + std::to_string(i + 1), static_cast<double>(i + 1));
        x0[i] = p.get("x0" + std::to_string(i + 1), 0.0);
    }
    p.finish();

    ModelSpec m;
    m.name = "drift";
    m.dim = d;
    m.noise_dim = 1;
    m.x0 = x0;
    m.drift = [slope](double, const Eigen::VectorXd&) { return slope; };
    m.diffusion = [d](double, const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Zero(d, 1).eval();
    };
    return m;
}

long fine_step_count(double T, double h) {
    if (!(h > 0.0) || !(T > 0.0)) throw std::invalid_argument("simulate: need T > 0, h > 0");
    const double x = T / h;
    const double k = std::round(x);
    if (std::abs(x - k) > 1e-9 * std::max(1.0, x) || k < 1.0) {
        throw std::invalid_argument("simulate: T/h must be a positive integer");
    }
    return static_cast<long>(k);
}

}  // namespace

ModelSpec make_model(const std::string& name, const std::map<std::string, double>& params) {
    Params p(name, params);
    if (name == "sv2d") return make_sv2d(p);
    if (name == "energy3d") return make_energy3d(p);
    if (name == "osc2d") return make_osc2d(p);
    if (name == "homog") return make_homog(p);
    if (name == "drift") return make_drift(p);
    throw ConfigError("unknown model '" + name +
                      "' (expected sv2d, energy3d, osc2d, homog or drift)");
}

SimResult simulate_euler_with_increments(const ModelSpec& model, double T, double h,
                                         const Eigen::MatrixXd& dw) {
    const long steps = fine_step_count(T, h);
    if (dw.rows() != steps || dw.cols() != model.noise_dim) {
        throw std::invalid_argument("simulate: increment matrix must be (T/h) x q");
    }

    SimResult out;
    out.step = h;
    out.fine.horizon = T;
    out.fine.values.resize(steps + 1, model.dim);
    out.coeff.step = h;
    out.coeff.values.reserve(static_cast<std::size_t>(steps) + 1);

    Eigen::VectorXd x = model.x0;
    for (long k = 0;; ++k) {
        const double tk = h * static_cast<double>(k);
        out.fine.values.row(k) = x;
        const Eigen::MatrixXd sigma = model.diffusion(tk, x);
        out.coeff.values.push_back(sigma * sigma.transpose());
        if (k == steps) break;
        x += model.drift(tk, x) * h + sigma * dw.row(k).transpose();
        if (!x.allFinite()) throw DivergenceError(k + 1, h * static_cast<double>(k + 1));
    }
    return out;
}

SimResult simulate_euler(const ModelSpec& model, double T, double h, std::uint64_t seed) {
    const long steps = fine_step_count(T, h);
    Eigen::MatrixXd dw(steps, model.noise_dim);
    NormalSampler normals(seed);
    normals.fill(dw);
    dw *= std::sqrt(h);
    SimResult out = simulate_euler_with_increments(model, T, h, dw);
    out.seed = seed;
    return out;
}

std::vector<double> osc_closed_form(const std::vector<double>& b, double eta, double theta) {
    if (b.empty()) return {};
    std::vector<double> out(b.size());
    const double a2 = 2.0 * eta / (theta * theta);
    const double a1 = 2.0 * eta / theta;
    double integral = 0.0;
    out[0] = a2 - a2 * std::cos(theta * b[0]);
    for (std::size_t k = 1; k < b.size(); ++k) {
        integral += std::sin(theta * b[k - 1]) * (b[k] - b[k - 1]);
        out[k] = a2 - a2 * std::cos(theta * b[k]) - a1 * integral;
    }
    return out;
}

}  // namespace brdim
