#include "brdim/deciders.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "brdim/csv.hpp"
#include "brdim/errors.hpp"

namespace brdim {

ThresholdSchedule ThresholdSchedule::fixed(double rho) {
    if (!(rho > 0.0) || rho > 1.0) {
        throw std::invalid_argument("threshold: fixed rho must lie in (0, 1]");
    }
    ThresholdSchedule s;
    s.fixed_ = true;
    s.rho_ = rho;
    return s;
}

ThresholdSchedule ThresholdSchedule::power_law(double c, double theta) {
    if (!(c > 0.0)) throw std::invalid_argument("threshold: c must be > 0");
    if (!(theta > 0.0) || !(theta < 0.5)) {
        throw std::invalid_argument("threshold: theta must lie in (0, 1/2)");
    }
    ThresholdSchedule s;
    s.fixed_ = false;
    s.c_ = c;
    s.theta_ = theta;
    return s;
}

double ThresholdSchedule::at(long n) const {
    if (fixed_) return rho_;
    if (n < 1) throw std::invalid_argument("threshold: n must be >= 1");
    return c_ * std::pow(static_cast<double>(n), -theta_);
}

std::string ThresholdSchedule::describe() const {
    std::ostringstream os;
    if (fixed_) {
        os << "fixed rho = " << rho_;
    } else {
        os << "power law " << c_ << " * n^-" << theta_;
    }
    return os.str();
}

namespace {

void check_rho(double rho_n) {
    if (!(rho_n > 0.0)) throw std::invalid_argument("decision: rho_n must be > 0");
}

DecisionReport base_report(const char* rule, const EstimatorPanel& panel, double t, double rho_n) {
    DecisionReport rep;
    rep.rule = rule;
    rep.t = t;
    rep.n = panel.n;
    rep.rho_n = rho_n;
    return rep;
}

}  // namespace

DecisionReport decide_absolute(const EstimatorPanel& panel, double t, double rho_n) {
    check_rho(rho_n);
    DecisionReport rep = base_report("absolute", panel, t, rho_n);
    rep.r_hat = panel.rmax;
    for (int r = 0; r < panel.rmax; ++r) {
        const double stat = panel.lbar_at(t, r + 1);
        const double thr = rho_n * t;
        const bool hit = stat < thr;
        rep.comparisons.push_back({r, stat, thr, hit});
        if (hit) {
            rep.r_hat = r;
            break;
        }
    }
    return rep;
}

DecisionReport decide_absolute_sup(const EstimatorPanel& panel, double t, double rho_n) {
    check_rho(rho_n);
    DecisionReport rep = base_report("absolute-sup", panel, t, rho_n);
    rep.r_hat = 0;
    for (int r = panel.rmax; r >= 1; --r) {
        const double stat = panel.lbar_at(t, r);
        const double thr = rho_n * t;
        const bool hit = stat >= thr;
        rep.comparisons.push_back({r, stat, thr, hit});
        if (hit) {
            rep.r_hat = r;
            break;
        }
    }
    return rep;
}

DecisionReport decide_relative(const EstimatorPanel& panel, double t, double rho_n) {
    check_rho(rho_n);
    DecisionReport rep = base_report("relative", panel, t, rho_n);
    rep.r_hat = panel.rmax;
    for (int r = 0; r < panel.rmax; ++r) {
        double stat, thr;
        if (r == 0) {
            stat = panel.lbar_at(t, 1);
            thr = rho_n * t;
        } else {
            stat = panel.xi_at(t, r);
            thr = rho_n;
        }
        const bool hit = stat < thr;
        rep.comparisons.push_back({r, stat, thr, hit});
        if (hit) {
            rep.r_hat = r;
            break;
        }
    }
    return rep;
}

DecisionReport decide_relative_prime(const EstimatorPanel& panel, double t, double rho_n) {
    check_rho(rho_n);
    DecisionReport rep = base_report("relative-prime", panel, t, rho_n);
    rep.r_hat = panel.rmax;
    const double l1 = panel.lbar_at(t, 1);
    for (int r = 0; r < panel.rmax; ++r) {
        const double stat = panel.lbar_at(t, r + 1);
        const double thr = rho_n * std::pow(t, -r) * std::pow(l1, r + 1);
        const bool hit = stat < thr;
        rep.comparisons.push_back({r, stat, thr, hit});
        if (hit) {
            rep.r_hat = r;
            break;
        }
    }
    return rep;
}

DecisionReport decide_relative_sup(const EstimatorPanel& panel, double t, double rho_n) {
    check_rho(rho_n);
    DecisionReport rep = base_report("relative-sup", panel, t, rho_n);
    rep.no_guarantee = true;
    rep.r_hat = 0;
    for (int r = panel.rmax; r >= 1; --r) {
        double stat, thr;
        if (r == 1) {
            stat = panel.lbar_at(t, 1);
            thr = rho_n * t;
        } else {
            // lbar(r) >= rho_n t^{-1/(r-1)} lbar(r-1)^{r/(r-1)} in ratio form;
            // the 0/0 = 0 convention keeps rank-degenerate levels from
            // clearing the bar trivially.
            stat = panel.xi_at(t, r - 1);
            thr = rho_n;
        }
        const bool hit = stat >= thr;
        rep.comparisons.push_back({r, stat, thr, hit});
        if (hit) {
            rep.r_hat = r;
            break;
        }
    }
    return rep;
}

namespace {

// Wichura's PPND16 (Applied Statistics algorithm AS 241): lower quantile of
// the standard normal, |relative error| < 1e-15 over (0, 1).
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = num / den;
    }
    return (q < 0.0) ? -x : x;
}

}  // namespace

double normal_quantile(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("normal_quantile: alpha must lie in (0, 1)");
    }
    if (alpha == 0.5) return 0.0;
    return -ppnd16(alpha);
}

SStat s_statistic(const EstimatorPanel& panel, int r, double t) {
    if (r < 1 || r > panel.rmax) {
        throw std::invalid_argument("s_statistic: order outside the panel");
    }
    const double l1 = panel.lbar_at(t, 1);
    if (l1 <= 0.0) {
        throw NumericError("s_statistic: degenerate panel, lbar(1) = 0 at t = " +
                           std::to_string(t));
    }
    const double lr = panel.lbar_at(t, r);
    const double zrr = panel.z_at(t, r, r);
    const double z1r = panel.z_at(t, 1, r);
    const double z11 = panel.z_at(t, 1, 1);

    SStat out;
    out.s = std::pow(t, r - 1) * lr / std::pow(l1, r);
    // The printed form carries lbar(r)^2 inside and out; expanded here so a
    // vanishing lbar(r) needs no 0/0 convention.
    const double ratio = lr / l1;
    const double bracket = zrr - 2.0 * r * z1r * ratio + static_cast<double>(r) * r * z11 * ratio * ratio;
    out.z = panel.T * std::pow(t, 2 * (r - 1)) * bracket / std::pow(l1, 2 * r);
    return out;
}

DecisionReport ci_test(const EstimatorPanel& panel, int r, double t, double epsilon, double alpha) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ci_test: epsilon must be > 0");
    DecisionReport rep = base_report("ci", panel, t, 0.0);
    rep.is_ci = true;
    rep.r = r;
    rep.epsilon = epsilon;
    rep.alpha = alpha;
    rep.gamma = normal_quantile(alpha);
    const SStat st = s_statistic(panel, r, t);
    rep.s_nt = st.s;
    rep.z_nt = st.z;
    rep.eta_nt = epsilon - rep.gamma * std::sqrt(std::abs(st.z)) /
                               std::sqrt(static_cast<double>(panel.n));
    rep.reject = rep.s_nt < rep.eta_nt;
    rep.r_hat = rep.reject ? 0 : r;  // informational; the verdict is `reject`
    return rep;
}

Interval ci_lbar(const EstimatorPanel& panel, int r, double t, double alpha) {
    const double q = normal_quantile(alpha / 2.0);
    const double lr = panel.lbar_at(t, r);
    const double zrr = panel.z_at(t, r, r);
    const double half = q * std::sqrt(panel.T * std::abs(zrr)) /
                        std::sqrt(static_cast<double>(panel.n));
    return {lr - half, lr + half};
}

std::string report_text(const DecisionReport& rep) {
    std::ostringstream os;
    os << "rule: " << rep.rule << '\n';
    os << "t: " << rep.t << '\n';
    os << "n: " << rep.n << '\n';
    if (rep.is_ci) {
        os << "r: " << rep.r << '\n';
        os << "epsilon: " << rep.epsilon << '\n';
        os << "alpha: " << rep.alpha << '\n';
        os << "gamma: " << rep.gamma << '\n';
        os << "S_n: " << rep.s_nt << '\n';
        os << "Z_n: " << rep.z_nt << '\n';
        os << "eta_n: " << rep.eta_nt << '\n';
        os << "verdict: " << (rep.reject ? "reject S >= epsilon" : "no rejection") << '\n';
    } else {
        os << "rho_n: " << rep.rho_n << '\n';
        for (const auto& c : rep.comparisons) {
            os << "  r = " << c.r << ": statistic " << c.statistic
               << (c.satisfied ? " crosses " : " vs ") << c.threshold << '\n';
        }
        os << "r_hat: " << rep.r_hat << '\n';
        if (rep.no_guarantee) os << "warning: no asymptotic guarantee for this rule\n";
    }
    return os.str();
}

void report_csv_header(const DecisionReport& rep, std::ostream& out) {
    if (rep.is_ci) {
        out << "rule,t,n,r,epsilon,alpha,gamma,s,z,eta,reject\n";
    } else {
        out << "rule,t,n,rho_n,r_hat,r,statistic,threshold,satisfied\n";
    }
}

void report_csv(const DecisionReport& rep, std::ostream& out) {
    if (rep.is_ci) {
        out << rep.rule << ',' << csv::format(rep.t) << ',' << rep.n << ',' << rep.r << ','
            << csv::format(rep.epsilon) << ',' << csv::format(rep.alpha) << ','
            << csv::format(rep.gamma) << ',' << csv::format(rep.s_nt) << ','
            << csv::format(rep.z_nt) << ',' << csv::format(rep.eta_nt) << ','
            << (rep.reject ? 1 : 0) << '\n';
        return;
    }
    for (const auto& c : rep.comparisons) {
        out << rep.rule << ',' << csv::format(rep.t) << ',' << rep.n << ','
            << csv::format(rep.rho_n) << ',' << rep.r_hat << ',' << c.r << ','
            << csv::format(c.statistic) << ',' << csv::format(c.threshold) << ','
            << (c.satisfied ? 1 : 0) << '\n';
    }
}

}  // namespace brdim
