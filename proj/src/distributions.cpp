#include "gridcast/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "gridcast/metrics.hpp"

namespace gridcast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mu) {
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double skewness_of(const std::vector<double>& v, double mu, double sd) {
    double s = 0.0;
    for (double x : v) s += std::pow((x - mu) / sd, 3.0);
    return s / static_cast<double>(v.size());
}

// regularized lower incomplete gamma P(a, x), series + continued fraction
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-14) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(a, x)
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-14) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

// regularized incomplete beta I_x(a, b) via Lentz continued fraction
double beta_cf(double a, double b, double x) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < 1e-300) d = 1e-300;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = 1.0 + aa / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = 1.0 + aa / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-14) break;
    }
    return h;
}

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

// Owen's T function by Simpson quadrature (enough accuracy for CDF checks)
double owens_t(double h, double a) {
    if (a == 0.0) return 0.0;
    const double sign = a < 0.0 ? -1.0 : 1.0;
    a = std::abs(a);
    const int n = 400;
    const double step = a / n;
    auto f = [h](double t) {
        return std::exp(-0.5 * h * h * (1.0 + t * t)) / (1.0 + t * t);
    };
    double s = f(0.0) + f(a);
    for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * step);
    return sign * s * step / 3.0 / (2.0 * kPi);
}

struct NmResult {
    std::vector<double> x;
    bool converged = false;
};

// Nelder-Mead downhill simplex, tolerance 1e-8 on the objective spread
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> x0, int max_evals = 20000) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += 0.25 * std::abs(x0[i]) + 0.25;
    std::vector<double> fv(n + 1);
    int evals = 0;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = (++evals, f(pts[i]));

    NmResult result;
    while (evals < max_evals) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(fv[worst] - fv[best]) <= 1e-8 * (std::abs(fv[best]) + 1e-8)) {
            result.converged = true;
            result.x = pts[best];
            return result;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / n;
        }
        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
            return p;
        };
        const auto refl = blend(-1.0);
        const double fr = (++evals, f(refl));
        if (fr < fv[best]) {
            const auto exp_pt = blend(-2.0);
            const double fe = (++evals, f(exp_pt));
            if (fe < fr) {
                pts[worst] = exp_pt;
                fv[worst] = fe;
            } else {
                pts[worst] = refl;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = refl;
            fv[worst] = fr;
        } else {
            const auto con = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fc = (++evals, f(con));
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = con;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                    fv[i] = (++evals, f(pts[i]));
                }
            }
        }
    }
    const auto best_it = std::min_element(fv.begin(), fv.end());
    result.x = pts[static_cast<std::size_t>(best_it - fv.begin())];
    return result;
}

// -------- per-family pdf in terms of the stored parameter vector --------

double family_pdf(const std::string& fam, const std::vector<double>& p, double x) {
    if (fam == "normal") return normal_pdf((x - p[0]) / p[1]) / p[1];
    if (fam == "laplace") return std::exp(-std::abs(x - p[0]) / p[1]) / (2.0 * p[1]);
    if (fam == "logistic") {
        const double e = std::exp(-(x - p[0]) / p[1]);
        const double den = p[1] * (1.0 + e) * (1.0 + e);
        return std::isfinite(e) ? e / den : 0.0;
    }
    if (fam == "student_t") {
        const double mu = p[0], sigma = p[1], nu = p[2];
        const double z = (x - mu) / sigma;
        const double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * kPi) - std::log(sigma) -
                          0.5 * (nu + 1.0) * std::log1p(z * z / nu);
        return std::exp(lg);
    }
    if (fam == "cauchy") {
        const double z = (x - p[0]) / p[1];
        return 1.0 / (kPi * p[1] * (1.0 + z * z));
    }
    if (fam == "gumbel") {
        const double z = (x - p[0]) / p[1];
        return std::exp(-(z + std::exp(-z))) / p[1];
    }
    if (fam == "uniform") return (x >= p[0] && x <= p[1]) ? 1.0 / (p[1] - p[0]) : 0.0;
    if (fam == "gamma_shifted") {
        const double k = p[0], theta = p[1], loc = p[2];
        if (x <= loc) return 0.0;
        const double y = (x - loc) / theta;
        return std::exp((k - 1.0) * std::log(y) - y - std::lgamma(k) - std::log(theta));
    }
    if (fam == "skew_normal") {
        const double z = (x - p[0]) / p[1];
        return 2.0 / p[1] * normal_pdf(z) * normal_cdf(p[2] * z);
    }
    if (fam == "johnson_sb") {
        const double g = p[0], d = p[1], xi = p[2], lam = p[3];
        if (x <= xi || x >= xi + lam) return 0.0;
        const double u = (x - xi) / lam;
        const double z = g + d * std::log(u / (1.0 - u));
        return d / std::sqrt(2.0 * kPi) / (lam * u * (1.0 - u)) * std::exp(-0.5 * z * z);
    }
    if (fam == "johnson_su") {
        const double g = p[0], d = p[1], xi = p[2], lam = p[3];
        const double y = (x - xi) / lam;
        const double z = g + d * std::asinh(y);
        return d / (lam * std::sqrt(2.0 * kPi) * std::sqrt(1.0 + y * y)) *
               std::exp(-0.5 * z * z);
    }
    fail("UnsupportedFamily", "'" + fam + "'");
}

double family_cdf(const std::string& fam, const std::vector<double>& p, double x) {
    if (fam == "normal") return normal_cdf((x - p[0]) / p[1]);
    if (fam == "laplace") {
        const double z = (x - p[0]) / p[1];
        return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    if (fam == "logistic") return 1.0 / (1.0 + std::exp(-(x - p[0]) / p[1]));
    if (fam == "student_t") {
        const double z = (x - p[0]) / p[1], nu = p[2];
        const double ib = inc_beta(0.5 * nu, 0.5, nu / (nu + z * z));
        return z >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
    }
    if (fam == "cauchy") return 0.5 + std::atan((x - p[0]) / p[1]) / kPi;
    if (fam == "gumbel") return std::exp(-std::exp(-(x - p[0]) / p[1]));
    if (fam == "uniform") {
        if (x <= p[0]) return 0.0;
        if (x >= p[1]) return 1.0;
        return (x - p[0]) / (p[1] - p[0]);
    }
    if (fam == "gamma_shifted")
        return x <= p[2] ? 0.0 : gamma_p(p[0], (x - p[2]) / p[1]);
    if (fam == "skew_normal") {
        const double z = (x - p[0]) / p[1];
        return std::clamp(normal_cdf(z) - 2.0 * owens_t(z, p[2]), 0.0, 1.0);
    }
    if (fam == "johnson_sb") {
        const double g = p[0], d = p[1], xi = p[2], lam = p[3];
        if (x <= xi) return 0.0;
        if (x >= xi + lam) return 1.0;
        const double u = (x - xi) / lam;
        return normal_cdf(g + d * std::log(u / (1.0 - u)));
    }
    if (fam == "johnson_su")
        return normal_cdf(p[0] + p[1] * std::asinh((x - p[2]) / p[3]));
    fail("UnsupportedFamily", "'" + fam + "'");
}

double family_sample(const std::string& fam, const std::vector<double>& p, Rng& rng) {
    if (fam == "normal") return p[0] + p[1] * rng.normal();
    if (fam == "laplace") {
        const double u = rng.uniform_open() - 0.5;
        return p[0] - p[1] * (u < 0.0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
    }
    if (fam == "logistic") {
        const double u = rng.uniform_open();
        return p[0] + p[1] * std::log(u / (1.0 - u));
    }
    if (fam == "student_t") {
        const double z = rng.normal();
        const double chi2 = 2.0 * rng.gamma(0.5 * p[2]);
        return p[0] + p[1] * z / std::sqrt(chi2 / p[2]);
    }
    if (fam == "cauchy") return p[0] + p[1] * std::tan(kPi * (rng.uniform_open() - 0.5));
    if (fam == "gumbel") return p[0] - p[1] * std::log(-std::log(rng.uniform_open()));
    if (fam == "uniform") return p[0] + (p[1] - p[0]) * rng.uniform();
    if (fam == "gamma_shifted") return p[2] + p[1] * rng.gamma(p[0]);
    if (fam == "skew_normal") {
        const double delta = p[2] / std::sqrt(1.0 + p[2] * p[2]);
        const double u0 = rng.normal(), v = rng.normal();
        const double z = delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * v;
        return p[0] + p[1] * z;
    }
    if (fam == "johnson_sb") {
        const double y = (rng.normal() - p[0]) / p[1];
        return p[2] + p[3] / (1.0 + std::exp(-y));
    }
    if (fam == "johnson_su")
        return p[2] + p[3] * std::sinh((rng.normal() - p[0]) / p[1]);
    fail("UnsupportedFamily", "'" + fam + "'");
}

std::pair<double, double> family_support(const std::string& fam,
                                         const std::vector<double>& p) {
    if (fam == "uniform") return {p[0], p[1]};
    if (fam == "gamma_shifted") return {p[2], kInf};
    if (fam == "johnson_sb") return {p[2], p[2] + p[3]};
    return {-kInf, kInf};
}

int family_param_count(const std::string& fam) {
    if (fam == "student_t" || fam == "gamma_shifted" || fam == "skew_normal") return 3;
    if (fam == "johnson_sb" || fam == "johnson_su") return 4;
    return 2;
}

double nll(const std::string& fam, const std::vector<double>& p,
           const std::vector<double>& data) {
    double s = 0.0;
    for (double x : data) {
        const double d = family_pdf(fam, p, x);
        if (!(d > 0.0) || !std::isfinite(d)) return kInf;
        s -= std::log(d);
    }
    return s;
}

// Runs Nelder-Mead over an unconstrained vector u, mapping u -> natural
// parameters through `decode` so positivity/support constraints hold.
std::pair<std::vector<double>, bool> fit_by_simplex(
    const std::string& fam, const std::vector<double>& data, std::vector<double> u0,
    const std::function<std::vector<double>(const std::vector<double>&)>& decode) {
    const auto res = nelder_mead(
        [&](const std::vector<double>& u) { return nll(fam, decode(u), data); },
        std::move(u0));
    return {decode(res.x), res.converged};
}

}  // namespace

const std::vector<std::string> kResidualFamilies = {
    "normal",  "laplace",       "logistic",    "student_t",  "cauchy",    "gumbel",
    "uniform", "gamma_shifted", "skew_normal", "johnson_sb", "johnson_su"};

int freedman_diaconis_bins(const std::vector<double>& values) {
    auto v = values;
    std::sort(v.begin(), v.end());
    const double range = v.back() - v.front();
    const double iqr = percentile(v, 75.0) - percentile(v, 25.0);
    if (range <= 0.0 || iqr <= 0.0) return 10;
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(v.size()));
    const int bins = static_cast<int>(std::ceil(range / width));
    return std::clamp(bins, 10, 200);
}

double ResidualDistribution::pdf(double x) const { return family_pdf(family, params, x); }
double ResidualDistribution::cdf(double x) const { return family_cdf(family, params, x); }
double ResidualDistribution::sample_one(Rng& rng) const {
    return family_sample(family, params, rng);
}

double score_sse(const ResidualDistribution& dist, const std::vector<double>& residuals,
                 int n_bins) {
    const auto [lo, hi] = std::minmax_element(residuals.begin(), residuals.end());
    const double width = (*hi - *lo) / n_bins;
    std::vector<double> counts(static_cast<std::size_t>(n_bins), 0.0);
    for (double r : residuals) {
        auto b = static_cast<std::size_t>((r - *lo) / width);
        if (b >= counts.size()) b = counts.size() - 1;
        counts[b] += 1.0;
    }
    const double n = static_cast<double>(residuals.size());
    double sse = 0.0;
    for (int b = 0; b < n_bins; ++b) {
        const double density = counts[static_cast<std::size_t>(b)] / (n * width);
        const double center = *lo + (b + 0.5) * width;
        const double diff = density - dist.pdf(center);
        sse += diff * diff;
    }
    return sse;
}

ResidualDistribution fit_distribution(const std::vector<double>& residuals,
                                      const std::string& family) {
    if (std::find(kResidualFamilies.begin(), kResidualFamilies.end(), family) ==
        kResidualFamilies.end())
        fail("UnsupportedFamily", "'" + family + "'");
    if (residuals.size() < 50)
        fail("InvalidArgument", "need at least 50 residuals to fit");

    const auto [lo_it, hi_it] = std::minmax_element(residuals.begin(), residuals.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) fail("DegenerateSample", "residuals have zero variance");

    const double mu = mean_of(residuals);
    const double sd = sd_of(residuals, mu);
    auto sorted = residuals;
    std::sort(sorted.begin(), sorted.end());
    const double med = percentile(sorted, 50.0);

    ResidualDistribution dist;
    dist.family = family;
    dist.n_sample = residuals.size();

    if (family == "normal") {
        dist.params = {mu, sd};
    } else if (family == "uniform") {
        dist.params = {lo, hi};
    } else if (family == "laplace") {
        double b = 0.0;
        for (double x : residuals) b += std::abs(x - med);
        dist.params = {med, b / static_cast<double>(residuals.size())};
    } else if (family == "logistic") {
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1])};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {mu, std::log(sd * std::numbers::sqrt3 / kPi)}, decode);
    } else if (family == "student_t") {
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1]), std::exp(u[2])};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {mu, std::log(sd), std::log(5.0)}, decode);
    } else if (family == "cauchy") {
        const double iqr = percentile(sorted, 75.0) - percentile(sorted, 25.0);
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1])};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {med, std::log(std::max(0.5 * iqr, 1e-8))}, decode);
    } else if (family == "gumbel") {
        const double beta0 = sd * std::sqrt(6.0) / kPi;
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1])};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {mu - 0.57721566490153286 * beta0, std::log(beta0)},
            decode);
    } else if (family == "gamma_shifted") {
        auto decode = [lo](const std::vector<double>& u) {
            // shift kept strictly left of the sample minimum
            return std::vector<double>{std::exp(u[0]), std::exp(u[1]),
                                       lo - std::exp(u[2])};
        };
        const double loc0 = lo - 0.5 * sd;
        const double k0 = std::max((mu - loc0) * (mu - loc0) / (sd * sd), 0.1);
        const double th0 = sd * sd / std::max(mu - loc0, 1e-8);
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals,
            {std::log(k0), std::log(th0), std::log(0.5 * sd)}, decode);
    } else if (family == "skew_normal") {
        const double g1 = std::clamp(skewness_of(residuals, mu, sd), -0.9, 0.9);
        const double c = std::pow(std::abs(g1), 2.0 / 3.0);
        const double d2 = 0.5 * kPi * c / (c + std::pow(0.5 * (4.0 - kPi), 2.0 / 3.0));
        const double delta = std::copysign(std::min(std::sqrt(d2), 0.95), g1);
        const double alpha0 = delta / std::sqrt(1.0 - delta * delta);
        const double omega0 = sd / std::sqrt(1.0 - 2.0 * delta * delta / kPi);
        const double xi0 = mu - omega0 * delta * std::sqrt(2.0 / kPi);
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1]), u[2]};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {xi0, std::log(omega0), alpha0}, decode);
    } else if (family == "johnson_sb") {
        const double range = hi - lo;
        auto decode = [lo, hi](const std::vector<double>& u) {
            const double xi = lo - std::exp(u[2]);
            const double lam = (hi + std::exp(u[3])) - xi;
            return std::vector<double>{u[0], std::exp(u[1]), xi, lam};
        };
        // start from the normal fit of the log-odds transform
        const double xi0 = lo - 0.05 * range, lam0 = (hi + 0.05 * range) - xi0;
        std::vector<double> t;
        t.reserve(residuals.size());
        for (double x : residuals) t.push_back(std::log((x - xi0) / (xi0 + lam0 - x)));
        const double tm = mean_of(t), ts = std::max(sd_of(t, tm), 1e-8);
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals,
            {-tm / ts, std::log(1.0 / ts), std::log(0.05 * range),
             std::log(0.05 * range)},
            decode);
    } else {  // johnson_su
        auto decode = [](const std::vector<double>& u) {
            return std::vector<double>{u[0], std::exp(u[1]), u[2], std::exp(u[3])};
        };
        std::tie(dist.params, dist.converged) = fit_by_simplex(
            family, residuals, {0.0, 0.0, med, std::log(sd)}, decode);
    }

    std::tie(dist.lower, dist.upper) = family_support(family, dist.params);
    dist.n_bins = freedman_diaconis_bins(residuals);
    dist.sse = score_sse(dist, residuals, dist.n_bins);
    return dist;
}

ResidualDistribution select_best(const std::vector<double>& residuals,
                                 const std::vector<std::string>& families) {
    if (families.empty()) fail("InvalidArgument", "no families given");
    std::vector<ResidualDistribution> fits;
    for (const auto& fam : families) {
        try {
            fits.push_back(fit_distribution(residuals, fam));
        } catch (const Error&) {
            // skipped; only fatal if every family fails
        }
    }
    if (fits.empty()) fail("AllFitsFailed", "no distribution family could be fitted");
    std::sort(fits.begin(), fits.end(),
              [](const ResidualDistribution& a, const ResidualDistribution& b) {
                  if (a.sse != b.sse) return a.sse < b.sse;
                  const int pa = family_param_count(a.family);
                  const int pb = family_param_count(b.family);
                  if (pa != pb) return pa < pb;
                  return a.family < b.family;
              });
    return fits.front();
}

std::vector<double> sample(const ResidualDistribution& dist, std::uint64_t seed,
                           std::size_t n) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = dist.sample_one(rng);
    return out;
}

nlohmann::json ResidualDistribution::to_json() const {
    return {{"family", family},       {"params", params},
            {"sse", sse},             {"n_sample", n_sample},
            {"n_bins", n_bins},       {"bin_rule", "freedman_diaconis"},
            {"converged", converged}, {"support", {lower, upper}}};
}

ResidualDistribution ResidualDistribution::from_json(const nlohmann::json& j) {
    ResidualDistribution d;
    d.family = j.at("family").get<std::string>();
    d.params = j.at("params").get<std::vector<double>>();
    d.sse = j.at("sse").get<double>();
    d.n_sample = j.at("n_sample").get<std::size_t>();
    d.n_bins = j.at("n_bins").get<int>();
    d.converged = j.at("converged").get<bool>();
    // infinite bounds do not survive JSON, so rebuild them from the params
    std::tie(d.lower, d.upper) = family_support(d.family, d.params);
    return d;
}

}  // namespace gridcast
