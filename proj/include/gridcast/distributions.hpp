#pragma once

#include <string>
#include <vector>

#include "gridcast/common.hpp"
#include "json.hpp"

namespace gridcast {

// A closed-form distribution fitted to forecast residuals (MWh).
// Parameter vectors by family:
//   normal        {mu, sigma}
//   laplace       {mu, b}
//   logistic      {mu, s}
//   student_t     {mu, sigma, nu}
//   cauchy        {x0, gamma}
//   gumbel        {mu, beta}
//   uniform       {a, b}
//   gamma_shifted {shape, scale, loc}
//   skew_normal   {xi, omega, alpha}
//   johnson_sb    {gamma, delta, xi, lambda}
//   johnson_su    {gamma, delta, xi, lambda}
struct ResidualDistribution {
    std::string family;
    std::vector<double> params;
    double sse = 0.0;
    double lower = 0.0, upper = 0.0;  // support, possibly +-inf
    bool converged = true;            // false when the optimizer hit its budget
    std::size_t n_sample = 0;
    int n_bins = 0;

    double pdf(double x) const;
    double cdf(double x) const;
    double sample_one(Rng& rng) const;

    nlohmann::json to_json() const;
    static ResidualDistribution from_json(const nlohmann::json& j);
};

extern const std::vector<std::string> kResidualFamilies;

// Freedman-Diaconis bin count over [min, max], floored at 10, capped at 200.
int freedman_diaconis_bins(const std::vector<double>& values);

// Maximum likelihood: closed form where available, otherwise Nelder-Mead
// from moment-based starts (tolerance 1e-8 on the log-likelihood). The
// returned sse is scored on Freedman-Diaconis bins of the sample.
ResidualDistribution fit_distribution(const std::vector<double>& residuals,
                                      const std::string& family);

// Sum over bins of (empirical density - fitted pdf at bin center)^2;
// bins span [min, max] of the residuals.
double score_sse(const ResidualDistribution& dist, const std::vector<double>& residuals,
                 int n_bins);

// Fits every family, returns the minimum-SSE fit. Ties break toward
// fewer parameters, then family name order.
ResidualDistribution select_best(const std::vector<double>& residuals,
                                 const std::vector<std::string>& families);

// seeded, reproducible draws in MWh
std::vector<double> sample(const ResidualDistribution& dist, std::uint64_t seed,
                           std::size_t n);

}  // namespace gridcast
