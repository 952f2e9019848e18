#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "gridcast/common.hpp"
#include "gridcast/distributions.hpp"
#include "json.hpp"

namespace gridcast {

// ordering is the documented investment tie-break
enum class Technology {
    CCGT,
    coal,
    nuclear,
    onshore_wind,
    offshore_wind,
    photovoltaic,
    recip_gas
};

std::string to_string(Technology t);
Technology technology_from_string(const std::string& name);
bool is_thermal(Technology t);

struct PowerPlantSpec {
    std::string id;
    Technology technology = Technology::CCGT;
    double capacity_mw = 0.0;
    double efficiency = 1.0;   // thermal conversion, (0, 1]
    std::string fuel;          // empty = no fuel
    double variable_opex = 0.0;      // currency/MWh
    double fixed_opex = 0.0;         // currency/MW/year
    double capex = 0.0;              // currency/MW
    double carbon_intensity = 0.0;   // tCO2/MWh generated
    int lifetime_years = 30;
    int commission_year = 2018;
    bool dispatchable = true;
};

struct GenCo {
    std::string id;
    double cash = 0.0;
    std::vector<PowerPlantSpec> portfolio;
    double discount_rate = 0.06;  // fraction/year
};

struct RepresentativeDay {
    std::string name;
    std::array<double, 24> demand_mw{};
    double weight_days = 0.0;  // weights over all days sum to 365
};

struct Scenario {
    int start_year = 2018, end_year = 2035;
    std::map<std::string, std::map<int, double>> fuel_prices;  // currency/MWh thermal
    std::map<int, double> carbon_price;  // history and projection, currency/tCO2
    std::vector<RepresentativeDay> rep_days;
    double demand_growth = 0.0;  // fraction/year
    // technology name -> per-rep-day list of 24 hourly availability fractions;
    // technologies not listed are fully available
    std::map<std::string, std::vector<std::array<double, 24>>> capacity_factors;
    std::vector<PowerPlantSpec> candidates;
    std::map<int, double> reference_price;  // expected electricity price, currency/MWh
    std::vector<GenCo> gencos;
    std::map<std::string, int> construction_delay_years;  // by technology name
    double voll_multiplier = 10.0;  // lost load priced at this x the max SRMC

    void validate() const;
    double fuel_price(const std::string& fuel, int year) const;
    double carbon_price_at(int year) const;
    double reference_price_at(int year) const;
    double capacity_factor(Technology t, std::size_t day, int hour) const;
    int construction_delay(Technology t) const;
};

nlohmann::json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario default_scenario();

// srmc = fuel/efficiency + carbon_intensity x carbon_price + variable_opex
double srmc(const PowerPlantSpec& plant, const Scenario& sc, int year);

struct Bid {
    std::string plant_id;
    double available_mw = 0.0;
    double srmc = 0.0;
};

struct DispatchResult {
    std::vector<double> dispatch_mw;  // aligned with the input bids
    double clearing_price = 0.0;      // SRMC of the marginal plant
    double unserved_mw = 0.0;
};

DispatchResult merit_order_dispatch(const std::vector<Bid>& bids, double demand_mw);

double perturb_demand(double demand_mw, const ResidualDistribution& dist, Rng& rng,
                      double* draw_log = nullptr);

// sum of R_t / (1+i)^t
double npv(const std::vector<double>& cashflows, double discount_rate);

// OLS on (year, price) extrapolated `horizon` years past the last history
// point, floored at zero
std::vector<double> forecast_carbon_price(const std::vector<std::pair<int, double>>& history,
                                          int horizon);

double expected_plant_npv(const PowerPlantSpec& candidate, const Scenario& sc,
                          const std::vector<PowerPlantSpec>& fleet,
                          const std::vector<RepresentativeDay>& current_demand,
                          int current_year, double discount_rate,
                          int forward_horizon = 10);

struct Investment {
    std::string genco_id;
    PowerPlantSpec plant;  // commission_year already includes the build delay
    double npv = 0.0;
    int decided_year = 0;
};

std::vector<Investment> investment_step(std::vector<GenCo>& gencos, const Scenario& sc,
                                        const std::vector<RepresentativeDay>& current_demand,
                                        int year, Rng& rng);

struct YearRecord {
    int year = 0;
    std::map<std::string, double> dispatch_mwh;   // by technology name
    std::vector<double> segment_prices;           // currency/MWh, day-major
    std::map<std::string, double> invested_mw;    // decided this year
    std::map<std::string, double> retired_mw;
    double carbon_tco2 = 0.0;
    double unserved_mwh = 0.0;
    double demand_mwh = 0.0;  // perturbed, post-floor
    double revenues = 0.0, fuel_costs = 0.0, carbon_costs = 0.0;
    double variable_opex_costs = 0.0, fixed_opex_costs = 0.0, capex_spent = 0.0;
};

struct SimulationResult {
    std::vector<YearRecord> years;
    std::map<std::string, double> mean_dispatch_mwh;     // per-year mean by technology
    std::map<std::string, double> invested_capacity_mw;  // total by technology
    double total_carbon_tco2 = 0.0;
    double total_unserved_mwh = 0.0;
    std::map<std::string, double> genco_cash_start, genco_cash_end;
};

// Yearly loop over [start_year, end_year]: retire, grow demand, dispatch
// each representative-day hour (perturbed when dist is given), invest.
// Pure function of (scenario, dist, seed).
SimulationResult run_simulation(const Scenario& sc, const ResidualDistribution* dist,
                                std::uint64_t seed);

struct SweepRow {
    double sigma = 0.0;  // MW
    std::map<std::string, double> mean_dispatch_mwh;  // averaged over seeds
    std::map<std::string, double> sd_dispatch_mwh;    // dispersion over seeds
};

// Normal(0, sigma) perturbation per sigma, one simulation per seed.
std::vector<SweepRow> sensitivity_sweep(const Scenario& sc, std::vector<double> sigmas,
                                        const std::vector<std::uint64_t>& seeds);

std::vector<double> default_sweep_sigmas();  // 1000..20000 MW step 1000

// delimited result tables (one facet each)
std::string yearly_mix_table(const SimulationResult& r, char delim = '\t');
std::string investments_table(const SimulationResult& r, char delim = '\t');
std::string prices_table(const SimulationResult& r, char delim = '\t');
std::string carbon_table(const SimulationResult& r, char delim = '\t');
std::string sweep_table(const std::vector<SweepRow>& rows, char delim = '\t');

}  // namespace gridcast
