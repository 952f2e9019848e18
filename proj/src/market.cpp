#include "gridcast/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gridcast {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kTechNames = {"CCGT",          "coal",
                                             "nuclear",       "onshore_wind",
                                             "offshore_wind", "photovoltaic",
                                             "recip_gas"};

// step curve lookup clamped to the first/last listed year
double curve_at(const std::map<int, double>& curve, int year, const char* what) {
    if (curve.empty()) fail("InvalidArgument", std::string("empty curve: ") + what);
    auto it = curve.upper_bound(year);
    if (it == curve.begin()) return it->second;
    return std::prev(it)->second;
}

}  // namespace

std::string to_string(Technology t) {
    return kTechNames[static_cast<std::size_t>(t)];
}

Technology technology_from_string(const std::string& name) {
    const auto it = std::find(kTechNames.begin(), kTechNames.end(), name);
    if (it == kTechNames.end()) fail("UnknownTechnology", "'" + name + "'");
    return static_cast<Technology>(it - kTechNames.begin());
}

bool is_thermal(Technology t) {
    return t == Technology::CCGT || t == Technology::coal || t == Technology::nuclear ||
           t == Technology::recip_gas;
}

void Scenario::validate() const {
    if (end_year < start_year) fail("InvalidArgument", "end_year before start_year");
    if (rep_days.empty()) fail("InvalidArgument", "no representative days");
    double weight = 0.0;
    for (const auto& d : rep_days) weight += d.weight_days;
    if (std::abs(weight - 365.0) > 1e-6)
        fail("InvalidArgument", "representative-day weights must sum to 365");
    for (const auto& [tech, days] : capacity_factors) {
        technology_from_string(tech);
        if (days.size() != rep_days.size())
            fail("InvalidArgument", "capacity factors for '" + tech +
                                        "' must cover every representative day");
        for (const auto& day : days)
            for (double f : day)
                if (f < 0.0 || f > 1.0)
                    fail("InvalidArgument", "capacity factor outside [0, 1]");
    }
    auto check_plant = [](const PowerPlantSpec& p) {
        if (p.capacity_mw <= 0.0) fail("InvalidArgument", "plant capacity must be > 0");
        if (is_thermal(p.technology) && (p.efficiency <= 0.0 || p.efficiency > 1.0))
            fail("InvalidArgument", "thermal efficiency must be in (0, 1]");
        if (p.carbon_intensity < 0.0) fail("InvalidArgument", "negative carbon intensity");
        if (!is_thermal(p.technology) && p.dispatchable)
            fail("InvalidArgument", "intermittent plant marked dispatchable: " + p.id);
    };
    for (const auto& g : gencos)
        for (const auto& p : g.portfolio) check_plant(p);
    for (const auto& c : candidates) check_plant(c);
}

double Scenario::fuel_price(const std::string& fuel, int year) const {
    const auto it = fuel_prices.find(fuel);
    if (it == fuel_prices.end() || it->second.empty())
        fail("MissingFuelPrice", "no price curve for fuel '" + fuel + "'");
    return curve_at(it->second, year, fuel.c_str());
}

double Scenario::carbon_price_at(int year) const {
    return curve_at(carbon_price, year, "carbon");
}

double Scenario::reference_price_at(int year) const {
    return curve_at(reference_price, year, "reference price");
}

double Scenario::capacity_factor(Technology t, std::size_t day, int hour) const {
    const auto it = capacity_factors.find(to_string(t));
    if (it == capacity_factors.end()) return 1.0;
    return it->second[day][static_cast<std::size_t>(hour)];
}

int Scenario::construction_delay(Technology t) const {
    const auto it = construction_delay_years.find(to_string(t));
    if (it != construction_delay_years.end()) return it->second;
    return is_thermal(t) ? 2 : 1;
}

double srmc(const PowerPlantSpec& plant, const Scenario& sc, int year) {
    double cost = plant.variable_opex +
                  plant.carbon_intensity * sc.carbon_price_at(year);
    if (!plant.fuel.empty()) cost += sc.fuel_price(plant.fuel, year) / plant.efficiency;
    return cost;
}

DispatchResult merit_order_dispatch(const std::vector<Bid>& bids, double demand_mw) {
    if (demand_mw < 0.0) fail("InvalidArgument", "negative demand");
    std::vector<std::size_t> order(bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (bids[a].srmc != bids[b].srmc) return bids[a].srmc < bids[b].srmc;
        return bids[a].plant_id < bids[b].plant_id;
    });

    DispatchResult result;
    result.dispatch_mw.assign(bids.size(), 0.0);
    double remaining = demand_mw, total_available = 0.0;
    for (std::size_t i : order) {
        total_available += bids[i].available_mw;
        if (remaining <= 0.0) continue;
        const double take = std::min(remaining, bids[i].available_mw);
        result.dispatch_mw[i] = take;
        remaining -= take;
        if (take > 0.0) result.clearing_price = bids[i].srmc;
    }
    result.unserved_mw = std::max(0.0, demand_mw - total_available);
    return result;
}

double perturb_demand(double demand_mw, const ResidualDistribution& dist, Rng& rng,
                      double* draw_log) {
    const double draw = dist.sample_one(rng);
    if (draw_log) *draw_log = draw;
    return std::max(0.0, demand_mw + draw);
}

double npv(const std::vector<double>& cashflows, double discount_rate) {
    if (discount_rate <= -1.0) fail("InvalidArgument", "discount rate must exceed -1");
    double value = 0.0, factor = 1.0;
    for (double r : cashflows) {
        value += r / factor;
        factor *= 1.0 + discount_rate;
    }
    return value;
}

std::vector<double> forecast_carbon_price(
    const std::vector<std::pair<int, double>>& history, int horizon) {
    if (history.size() < 2) fail("InvalidArgument", "need at least 2 history points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [year, price] : history) {
        sx += year;
        sy += price;
        sxx += static_cast<double>(year) * year;
        sxy += year * price;
    }
    const double n = static_cast<double>(history.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) fail("DegenerateHistory", "all history points share one year");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    int last_year = history.front().first;
    for (const auto& [year, price] : history) last_year = std::max(last_year, year);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t)
        out.push_back(std::max(0.0, intercept + slope * (last_year + t)));
    return out;
}

namespace {

std::vector<std::pair<int, double>> carbon_history_until(const Scenario& sc, int year) {
    std::vector<std::pair<int, double>> hist;
    for (const auto& [y, p] : sc.carbon_price)
        if (y <= year) hist.emplace_back(y, p);
    if (hist.size() < 2) hist.assign(sc.carbon_price.begin(), sc.carbon_price.end());
    return hist;
}

double forward_srmc(const PowerPlantSpec& plant, const Scenario& sc, int year,
                    double carbon_price) {
    double cost = plant.variable_opex + plant.carbon_intensity * carbon_price;
    if (!plant.fuel.empty()) cost += sc.fuel_price(plant.fuel, year) / plant.efficiency;
    return cost;
}

}  // namespace

double expected_plant_npv(const PowerPlantSpec& candidate, const Scenario& sc,
                          const std::vector<PowerPlantSpec>& fleet,
                          const std::vector<RepresentativeDay>& current_demand,
                          int current_year, double discount_rate, int forward_horizon) {
    const auto carbon_fc =
        forecast_carbon_price(carbon_history_until(sc, current_year),
                              std::max(forward_horizon, candidate.lifetime_years));

    std::vector<PowerPlantSpec> all = fleet;
    all.push_back(candidate);
    const std::size_t cand_idx = all.size() - 1;

    std::vector<double> cashflows;
    cashflows.push_back(-candidate.capex * candidate.capacity_mw);

    const int margin_years = std::min(forward_horizon, candidate.lifetime_years);
    // per-segment candidate dispatch in the last simulated forward year,
    // reused for the priced-at-reference tail
    std::vector<double> tail_dispatch, tail_weights;
    double tail_srmc = 0.0;

    for (int t = 1; t <= margin_years; ++t) {
        const int year = current_year + t;
        const double carbon = carbon_fc[static_cast<std::size_t>(t - 1)];
        const double growth = std::pow(1.0 + sc.demand_growth, t);

        std::vector<Bid> bids;
        bids.reserve(all.size());
        double max_srmc = 0.0;
        for (const auto& p : all) {
            const double cost = forward_srmc(p, sc, year, carbon);
            max_srmc = std::max(max_srmc, cost);
            bids.push_back({p.id, 0.0, cost});
        }
        const double voll = sc.voll_multiplier * max_srmc;
        const double cand_srmc = bids[cand_idx].srmc;

        double margin = 0.0;
        const bool last = t == margin_years;
        if (last) {
            tail_dispatch.clear();
            tail_weights.clear();
            tail_srmc = cand_srmc;
        }
        for (std::size_t d = 0; d < current_demand.size(); ++d) {
            for (int h = 0; h < 24; ++h) {
                for (std::size_t i = 0; i < all.size(); ++i)
                    bids[i].available_mw =
                        all[i].capacity_mw * sc.capacity_factor(all[i].technology, d, h);
                const double demand = current_demand[d].demand_mw[static_cast<std::size_t>(h)] * growth;
                const auto res = merit_order_dispatch(bids, demand);
                const double price =
                    res.unserved_mw > 0.0 ? voll : res.clearing_price;
                const double mw = res.dispatch_mw[cand_idx];
                margin += std::max(0.0, price - cand_srmc) * mw *
                          current_demand[d].weight_days;
                if (last) {
                    tail_dispatch.push_back(mw);
                    tail_weights.push_back(current_demand[d].weight_days);
                }
            }
        }
        cashflows.push_back(margin - candidate.fixed_opex * candidate.capacity_mw);
    }

    // beyond the dispatch horizon the expected electricity price is the
    // calibrated reference curve's final value
    const double ref_price = sc.reference_price_at(99999);
    for (int t = margin_years + 1; t <= candidate.lifetime_years; ++t) {
        double margin = 0.0;
        for (std::size_t s = 0; s < tail_dispatch.size(); ++s)
            margin += std::max(0.0, ref_price - tail_srmc) * tail_dispatch[s] *
                      tail_weights[s];
        cashflows.push_back(margin - candidate.fixed_opex * candidate.capacity_mw);
    }
    return npv(cashflows, discount_rate);
}

std::vector<Investment> investment_step(std::vector<GenCo>& gencos, const Scenario& sc,
                                        const std::vector<RepresentativeDay>& current_demand,
                                        int year, Rng& rng) {
    std::vector<Investment> made;
    if (sc.candidates.empty()) return made;

    std::vector<PowerPlantSpec> fleet;
    for (const auto& g : gencos)
        for (const auto& p : g.portfolio) fleet.push_back(p);

    // candidates ranked by technology order for the documented tie-break
    std::vector<std::size_t> cand_order(sc.candidates.size());
    std::iota(cand_order.begin(), cand_order.end(), 0);
    std::stable_sort(cand_order.begin(), cand_order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return sc.candidates[a].technology < sc.candidates[b].technology;
                     });

    for (std::size_t gi : rng.permutation(gencos.size())) {
        auto& genco = gencos[gi];
        double best_npv = 0.0;
        const PowerPlantSpec* best = nullptr;
        for (std::size_t ci : cand_order) {
            const auto& cand = sc.candidates[ci];
            const double value = expected_plant_npv(cand, sc, fleet, current_demand,
                                                    year, genco.discount_rate);
            if (value > best_npv) {  // strict: ties keep the earlier (lower) technology
                best_npv = value;
                best = &cand;
            }
        }
        if (!best) continue;
        const double cost = best->capex * best->capacity_mw;
        if (genco.cash < cost) continue;

        PowerPlantSpec plant = *best;
        plant.commission_year = year + sc.construction_delay(plant.technology);
        plant.id = genco.id + "-" + to_string(plant.technology) + "-" +
                   std::to_string(year);
        genco.cash -= cost;
        genco.portfolio.push_back(plant);
        made.push_back({genco.id, plant, best_npv, year});
    }
    return made;
}

SimulationResult run_simulation(const Scenario& sc, const ResidualDistribution* dist,
                                std::uint64_t seed) {
    sc.validate();
    // independent streams so a zero-draw perturbation cannot shift the
    // investment ordering relative to an unperturbed run
    Rng perturb_rng(seed);
    Rng invest_rng(seed + 0x9e3779b97f4a7c15ULL);

    SimulationResult result;
    std::vector<GenCo> gencos = sc.gencos;
    for (const auto& g : gencos) result.genco_cash_start[g.id] = g.cash;
    std::vector<RepresentativeDay> demand = sc.rep_days;

    for (int year = sc.start_year; year <= sc.end_year; ++year) {
        YearRecord rec;
        rec.year = year;

        for (auto& genco : gencos) {
            auto& pf = genco.portfolio;
            for (auto it = pf.begin(); it != pf.end();) {
                if (year >= it->commission_year + it->lifetime_years) {
                    rec.retired_mw[to_string(it->technology)] += it->capacity_mw;
                    it = pf.erase(it);
                } else {
                    ++it;
                }
            }
        }

        if (year > sc.start_year)
            for (auto& day : demand)
                for (auto& mw : day.demand_mw) mw *= 1.0 + sc.demand_growth;

        // active plants with their owners, in a fixed (genco, plant) order
        struct Active {
            const PowerPlantSpec* plant;
            std::size_t owner;
            double srmc;
        };
        std::vector<Active> active;
        double max_srmc = 0.0;
        for (std::size_t gi = 0; gi < gencos.size(); ++gi)
            for (const auto& p : gencos[gi].portfolio)
                if (p.commission_year <= year) {
                    const double cost = srmc(p, sc, year);
                    max_srmc = std::max(max_srmc, cost);
                    active.push_back({&p, gi, cost});
                }
        const double voll = sc.voll_multiplier * max_srmc;
        const double carbon_p = sc.carbon_price_at(year);

        std::vector<Bid> bids(active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
            bids[i] = {active[i].plant->id, 0.0, active[i].srmc};

        std::vector<double> genco_rev(gencos.size(), 0.0), genco_cost(gencos.size(), 0.0);
        for (std::size_t d = 0; d < demand.size(); ++d) {
            const double w = demand[d].weight_days;
            for (int h = 0; h < 24; ++h) {
                double seg = demand[d].demand_mw[static_cast<std::size_t>(h)];
                if (dist) seg = perturb_demand(seg, *dist, perturb_rng);
                for (std::size_t i = 0; i < active.size(); ++i)
                    bids[i].available_mw =
                        active[i].plant->capacity_mw *
                        sc.capacity_factor(active[i].plant->technology, d, h);
                const auto res = merit_order_dispatch(bids, seg);
                const double price = res.unserved_mw > 0.0 ? voll : res.clearing_price;
                rec.segment_prices.push_back(price);
                rec.unserved_mwh += res.unserved_mw * w;
                rec.demand_mwh += seg * w;

                for (std::size_t i = 0; i < active.size(); ++i) {
                    const double energy = res.dispatch_mw[i] * w;
                    if (energy <= 0.0) continue;
                    const auto& p = *active[i].plant;
                    rec.dispatch_mwh[to_string(p.technology)] += energy;
                    rec.carbon_tco2 += energy * p.carbon_intensity;
                    const double fuel = p.fuel.empty()
                                            ? 0.0
                                            : sc.fuel_price(p.fuel, year) /
                                                  p.efficiency * energy;
                    const double carbon = p.carbon_intensity * carbon_p * energy;
                    const double vop = p.variable_opex * energy;
                    rec.revenues += price * energy;
                    rec.fuel_costs += fuel;
                    rec.carbon_costs += carbon;
                    rec.variable_opex_costs += vop;
                    genco_rev[active[i].owner] += price * energy;
                    genco_cost[active[i].owner] += fuel + carbon + vop;
                }
            }
        }

        for (const auto& a : active) {
            const double fixed = a.plant->fixed_opex * a.plant->capacity_mw;
            rec.fixed_opex_costs += fixed;
            genco_cost[a.owner] += fixed;
        }

        const auto invested = investment_step(gencos, sc, demand, year, invest_rng);
        for (const auto& inv : invested) {
            rec.invested_mw[to_string(inv.plant.technology)] += inv.plant.capacity_mw;
            rec.capex_spent += inv.plant.capex * inv.plant.capacity_mw;
        }

        for (std::size_t gi = 0; gi < gencos.size(); ++gi)
            gencos[gi].cash += genco_rev[gi] - genco_cost[gi];

        result.total_carbon_tco2 += rec.carbon_tco2;
        result.total_unserved_mwh += rec.unserved_mwh;
        result.years.push_back(std::move(rec));
    }

    const double n_years = static_cast<double>(result.years.size());
    for (const auto& rec : result.years) {
        for (const auto& [tech, mwh] : rec.dispatch_mwh)
            result.mean_dispatch_mwh[tech] += mwh / n_years;
        for (const auto& [tech, mw] : rec.invested_mw)
            result.invested_capacity_mw[tech] += mw;
    }
    for (const auto& g : gencos) result.genco_cash_end[g.id] = g.cash;
    return result;
}

std::vector<double> default_sweep_sigmas() {
    std::vector<double> sigmas;
    for (int s = 1000; s <= 20000; s += 1000) sigmas.push_back(s);
    return sigmas;
}

std::vector<SweepRow> sensitivity_sweep(const Scenario& sc, std::vector<double> sigmas,
                                        const std::vector<std::uint64_t>& seeds) {
    if (sigmas.empty()) fail("InvalidArgument", "no sigma values");
    if (seeds.empty()) fail("InvalidArgument", "no seeds");
    std::vector<SweepRow> rows;
    for (double sigma : sigmas) {
        ResidualDistribution dist;
        dist.family = "normal";
        dist.params = {0.0, sigma};
        dist.lower = -std::numeric_limits<double>::infinity();
        dist.upper = std::numeric_limits<double>::infinity();

        SweepRow row;
        row.sigma = sigma;
        std::map<std::string, std::vector<double>> per_seed;
        for (std::uint64_t seed : seeds) {
            const auto r = run_simulation(sc, &dist, seed);
            for (const auto& name : kTechNames)
                per_seed[name].push_back(r.mean_dispatch_mwh.count(name)
                                             ? r.mean_dispatch_mwh.at(name)
                                             : 0.0);
        }
        for (const auto& [tech, vals] : per_seed) {
            double m = 0.0;
            for (double v : vals) m += v;
            m /= static_cast<double>(vals.size());
            double sd = 0.0;
            for (double v : vals) sd += (v - m) * (v - m);
            sd = vals.size() > 1 ? std::sqrt(sd / (vals.size() - 1.0)) : 0.0;
            row.mean_dispatch_mwh[tech] = m;
            row.sd_dispatch_mwh[tech] = sd;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string tech_header(char delim, const char* lead) {
    std::string out = lead;
    for (const auto& name : kTechNames) out += delim + name;
    return out + "\n";
}

double lookup(const std::map<std::string, double>& m, const std::string& k) {
    const auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
}

}  // namespace

std::string yearly_mix_table(const SimulationResult& r, char delim) {
    std::ostringstream out;
    out << tech_header(delim, "year");
    for (const auto& y : r.years) {
        out << y.year;
        for (const auto& name : kTechNames) out << delim << lookup(y.dispatch_mwh, name);
        out << "\n";
    }
    return out.str();
}

std::string investments_table(const SimulationResult& r, char delim) {
    std::ostringstream out;
    out << tech_header(delim, "year");
    for (const auto& y : r.years) {
        out << y.year;
        for (const auto& name : kTechNames) out << delim << lookup(y.invested_mw, name);
        out << "\n";
    }
    return out.str();
}

std::string prices_table(const SimulationResult& r, char delim) {
    std::ostringstream out;
    out << "year" << delim << "segment" << delim << "price\n";
    for (const auto& y : r.years)
        for (std::size_t s = 0; s < y.segment_prices.size(); ++s)
            out << y.year << delim << s << delim << y.segment_prices[s] << "\n";
    return out.str();
}

std::string carbon_table(const SimulationResult& r, char delim) {
    std::ostringstream out;
    out << "year" << delim << "carbon_tco2" << delim << "unserved_mwh\n";
    for (const auto& y : r.years)
        out << y.year << delim << y.carbon_tco2 << delim << y.unserved_mwh << "\n";
    return out.str();
}

namespace {

nlohmann::json plant_to_json(const PowerPlantSpec& p) {
    return {{"id", p.id},
            {"technology", to_string(p.technology)},
            {"capacity_mw", p.capacity_mw},
            {"efficiency", p.efficiency},
            {"fuel", p.fuel},
            {"variable_opex", p.variable_opex},
            {"fixed_opex", p.fixed_opex},
            {"capex", p.capex},
            {"carbon_intensity", p.carbon_intensity},
            {"lifetime_years", p.lifetime_years},
            {"commission_year", p.commission_year},
            {"dispatchable", p.dispatchable}};
}

PowerPlantSpec plant_from_json(const nlohmann::json& j) {
    PowerPlantSpec p;
    p.id = j.at("id").get<std::string>();
    p.technology = technology_from_string(j.at("technology").get<std::string>());
    p.capacity_mw = j.at("capacity_mw").get<double>();
    p.efficiency = j.value("efficiency", 1.0);
    p.fuel = j.value("fuel", std::string());
    p.variable_opex = j.value("variable_opex", 0.0);
    p.fixed_opex = j.value("fixed_opex", 0.0);
    p.capex = j.value("capex", 0.0);
    p.carbon_intensity = j.value("carbon_intensity", 0.0);
    p.lifetime_years = j.value("lifetime_years", 30);
    p.commission_year = j.value("commission_year", 2018);
    p.dispatchable = j.value("dispatchable", true);
    return p;
}

template <class K>
std::map<K, double> curve_from_json(const nlohmann::json& j) {
    std::map<K, double> out;
    for (const auto& [key, value] : j.items())
        out[static_cast<K>(std::stoi(key))] = value.template get<double>();
    return out;
}

template <class K>
nlohmann::json curve_to_json(const std::map<K, double>& curve) {
    auto out = nlohmann::json::object();
    for (const auto& [key, value] : curve) out[std::to_string(key)] = value;
    return out;
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["years"] = {{"start", sc.start_year}, {"end", sc.end_year}};
    auto fuels = nlohmann::json::object();
    for (const auto& [fuel, curve] : sc.fuel_prices) fuels[fuel] = curve_to_json(curve);
    j["fuels"] = fuels;
    j["carbon"] = curve_to_json(sc.carbon_price);
    auto days = nlohmann::json::array();
    for (const auto& d : sc.rep_days)
        days.push_back({{"name", d.name},
                        {"demand_mw", d.demand_mw},
                        {"weight_days", d.weight_days}});
    j["representative_days"] = days;
    j["demand"] = {{"growth_per_year", sc.demand_growth}};
    auto cf = nlohmann::json::object();
    for (const auto& [tech, by_day] : sc.capacity_factors) cf[tech] = by_day;
    j["capacity_factors"] = cf;
    auto cands = nlohmann::json::array();
    for (const auto& c : sc.candidates) cands.push_back(plant_to_json(c));
    j["candidates"] = cands;
    j["reference_price"] = curve_to_json(sc.reference_price);
    auto gencos = nlohmann::json::array();
    for (const auto& g : sc.gencos) {
        auto plants = nlohmann::json::array();
        for (const auto& p : g.portfolio) plants.push_back(plant_to_json(p));
        gencos.push_back({{"id", g.id},
                          {"cash", g.cash},
                          {"discount_rate", g.discount_rate},
                          {"plants", plants}});
    }
    j["gencos"] = gencos;
    j["economics"] = {{"construction_delay_years", sc.construction_delay_years},
                      {"voll_multiplier", sc.voll_multiplier}};
    return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.start_year = j.at("years").at("start").get<int>();
    sc.end_year = j.at("years").at("end").get<int>();
    for (const auto& [fuel, curve] : j.at("fuels").items())
        sc.fuel_prices[fuel] = curve_from_json<int>(curve);
    sc.carbon_price = curve_from_json<int>(j.at("carbon"));
    for (const auto& d : j.at("representative_days")) {
        RepresentativeDay day;
        day.name = d.at("name").get<std::string>();
        day.demand_mw = d.at("demand_mw").get<std::array<double, 24>>();
        day.weight_days = d.at("weight_days").get<double>();
        sc.rep_days.push_back(day);
    }
    sc.demand_growth = j.at("demand").value("growth_per_year", 0.0);
    if (j.contains("capacity_factors"))
        for (const auto& [tech, by_day] : j.at("capacity_factors").items())
            sc.capacity_factors[tech] =
                by_day.get<std::vector<std::array<double, 24>>>();
    for (const auto& c : j.value("candidates", nlohmann::json::array()))
        sc.candidates.push_back(plant_from_json(c));
    sc.reference_price = curve_from_json<int>(j.at("reference_price"));
    for (const auto& g : j.at("gencos")) {
        GenCo genco;
        genco.id = g.at("id").get<std::string>();
        genco.cash = g.at("cash").get<double>();
        genco.discount_rate = g.value("discount_rate", 0.06);
        for (const auto& p : g.at("plants")) genco.portfolio.push_back(plant_from_json(p));
        sc.gencos.push_back(std::move(genco));
    }
    if (j.contains("economics")) {
        const auto& e = j.at("economics");
        if (e.contains("construction_delay_years"))
            sc.construction_delay_years =
                e.at("construction_delay_years").get<std::map<std::string, int>>();
        sc.voll_multiplier = e.value("voll_multiplier", 10.0);
    }
    sc.validate();
    return sc;
}

Scenario default_scenario() {
    Scenario sc;
    sc.start_year = 2018;
    sc.end_year = 2035;
    sc.demand_growth = 0.005;

    for (int y = 2010; y <= 2035; ++y) {
        sc.fuel_prices["gas"][y] = 18.0;
        sc.fuel_prices["coal"][y] = 10.0;
        sc.fuel_prices["uranium"][y] = 5.0;
        sc.carbon_price[y] = 10.0 + 1.0 * (y - 2010);  // slow upward trend
        sc.reference_price[y] = 55.0;
    }

    auto day = [](const char* name, double weight, std::array<double, 24> mw) {
        RepresentativeDay d;
        d.name = name;
        d.weight_days = weight;
        d.demand_mw = mw;
        return d;
    };
    // four stylized days; firm low-cost capacity sits near the annual peak
    sc.rep_days = {
        day("winter_peak", 45.0,
            {16500, 16000, 15700, 15500, 15600, 16200, 17400, 18600, 19200, 19300,
             19200, 19100, 19000, 18900, 18900, 19200, 19900, 20000, 19800, 19400,
             18800, 18100, 17400, 16900}),
        day("winter", 90.0,
            {15400, 15000, 14800, 14700, 14800, 15300, 16300, 17400, 18000, 18100,
             18000, 17900, 17800, 17700, 17700, 17900, 18500, 18700, 18500, 18100,
             17600, 17000, 16300, 15800}),
        day("shoulder", 120.0,
            {14200, 13800, 13600, 13500, 13600, 14000, 14900, 15900, 16400, 16500,
             16400, 16300, 16200, 16100, 16100, 16300, 16700, 16800, 16600, 16300,
             15900, 15400, 14900, 14500}),
        day("summer", 110.0,
            {12900, 12500, 12300, 12200, 12300, 12700, 13400, 14300, 14800, 14900,
             14900, 14800, 14700, 14600, 14600, 14700, 15000, 15100, 15000, 14700,
             14400, 14000, 13500, 13200}),
    };

    auto flat_cf = [](double v) {
        std::array<double, 24> a{};
        a.fill(v);
        return a;
    };
    std::array<double, 24> pv_winter{}, pv_shoulder{}, pv_summer{};
    for (int h = 0; h < 24; ++h) {
        const double bell = std::max(0.0, std::sin((h - 6) * kPi / 12.0));
        pv_winter[static_cast<std::size_t>(h)] = 0.25 * bell;
        pv_shoulder[static_cast<std::size_t>(h)] = 0.45 * bell;
        pv_summer[static_cast<std::size_t>(h)] = 0.60 * bell;
    }
    sc.capacity_factors["onshore_wind"] = {flat_cf(0.42), flat_cf(0.38), flat_cf(0.30),
                                           flat_cf(0.24)};
    sc.capacity_factors["offshore_wind"] = {flat_cf(0.50), flat_cf(0.46), flat_cf(0.38),
                                            flat_cf(0.32)};
    sc.capacity_factors["photovoltaic"] = {pv_winter, pv_winter, pv_shoulder, pv_summer};

    auto plant = [](const char* id, Technology tech, double cap, double eff,
                    const char* fuel, double vop, double fop, double capex, double ci,
                    int life, int built, bool disp) {
        PowerPlantSpec p;
        p.id = id;
        p.technology = tech;
        p.capacity_mw = cap;
        p.efficiency = eff;
        p.fuel = fuel;
        p.variable_opex = vop;
        p.fixed_opex = fop;
        p.capex = capex;
        p.carbon_intensity = ci;
        p.lifetime_years = life;
        p.commission_year = built;
        p.dispatchable = disp;
        return p;
    };

    GenCo g1{"genco_a", 2.0e9, {}, 0.06};
    g1.portfolio = {
        plant("nuclear_1", Technology::nuclear, 6000, 0.33, "uranium", 5.0, 80000,
              4.0e6, 0.0, 40, 2000, true),
        plant("pv_1", Technology::photovoltaic, 2000, 1.0, "", 0.0, 8000, 0.8e6, 0.0,
              30, 2015, false),
    };
    GenCo g2{"genco_b", 2.0e9, {}, 0.06};
    g2.portfolio = {
        plant("coal_1", Technology::coal, 5000, 0.35, "coal", 3.0, 30000, 1.7e6, 0.90,
              45, 1990, true),
        plant("ccgt_1", Technology::CCGT, 6000, 0.50, "gas", 2.0, 20000, 0.6e6, 0.35,
              35, 2010, true),
    };
    GenCo g3{"genco_c", 2.0e9, {}, 0.06};
    g3.portfolio = {
        plant("wind_on_1", Technology::onshore_wind, 3000, 1.0, "", 0.0, 25000, 1.2e6,
              0.0, 25, 2015, false),
        plant("wind_off_1", Technology::offshore_wind, 2000, 1.0, "", 0.0, 45000,
              2.5e6, 0.0, 25, 2016, false),
        plant("recip_1", Technology::recip_gas, 3000, 0.35, "gas", 4.0, 10000, 0.4e6,
              0.50, 30, 2012, true),
    };
    sc.gencos = {g1, g2, g3};

    sc.candidates = {
        plant("cand_ccgt", Technology::CCGT, 1200, 0.52, "gas", 2.0, 20000, 0.6e6,
              0.34, 30, 0, true),
        plant("cand_wind", Technology::onshore_wind, 900, 1.0, "", 0.0, 25000, 1.2e6,
              0.0, 25, 0, false),
        plant("cand_recip", Technology::recip_gas, 600, 0.36, "gas", 4.0, 10000,
              0.4e6, 0.49, 30, 0, true),
    };
    // candidate availability mirrors the fleet's technology factors
    return sc;
}

std::string sweep_table(const std::vector<SweepRow>& rows, char delim) {
    std::ostringstream out;
    out << "sigma_mw";
    for (const auto& name : kTechNames)
        out << delim << name << "_mean" << delim << name << "_sd";
    out << "\n";
    for (const auto& row : rows) {
        out << row.sigma;
        for (const auto& name : kTechNames)
            out << delim << lookup(row.mean_dispatch_mwh, name) << delim
                << lookup(row.sd_dispatch_mwh, name);
        out << "\n";
    }
    return out.str();
}

}  // namespace gridcast
