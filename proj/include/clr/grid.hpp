#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clr {

// Per-unit conversion bases.
struct PuBase {
    double s_kva = 1000.0;
    double v_kv = 4.16;
};

struct Line {
    std::string from;
    std::string to;
    double r_pu = 0.01;
    double x_pu = 0.02;
};

// Radial network. Voltage quantities are squared magnitudes in per-unit^2,
// the natural variable of the linearized branch-flow model (0.95/1.05 p.u.
// limits appear squared).
struct NetworkModel {
    std::vector<std::string> buses;
    std::string root;
    std::vector<Line> lines;
    double v_min = 0.9025;       // 0.95^2
    double v_max = 1.1025;       // 1.05^2
    double root_voltage = 1.0;   // p.u.^2
    PuBase base;

    int index_of(const std::string& bus) const;  // -1 when absent
    // Throws std::domain_error unless the line set is a spanning tree rooted
    // at `root` with strictly positive impedances and v_min < v_max.
    void validate() const;
};

struct Load {
    std::string name;
    std::string bus;
    double demand_p_kw = 0.0;
    double demand_q_kvar = 0.0;
    double priority = 1.0;  // in (0, 1]
};

struct LoadSet {
    std::vector<Load> loads;
    void validate(const NetworkModel& net) const;
    std::vector<double> priorities() const;
};

enum class DerKind { Fuel, Storage, Renewable };
enum class ProfileShape { DiurnalSolar, GustyWind, Csv };

struct DerDevice {
    std::string name;
    DerKind kind = DerKind::Fuel;
    std::string bus;
    // Active power box (kW). For storage the charge/discharge bounds below
    // are used instead.
    double p_min_kw = 0.0;
    double p_max_kw = 0.0;
    // Power-factor angle bounds (radians), 0 <= lo <= hi < pi/2.
    double angle_lo = 0.0;
    double angle_hi = 0.0;
    // Fuel.
    double fuel_reserve_kwh = 0.0;
    // Storage. Discharge-positive convention throughout.
    double charge_max_kw = 0.0;
    double discharge_max_kw = 0.0;
    double soc_min_kwh = 0.0;
    double soc_max_kwh = 0.0;
    double soc_init_kwh = 0.0;
    double eff_charge = 0.95;
    double eff_discharge = 0.95;
    // Renewable.
    double capacity_kw = 0.0;
    ProfileShape shape = ProfileShape::DiurnalSolar;
};

struct DerFleet {
    std::vector<DerDevice> devices;

    std::vector<int> fuel_indices() const;
    std::vector<int> storage_indices() const;
    std::vector<int> renewable_indices() const;
    void validate(const NetworkModel& net) const;
};

struct SystemModel {
    NetworkModel net;
    LoadSet loads;
    DerFleet fleet;
    void validate() const;
};

// Balanced single-phase analog of the modified IEEE-13 feeder: 13 buses,
// 15 prioritized loads, storage / micro-turbine / PV / WT fleet.
SystemModel build_ieee13_analog();

// 123-bus analog with 20 critical loads and 6 DERs (2 fuel, 2 storage,
// 2 renewable).
SystemModel build_ieee123_analog();

// Linear branch-flow solve on the tree: branch flows are sums of downstream
// net withdrawals, v_child = v_parent - 2(r P + x Q) in per-unit, root pinned
// at net.root_voltage. Injections are net per-bus values (generation minus
// load), one entry per bus in bus order. Returns squared voltage magnitudes.
std::vector<double> solve_power_flow(const NetworkModel& net,
                                     std::span<const double> injection_p_kw,
                                     std::span<const double> injection_q_kvar);

// -lambda * sum over buses of the squared bound violation; 0 when all buses
// are inside [v_min, v_max].
double voltage_penalty(std::span<const double> v, const NetworkModel& net,
                       double lambda);

}  // namespace clr
