#include "clr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace clr {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Parent/order decomposition of the tree, used by the solver.
struct TreeView {
    std::vector<int> parent;       // -1 at root
    std::vector<int> parent_line;  // line index into net.lines
    std::vector<int> bfs_order;    // root first
};

TreeView build_tree(const NetworkModel& net) {
    const int n = static_cast<int>(net.buses.size());
    if (static_cast<int>(net.lines.size()) != n - 1)
        throw std::domain_error("network is not radial: need |buses|-1 lines");

    std::unordered_map<std::string, int> index;
    for (int b = 0; b < n; ++b) index.emplace(net.buses[b], b);

    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, line)
    for (int l = 0; l < static_cast<int>(net.lines.size()); ++l) {
        auto fi = index.find(net.lines[l].from);
        auto ti = index.find(net.lines[l].to);
        if (fi == index.end() || ti == index.end())
            throw std::domain_error("line endpoint is not a bus: " +
                                    net.lines[l].from + "-" + net.lines[l].to);
        adj[fi->second].emplace_back(ti->second, l);
        adj[ti->second].emplace_back(fi->second, l);
    }

    auto ri = index.find(net.root);
    if (ri == index.end()) throw std::domain_error("root bus not in bus list");

    TreeView tv;
    tv.parent.assign(n, -2);
    tv.parent_line.assign(n, -1);
    tv.bfs_order.reserve(n);
    std::queue<int> q;
    q.push(ri->second);
    tv.parent[ri->second] = -1;
    while (!q.empty()) {
        int b = q.front();
        q.pop();
        tv.bfs_order.push_back(b);
        for (auto [nb, l] : adj[b]) {
            if (tv.parent[nb] != -2) continue;
            tv.parent[nb] = b;
            tv.parent_line[nb] = l;
            q.push(nb);
        }
    }
    if (static_cast<int>(tv.bfs_order.size()) != n)
        throw std::domain_error("network is not radial: disconnected buses");
    return tv;
}

}  // namespace

int NetworkModel::index_of(const std::string& bus) const {
    for (int b = 0; b < static_cast<int>(buses.size()); ++b)
        if (buses[b] == bus) return b;
    return -1;
}

void NetworkModel::validate() const {
    if (buses.empty()) throw std::domain_error("network has no buses");
    for (const auto& l : lines)
        if (l.r_pu <= 0.0 || l.x_pu <= 0.0)
            throw std::domain_error("line impedances must be strictly positive");
    if (!(v_min < v_max)) throw std::domain_error("v_min must be below v_max");
    build_tree(*this);  // radiality
}

std::vector<double> LoadSet::priorities() const {
    std::vector<double> p;
    p.reserve(loads.size());
    for (const auto& l : loads) p.push_back(l.priority);
    return p;
}

void LoadSet::validate(const NetworkModel& net) const {
    for (const auto& l : loads) {
        if (l.demand_p_kw <= 0.0)
            throw std::domain_error("load " + l.name + ": demand_p must be > 0");
        if (l.demand_q_kvar < 0.0)
            throw std::domain_error("load " + l.name + ": demand_q must be >= 0");
        if (l.priority <= 0.0 || l.priority > 1.0)
            throw std::domain_error("load " + l.name + ": priority must be in (0,1]");
        if (net.index_of(l.bus) < 0)
            throw std::domain_error("load " + l.name + ": unknown bus " + l.bus);
    }
}

std::vector<int> DerFleet::fuel_indices() const {
    std::vector<int> idx;
    for (int d = 0; d < static_cast<int>(devices.size()); ++d)
        if (devices[d].kind == DerKind::Fuel) idx.push_back(d);
    return idx;
}

std::vector<int> DerFleet::storage_indices() const {
    std::vector<int> idx;
    for (int d = 0; d < static_cast<int>(devices.size()); ++d)
        if (devices[d].kind == DerKind::Storage) idx.push_back(d);
    return idx;
}

std::vector<int> DerFleet::renewable_indices() const {
    std::vector<int> idx;
    for (int d = 0; d < static_cast<int>(devices.size()); ++d)
        if (devices[d].kind == DerKind::Renewable) idx.push_back(d);
    return idx;
}

void DerFleet::validate(const NetworkModel& net) const {
    for (const auto& d : devices) {
        if (net.index_of(d.bus) < 0)
            throw std::domain_error("der " + d.name + ": unknown bus " + d.bus);
        if (!(d.angle_lo >= 0.0 && d.angle_lo <= d.angle_hi &&
              d.angle_hi < std::numbers::pi / 2.0))
            throw std::domain_error("der " + d.name + ": bad angle bounds");
        switch (d.kind) {
            case DerKind::Fuel:
                if (d.fuel_reserve_kwh <= 0.0 || d.p_max_kw <= 0.0)
                    throw std::domain_error("der " + d.name +
                                            ": fuel reserve and p_max must be > 0");
                break;
            case DerKind::Storage:
                if (d.charge_max_kw <= 0.0 || d.discharge_max_kw <= 0.0)
                    throw std::domain_error("der " + d.name +
                                            ": charge/discharge bounds must be > 0");
                if (!(d.soc_min_kwh <= d.soc_init_kwh &&
                      d.soc_init_kwh <= d.soc_max_kwh))
                    throw std::domain_error("der " + d.name + ": s0 outside SOC box");
                if (!(d.eff_charge > 0.0 && d.eff_charge <= 1.0 &&
                      d.eff_discharge > 0.0 && d.eff_discharge <= 1.0))
                    throw std::domain_error("der " + d.name + ": efficiencies in (0,1]");
                break;
            case DerKind::Renewable:
                if (d.capacity_kw <= 0.0)
                    throw std::domain_error("der " + d.name + ": capacity must be > 0");
                break;
        }
    }
}

void SystemModel::validate() const {
    net.validate();
    loads.validate(net);
    fleet.validate(net);
}

SystemModel build_ieee13_analog() {
    SystemModel sys;
    sys.net.buses = {"650", "632", "633", "634", "645", "646", "671",
                     "692", "675", "684", "611", "652", "680"};
    sys.net.root = "650";
    const char* ends[12][2] = {
        {"650", "632"}, {"632", "633"}, {"633", "634"}, {"632", "645"},
        {"645", "646"}, {"632", "671"}, {"671", "692"}, {"692", "675"},
        {"671", "684"}, {"684", "611"}, {"684", "652"}, {"671", "680"},
    };
    for (auto& e : ends) sys.net.lines.push_back({e[0], e[1], 0.01, 0.02});
    sys.net.base = {1000.0, 4.16};

    // 15 loads; per-phase spot loads become independent loads on the parent
    // bus. Priority vector ordered highest first.
    const double pf_tan = std::tan(std::acos(0.95));
    struct Spot { const char* name; const char* bus; double priority; };
    const Spot spots[15] = {
        {"671", "671", 1.00},  {"634a", "634", 1.00}, {"634b", "634", 0.90},
        {"634c", "634", 0.85}, {"645", "645", 0.80},  {"646", "646", 0.80},
        {"692", "692", 0.75},  {"675a", "675", 0.70}, {"675b", "675", 0.65},
        {"675c", "675", 0.50}, {"611", "611", 0.45},  {"652", "652", 0.40},
        {"632", "632", 0.30},  {"680", "680", 0.30},  {"684", "684", 0.20},
    };
    for (const auto& s : spots) {
        Load l;
        l.name = s.name;
        l.bus = s.bus;
        l.demand_p_kw = 100.0;
        l.demand_q_kvar = 100.0 * pf_tan;
        l.priority = s.priority;
        sys.loads.loads.push_back(l);
    }

    DerDevice mt;
    mt.name = "mt1";
    mt.kind = DerKind::Fuel;
    mt.bus = "633";
    mt.p_min_kw = 0.0;
    mt.p_max_kw = 400.0;
    mt.fuel_reserve_kwh = 1200.0;
    mt.angle_lo = 0.0;
    mt.angle_hi = kQuarterPi;

    DerDevice st;
    st.name = "st1";
    st.kind = DerKind::Storage;
    st.bus = "675";
    st.charge_max_kw = 250.0;
    st.discharge_max_kw = 250.0;
    st.soc_min_kwh = 160.0;
    st.soc_max_kwh = 1250.0;
    st.soc_init_kwh = 1200.0;
    st.angle_lo = 0.0;
    st.angle_hi = kQuarterPi;

    DerDevice pv;
    pv.name = "pv1";
    pv.kind = DerKind::Renewable;
    pv.bus = "680";
    pv.capacity_kw = 300.0;
    pv.shape = ProfileShape::DiurnalSolar;
    pv.angle_lo = 0.0;
    pv.angle_hi = kQuarterPi;

    DerDevice wt;
    wt.name = "wt1";
    wt.kind = DerKind::Renewable;
    wt.bus = "646";
    wt.capacity_kw = 300.0;
    wt.shape = ProfileShape::GustyWind;
    wt.angle_lo = 0.0;
    wt.angle_hi = kQuarterPi;

    sys.fleet.devices = {mt, st, pv, wt};
    sys.validate();
    return sys;
}

SystemModel build_ieee123_analog() {
    SystemModel sys;
    // Declared analog: 41-bus trunk with 41 two-bus laterals.
    const int n = 123;
    for (int b = 1; b <= n; ++b) sys.net.buses.push_back(std::to_string(b));
    sys.net.root = "1";
    auto link = [&](int from, int to) {
        sys.net.lines.push_back(
            {std::to_string(from), std::to_string(to), 0.01, 0.02});
    };
    for (int b = 2; b <= 41; ++b) link(b - 1, b);
    for (int k = 0; k < 41; ++k) {
        link(1 + k, 42 + 2 * k);
        link(42 + 2 * k, 43 + 2 * k);
    }
    sys.net.base = {1000.0, 4.16};

    const double pf_tan = std::tan(std::acos(0.95));
    const double priorities[20] = {1.00, 1.00, 0.95, 0.90, 0.85, 0.80, 0.80,
                                   0.75, 0.70, 0.65, 0.60, 0.55, 0.50, 0.45,
                                   0.40, 0.35, 0.30, 0.30, 0.25, 0.20};
    for (int i = 0; i < 20; ++i) {
        Load l;
        l.bus = std::to_string(43 + 4 * i);  // every other lateral tip
        l.name = "L" + l.bus;
        l.demand_p_kw = 100.0;
        l.demand_q_kvar = 100.0 * pf_tan;
        l.priority = priorities[i];
        sys.loads.loads.push_back(l);
    }

    auto fuel = [&](const char* name, const char* bus) {
        DerDevice d;
        d.name = name;
        d.kind = DerKind::Fuel;
        d.bus = bus;
        d.p_min_kw = 0.0;
        d.p_max_kw = 400.0;
        d.fuel_reserve_kwh = 1200.0;
        d.angle_lo = 0.0;
        d.angle_hi = kQuarterPi;
        return d;
    };
    auto storage = [&](const char* name, const char* bus) {
        DerDevice d;
        d.name = name;
        d.kind = DerKind::Storage;
        d.bus = bus;
        d.charge_max_kw = 250.0;
        d.discharge_max_kw = 250.0;
        d.soc_min_kwh = 160.0;
        d.soc_max_kwh = 1250.0;
        d.soc_init_kwh = 1200.0;
        d.angle_lo = 0.0;
        d.angle_hi = kQuarterPi;
        return d;
    };
    auto renewable = [&](const char* name, const char* bus, ProfileShape shape) {
        DerDevice d;
        d.name = name;
        d.kind = DerKind::Renewable;
        d.bus = bus;
        d.capacity_kw = 300.0;
        d.shape = shape;
        d.angle_lo = 0.0;
        d.angle_hi = kQuarterPi;
        return d;
    };
    sys.fleet.devices = {fuel("mt1", "5"),   fuel("mt2", "25"),
                         storage("st1", "15"), storage("st2", "35"),
                         renewable("pv1", "41", ProfileShape::DiurnalSolar),
                         renewable("wt1", "30", ProfileShape::GustyWind)};
    sys.validate();
    return sys;
}

std::vector<double> solve_power_flow(const NetworkModel& net,
                                     std::span<const double> injection_p_kw,
                                     std::span<const double> injection_q_kvar) {
    const int n = static_cast<int>(net.buses.size());
    if (static_cast<int>(injection_p_kw.size()) != n ||
        static_cast<int>(injection_q_kvar.size()) != n)
        throw std::invalid_argument("injections must cover every bus");

    const TreeView tv = build_tree(net);

    // Per-unit net withdrawals.
    std::vector<double> wp(n), wq(n);
    for (int b = 0; b < n; ++b) {
        wp[b] = -injection_p_kw[b] / net.base.s_kva;
        wq[b] = -injection_q_kvar[b] / net.base.s_kva;
    }

    // Subtree withdrawal sums, leaves first.
    std::vector<double> sub_p = wp, sub_q = wq;
    for (int i = n - 1; i >= 1; --i) {
        int b = tv.bfs_order[i];
        sub_p[tv.parent[b]] += sub_p[b];
        sub_q[tv.parent[b]] += sub_q[b];
    }

    std::vector<double> v(n, 0.0);
    v[tv.bfs_order[0]] = net.root_voltage;
    for (int i = 1; i < n; ++i) {
        int b = tv.bfs_order[i];
        const Line& l = net.lines[tv.parent_line[b]];
        v[b] = v[tv.parent[b]] - 2.0 * (l.r_pu * sub_p[b] + l.x_pu * sub_q[b]);
    }
    return v;
}

double voltage_penalty(std::span<const double> v, const NetworkModel& net,
                       double lambda) {
    double sum = 0.0;
    for (double vb : v) {
        double viol = std::max(0.0, vb - net.v_max) + std::max(0.0, net.v_min - vb);
        sum += viol * viol;
    }
    return -lambda * sum;
}

}  // namespace clr
