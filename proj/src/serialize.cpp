#include "clr/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clr {

namespace {

std::string kind_name(DerKind k) {
    switch (k) {
        case DerKind::Fuel: return "fuel";
        case DerKind::Storage: return "storage";
        case DerKind::Renewable: return "renewable";
    }
    return "fuel";
}

DerKind kind_from(const std::string& s) {
    if (s == "fuel") return DerKind::Fuel;
    if (s == "storage") return DerKind::Storage;
    if (s == "renewable") return DerKind::Renewable;
    throw std::invalid_argument("unknown der kind: " + s);
}

std::string shape_name(ProfileShape s) {
    switch (s) {
        case ProfileShape::DiurnalSolar: return "diurnal-solar";
        case ProfileShape::GustyWind: return "gusty-wind";
        case ProfileShape::Csv: return "csv";
    }
    return "diurnal-solar";
}

ProfileShape shape_from(const std::string& s) {
    if (s == "diurnal-solar") return ProfileShape::DiurnalSolar;
    if (s == "gusty-wind") return ProfileShape::GustyWind;
    if (s == "csv") return ProfileShape::Csv;
    throw std::invalid_argument("unknown profile shape: " + s);
}

}  // namespace

nlohmann::json system_to_json(const SystemModel& sys) {
    nlohmann::json j;
    j["buses"] = sys.net.buses;
    j["root"] = sys.net.root;
    j["lines"] = nlohmann::json::array();
    for (const auto& l : sys.net.lines)
        j["lines"].push_back({{"from", l.from}, {"to", l.to}, {"r", l.r_pu}, {"x", l.x_pu}});
    j["v_min"] = sys.net.v_min;
    j["v_max"] = sys.net.v_max;
    j["root_voltage"] = sys.net.root_voltage;
    j["base"] = {{"s_kva", sys.net.base.s_kva}, {"v_kv", sys.net.base.v_kv}};

    j["loads"] = nlohmann::json::array();
    for (const auto& l : sys.loads.loads)
        j["loads"].push_back({{"name", l.name},
                              {"bus", l.bus},
                              {"demand_p", l.demand_p_kw},
                              {"demand_q", l.demand_q_kvar},
                              {"priority", l.priority}});

    j["ders"] = nlohmann::json::array();
    for (const auto& d : sys.fleet.devices) {
        nlohmann::json dj = {{"name", d.name},
                             {"kind", kind_name(d.kind)},
                             {"bus", d.bus},
                             {"angle_lo", d.angle_lo},
                             {"angle_hi", d.angle_hi}};
        switch (d.kind) {
            case DerKind::Fuel:
                dj["p_min"] = d.p_min_kw;
                dj["p_max"] = d.p_max_kw;
                dj["fuel_reserve"] = d.fuel_reserve_kwh;
                break;
            case DerKind::Storage:
                dj["charge_max"] = d.charge_max_kw;
                dj["discharge_max"] = d.discharge_max_kw;
                dj["soc_min"] = d.soc_min_kwh;
                dj["soc_max"] = d.soc_max_kwh;
                dj["soc_init"] = d.soc_init_kwh;
                dj["eff_charge"] = d.eff_charge;
                dj["eff_discharge"] = d.eff_discharge;
                break;
            case DerKind::Renewable:
                dj["capacity"] = d.capacity_kw;
                dj["shape"] = shape_name(d.shape);
                break;
        }
        j["ders"].push_back(dj);
    }
    return j;
}

SystemModel system_from_json(const nlohmann::json& j) {
    SystemModel sys;
    sys.net.buses = j.at("buses").get<std::vector<std::string>>();
    sys.net.root = j.at("root").get<std::string>();
    for (const auto& lj : j.at("lines"))
        sys.net.lines.push_back({lj.at("from").get<std::string>(),
                                 lj.at("to").get<std::string>(),
                                 lj.at("r").get<double>(), lj.at("x").get<double>()});
    sys.net.v_min = j.value("v_min", 0.9025);
    sys.net.v_max = j.value("v_max", 1.1025);
    sys.net.root_voltage = j.value("root_voltage", 1.0);
    if (j.contains("base")) {
        sys.net.base.s_kva = j["base"].value("s_kva", 1000.0);
        sys.net.base.v_kv = j["base"].value("v_kv", 4.16);
    }

    for (const auto& lj : j.at("loads")) {
        Load l;
        l.name = lj.at("name").get<std::string>();
        l.bus = lj.at("bus").get<std::string>();
        l.demand_p_kw = lj.at("demand_p").get<double>();
        l.demand_q_kvar = lj.at("demand_q").get<double>();
        l.priority = lj.at("priority").get<double>();
        sys.loads.loads.push_back(l);
    }

    for (const auto& dj : j.at("ders")) {
        DerDevice d;
        d.name = dj.at("name").get<std::string>();
        d.kind = kind_from(dj.at("kind").get<std::string>());
        d.bus = dj.at("bus").get<std::string>();
        d.angle_lo = dj.at("angle_lo").get<double>();
        d.angle_hi = dj.at("angle_hi").get<double>();
        switch (d.kind) {
            case DerKind::Fuel:
                d.p_min_kw = dj.value("p_min", 0.0);
                d.p_max_kw = dj.at("p_max").get<double>();
                d.fuel_reserve_kwh = dj.at("fuel_reserve").get<double>();
                break;
            case DerKind::Storage:
                d.charge_max_kw = dj.at("charge_max").get<double>();
                d.discharge_max_kw = dj.at("discharge_max").get<double>();
                d.soc_min_kwh = dj.at("soc_min").get<double>();
                d.soc_max_kwh = dj.at("soc_max").get<double>();
                d.soc_init_kwh = dj.at("soc_init").get<double>();
                d.eff_charge = dj.value("eff_charge", 0.95);
                d.eff_discharge = dj.value("eff_discharge", 0.95);
                break;
            case DerKind::Renewable:
                d.capacity_kw = dj.at("capacity").get<double>();
                d.shape = shape_from(dj.value("shape", "diurnal-solar"));
                break;
        }
        sys.fleet.devices.push_back(d);
    }
    sys.validate();
    return sys;
}

nlohmann::json task_to_json(const Task& task) {
    nlohmann::json j;
    j["id"] = task.id;
    j["system"] = system_to_json(task.system);
    j["demand_p"] = task.demand_p_kw;
    j["demand_q"] = task.demand_q_kvar;
    j["profiles"] = nlohmann::json::array();
    for (const auto& p : task.profiles)
        j["profiles"].push_back(
            {{"device", p.device}, {"cap", p.cap_kw}, {"actual", p.actual_kw}});
    j["forecasts"] = nlohmann::json::array();
    for (const auto& f : task.forecasts)
        j["forecasts"].push_back({{"device", f.device},
                                  {"horizon", f.horizon},
                                  {"lookahead", f.lookahead},
                                  {"values", f.values}});
    j["error_level"] = task.error_level;
    j["horizon_steps"] = task.horizon_steps;
    j["tau_hours"] = task.tau_hours;
    j["kappa_hours"] = task.kappa_hours;
    j["mu"] = task.mu;
    j["lambda"] = task.lambda;
    j["seed"] = task.seed;
    return j;
}

Task task_from_json(const nlohmann::json& j) {
    Task task;
    task.id = j.at("id").get<std::string>();
    task.system = system_from_json(j.at("system"));
    task.demand_p_kw = j.at("demand_p").get<std::vector<double>>();
    task.demand_q_kvar = j.at("demand_q").get<std::vector<double>>();
    for (const auto& pj : j.at("profiles")) {
        RenewableProfile p;
        p.device = pj.at("device").get<std::string>();
        p.cap_kw = pj.at("cap").get<double>();
        p.actual_kw = pj.at("actual").get<std::vector<double>>();
        task.profiles.push_back(std::move(p));
    }
    for (const auto& fj : j.at("forecasts")) {
        ForecastTensor f;
        f.device = fj.at("device").get<std::string>();
        f.horizon = fj.at("horizon").get<int>();
        f.lookahead = fj.at("lookahead").get<int>();
        f.values = fj.at("values").get<std::vector<double>>();
        task.forecasts.push_back(std::move(f));
    }
    task.error_level = j.at("error_level").get<double>();
    task.horizon_steps = j.at("horizon_steps").get<int>();
    task.tau_hours = j.at("tau_hours").get<double>();
    task.kappa_hours = j.at("kappa_hours").get<double>();
    task.mu = j.at("mu").get<double>();
    task.lambda = j.at("lambda").get<double>();
    task.seed = j.at("seed").get<std::uint64_t>();
    task.validate();
    return task;
}

nlohmann::json family_to_json(const std::vector<Task>& tasks) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : tasks) j.push_back(task_to_json(t));
    return j;
}

std::vector<Task> family_from_json(const nlohmann::json& j) {
    std::vector<Task> tasks;
    for (const auto& tj : j) tasks.push_back(task_from_json(tj));
    return tasks;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    nlohmann::json j;
    in >> j;
    return j;
}

std::map<std::string, std::vector<double>> read_profile_csv(
    const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("profile csv is empty: " + file.string());

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };

    std::vector<std::string> header = split(line);
    std::map<std::string, std::vector<double>> columns;
    std::vector<std::vector<double>*> slots;
    for (const auto& h : header) slots.push_back(&columns[h]);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("profile csv row width mismatch");
        for (std::size_t c = 0; c < cells.size(); ++c)
            slots[c]->push_back(std::stod(cells[c]));
    }
    return columns;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file,
                     const std::vector<std::string>& header)
    : path_(file), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
    std::ofstream out(path_);
    out << buffer_;
}

void write_trace_csv(const EpisodeTrace& trace, const Task& task,
                     const std::filesystem::path& file) {
    std::vector<std::string> header = {"t"};
    for (const auto& l : task.system.loads.loads) header.push_back("served_" + l.name);
    for (const auto& d : task.system.fleet.devices) header.push_back("p_" + d.name);
    const auto storage = task.system.fleet.storage_indices();
    const auto fuel = task.system.fleet.fuel_indices();
    for (int s : storage) header.push_back("soc_" + task.system.fleet.devices[s].name);
    for (int f : fuel) header.push_back("fuel_" + task.system.fleet.devices[f].name);
    header.insert(header.end(), {"v_min", "v_max", "reward", "priority_term",
                                 "fluctuation_term", "voltage_term", "curtail_kw"});

    CsvWriter csv(file, header);
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto& step = trace.steps[t];
        std::vector<std::string> row = {std::to_string(t + 1)};
        for (double s : step.info.served_kw) row.push_back(format_double(s));
        for (double p : step.info.der_p_kw) row.push_back(format_double(p));
        for (double s : step.next.soc_kwh) row.push_back(format_double(s));
        for (double f : step.next.fuel_kwh) row.push_back(format_double(f));
        auto [vmin_it, vmax_it] =
            std::minmax_element(step.info.voltages.begin(), step.info.voltages.end());
        row.push_back(format_double(*vmin_it));
        row.push_back(format_double(*vmax_it));
        row.push_back(format_double(step.reward));
        row.push_back(format_double(step.info.priority_term));
        row.push_back(format_double(step.info.fluctuation_term));
        row.push_back(format_double(step.info.voltage_term));
        row.push_back(format_double(step.info.curtailment_kw));
        csv.row(row);
    }
}

}  // namespace clr
