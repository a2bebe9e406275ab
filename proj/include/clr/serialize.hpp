#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clr/env.hpp"
#include "clr/grid.hpp"
#include "clr/scenario.hpp"

namespace clr {

// Documented JSON schema: buses, lines, loads, ders arrays. Builders emit the
// same schema for round-tripping.
nlohmann::json system_to_json(const SystemModel& sys);
SystemModel system_from_json(const nlohmann::json& j);

nlohmann::json task_to_json(const Task& task);
Task task_from_json(const nlohmann::json& j);

nlohmann::json family_to_json(const std::vector<Task>& tasks);
std::vector<Task> family_from_json(const nlohmann::json& j);

void write_json(const nlohmann::json& j, const std::filesystem::path& file);
nlohmann::json read_json(const std::filesystem::path& file);

// CSV profile ingestion: header row of device ids, one column per device,
// one row per step, kW.
std::map<std::string, std::vector<double>> read_profile_csv(
    const std::filesystem::path& file);

// Deterministic float formatting for CSV artifacts.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    ~CsvWriter();

private:
    std::filesystem::path path_;
    std::string buffer_;
    std::size_t columns_;
};

// One row per step: t, served kW per load, dispatch per DER, soc, fuel,
// min/max voltage, reward and its terms, curtailment.
void write_trace_csv(const EpisodeTrace& trace, const Task& task,
                     const std::filesystem::path& file);

}  // namespace clr
