#pragma once

#include <filesystem>

#include "mixroute/sim.hpp"

namespace mixroute {

// Scenario file (JSON): clusters, arrival {rate_per_minute |
// mean_interarrival_minutes, populations}, service {distribution,
// mean_minutes}, horizon_minutes, snapshot_interval_minutes, seed, router,
// schema. Relative asset paths resolve against the scenario file's
// directory. seed_override replaces the embedded seed when set.
Scenario load_scenario(const std::filesystem::path& path,
                       std::optional<std::uint64_t> seed_override = {});

// Writes events.jsonl, snapshots.csv, mutations.jsonl and summary.json
// into `dir`; byte-identical for identical logs.
void save_event_log(const EventLog& log, const std::filesystem::path& dir);
EventLog load_event_log(const std::filesystem::path& dir);

// timeseries.csv (one row per snapshot per cluster) and overflows.csv.
void write_report(const Report& rep, const std::filesystem::path& dir);

// Final per-physician loads, rebuilt by replaying the mutation log:
// time,cluster_index,cluster_label,physician_ordinal,load,saturated_flag.
void write_registry_dump(const EventLog& log,
                         const std::vector<ScenarioCluster>& clusters,
                         const std::filesystem::path& path);

// Shortest round-trip decimal rendering (std::to_chars); used for every
// floating-point value in CSV output.
std::string format_double(double value);

}  // namespace mixroute
