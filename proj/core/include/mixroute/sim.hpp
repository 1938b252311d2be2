#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mixroute/ingest.hpp"
#include "mixroute/registry.hpp"
#include "mixroute/router.hpp"

namespace mixroute {

enum class ServiceDistribution { Exponential, Fixed };

std::string to_string(ServiceDistribution d);
ServiceDistribution service_distribution_from_string(const std::string& s);

struct ScenarioCluster {
    std::string label;
    int physician_count = 0;
    std::optional<int> capacity;  // nullopt = unbounded
    bool is_general = false;
};

// Everything one simulation run depends on; run(scenario) is a pure
// function of this struct.
struct Scenario {
    std::vector<ScenarioCluster> clusters;  // general last
    double arrival_rate_per_minute = 0.0;   // 0 = no arrivals
    std::vector<PopulationSpec> populations;
    ServiceDistribution service_distribution = ServiceDistribution::Exponential;
    double service_mean_minutes = 60.0;
    double horizon_minutes = 120.0;
    double snapshot_interval_minutes = 5.0;
    double stagnation_epsilon = 1e-9;
    std::uint64_t seed = 0;
    RouterConfig router;
    FeatureSchema schema;
};

enum class EventKind {
    Arrival,
    Assignment,
    Departure,
    OverflowToGeneral,
    StagnationFlag,
    StagnationClear,
};

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;  // position in the log
    EventKind kind = EventKind::Arrival;
    std::string patient_id;
    int cluster = 0;    // Assignment/Departure: actual; Overflow: intended
    int physician = 0;  // 0 when not applicable
    std::string detail;
};

struct SnapshotRecord {
    // Number of events logged before the snapshot was taken; events with
    // seq < this value happened at or before the snapshot instant.
    std::uint64_t events_before = 0;
    LoadSnapshot load;
};

struct ClusterSummary {
    std::string label;
    long long routed = 0;       // Algorithm-1 decisions targeting the cluster
    long long assignments = 0;  // patients actually placed there
    long long overflows = 0;    // intended here, bounced to general
    long long departures = 0;
    long long final_load = 0;
};

struct EventLog {
    std::vector<std::string> cluster_labels;  // index c-1 holds cluster c
    int general_cluster = 0;
    std::uint64_t seed = 0;
    double horizon_minutes = 0.0;
    double snapshot_interval_minutes = 0.0;
    std::vector<Event> events;
    std::vector<SnapshotRecord> snapshots;
    std::vector<MutationEntry> mutations;
    std::vector<ClusterSummary> summary;
};

// Runs the scenario event loop: Poisson arrivals are feature-extracted,
// routed (Algorithm 1) and assigned least-loaded (Algorithm 2); a stagnation
// flag or a full cluster bounces the patient to the general cluster with an
// OVERFLOW_TO_GENERAL event; assignments schedule departures; snapshots are
// taken every snapshot_interval and drive the stagnation checks on the
// specialist clusters. Deterministic: one RNG stream seeded from the
// scenario, consumed in event order (per arrival: specialty, then frames,
// then service time when exponential, then the next inter-arrival gap).
EventLog run(const Scenario& scenario);

void validate_scenario(const Scenario& scenario);

struct ReportRow {
    double time = 0.0;
    int cluster = 0;
    std::string label;
    long long cumulative_assignments = 0;
    long long occupancy = 0;
    long long cumulative_overflows = 0;
    bool flagged = false;
};

struct OverflowRow {
    double time = 0.0;
    std::string patient_id;
    int intended_cluster = 0;
    std::string trigger;  // "capacity" | "stagnation_flag"
};

struct Report {
    std::vector<ReportRow> timeseries;  // one row per snapshot per cluster
    std::vector<OverflowRow> overflows;
};

// Derives the plot-ready tables from a log; pure.
Report report(const EventLog& log);

}  // namespace mixroute
