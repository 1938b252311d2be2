#include "mixroute/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include "mixroute/rng.hpp"

namespace mixroute {

std::string to_string(ServiceDistribution d) {
    return d == ServiceDistribution::Exponential ? "EXPONENTIAL" : "FIXED";
}

ServiceDistribution service_distribution_from_string(const std::string& s) {
    if (s == "EXPONENTIAL") return ServiceDistribution::Exponential;
    if (s == "FIXED") return ServiceDistribution::Fixed;
    throw std::invalid_argument("unknown service distribution: " + s);
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Arrival: return "ARRIVAL";
        case EventKind::Assignment: return "ASSIGNMENT";
        case EventKind::Departure: return "DEPARTURE";
        case EventKind::OverflowToGeneral: return "OVERFLOW_TO_GENERAL";
        case EventKind::StagnationFlag: return "STAGNATION_FLAG";
        case EventKind::StagnationClear: return "STAGNATION_CLEAR";
    }
    throw std::logic_error("unreachable");
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "ARRIVAL") return EventKind::Arrival;
    if (s == "ASSIGNMENT") return EventKind::Assignment;
    if (s == "DEPARTURE") return EventKind::Departure;
    if (s == "OVERFLOW_TO_GENERAL") return EventKind::OverflowToGeneral;
    if (s == "STAGNATION_FLAG") return EventKind::StagnationFlag;
    if (s == "STAGNATION_CLEAR") return EventKind::StagnationClear;
    throw std::invalid_argument("unknown event kind: " + s);
}

void validate_scenario(const Scenario& s) {
    if (s.clusters.empty()) throw std::invalid_argument("scenario: needs clusters");
    int generals = 0;
    for (const auto& c : s.clusters) {
        if (c.physician_count < 1) {
            throw std::invalid_argument("scenario: cluster \"" + c.label +
                                        "\" needs at least one physician");
        }
        if (c.is_general) ++generals;
    }
    if (generals != 1 || !s.clusters.back().is_general) {
        throw std::invalid_argument("scenario: exactly one general cluster, listed last");
    }
    if (!(s.horizon_minutes > 0.0)) throw std::invalid_argument("scenario: horizon must be > 0");
    if (!(s.snapshot_interval_minutes > 0.0)) {
        throw std::invalid_argument("scenario: snapshot interval must be > 0");
    }
    if (s.arrival_rate_per_minute < 0.0) {
        throw std::invalid_argument("scenario: arrival rate must be >= 0");
    }
    if (s.arrival_rate_per_minute > 0.0) {
        validate_populations(s.populations);
        if (!(s.service_mean_minutes > 0.0)) {
            throw std::invalid_argument("scenario: service mean must be > 0");
        }
        for (const auto& p : s.populations) {
            if (p.generator.dimension() != s.schema.dimension()) {
                throw std::invalid_argument("scenario: population \"" + p.label +
                                            "\" dimension does not match the schema");
            }
        }
    }
    const int specialists = static_cast<int>(s.clusters.size()) - 1;
    if (s.router.specialist_count() != specialists) {
        throw std::invalid_argument("scenario: router has " +
                                    std::to_string(s.router.specialist_count()) +
                                    " cluster models for " + std::to_string(specialists) +
                                    " specialist clusters");
    }
    if (s.router.dimension() != s.schema.dimension()) {
        throw std::invalid_argument("scenario: router/schema dimension mismatch");
    }
}

namespace {

enum class PendingKind { Snapshot, Arrival, Departure };

struct Pending {
    double time;
    std::uint64_t order;  // scheduling order; ties resolve to the earlier one
    PendingKind kind;
    std::string patient_id;
    PhysicianId physician;  // departures only
};

struct PendingLater {
    bool operator()(const Pending& a, const Pending& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.order > b.order;
    }
};

}  // namespace

EventLog run(const Scenario& scenario) {
    validate_scenario(scenario);

    EventLog log;
    log.general_cluster = static_cast<int>(scenario.clusters.size());
    log.seed = scenario.seed;
    log.horizon_minutes = scenario.horizon_minutes;
    log.snapshot_interval_minutes = scenario.snapshot_interval_minutes;
    for (const auto& c : scenario.clusters) log.cluster_labels.push_back(c.label);

    std::vector<ClusterSpec> specs;
    specs.reserve(scenario.clusters.size());
    for (const auto& c : scenario.clusters) {
        specs.push_back(ClusterSpec{c.label, c.physician_count, c.capacity, c.is_general});
    }
    ClusterRegistry registry(std::move(specs));

    Rng rng(scenario.seed);
    std::priority_queue<Pending, std::vector<Pending>, PendingLater> queue;
    std::uint64_t order = 0;

    // Snapshot grid first so same-instant ties resolve snapshot-before-arrival.
    for (std::uint64_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * scenario.snapshot_interval_minutes;
        if (t > scenario.horizon_minutes) break;
        queue.push(Pending{t, order++, PendingKind::Snapshot, "", {}});
    }
    if (scenario.arrival_rate_per_minute > 0.0) {
        const double gap = rng.exponential(1.0 / scenario.arrival_rate_per_minute);
        if (gap <= scenario.horizon_minutes) {
            queue.push(Pending{gap, order++, PendingKind::Arrival, "", {}});
        }
    }

    std::vector<double> proportions;
    for (const auto& p : scenario.populations) proportions.push_back(p.proportion);

    auto push_event = [&log](double time, EventKind kind, const std::string& patient, int cluster,
                             int physician, std::string detail) {
        log.events.push_back(Event{time, log.events.size(), kind, patient, cluster, physician,
                                   std::move(detail)});
    };

    const int general = log.general_cluster;
    long long arrival_counter = 0;
    std::optional<LoadSnapshot> previous_snapshot;

    while (!queue.empty()) {
        const Pending ev = queue.top();
        queue.pop();
        const double now = ev.time;

        switch (ev.kind) {
            case PendingKind::Snapshot: {
                LoadSnapshot snap = registry.snapshot(now);
                if (previous_snapshot) {
                    for (int c = 1; c < general; ++c) {
                        const bool was = registry.is_flagged(c);
                        registry.stagnation_check(c, *previous_snapshot, snap,
                                                  scenario.stagnation_epsilon);
                        const bool is = registry.is_flagged(c);
                        if (is && !was) {
                            push_event(now, EventKind::StagnationFlag, "", c, 0,
                                       "mean load unchanged over interval");
                        } else if (!is && was) {
                            push_event(now, EventKind::StagnationClear, "", c, 0, "");
                        }
                    }
                }
                for (int c = 1; c <= general; ++c) snap.flags[c - 1] = registry.is_flagged(c);
                log.snapshots.push_back(SnapshotRecord{log.events.size(), snap});
                previous_snapshot = std::move(snap);
                break;
            }
            case PendingKind::Arrival: {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "P%06lld", ++arrival_counter);
                const std::string patient(buf);

                const std::size_t which = rng.categorical(proportions);
                PatientRecord record =
                    synth_record(scenario.populations[which], scenario.schema, patient, rng);
                record.submitted_at = now;
                push_event(now, EventKind::Arrival, patient, 0, 0,
                           scenario.populations[which].label);

                const FeatureSet features = extract_features(record, scenario.schema).features;
                const RoutingDecision decision = allot_patient(patient, features, scenario.router);

                int target = decision.chosen_cluster;
                std::string detail = to_string(decision.reason);
                if (decision.reason == RoutingReason::ThresholdPass) {
                    if (registry.is_flagged(target)) {
                        push_event(now, EventKind::OverflowToGeneral, patient, target, 0,
                                   "stagnation_flag");
                        target = general;
                        detail = "overflow";
                    } else if (!registry.has_capacity(target)) {
                        push_event(now, EventKind::OverflowToGeneral, patient, target, 0,
                                   "capacity");
                        target = general;
                        detail = "overflow";
                    }
                }
                PhysicianId assigned;
                try {
                    assigned = registry.assign(target, patient, now);
                } catch (const SaturatedError&) {
                    throw std::runtime_error(
                        "simulation: cluster \"" + scenario.clusters[target - 1].label +
                        "\" cannot accept patient " + patient +
                        "; configure the general cluster as unbounded");
                }
                push_event(now, EventKind::Assignment, patient, target, assigned.ordinal,
                           detail);

                double service = scenario.service_mean_minutes;
                if (scenario.service_distribution == ServiceDistribution::Exponential) {
                    service = rng.exponential(scenario.service_mean_minutes);
                }
                const double departs = now + service;
                if (departs <= scenario.horizon_minutes) {
                    queue.push(Pending{departs, order++, PendingKind::Departure, patient,
                                       assigned});
                }

                const double gap = rng.exponential(1.0 / scenario.arrival_rate_per_minute);
                if (now + gap <= scenario.horizon_minutes) {
                    queue.push(Pending{now + gap, order++, PendingKind::Arrival, "", {}});
                }
                break;
            }
            case PendingKind::Departure: {
                registry.release(ev.physician, ev.patient_id, now);
                push_event(now, EventKind::Departure, ev.patient_id, ev.physician.cluster,
                           ev.physician.ordinal, "");
                break;
            }
        }
    }

    log.mutations = registry.mutation_log();
    log.summary.resize(scenario.clusters.size());
    for (int c = 1; c <= general; ++c) {
        log.summary[c - 1].label = scenario.clusters[c - 1].label;
        log.summary[c - 1].final_load = registry.total_load(c);
    }
    for (const auto& e : log.events) {
        switch (e.kind) {
            case EventKind::Assignment:
                ++log.summary[e.cluster - 1].assignments;
                if (e.detail != "overflow") ++log.summary[e.cluster - 1].routed;
                break;
            case EventKind::OverflowToGeneral:
                ++log.summary[e.cluster - 1].overflows;
                ++log.summary[e.cluster - 1].routed;
                break;
            case EventKind::Departure:
                ++log.summary[e.cluster - 1].departures;
                break;
            default:
                break;
        }
    }
    return log;
}

Report report(const EventLog& log) {
    Report rep;
    const auto k = log.cluster_labels.size();
    std::vector<long long> assigned(k, 0), overflowed(k, 0);
    std::size_t next_event = 0;
    for (const auto& snap : log.snapshots) {
        while (next_event < log.events.size() && next_event < snap.events_before) {
            const Event& e = log.events[next_event++];
            if (e.kind == EventKind::Assignment) ++assigned[e.cluster - 1];
            if (e.kind == EventKind::OverflowToGeneral) ++overflowed[e.cluster - 1];
        }
        for (std::size_t c = 0; c < k; ++c) {
            ReportRow row;
            row.time = snap.load.time;
            row.cluster = static_cast<int>(c) + 1;
            row.label = log.cluster_labels[c];
            row.cumulative_assignments = assigned[c];
            row.occupancy = snap.load.total_loads[c];
            row.cumulative_overflows = overflowed[c];
            row.flagged = snap.load.flags[c];
            rep.timeseries.push_back(std::move(row));
        }
    }
    for (const auto& e : log.events) {
        if (e.kind == EventKind::OverflowToGeneral) {
            rep.overflows.push_back(OverflowRow{e.time, e.patient_id, e.cluster, e.detail});
        }
    }
    return rep;
}

}  // namespace mixroute
