#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mixroute {

// 1-based (cluster, ordinal) pair naming one physician.
struct PhysicianId {
    int cluster = 0;
    int ordinal = 0;
    bool operator==(const PhysicianId&) const = default;
};

struct ClusterSpec {
    std::string label;
    int physician_count = 0;
    std::optional<int> capacity;  // nullopt = unbounded
    bool is_general = false;
};

// Per-cluster mean loads captured at one instant. Totals and flags ride
// along so downstream checks stay exact.
struct LoadSnapshot {
    double time = 0.0;
    std::vector<double> mean_loads;       // per cluster, 1-based cluster c at index c-1
    std::vector<long long> total_loads;
    std::vector<bool> flags;              // stagnation flag state
};

struct MutationEntry {
    double time = 0.0;
    std::string op;  // "assign" | "release" | "flag_set" | "flag_clear"
    int cluster = 0;
    int physician = 0;   // 0 for flag ops
    std::string patient; // empty for flag ops
};

class SaturatedError : public std::runtime_error {
public:
    SaturatedError(int cluster, const std::string& label)
        : std::runtime_error("cluster " + std::to_string(cluster) + " (" + label +
                             ") is saturated"),
          cluster_(cluster) {}
    int cluster() const { return cluster_; }

private:
    int cluster_;
};

// Single-writer load state for every physician cluster: least-loaded
// selection, accepted-list updates, mean loads, and the stagnation flag
// driven by snapshot pairs. Every mutation lands in the mutation log, and
// replaying that log from an empty registry reproduces the state exactly.
class ClusterRegistry {
public:
    explicit ClusterRegistry(std::vector<ClusterSpec> clusters);

    int cluster_count() const { return static_cast<int>(clusters_.size()); }
    int general_cluster() const { return cluster_count(); }  // always last
    const ClusterSpec& spec(int cluster) const { return at(cluster).spec; }

    // True argmin of |accepted| over the whole cluster, ties to the
    // smallest ordinal; ignores capacity.
    int min_loaded_ordinal(int cluster) const;

    bool has_capacity(int cluster) const;

    // Appends the patient to the least-loaded physician that still has
    // room. Throws SaturatedError when every physician is at capacity and
    // std::invalid_argument when the patient is already assigned somewhere.
    PhysicianId assign(int cluster, const std::string& patient, double time);

    // Removes the patient from that physician's accepted list; throws when
    // absent.
    void release(PhysicianId id, const std::string& patient, double time);

    double mean_load(int cluster) const;
    long long total_load(int cluster) const;
    int load(PhysicianId id) const;
    const std::vector<std::string>& accepted(PhysicianId id) const;
    std::optional<PhysicianId> find_patient(const std::string& patient) const;

    LoadSnapshot snapshot(double time) const;

    // Algorithm-2 window test: returns |E_before - E_after| <= eps. Side
    // effect: raises the cluster's stagnation flag when the condition holds
    // with a non-zero load, clears it when the means moved; transitions are
    // logged at `after.time`.
    bool stagnation_check(int cluster, const LoadSnapshot& before, const LoadSnapshot& after,
                          double eps);

    bool is_flagged(int cluster) const;

    const std::vector<MutationEntry>& mutation_log() const { return mutations_; }

    // Rebuilds a registry by re-running the logged operations; assign
    // entries must land on the logged physician (verifying determinism).
    static ClusterRegistry replay(std::vector<ClusterSpec> clusters,
                                  const std::vector<MutationEntry>& log);

private:
    struct Physician {
        std::vector<std::string> accepted;
    };
    struct Cluster {
        ClusterSpec spec;
        std::vector<Physician> physicians;
        bool flagged = false;
    };

    const Cluster& at(int cluster) const;
    Cluster& at(int cluster);

    std::vector<Cluster> clusters_;
    std::unordered_map<std::string, PhysicianId> assigned_;  // global uniqueness
    std::vector<MutationEntry> mutations_;
};

}  // namespace mixroute
