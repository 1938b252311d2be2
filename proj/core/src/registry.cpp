#include "mixroute/registry.hpp"

#include <algorithm>
#include <cmath>

namespace mixroute {

ClusterRegistry::ClusterRegistry(std::vector<ClusterSpec> clusters) {
    if (clusters.empty()) throw std::invalid_argument("ClusterRegistry: needs clusters");
    int general_count = 0;
    for (const auto& spec : clusters) {
        if (spec.physician_count < 1) {
            throw std::invalid_argument("ClusterRegistry: cluster \"" + spec.label +
                                        "\" needs at least one physician");
        }
        if (spec.capacity && *spec.capacity < 1) {
            throw std::invalid_argument("ClusterRegistry: cluster \"" + spec.label +
                                        "\" has non-positive capacity");
        }
        if (spec.is_general) ++general_count;
    }
    if (general_count != 1 || !clusters.back().is_general) {
        throw std::invalid_argument(
            "ClusterRegistry: exactly one general cluster required, listed last");
    }
    clusters_.reserve(clusters.size());
    for (auto& spec : clusters) {
        Cluster c;
        c.physicians.resize(spec.physician_count);
        c.spec = std::move(spec);
        clusters_.push_back(std::move(c));
    }
}

const ClusterRegistry::Cluster& ClusterRegistry::at(int cluster) const {
    if (cluster < 1 || cluster > cluster_count()) {
        throw std::invalid_argument("ClusterRegistry: cluster index " + std::to_string(cluster) +
                                    " out of range");
    }
    return clusters_[cluster - 1];
}

ClusterRegistry::Cluster& ClusterRegistry::at(int cluster) {
    return const_cast<Cluster&>(static_cast<const ClusterRegistry*>(this)->at(cluster));
}

int ClusterRegistry::min_loaded_ordinal(int cluster) const {
    const Cluster& c = at(cluster);
    int best = 1;
    for (int j = 2; j <= static_cast<int>(c.physicians.size()); ++j) {
        if (c.physicians[j - 1].accepted.size() < c.physicians[best - 1].accepted.size()) {
            best = j;
        }
    }
    return best;
}

bool ClusterRegistry::has_capacity(int cluster) const {
    const Cluster& c = at(cluster);
    if (!c.spec.capacity) return true;
    const auto cap = static_cast<std::size_t>(*c.spec.capacity);
    return std::any_of(c.physicians.begin(), c.physicians.end(),
                       [cap](const Physician& p) { return p.accepted.size() < cap; });
}

PhysicianId ClusterRegistry::assign(int cluster, const std::string& patient, double time) {
    Cluster& c = at(cluster);
    if (patient.empty()) throw std::invalid_argument("ClusterRegistry::assign: empty patient id");
    if (auto it = assigned_.find(patient); it != assigned_.end()) {
        throw std::invalid_argument("ClusterRegistry::assign: patient \"" + patient +
                                    "\" already assigned");
    }
    int best = 0;  // least-loaded among physicians below capacity
    for (int j = 1; j <= static_cast<int>(c.physicians.size()); ++j) {
        const auto& p = c.physicians[j - 1];
        if (c.spec.capacity && p.accepted.size() >= static_cast<std::size_t>(*c.spec.capacity)) {
            continue;
        }
        if (best == 0 || p.accepted.size() < c.physicians[best - 1].accepted.size()) {
            best = j;
        }
    }
    if (best == 0) throw SaturatedError(cluster, c.spec.label);
    c.physicians[best - 1].accepted.push_back(patient);
    const PhysicianId id{cluster, best};
    assigned_.emplace(patient, id);
    mutations_.push_back(MutationEntry{time, "assign", cluster, best, patient});
    return id;
}

void ClusterRegistry::release(PhysicianId id, const std::string& patient, double time) {
    Cluster& c = at(id.cluster);
    if (id.ordinal < 1 || id.ordinal > static_cast<int>(c.physicians.size())) {
        throw std::invalid_argument("ClusterRegistry::release: bad physician ordinal");
    }
    auto& accepted = c.physicians[id.ordinal - 1].accepted;
    auto it = std::find(accepted.begin(), accepted.end(), patient);
    if (it == accepted.end()) {
        throw std::invalid_argument("ClusterRegistry::release: patient \"" + patient +
                                    "\" not in accepted list of cluster " +
                                    std::to_string(id.cluster) + ", physician " +
                                    std::to_string(id.ordinal));
    }
    accepted.erase(it);
    assigned_.erase(patient);
    mutations_.push_back(MutationEntry{time, "release", id.cluster, id.ordinal, patient});
}

double ClusterRegistry::mean_load(int cluster) const {
    // Correctly rounded quotient of the exact integer total.
    return static_cast<double>(total_load(cluster)) /
           static_cast<double>(at(cluster).physicians.size());
}

long long ClusterRegistry::total_load(int cluster) const {
    const Cluster& c = at(cluster);
    long long total = 0;
    for (const auto& p : c.physicians) total += static_cast<long long>(p.accepted.size());
    return total;
}

int ClusterRegistry::load(PhysicianId id) const {
    return static_cast<int>(accepted(id).size());
}

const std::vector<std::string>& ClusterRegistry::accepted(PhysicianId id) const {
    const Cluster& c = at(id.cluster);
    if (id.ordinal < 1 || id.ordinal > static_cast<int>(c.physicians.size())) {
        throw std::invalid_argument("ClusterRegistry: bad physician ordinal");
    }
    return c.physicians[id.ordinal - 1].accepted;
}

std::optional<PhysicianId> ClusterRegistry::find_patient(const std::string& patient) const {
    auto it = assigned_.find(patient);
    if (it == assigned_.end()) return std::nullopt;
    return it->second;
}

LoadSnapshot ClusterRegistry::snapshot(double time) const {
    LoadSnapshot snap;
    snap.time = time;
    snap.mean_loads.reserve(clusters_.size());
    snap.total_loads.reserve(clusters_.size());
    snap.flags.reserve(clusters_.size());
    for (int c = 1; c <= cluster_count(); ++c) {
        snap.mean_loads.push_back(mean_load(c));
        snap.total_loads.push_back(total_load(c));
        snap.flags.push_back(clusters_[c - 1].flagged);
    }
    return snap;
}

bool ClusterRegistry::stagnation_check(int cluster, const LoadSnapshot& before,
                                       const LoadSnapshot& after, double eps) {
    Cluster& c = at(cluster);
    const auto idx = static_cast<std::size_t>(cluster - 1);
    if (idx >= before.mean_loads.size() || idx >= after.mean_loads.size()) {
        throw std::invalid_argument("stagnation_check: snapshots do not cover cluster " +
                                    std::to_string(cluster));
    }
    if (!(after.time > before.time)) {
        throw std::invalid_argument("stagnation_check: snapshots out of order");
    }
    const bool unchanged = std::abs(before.mean_loads[idx] - after.mean_loads[idx]) <= eps;
    if (unchanged) {
        // Only a non-empty stagnant cluster is treated as saturated; an
        // idle empty cluster stays open.
        if (after.total_loads[idx] > 0 && !c.flagged) {
            c.flagged = true;
            mutations_.push_back(MutationEntry{after.time, "flag_set", cluster, 0, ""});
        }
    } else if (c.flagged) {
        c.flagged = false;
        mutations_.push_back(MutationEntry{after.time, "flag_clear", cluster, 0, ""});
    }
    return unchanged;
}

bool ClusterRegistry::is_flagged(int cluster) const { return at(cluster).flagged; }

ClusterRegistry ClusterRegistry::replay(std::vector<ClusterSpec> clusters,
                                        const std::vector<MutationEntry>& log) {
    ClusterRegistry reg(std::move(clusters));
    for (const auto& m : log) {
        if (m.op == "assign") {
            const PhysicianId id = reg.assign(m.cluster, m.patient, m.time);
            if (id.ordinal != m.physician) {
                throw std::runtime_error("replay: assign landed on physician " +
                                         std::to_string(id.ordinal) + ", log says " +
                                         std::to_string(m.physician));
            }
        } else if (m.op == "release") {
            reg.release(PhysicianId{m.cluster, m.physician}, m.patient, m.time);
        } else if (m.op == "flag_set") {
            reg.at(m.cluster).flagged = true;
            reg.mutations_.push_back(m);
        } else if (m.op == "flag_clear") {
            reg.at(m.cluster).flagged = false;
            reg.mutations_.push_back(m);
        } else {
            throw std::runtime_error("replay: unknown op \"" + m.op + "\"");
        }
    }
    return reg;
}

}  // namespace mixroute
