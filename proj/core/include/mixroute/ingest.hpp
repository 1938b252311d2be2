#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixroute/gmm.hpp"

namespace mixroute {

class Rng;

// One submitted record. `fields` carries a single observation; `frames`,
// when non-empty, carries several (one map per frame) and takes precedence.
struct PatientRecord {
    std::string patient_id;
    std::map<std::string, double> fields;
    std::vector<std::map<std::string, double>> frames;
    std::optional<double> submitted_at;       // simulation minutes
    std::optional<std::string> label;         // training/oracle label
};

struct SchemaField {
    std::string name;
    double mean = 0.0;
    double std = 1.0;
    double default_value = 0.0;  // imputed before normalization
};

// Declares the feature layout: field order fixes the vector coordinate
// order; values are z-normalized as (value - mean) / std.
class FeatureSchema {
public:
    FeatureSchema(std::vector<SchemaField> fields, int frames_per_record);

    std::size_t dimension() const { return fields_.size(); }
    int frames_per_record() const { return frames_per_record_; }
    const std::vector<SchemaField>& fields() const { return fields_; }

private:
    std::vector<SchemaField> fields_;
    int frames_per_record_;
};

struct ExtractedFeatures {
    FeatureSet features;
    std::size_t ignored_fields = 0;  // keys present in the record but not the schema
};

// Normalizes a record into a FeatureSet. Missing fields are imputed with
// the schema default, then normalized; unknown fields are ignored but
// counted. A single-observation record is replicated to frames_per_record
// identical frames; explicit frames pass through one vector each.
ExtractedFeatures extract_features(const PatientRecord& record, const FeatureSchema& schema);

// Synthetic population: a generator model in normalized feature space plus
// its share of the arrival mix.
struct PopulationSpec {
    std::string label;
    double proportion = 0.0;
    GmmModel generator;
};

struct SynthPatient {
    PatientRecord record;
    std::string label;
};

// Builds one synthetic record: specialty generator sampled
// schema.frames_per_record() times, values de-normalized to raw field
// values (z * std + mean) so extract_features inverts them.
PatientRecord synth_record(const PopulationSpec& population, const FeatureSchema& schema,
                           std::string patient_id, Rng& rng);

// Draws `count` labeled synthetic patients; specialty chosen per the mixing
// proportions (which must sum to 1 within 1e-9). Bit-identical for a fixed
// seed.
std::vector<SynthPatient> synth_patients(const std::vector<PopulationSpec>& populations,
                                         std::size_t count, std::uint64_t seed,
                                         const FeatureSchema& schema);

void validate_populations(const std::vector<PopulationSpec>& populations);

// Schema file: {"fields": [{"name", "mean", "std", "default"}],
// "frames_per_record": n}.
FeatureSchema load_schema(const std::filesystem::path& path);
void save_schema(const FeatureSchema& schema, const std::filesystem::path& path);

// Records: JSON-lines, one {"patient_id", "fields", ["frames"], ["label"],
// ["submitted_at"]} object per line. patient_ids must be unique.
std::vector<PatientRecord> load_records(const std::filesystem::path& path);
void save_records(const std::vector<PatientRecord>& records, const std::filesystem::path& path);

}  // namespace mixroute
