#include "mixroute/ingest.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "mixroute/rng.hpp"

namespace mixroute {

namespace ju = jsonutil;

FeatureSchema::FeatureSchema(std::vector<SchemaField> fields, int frames_per_record)
    : fields_(std::move(fields)), frames_per_record_(frames_per_record) {
    if (fields_.empty()) throw std::invalid_argument("FeatureSchema: needs at least one field");
    if (frames_per_record_ < 1) {
        throw std::invalid_argument("FeatureSchema: frames_per_record must be >= 1");
    }
    std::set<std::string> seen;
    for (const auto& f : fields_) {
        if (f.name.empty()) throw std::invalid_argument("FeatureSchema: empty field name");
        if (!seen.insert(f.name).second) {
            throw std::invalid_argument("FeatureSchema: duplicate field \"" + f.name + "\"");
        }
        if (!(f.std > 0.0) || !std::isfinite(f.std)) {
            throw std::invalid_argument("FeatureSchema: field \"" + f.name +
                                        "\" must have std > 0");
        }
        if (!std::isfinite(f.mean) || !std::isfinite(f.default_value)) {
            throw std::invalid_argument("FeatureSchema: field \"" + f.name +
                                        "\" has non-finite mean/default");
        }
    }
}

namespace {

FeatureVector normalize_one(const std::map<std::string, double>& values,
                            const FeatureSchema& schema, const std::string& patient_id,
                            std::size_t* ignored) {
    FeatureVector out;
    out.reserve(schema.dimension());
    for (const auto& f : schema.fields()) {
        auto it = values.find(f.name);
        const double raw = it == values.end() ? f.default_value : it->second;
        if (!std::isfinite(raw)) {
            throw std::invalid_argument("extract_features: field \"" + f.name +
                                        "\" of record \"" + patient_id + "\" is not finite");
        }
        out.push_back((raw - f.mean) / f.std);
    }
    for (const auto& [name, _] : values) {
        bool known = false;
        for (const auto& f : schema.fields()) {
            if (f.name == name) {
                known = true;
                break;
            }
        }
        if (!known) ++*ignored;
    }
    return out;
}

}  // namespace

ExtractedFeatures extract_features(const PatientRecord& record, const FeatureSchema& schema) {
    ExtractedFeatures result{FeatureSet(schema.dimension()), 0};
    if (!record.frames.empty()) {
        for (const auto& frame : record.frames) {
            result.features.push_back(
                normalize_one(frame, schema, record.patient_id, &result.ignored_fields));
        }
        return result;
    }
    FeatureVector first =
        normalize_one(record.fields, schema, record.patient_id, &result.ignored_fields);
    for (int i = 1; i < schema.frames_per_record(); ++i) result.features.push_back(first);
    result.features.push_back(std::move(first));
    return result;
}

void validate_populations(const std::vector<PopulationSpec>& populations) {
    if (populations.empty()) {
        throw std::invalid_argument("populations: list must be non-empty");
    }
    double total = 0.0;
    std::set<std::string> seen;
    const std::size_t d = populations.front().generator.dimension();
    for (const auto& p : populations) {
        if (!seen.insert(p.label).second) {
            throw std::invalid_argument("populations: duplicate label \"" + p.label + "\"");
        }
        if (!(p.proportion >= 0.0)) {
            throw std::invalid_argument("populations: proportion of \"" + p.label +
                                        "\" must be >= 0");
        }
        if (p.generator.dimension() != d) {
            throw std::invalid_argument("populations: generator dimensions disagree");
        }
        total += p.proportion;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("populations: proportions must sum to 1");
    }
}

PatientRecord synth_record(const PopulationSpec& population, const FeatureSchema& schema,
                           std::string patient_id, Rng& rng) {
    if (population.generator.dimension() != schema.dimension()) {
        throw std::invalid_argument("synth_record: generator/schema dimension mismatch");
    }
    PatientRecord record;
    record.patient_id = std::move(patient_id);
    record.label = population.label;
    const int frames = schema.frames_per_record();
    for (int f = 0; f < frames; ++f) {
        const FeatureVector z = population.generator.sample(rng);
        std::map<std::string, double> raw;
        for (std::size_t j = 0; j < schema.dimension(); ++j) {
            const auto& field = schema.fields()[j];
            raw.emplace(field.name, z[j] * field.std + field.mean);
        }
        if (f == 0) record.fields = raw;
        if (frames > 1) record.frames.push_back(std::move(raw));
    }
    return record;
}

std::vector<SynthPatient> synth_patients(const std::vector<PopulationSpec>& populations,
                                         std::size_t count, std::uint64_t seed,
                                         const FeatureSchema& schema) {
    validate_populations(populations);
    std::vector<double> proportions;
    proportions.reserve(populations.size());
    for (const auto& p : populations) proportions.push_back(p.proportion);

    Rng rng(seed);
    std::vector<SynthPatient> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t which = rng.categorical(proportions);
        char id[16];
        std::snprintf(id, sizeof(id), "P%06zu", i + 1);
        out.push_back(SynthPatient{
            synth_record(populations[which], schema, id, rng), populations[which].label});
    }
    return out;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    const std::string ctx = "schema file " + path.string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error(ctx + ": cannot open");
    ju::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + ": invalid JSON: " + e.what());
    }
    ju::reject_unknown(j, {"fields", "frames_per_record"}, ctx);
    const auto& jf = ju::require(j, "fields", ctx);
    if (!jf.is_array()) throw std::runtime_error(ctx + ": \"fields\" must be an array");
    std::vector<SchemaField> fields;
    for (const auto& f : jf) {
        ju::reject_unknown(f, {"name", "mean", "std", "default"}, ctx);
        fields.push_back(SchemaField{ju::require_string(f, "name", ctx),
                                     ju::require_number(f, "mean", ctx),
                                     ju::require_number(f, "std", ctx),
                                     ju::require_number(f, "default", ctx)});
    }
    const int frames = ju::require(j, "frames_per_record", ctx).get<int>();
    try {
        return FeatureSchema(std::move(fields), frames);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(ctx + ": " + e.what());
    }
}

void save_schema(const FeatureSchema& schema, const std::filesystem::path& path) {
    ju::ordered_json j;
    auto& jf = j["fields"] = ju::ordered_json::array();
    for (const auto& f : schema.fields()) {
        ju::ordered_json e;
        e["name"] = f.name;
        e["mean"] = f.mean;
        e["std"] = f.std;
        e["default"] = f.default_value;
        jf.push_back(std::move(e));
    }
    j["frames_per_record"] = schema.frames_per_record();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_schema: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

namespace {

std::map<std::string, double> field_map_from_json(const ju::json& j, const std::string& ctx) {
    if (!j.is_object()) throw std::runtime_error(ctx + ": field map must be an object");
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number()) {
            throw std::runtime_error(ctx + ": field \"" + it.key() + "\" must be a number");
        }
        out.emplace(it.key(), it.value().get<double>());
    }
    return out;
}

}  // namespace

std::vector<PatientRecord> load_records(const std::filesystem::path& path) {
    const std::string ctx = "records file " + path.string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error(ctx + ": cannot open");
    std::vector<PatientRecord> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string lctx = ctx + ", line " + std::to_string(line_no);
        ju::json j;
        try {
            j = ju::json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(lctx + ": invalid JSON: " + e.what());
        }
        ju::reject_unknown(j, {"patient_id", "fields", "frames", "label", "submitted_at"}, lctx);
        PatientRecord r;
        r.patient_id = ju::require_string(j, "patient_id", lctx);
        if (r.patient_id.empty()) throw std::runtime_error(lctx + ": empty patient_id");
        if (!ids.insert(r.patient_id).second) {
            throw std::runtime_error(lctx + ": duplicate patient_id \"" + r.patient_id + "\"");
        }
        if (auto it = j.find("fields"); it != j.end()) {
            r.fields = field_map_from_json(*it, lctx);
        }
        if (auto it = j.find("frames"); it != j.end()) {
            if (!it->is_array()) throw std::runtime_error(lctx + ": \"frames\" must be an array");
            for (const auto& f : *it) r.frames.push_back(field_map_from_json(f, lctx));
        }
        if (r.fields.empty() && r.frames.empty()) {
            throw std::runtime_error(lctx + ": record carries no observations");
        }
        if (auto it = j.find("label"); it != j.end()) r.label = it->get<std::string>();
        if (auto it = j.find("submitted_at"); it != j.end()) r.submitted_at = it->get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

void save_records(const std::vector<PatientRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_records: cannot open " + path.string());
    for (const auto& r : records) {
        ju::ordered_json j;
        j["patient_id"] = r.patient_id;
        j["fields"] = r.fields;
        if (!r.frames.empty()) j["frames"] = r.frames;
        if (r.label) j["label"] = *r.label;
        if (r.submitted_at) j["submitted_at"] = *r.submitted_at;
        out << j.dump() << '\n';
    }
}

}  // namespace mixroute
