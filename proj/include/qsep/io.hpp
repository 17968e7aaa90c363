#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsep/bipartite.hpp"
#include "qsep/multipartite.hpp"
#include "qsep/states.hpp"

// File formats and report emission. One JSON schema covers states,
// measurement families and reports: top-level {schema_version, kind, dims,
// data, metadata}, complex entries as [re, im] pairs, matrices row-major.
// Serialization is canonical (fixed key order, shortest round-trip number
// formatting), so serialize-parse-serialize is byte-identical.

namespace qsep::io {

inline constexpr int kSchemaVersion = 1;

enum class FileKind { state, mum_family, mub_family, gsic_povm };

const char* to_string(FileKind kind);

std::string state_to_json(const DensityMatrix& rho,
                          const StateSpec* spec = nullptr);
std::string family_to_json(const MUMFamily& family);
std::string family_to_json(const MUBFamily& family);
std::string family_to_json(const GSICPOVM& povm);

/// Kind discriminator of a serialized document (throws SchemaError).
FileKind peek_kind(const std::string& text);

/// Loaders re-validate everything: shapes, Hermiticity, state invariants,
/// and the family defining relations. Violations throw SchemaError. Family
/// loaders can skip the relation check (`check_relations = false`) so the
/// validate command can render a full residual report instead.
DensityMatrix state_from_json(const std::string& text);
MUMFamily mum_from_json(const std::string& text, bool check_relations = true);
MUBFamily mub_from_json(const std::string& text, bool check_relations = true);
GSICPOVM gsic_from_json(const std::string& text, bool check_relations = true);

std::string read_file(const std::filesystem::path& path);
/// Write-to-temp plus atomic rename; no partial files on error.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

/// FNV-1a 64-bit content digest, "fnv1a64:<hex>".
std::string digest(const std::string& bytes);

struct InputRecord {
    std::string path;
    std::string digest;
};

struct Report {
    std::uint64_t seed = 0;
    std::vector<InputRecord> inputs;
    std::vector<CriterionResult> bipartite;
    std::vector<MultiCriterionResult> multipartite;
    std::vector<std::string> modes;  // mode/strategy per result, in order
    std::optional<double> timing_ms;  // opt-in: breaks byte-identity
};

std::string report_to_json(const Report& report);

}  // namespace qsep::io
