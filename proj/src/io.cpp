#include "qsep/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace qsep::io {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json complex_to_json(const cplx& z) {
    return ordered_json::array({z.real(), z.imag()});
}

cplx complex_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number())
        throw SchemaError("complex entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.empty())
        throw SchemaError("matrix must be a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw SchemaError("matrix rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw SchemaError("matrix rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

ordered_json parse(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("invalid JSON document");
    return j;
}

ordered_json document(FileKind kind, const std::vector<std::size_t>& dims) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = to_string(kind);
    doc["dims"] = dims;
    return doc;
}

void check_header(const ordered_json& doc, FileKind expected) {
    if (!doc.is_object() || !doc.contains("schema_version") ||
        !doc.contains("kind") || !doc.contains("dims") ||
        !doc.contains("data"))
        throw SchemaError(
            "document needs schema_version, kind, dims and data fields");
    if (doc["schema_version"].get<int>() != kSchemaVersion)
        throw SchemaError("unsupported schema_version");
    if (doc["kind"].get<std::string>() != to_string(expected)) {
        std::ostringstream msg;
        msg << "expected kind '" << to_string(expected) << "', found '"
            << doc["kind"].get<std::string>() << "'";
        throw SchemaError(msg.str());
    }
}

std::vector<std::size_t> dims_from(const ordered_json& doc) {
    std::vector<std::size_t> dims;
    for (const auto& d : doc["dims"]) {
        if (!d.is_number_unsigned() || d.get<std::size_t>() < 1)
            throw SchemaError("dims must be positive integers");
        dims.push_back(d.get<std::size_t>());
    }
    if (dims.empty()) throw SchemaError("dims must be nonempty");
    return dims;
}

template <typename Fn>
auto rewrap(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << what << ": " << e.what();
        throw SchemaError(msg.str());
    }
}

void require_validated(const ValidationReport& report, const char* what) {
    if (report.pass) return;
    std::ostringstream msg;
    msg << what << " fails its defining relations:";
    for (const auto& e : report.entries)
        if (!e.pass)
            msg << " [" << e.relation << " residual " << e.max_residual << "]";
    throw SchemaError(msg.str());
}

ordered_json params_to_json(const CriterionParams& p) {
    ordered_json j;
    j["d"] = p.d;
    j["d_prime"] = p.d_prime;
    j["M"] = p.M;
    j["M_prime"] = p.M_prime;
    j["s"] = p.s;
    j["t"] = p.t;
    j["r1"] = p.r1;
    j["r2"] = p.r2;
    if (p.kind == CriterionParams::Kind::gsic) {
        j["a1"] = p.a1;
        j["a2"] = p.a2;
    } else if (p.kind == CriterionParams::Kind::mum) {
        j["kappa1"] = p.kappa1;
        j["kappa2"] = p.kappa2;
    }
    return j;
}

ordered_json params_to_json(const MultipartiteParams& p) {
    ordered_json j;
    j["m"] = p.m;
    j["d"] = p.d;
    j["M"] = p.M;
    j["dims"] = p.dims;
    j["counts"] = p.counts;
    j["s"] = p.s;
    j["t"] = p.t;
    j["r1"] = p.r1;
    j["r2"] = p.r2;
    const char* key = p.kind == CriterionParams::Kind::gsic ? "a" : "kappa";
    if (p.kind != CriterionParams::Kind::mub) j[key] = p.efficiency;
    return j;
}

ordered_json matching_to_json(const Matching& m) {
    ordered_json j = ordered_json::array();
    for (const auto& set : m.assigned) j.push_back(set);
    return j;
}

ordered_json selection_to_json(const Selection& sel) {
    ordered_json j;
    j["measurement_pairing"] = matching_to_json(sel.measurement_pairing);
    ordered_json outs = ordered_json::array();
    for (const auto& per_b : sel.outcome_pairing) {
        ordered_json row = ordered_json::array();
        for (const auto& m : per_b) row.push_back(matching_to_json(m));
        outs.push_back(std::move(row));
    }
    j["outcome_pairing"] = std::move(outs);
    return j;
}

ordered_json selection_to_json(const MultiSelection& sel) {
    ordered_json parties = ordered_json::array();
    for (const auto& ps : sel.parties) {
        ordered_json j;
        j["measurements"] = ps.meas;
        ordered_json outs = ordered_json::array();
        for (const auto& per_j : ps.outs) {
            ordered_json row = ordered_json::array();
            for (const auto& m : per_j) row.push_back(matching_to_json(m));
            outs.push_back(std::move(row));
        }
        j["outcomes"] = std::move(outs);
        parties.push_back(std::move(j));
    }
    ordered_json j;
    j["parties"] = std::move(parties);
    return j;
}

}  // namespace

const char* to_string(FileKind kind) {
    switch (kind) {
        case FileKind::state: return "state";
        case FileKind::mum_family: return "mum_family";
        case FileKind::mub_family: return "mub_family";
        case FileKind::gsic_povm: return "gsic_povm";
    }
    return "unknown";
}

std::string state_to_json(const DensityMatrix& rho, const StateSpec* spec) {
    ordered_json doc = document(FileKind::state, rho.dims());
    doc["data"] = matrix_to_json(rho.mat());
    ordered_json meta = ordered_json::object();
    if (spec != nullptr) {
        meta["family"] = qsep::to_string(spec->family);
        meta["noise"] = spec->noise;
        meta["term_count"] = spec->term_count;
        meta["seed"] = spec->seed;
        meta["rng"] = kRngName;
    }
    doc["metadata"] = std::move(meta);
    return doc.dump(2) + "\n";
}

std::string family_to_json(const MUMFamily& family) {
    ordered_json doc = document(FileKind::mum_family, {family.dim});
    ordered_json povms = ordered_json::array();
    for (const auto& povm : family.povms) {
        ordered_json elements = ordered_json::array();
        for (const auto& p : povm.elements)
            elements.push_back(matrix_to_json(p.mat()));
        povms.push_back(std::move(elements));
    }
    doc["data"] = std::move(povms);
    doc["metadata"] = ordered_json{{"kappa", family.kappa}};
    return doc.dump(2) + "\n";
}

std::string family_to_json(const MUBFamily& family) {
    ordered_json doc = document(FileKind::mub_family, {family.dim});
    ordered_json bases = ordered_json::array();
    for (const auto& basis : family.bases) {
        ordered_json vectors = ordered_json::array();
        for (const auto& v : basis) {
            ordered_json vec = ordered_json::array();
            for (const auto& z : v) vec.push_back(complex_to_json(z));
            vectors.push_back(std::move(vec));
        }
        bases.push_back(std::move(vectors));
    }
    doc["data"] = std::move(bases);
    doc["metadata"] = ordered_json::object();
    return doc.dump(2) + "\n";
}

std::string family_to_json(const GSICPOVM& povm) {
    ordered_json doc = document(FileKind::gsic_povm, {povm.dim});
    ordered_json elements = ordered_json::array();
    for (const auto& p : povm.elements)
        elements.push_back(matrix_to_json(p.mat()));
    doc["data"] = std::move(elements);
    doc["metadata"] = ordered_json{{"a", povm.a}};
    return doc.dump(2) + "\n";
}

FileKind peek_kind(const std::string& text) {
    const ordered_json doc = parse(text);
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw SchemaError("document has no kind field");
    const std::string kind = doc["kind"].get<std::string>();
    for (FileKind k : {FileKind::state, FileKind::mum_family,
                       FileKind::mub_family, FileKind::gsic_povm})
        if (kind == to_string(k)) return k;
    throw SchemaError("unknown document kind: " + kind);
}

DensityMatrix state_from_json(const std::string& text) {
    const ordered_json doc = parse(text);
    check_header(doc, FileKind::state);
    const auto dims = dims_from(doc);
    return rewrap("state document", [&] {
        return DensityMatrix(dims,
                             HermitianOperator(matrix_from_json(doc["data"])));
    });
}

MUMFamily mum_from_json(const std::string& text, bool check_relations) {
    const ordered_json doc = parse(text);
    check_header(doc, FileKind::mum_family);
    const auto dims = dims_from(doc);
    if (dims.size() != 1) throw SchemaError("mum_family has one dimension");
    if (!doc.contains("metadata") || !doc["metadata"].contains("kappa"))
        throw SchemaError("mum_family needs metadata.kappa");

    MUMFamily family;
    family.dim = dims[0];
    family.kappa = doc["metadata"]["kappa"].get<double>();
    return rewrap("mum_family document", [&] {
        for (const auto& povm_json : doc["data"]) {
            POVM povm;
            povm.dim = family.dim;
            for (const auto& elem : povm_json)
                povm.elements.emplace_back(matrix_from_json(elem));
            family.povms.push_back(std::move(povm));
        }
        if (check_relations)
            require_validated(validate_family(family), "mum_family");
        return family;
    });
}

MUBFamily mub_from_json(const std::string& text, bool check_relations) {
    const ordered_json doc = parse(text);
    check_header(doc, FileKind::mub_family);
    const auto dims = dims_from(doc);
    if (dims.size() != 1) throw SchemaError("mub_family has one dimension");

    MUBFamily family;
    family.dim = dims[0];
    return rewrap("mub_family document", [&] {
        for (const auto& basis_json : doc["data"]) {
            std::vector<std::vector<cplx>> basis;
            for (const auto& vec_json : basis_json) {
                std::vector<cplx> v;
                for (const auto& z : vec_json)
                    v.push_back(complex_from_json(z));
                basis.push_back(std::move(v));
            }
            family.bases.push_back(std::move(basis));
        }
        if (check_relations)
            require_validated(validate_family(family), "mub_family");
        return family;
    });
}

GSICPOVM gsic_from_json(const std::string& text, bool check_relations) {
    const ordered_json doc = parse(text);
    check_header(doc, FileKind::gsic_povm);
    const auto dims = dims_from(doc);
    if (dims.size() != 1) throw SchemaError("gsic_povm has one dimension");
    if (!doc.contains("metadata") || !doc["metadata"].contains("a"))
        throw SchemaError("gsic_povm needs metadata.a");

    GSICPOVM povm;
    povm.dim = dims[0];
    povm.a = doc["metadata"]["a"].get<double>();
    return rewrap("gsic_povm document", [&] {
        for (const auto& elem : doc["data"])
            povm.elements.emplace_back(matrix_from_json(elem));
        if (check_relations)
            require_validated(validate_family(povm), "gsic_povm");
        return povm;
    });
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw IoError("read failure on " + path.string());
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    if (!fs::exists(dir, ec)) throw IoError("no such directory: " + dir.string());

    std::random_device rd;
    fs::path tmp =
        dir / (path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out << text;
        out.flush();
        if (!out.good()) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("write failure on " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move temporary file onto " + path.string());
    }
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::string report_to_json(const Report& report) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "report";
    doc["tool_version"] = kToolVersion;
    doc["rng"] = kRngName;
    doc["seed"] = report.seed;
    ordered_json inputs = ordered_json::array();
    for (const auto& in : report.inputs)
        inputs.push_back(ordered_json{{"path", in.path}, {"digest", in.digest}});
    doc["inputs"] = std::move(inputs);

    ordered_json results = ordered_json::array();
    std::size_t mode_idx = 0;
    auto next_mode = [&]() -> std::string {
        return mode_idx < report.modes.size() ? report.modes[mode_idx++] : "";
    };
    for (const auto& r : report.bipartite) {
        ordered_json j;
        j["theorem"] = r.theorem;
        j["mode"] = next_mode();
        j["lhs"] = r.lhs;
        j["bound"] = r.bound;
        j["violated"] = r.violated;
        j["marginal"] = r.marginal;
        j["params"] = params_to_json(r.params);
        j["selection"] = selection_to_json(r.selection);
        j["notes"] = r.notes;
        results.push_back(std::move(j));
    }
    for (const auto& r : report.multipartite) {
        ordered_json j;
        j["theorem"] = r.theorem;
        j["strategy"] = qsep::to_string(r.strategy);
        j["lhs"] = r.lhs;
        j["bound"] = r.bound;
        if (r.theorem == "T4") {
            j["bound_mean_power"] = r.bound1;
            j["bound_pairwise"] = r.bound2;
        }
        j["violated"] = r.violated;
        j["marginal"] = r.marginal;
        j["params"] = params_to_json(r.params);
        j["selection"] = selection_to_json(r.selection);
        j["notes"] = r.notes;
        results.push_back(std::move(j));
    }
    doc["results"] = std::move(results);
    if (report.timing_ms.has_value()) doc["timing_ms"] = *report.timing_ms;
    return doc.dump(2) + "\n";
}

}  // namespace qsep::io
