#include "pptsep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pptsep::io {

std::string format_double(double x) {
    if (!std::isfinite(x)) throw FormatError("cannot serialize a non-finite number");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

namespace {

bool is_nested_container(const Json &j) {
    if (j.is_object()) return true;
    if (!j.is_array()) return false;
    for (const auto &e : j)
        if (e.is_array() || e.is_object()) return true;
    return false;
}

void dump_into(const Json &j, std::string &out, int indent) {
    const auto pad = [&](int n) { out.append(static_cast<std::size_t>(n) * 2, ' '); };
    switch (j.type()) {
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        case Json::value_t::array: {
            bool broken = false;
            for (const auto &e : j)
                if (is_nested_container(e)) broken = true;
            out += '[';
            bool first = true;
            for (const auto &e : j) {
                if (!first) out += ',';
                first = false;
                if (broken) {
                    out += '\n';
                    pad(indent + 1);
                }
                dump_into(e, out, indent + 1);
            }
            if (broken && !j.empty()) {
                out += '\n';
                pad(indent);
            }
            out += ']';
            return;
        }
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto &[key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += '\n';
                pad(indent + 1);
                out += Json(key).dump();
                out += ": ";
                dump_into(value, out, indent + 1);
            }
            if (!j.empty()) {
                out += '\n';
                pad(indent);
            }
            out += '}';
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

double finite_number(const Json &j, const char *what) {
    if (!j.is_number()) throw FormatError(std::string(what) + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw FormatError(std::string(what) + ": number is not finite");
    return x;
}

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("complex entry must be a [re, im] pair");
    return {finite_number(j[0], "real part"), finite_number(j[1], "imaginary part")};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

const Json &member(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

void check_schema(const Json &j) {
    const auto &v = member(j, "schema_version");
    if (!v.is_string() || v.get<std::string>() != kSchemaVersion)
        throw FormatError("unsupported schema_version (expected \"1\")");
}

Json dims_to_json(const TripartiteDims &d) { return Json::array({d.K, d.M, d.N}); }

TripartiteDims dims_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("dims must be [K, M, N]");
    int v[3];
    for (int i = 0; i < 3; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number_integer()) throw FormatError("dims entries must be integers");
        v[i] = j[static_cast<std::size_t>(i)].get<int>();
    }
    TripartiteDims d{v[0], v[1], v[2]};
    try {
        d.validate();
    } catch (const PreconditionError &e) {
        throw FormatError(e.what());
    }
    return d;
}

Json matrix_list_to_json(const std::vector<Matrix> &ms) {
    Json arr = Json::array();
    for (const auto &m : ms) arr.push_back(matrix_to_json(m));
    return arr;
}

std::vector<Matrix> matrix_list_from_json(const Json &j, std::size_t count, Eigen::Index n) {
    if (!j.is_array() || j.size() != count) throw FormatError("generator list has the wrong length");
    std::vector<Matrix> out;
    for (const auto &e : j) out.push_back(matrix_from_json(e, n, n));
    return out;
}

}  // namespace

std::string dump(const Json &j) {
    std::string out;
    dump_into(j, out, 0);
    out += '\n';
    return out;
}

Json parse(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
    if (!out) throw FormatError("write failed for " + path.string());
}

Json vector_to_json(const Vector &v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_to_json(v(i)));
    return arr;
}

Vector vector_from_json(const Json &j, Eigen::Index expected_size) {
    if (!j.is_array()) throw FormatError("vector must be an array of [re, im] pairs");
    if (expected_size >= 0 && static_cast<Eigen::Index>(j.size()) != expected_size)
        throw FormatError("vector has the wrong length");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || j.empty()) throw FormatError("matrix must be a non-empty array of rows");
    const auto r = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw FormatError("matrix rows must be arrays");
    const auto c = static_cast<Eigen::Index>(j[0].size());
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) throw FormatError("matrix has the wrong shape");
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw FormatError("ragged matrix rows");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

Json state_to_json(const TripartiteState &state, const Metadata &metadata) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["dims"] = dims_to_json(state.dims());
    j["matrix"] = matrix_to_json(state.rho());
    if (!metadata.empty()) {
        Json meta = Json::object();
        for (const auto &[k, v] : metadata) meta[k] = v;
        j["metadata"] = std::move(meta);
    }
    return j;
}

TripartiteState state_from_json(const Json &j, const StateOptions &opts, Metadata *metadata) {
    check_schema(j);
    const auto dims = dims_from_json(member(j, "dims"));
    Matrix rho = matrix_from_json(member(j, "matrix"), dims.side(), dims.side());
    if (metadata) {
        metadata->clear();
        if (j.contains("metadata")) {
            const auto &meta = j.at("metadata");
            if (!meta.is_object()) throw FormatError("metadata must be an object of strings");
            for (const auto &[k, v] : meta.items()) {
                if (!v.is_string()) throw FormatError("metadata values must be strings");
                (*metadata)[k] = v.get<std::string>();
            }
        }
    }
    return {dims, std::move(rho), opts};
}

Json ensemble_to_json(const SeparableEnsemble &ens) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["dims"] = dims_to_json(ens.dims);
    Json terms = Json::array();
    for (const auto &t : ens.terms) {
        Json term;
        term["p"] = t.p;
        term["vecA"] = vector_to_json(t.vecA);
        term["vecB"] = vector_to_json(t.vecB);
        term["vecC"] = vector_to_json(t.vecC);
        terms.push_back(std::move(term));
    }
    j["terms"] = std::move(terms);
    return j;
}

SeparableEnsemble ensemble_from_json(const Json &j) {
    check_schema(j);
    SeparableEnsemble ens;
    ens.dims = dims_from_json(member(j, "dims"));
    const auto &terms = member(j, "terms");
    if (!terms.is_array()) throw FormatError("terms must be an array");
    for (const auto &t : terms) {
        EnsembleTerm term;
        term.p = finite_number(member(t, "p"), "weight");
        term.vecA = vector_from_json(member(t, "vecA"), ens.dims.K);
        term.vecB = vector_from_json(member(t, "vecB"), ens.dims.M);
        term.vecC = vector_from_json(member(t, "vecC"), ens.dims.N);
        ens.terms.push_back(std::move(term));
    }
    return ens;
}

Json canonical_to_json(const CanonicalForm &cf) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "canonical_form";
    j["dims"] = dims_to_json(cf.dims);
    j["A_list"] = matrix_list_to_json(cf.A_list);
    j["B_list"] = matrix_list_to_json(cf.B_list);
    j["F"] = matrix_to_json(cf.F);
    j["localU_A"] = matrix_to_json(cf.localU_A);
    j["localU_B"] = matrix_to_json(cf.localU_B);
    return j;
}

CanonicalForm canonical_from_json(const Json &j) {
    check_schema(j);
    CanonicalForm cf;
    cf.dims = dims_from_json(member(j, "dims"));
    const auto &d = cf.dims;
    cf.A_list = matrix_list_from_json(member(j, "A_list"), static_cast<std::size_t>(d.M - 1), d.N);
    cf.B_list = matrix_list_from_json(member(j, "B_list"), static_cast<std::size_t>(d.K - 1), d.N);
    cf.F = matrix_from_json(member(j, "F"), d.N, d.N);
    cf.localU_A = matrix_from_json(member(j, "localU_A"), d.K, d.K);
    cf.localU_B = matrix_from_json(member(j, "localU_B"), d.M, d.M);
    return cf;
}

Json diagnostics_to_json(const ExtractionDiagnostics &d) {
    Json j;
    j["delta_norm"] = d.delta_norm;
    j["commutator_max"] = d.commutator_max;
    j["reconstruction_residual"] = d.reconstruction_residual;
    j["kernel_residual_max"] = d.kernel_residual_max;
    j["block_residual_max"] = d.block_residual_max;
    j["corner_rank"] = d.corner_rank;
    j["state_rank"] = d.state_rank;
    if (std::isfinite(d.F_condition)) j["F_condition"] = d.F_condition;
    j["F_ill_conditioned"] = d.F_ill_conditioned;
    return j;
}

Json ppt_report_to_json(const PptReport &r) {
    Json j;
    j["overall_ppt"] = r.overall_ppt;
    j["tol_used"] = r.tol_used;
    Json masks = Json::array();
    for (const auto &e : r.entries) {
        Json m;
        m["mask"] = e.mask.label();
        m["min_eigenvalue"] = e.min_eigenvalue;
        m["pass"] = e.pass;
        masks.push_back(std::move(m));
    }
    j["masks"] = std::move(masks);
    return j;
}

}  // namespace pptsep::io
