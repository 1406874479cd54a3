#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

#include "pptsep/canonical.hpp"
#include "pptsep/decompose.hpp"
#include "pptsep/ppt.hpp"
#include "pptsep/types.hpp"

namespace pptsep::io {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchemaVersion = "1";

/// Shortest decimal string that parses back to exactly `x`. Integral values
/// keep a trailing ".0" so they stay floating-point (and -0.0 keeps its sign).
/// Throws FormatError for NaN or infinity.
std::string format_double(double x);

/// Compact JSON text (plus trailing newline) with numbers written by format_double.
std::string dump(const Json &j);

/// Throws FormatError on malformed JSON.
Json parse(const std::string &text);
Json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

Json vector_to_json(const Vector &v);
Vector vector_from_json(const Json &j, Eigen::Index expected_size = -1);
Json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j, Eigen::Index rows = -1, Eigen::Index cols = -1);

using Metadata = std::map<std::string, std::string>;

Json state_to_json(const TripartiteState &state, const Metadata &metadata = {});
TripartiteState state_from_json(const Json &j, const StateOptions &opts = {}, Metadata *metadata = nullptr);

/// Loading checks shape and finiteness only; ensemble invariants are the
/// business of verify_ensemble.
Json ensemble_to_json(const SeparableEnsemble &ens);
SeparableEnsemble ensemble_from_json(const Json &j);

Json canonical_to_json(const CanonicalForm &cf);
CanonicalForm canonical_from_json(const Json &j);

Json diagnostics_to_json(const ExtractionDiagnostics &d);
Json ppt_report_to_json(const PptReport &r);

}  // namespace pptsep::io
