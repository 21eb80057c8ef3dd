#pragma once

#include "nirvana/dynamics.hpp"
#include "nirvana/factorize.hpp"
#include "nirvana/hilbert.hpp"
#include "nirvana/sumset.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nirvana::io
{

using json = nlohmann::json;

/// Thrown for malformed or inconsistent input files.
class InputError : public Error
{
public:
	using Error::Error;
};

// Shared matrix/state format: {"dim": n, "re": [...], "im": [...]}, row-major
// for matrices (n*n entries) and plain for vectors (n entries).
json to_json(const CMatrix& m);
json to_json(const CVector& v);
json to_json(const RVector& v);
CMatrix matrix_from_json(const json& j);
CVector vector_from_json(const json& j);

json to_json(const TensorSplit& split);
TensorSplit split_from_json(const json& j);

/// {"split": [...], "basis": <matrix whose columns are the basis vectors>,
///  "labels": [[i, j], ...]}; labels default to row-major.
json to_json(const Factorization& f);
Factorization factorization_from_json(const json& j);

json to_json(const BasisTrajectory& frames);
json to_json(const SpectrumDecomposition& d);
json to_json(const LocalDecomposition& d);
json to_json(const EvolutionTrace& trace);
json to_json(const FactorizationReport& report);

/// A list of reals: a JSON array, {"spectrum": [...]}, or whitespace/comma
/// separated text.
std::vector<double> parse_real_list(const std::string& text);

std::string read_text(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

} // namespace nirvana::io
