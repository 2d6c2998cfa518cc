#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oql/hilbert.hpp"
#include "oql/lattice.hpp"
#include "oql/lecce.hpp"
#include "oql/state_property.hpp"
#include "oql/subentity.hpp"

namespace oql::io {

// Model files are line oriented. Blank lines and lines whose first
// non-blank character is '#' are ignored. Every document starts with a
// [meta] section naming its kind:
//
//   [meta]
//   kind = sps
//   name = boolean_square
//
//   [lattice]
//   elements = 0 a a' 1
//   [order]
//   0 < a < 1
//   0 < a' < 1
//   [states]
//   p q
//   [actuality]
//   p : a 1
//   q : a' 1
//
// Hilbert documents carry [hilbert] (dims, state, unitary keys) and
// [matrix NAME ROWS COLS] blocks whose first line is `role = ...` followed by
// ROWS rows of complex literals (`1.5`, `0.5+2i`, `0.5 - 2i`, `3i`).
// Compound documents carry [compound] (dims, whole_states,
// part_properties) and may pull matrices from other files through
// [include]. Lab worlds carry [devices] (preparing, registering, ideal) and
// [lab ID] blocks with rows `object preparer r1=yes r2=no ...`; the preparer
// field may be a comma list or `-` to describe malformed worlds.

enum class DocKind { lattice, sps, hilbert, compound, labworld };
enum class MatrixRole { density, projection, vector, unitary, op };

std::string to_string(DocKind k);
std::string to_string(MatrixRole r);

struct NamedMatrix {
  MatrixRole role = MatrixRole::op;
  ComplexMatrix value;
};

struct LatticeBody {
  std::vector<std::string> elements;
  std::vector<std::pair<std::size_t, std::size_t>> order;  // sorted, unique
};

struct SpsBody {
  std::vector<std::string> states;
  std::vector<std::vector<std::size_t>> actual;  // per state, sorted, unique
};

struct HilbertBody {
  std::vector<std::size_t> dims;
  std::string state;
  std::string unitary;
};

struct CompoundBody {
  std::vector<std::size_t> dims;
  std::vector<std::string> whole_states;
  std::vector<std::string> part_properties;
};

struct ModelDocument {
  DocKind kind = DocKind::lattice;
  std::string name;
  std::string description;
  std::optional<LatticeBody> lattice;
  std::optional<SpsBody> sps;
  std::optional<HilbertBody> hilbert;
  std::optional<CompoundBody> compound;
  std::map<std::string, NamedMatrix> matrices;
  std::optional<lecce::LabWorld> world;
  std::vector<std::string> includes;
};

bool operator==(const ModelDocument& a, const ModelDocument& b);

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public ModelError {
public:
  SyntaxError(std::size_t line, std::size_t col, std::string expected);
  std::size_t line, col;
  std::string expected;
};

class SchemaError : public ModelError {
public:
  SchemaError(std::string section, std::string reason);
  std::string section, reason;
};

struct ParseOptions {
  double eps = Tolerance{}.eps;
  std::size_t max_matrix_dim = 256;
};

/// Parses and schema-checks a document. Includes are recorded, not resolved.
ModelDocument parse_model(std::string_view text, ParseOptions options = {});

/// Canonical text: fixed section order, matrices and labs sorted by name,
/// 17 significant digits, newline terminated.
std::string serialize_model(const ModelDocument& doc);

/// Reads a file and resolves [include] entries relative to it.
ModelDocument load_model(const std::filesystem::path& path, ParseOptions options = {});

std::string read_file(const std::filesystem::path& path);

/// Complex literal formatting used by the serializer.
std::string format_complex(Complex z);
std::string format_real(double v);

// Conversions into domain objects.
FiniteLattice to_lattice(const ModelDocument& doc);
/// Order problems surface as SchemaError("order", ...) naming the elements.
/// Lattice documents become systems with no states.
StatePropertySystem to_sps(const ModelDocument& doc);
StateVector doc_state_vector(const ModelDocument& doc);
DensityOperator doc_density(const ModelDocument& doc, double eps = Tolerance{}.eps);
ComplexMatrix doc_unitary(const ModelDocument& doc);
FactorDims doc_factor_dims(const ModelDocument& doc);

struct CompoundInputs {
  FactorDims dims;
  std::vector<std::string> whole_names;
  std::vector<DensityOperator> whole_states;
  std::vector<std::string> part_names;
  std::vector<Projection> part_properties;
};
CompoundInputs to_compound(const ModelDocument& doc, double eps = Tolerance{}.eps);

}  // namespace oql::io
