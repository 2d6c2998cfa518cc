#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "oql/axioms.hpp"
#include "oql/lattice.hpp"

namespace oql::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* tool_name = "oqlcheck";
inline constexpr const char* tool_version = "1.0.0";

/// Result of one CLI command: machine block for scripts, human block for
/// terminals. Nothing time- or host-dependent goes in, so identical inputs
/// and seeds give identical bytes.
struct Report {
  std::string tool = tool_name;
  std::string version = tool_version;
  std::string command;
  std::string input_digest;
  int exit_code = 0;
  Json verdicts = Json::array();
  Json machine = Json::object();
  std::string human;

  Json to_json() const;
  static Report from_json(const Json& j);
  bool operator==(const Report&) const = default;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Digest of several inputs; a single input hashes its bytes directly.
std::string input_digest(const std::vector<std::string>& contents);

std::string status_name(VerdictStatus s);

/// Witness and counterexample tuples stay as indices; the note names them.
Json verdict_json(const AxiomVerdict& v);

std::string render_machine(const Report& r);
std::string render_human(const Report& r);

}  // namespace oql::report
