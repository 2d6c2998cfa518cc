#include "oql/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <stdexcept>

namespace oql::report {

Json Report::to_json() const {
  Json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["exit_code"] = exit_code;
  j["verdicts"] = verdicts;
  j["machine"] = machine;
  j["human"] = human;
  return j;
}

Report Report::from_json(const Json& j) {
  Report r;
  r.tool = j.at("tool").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.input_digest = j.at("input_digest").get<std::string>();
  r.exit_code = j.at("exit_code").get<int>();
  r.verdicts = j.at("verdicts");
  r.machine = j.at("machine");
  r.human = j.at("human").get<std::string>();
  return r;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string input_digest(const std::vector<std::string>& contents) {
  if (contents.size() == 1) return sha256_hex(contents.front());
  std::string joined;
  for (const auto& c : contents) joined += sha256_hex(c) + "\n";
  return sha256_hex(joined);
}

std::string status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::discrepancy: return "discrepancy";
  }
  return "?";
}

Json verdict_json(const AxiomVerdict& v) {
  auto labelled = [](const std::vector<std::size_t>& xs) { return Json(xs); };
  Json j;
  j["axiom"] = axiom_name(v.axiom);
  j["status"] = status_name(v.status);
  j["witness"] = v.witness ? labelled(*v.witness) : Json(nullptr);
  j["counterexample"] = v.counterexample ? labelled(*v.counterexample) : Json(nullptr);
  j["note"] = v.note;
  if (!v.details.empty()) j["details"] = v.details;
  return j;
}

std::string render_machine(const Report& r) { return r.to_json().dump(2) + "\n"; }

std::string render_human(const Report& r) {
  std::string out = r.tool + " " + r.version + "  " + r.command + "\ninput sha256 " + r.input_digest + "\n";
  out += r.human;
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "exit " + std::to_string(r.exit_code) + "\n";
  return out;
}

}  // namespace oql::report
