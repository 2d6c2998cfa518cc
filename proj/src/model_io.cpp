#include "oql/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace oql::io {

SyntaxError::SyntaxError(std::size_t line_, std::size_t col_, std::string expected_)
    : ModelError("line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": expected " +
                 expected_),
      line(line_), col(col_), expected(std::move(expected_)) {}

SchemaError::SchemaError(std::string section_, std::string reason_)
    : ModelError("[" + section_ + "]: " + reason_), section(std::move(section_)), reason(std::move(reason_)) {}

std::string to_string(DocKind k) {
  switch (k) {
    case DocKind::lattice: return "lattice";
    case DocKind::sps: return "sps";
    case DocKind::hilbert: return "hilbert";
    case DocKind::compound: return "compound";
    case DocKind::labworld: return "labworld";
  }
  return "?";
}

std::string to_string(MatrixRole r) {
  switch (r) {
    case MatrixRole::density: return "density";
    case MatrixRole::projection: return "projection";
    case MatrixRole::vector: return "vector";
    case MatrixRole::unitary: return "unitary";
    case MatrixRole::op: return "operator";
  }
  return "?";
}

bool operator==(const ModelDocument& a, const ModelDocument& b) {
  auto same_lattice = [](const LatticeBody& x, const LatticeBody& y) {
    return x.elements == y.elements && x.order == y.order;
  };
  auto same_sps = [](const SpsBody& x, const SpsBody& y) { return x.states == y.states && x.actual == y.actual; };
  auto same_hilbert = [](const HilbertBody& x, const HilbertBody& y) {
    return x.dims == y.dims && x.state == y.state && x.unitary == y.unitary;
  };
  auto same_compound = [](const CompoundBody& x, const CompoundBody& y) {
    return x.dims == y.dims && x.whole_states == y.whole_states && x.part_properties == y.part_properties;
  };
  auto opt_eq = [](const auto& x, const auto& y, auto eq) {
    if (x.has_value() != y.has_value()) return false;
    return !x || eq(*x, *y);
  };
  if (a.kind != b.kind || a.name != b.name || a.description != b.description || a.includes != b.includes ||
      a.world != b.world)
    return false;
  if (!opt_eq(a.lattice, b.lattice, same_lattice) || !opt_eq(a.sps, b.sps, same_sps) ||
      !opt_eq(a.hilbert, b.hilbert, same_hilbert) || !opt_eq(a.compound, b.compound, same_compound))
    return false;
  if (a.matrices.size() != b.matrices.size()) return false;
  for (auto ia = a.matrices.begin(), ib = b.matrices.begin(); ia != a.matrices.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.role != ib->second.role) return false;
    const auto& ma = ia->second.value;
    const auto& mb = ib->second.value;
    if (ma.rows() != mb.rows() || ma.cols() != mb.cols() || ma != mb) return false;
  }
  return true;
}

namespace {

struct Line {
  std::size_t no;
  std::string text;
};

struct Section {
  std::string name;
  std::vector<std::string> args;
  std::size_t line;
  std::vector<Line> body;
};

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t first_col(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return i + 1;
}

// Lengths of valid UTF-8 sequences; rejects overlongs and surrogates.
void check_utf8(std::string_view text) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    unsigned min = 0;
    unsigned cp = 0;
    if (c == 0) throw SyntaxError(line, col, "text without NUL bytes");
    if (c < 0x80) len = 1, cp = c;
    else if ((c & 0xE0) == 0xC0) len = 2, cp = c & 0x1F, min = 0x80;
    else if ((c & 0xF0) == 0xE0) len = 3, cp = c & 0x0F, min = 0x800;
    else if ((c & 0xF8) == 0xF0) len = 4, cp = c & 0x07, min = 0x10000;
    else throw SyntaxError(line, col, "UTF-8 text");
    if (i + len > text.size()) throw SyntaxError(line, col, "UTF-8 text");
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) throw SyntaxError(line, col, "UTF-8 text");
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (len > 1 && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)))
      throw SyntaxError(line, col, "UTF-8 text");
    if (c == '\n') ++line, col = 1;
    else ++col;
    i += len;
  }
}

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (is_space(c) || c == '[' || c == ']' || c == '=' || c == ':' || c == '<' || c == ',' || c == '#' ||
        static_cast<unsigned char>(c) < 0x20)
      return false;
  return true;
}

std::vector<Section> split_sections(std::string_view text) {
  check_utf8(text);
  std::vector<Section> out;
  std::size_t no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string raw(text.substr(pos, end - pos));
    ++no;
    pos = end + 1;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    for (std::size_t k = 0; k < raw.size(); ++k)
      if (static_cast<unsigned char>(raw[k]) < 0x20 && raw[k] != '\t')
        throw SyntaxError(no, k + 1, "printable character");
    const std::string t = trim(raw);
    if (t.empty() || t.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (t.front() == '[') {
      if (t.back() != ']') throw SyntaxError(no, first_col(raw) + t.size() - 1, "']' closing the section header");
      auto words = split_ws(std::string_view(t).substr(1, t.size() - 2));
      if (words.empty()) throw SyntaxError(no, first_col(raw) + 1, "section name");
      for (const auto& w : words)
        if (w.find_first_of("[]") != std::string::npos) throw SyntaxError(no, first_col(raw), "section header");
      Section s{words.front(), {words.begin() + 1, words.end()}, no, {}};
      out.push_back(std::move(s));
    } else {
      if (out.empty()) throw SyntaxError(no, first_col(raw), "section header");
      out.back().body.push_back({no, raw});
    }
    if (end == text.size()) break;
  }
  return out;
}

// `key = value` line; the value may be empty.
std::pair<std::string, std::string> key_value(const Line& l) {
  const auto eq = l.text.find('=');
  if (eq == std::string::npos) throw SyntaxError(l.no, first_col(l.text), "key = value");
  std::string key = trim(std::string_view(l.text).substr(0, eq));
  if (!valid_label(key)) throw SyntaxError(l.no, first_col(l.text), "key name");
  return {key, trim(std::string_view(l.text).substr(eq + 1))};
}

std::size_t parse_size(const std::string& token, std::size_t line, std::size_t col, const char* what) {
  std::size_t v = 0;
  const char* b = token.data();
  const char* e = b + token.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e || token.empty()) throw SyntaxError(line, col, what);
  return v;
}

std::vector<std::string> label_list(const std::string& value, const Line& l, const std::string& section) {
  auto words = split_ws(value);
  for (const auto& w : words)
    if (!valid_label(w)) throw SchemaError(section, "invalid name '" + w + "' on line " + std::to_string(l.no));
  return words;
}

void require_unique(const std::vector<std::string>& names, const std::string& section) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw SchemaError(section, "duplicate name '" + n + "'");
}

// Complex literal scanner over one matrix row.
class RowScanner {
public:
  RowScanner(const Line& l) : l_(l), s_(l.text) {}

  bool done() {
    skip();
    return i_ >= s_.size();
  }

  Complex next() {
    skip();
    const std::size_t start = i_;
    double re = 0.0;
    if (!number(re)) throw SyntaxError(l_.no, start + 1, "complex number");
    if (i_ < s_.size() && s_[i_] == 'i') {
      ++i_;
      delimiter();
      return {0.0, re};
    }
    std::size_t j = i_;
    while (j < s_.size() && is_space(s_[j])) ++j;
    if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) {
      const bool neg = s_[j] == '-';
      std::size_t k = j + 1;
      while (k < s_.size() && is_space(s_[k])) ++k;
      if (k < s_.size() && s_[k] != '-' && s_[k] != '+') {
        const std::size_t saved = i_;
        i_ = k;
        double im = 0.0;
        if (number(im) && i_ < s_.size() && s_[i_] == 'i') {
          ++i_;
          delimiter();
          return {re, neg ? -im : im};
        }
        i_ = saved;
      }
    }
    delimiter();
    return {re, 0.0};
  }

private:
  void skip() {
    while (i_ < s_.size() && is_space(s_[i_])) ++i_;
  }

  void delimiter() {
    if (i_ < s_.size() && !is_space(s_[i_])) throw SyntaxError(l_.no, i_ + 1, "whitespace between entries");
  }

  bool number(double& out) {
    const char* b = s_.data() + i_;
    const char* e = s_.data() + s_.size();
    // from_chars also accepts inf/nan spellings; reject anything non-finite.
    auto [p, ec] = std::from_chars(b, e, out, std::chars_format::general);
    if (ec != std::errc{} || !std::isfinite(out)) return false;
    i_ += static_cast<std::size_t>(p - b);
    return true;
  }

  const Line& l_;
  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
public:
  Parser(std::string_view text, ParseOptions opt) : opt_(opt), sections_(split_sections(text)) {}

  ModelDocument run() {
    if (sections_.empty()) throw SyntaxError(1, 1, "[meta] section");
    if (sections_.front().name != "meta") throw SyntaxError(sections_.front().line, 1, "[meta] as first section");
    meta(sections_.front());

    std::set<std::string> seen{"meta"};
    std::vector<const Section*> labs;
    for (std::size_t i = 1; i < sections_.size(); ++i) {
      const Section& s = sections_[i];
      const bool multi = s.name == "matrix" || s.name == "lab";
      if (!multi && !seen.insert(s.name).second) throw SchemaError(s.name, "section appears twice");
      if (!allowed(s.name)) throw SchemaError(s.name, "section not allowed in a " + to_string(doc_.kind) + " document");
      if (!multi && !s.args.empty()) throw SyntaxError(s.line, 1, "no arguments after [" + s.name + "]");
      if (s.name == "matrix") matrix(s);
      else if (s.name == "lab") labs.push_back(&s);
      else if (s.name == "lattice") lattice_section(s);
      else if (s.name == "include") include_section(s);
      else if (s.name == "hilbert") hilbert_section(s);
      else if (s.name == "compound") compound_section(s);
      else if (s.name == "devices") devices_section(s);
    }
    // Sections that refer to other sections are interpreted once all are known.
    for (const auto& s : sections_) {
      if (s.name == "order") order_section(s);
      else if (s.name == "states") states_section(s);
    }
    for (const auto& s : sections_)
      if (s.name == "actuality") actuality_section(s);
    for (const auto* s : labs) lab_section(*s);
    finish();
    return std::move(doc_);
  }

private:
  bool allowed(const std::string& name) const {
    static const std::map<DocKind, std::set<std::string>> table{
        {DocKind::lattice, {"lattice", "order"}},
        {DocKind::sps, {"lattice", "order", "states", "actuality"}},
        {DocKind::hilbert, {"hilbert", "matrix", "include"}},
        {DocKind::compound, {"compound", "matrix", "include"}},
        {DocKind::labworld, {"devices", "lab"}},
    };
    return table.at(doc_.kind).count(name) > 0;
  }

  void meta(const Section& s) {
    if (!s.args.empty()) throw SyntaxError(s.line, 1, "no arguments after [meta]");
    std::optional<std::string> kind;
    std::set<std::string> keys;
    for (const auto& l : s.body) {
      auto [k, v] = key_value(l);
      if (!keys.insert(k).second) throw SchemaError("meta", "key '" + k + "' appears twice");
      if (k == "kind") kind = v;
      else if (k == "name") doc_.name = v;
      else if (k == "description") doc_.description = v;
      else throw SchemaError("meta", "unknown key '" + k + "'");
    }
    if (!kind) throw SchemaError("meta", "missing kind");
    static const std::map<std::string, DocKind> kinds{{"lattice", DocKind::lattice},
                                                      {"sps", DocKind::sps},
                                                      {"hilbert", DocKind::hilbert},
                                                      {"compound", DocKind::compound},
                                                      {"labworld", DocKind::labworld}};
    auto it = kinds.find(*kind);
    if (it == kinds.end()) throw SchemaError("meta", "unknown kind '" + *kind + "'");
    doc_.kind = it->second;
  }

  void lattice_section(const Section& s) {
    LatticeBody body;
    bool have = false;
    for (const auto& l : s.body) {
      auto [k, v] = key_value(l);
      if (k != "elements") throw SchemaError("lattice", "unknown key '" + k + "'");
      if (have) throw SchemaError("lattice", "key 'elements' appears twice");
      have = true;
      body.elements = label_list(v, l, "lattice");
    }
    if (body.elements.empty()) throw SchemaError("lattice", "no elements");
    require_unique(body.elements, "lattice");
    doc_.lattice = std::move(body);
  }

  std::size_t element_index(const std::string& label, const std::string& section) const {
    const auto& els = doc_.lattice->elements;
    auto it = std::find(els.begin(), els.end(), label);
    if (it == els.end()) throw SchemaError(section, "unknown element '" + label + "'");
    return static_cast<std::size_t>(it - els.begin());
  }

  void order_section(const Section& s) {
    if (!doc_.lattice) throw SchemaError("order", "requires a [lattice] section");
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& l : s.body) {
      std::vector<std::string> chain;
      std::size_t start = 0;
      const std::string& t = l.text;
      while (true) {
        const auto lt = t.find('<', start);
        const std::string piece = trim(std::string_view(t).substr(start, lt == std::string::npos ? std::string::npos
                                                                                                 : lt - start));
        if (!valid_label(piece)) throw SyntaxError(l.no, start + 1, "element name");
        chain.push_back(piece);
        if (lt == std::string::npos) break;
        start = lt + 1;
      }
      if (chain.size() < 2) throw SyntaxError(l.no, first_col(t), "'x < y'");
      for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        pairs.emplace(element_index(chain[i], "order"), element_index(chain[i + 1], "order"));
    }
    doc_.lattice->order.assign(pairs.begin(), pairs.end());
  }

  void states_section(const Section& s) {
    SpsBody body;
    for (const auto& l : s.body) {
      auto names = label_list(l.text, l, "states");
      body.states.insert(body.states.end(), names.begin(), names.end());
    }
    require_unique(body.states, "states");
    body.actual.assign(body.states.size(), {});
    doc_.sps = std::move(body);
  }

  void actuality_section(const Section& s) {
    if (!doc_.sps) throw SchemaError("actuality", "requires a [states] section");
    if (!doc_.lattice) throw SchemaError("actuality", "requires a [lattice] section");
    std::vector<bool> given(doc_.sps->states.size(), false);
    for (const auto& l : s.body) {
      const auto colon = l.text.find(':');
      if (colon == std::string::npos) throw SyntaxError(l.no, first_col(l.text), "'state : properties'");
      const std::string state = trim(std::string_view(l.text).substr(0, colon));
      const auto& states = doc_.sps->states;
      auto it = std::find(states.begin(), states.end(), state);
      if (it == states.end()) throw SchemaError("actuality", "unknown state '" + state + "'");
      const auto p = static_cast<std::size_t>(it - states.begin());
      if (given[p]) throw SchemaError("actuality", "state '" + state + "' listed twice");
      given[p] = true;
      std::set<std::size_t> props;
      for (const auto& name : label_list(l.text.substr(colon + 1), l, "actuality"))
        props.insert(element_index(name, "actuality"));
      doc_.sps->actual[p].assign(props.begin(), props.end());
    }
  }

  std::vector<std::size_t> dims_value(const std::string& v, const Line& l, const std::string& section,
                                      std::size_t min_count, std::size_t max_count) {
    std::vector<std::size_t> dims;
    for (const auto& w : split_ws(v)) {
      const auto d = parse_size(w, l.no, first_col(l.text), "dimension");
      if (d == 0 || d > opt_.max_matrix_dim) throw SchemaError(section, "dimension out of range");
      dims.push_back(d);
    }
    if (dims.size() < min_count || dims.size() > max_count)
      throw SchemaError(section, "dims needs " + std::to_string(min_count) +
                                     (min_count == max_count ? "" : " or " + std::to_string(max_count)) + " values");
    return dims;
  }

  void hilbert_section(const Section& s) {
    HilbertBody body;
    std::set<std::string> keys;
    for (const auto& l : s.body) {
      auto [k, v] = key_value(l);
      if (!keys.insert(k).second) throw SchemaError("hilbert", "key '" + k + "' appears twice");
      if (k == "dims") body.dims = dims_value(v, l, "hilbert", 1, 2);
      else if (k == "state" || k == "unitary") {
        auto names = label_list(v, l, "hilbert");
        if (names.size() != 1) throw SchemaError("hilbert", k + " takes one matrix name");
        (k == "state" ? body.state : body.unitary) = names.front();
      } else {
        throw SchemaError("hilbert", "unknown key '" + k + "'");
      }
    }
    if (body.dims.empty()) throw SchemaError("hilbert", "missing dims");
    doc_.hilbert = std::move(body);
  }

  void compound_section(const Section& s) {
    CompoundBody body;
    std::set<std::string> keys;
    for (const auto& l : s.body) {
      auto [k, v] = key_value(l);
      if (!keys.insert(k).second) throw SchemaError("compound", "key '" + k + "' appears twice");
      if (k == "dims") body.dims = dims_value(v, l, "compound", 2, 2);
      else if (k == "whole_states") body.whole_states = label_list(v, l, "compound");
      else if (k == "part_properties") body.part_properties = label_list(v, l, "compound");
      else throw SchemaError("compound", "unknown key '" + k + "'");
    }
    if (body.dims.empty()) throw SchemaError("compound", "missing dims");
    doc_.compound = std::move(body);
  }

  void include_section(const Section& s) {
    for (const auto& l : s.body) {
      const std::string path = trim(l.text);
      if (path.find_first_of(" \t") != std::string::npos) throw SyntaxError(l.no, first_col(l.text), "one path per line");
      doc_.includes.push_back(path);
    }
  }

  void matrix(const Section& s) {
    if (s.args.size() != 2 && s.args.size() != 3) throw SyntaxError(s.line, 1, "[matrix NAME ROWS COLS]");
    const std::string& name = s.args[0];
    if (!valid_label(name)) throw SyntaxError(s.line, 1, "matrix name");
    const auto rows = parse_size(s.args[1], s.line, 1, "row count");
    const auto cols = s.args.size() == 3 ? parse_size(s.args[2], s.line, 1, "column count") : rows;
    if (rows == 0 || cols == 0 || rows > opt_.max_matrix_dim || cols > opt_.max_matrix_dim)
      throw SchemaError("matrix", "matrix " + name + " has dimensions out of range");
    if (doc_.matrices.count(name)) throw SchemaError("matrix", "matrix " + name + " defined twice");
    if (s.body.empty()) throw SchemaError("matrix", "matrix " + name + " lacks a role line");

    auto [k, v] = key_value(s.body.front());
    if (k != "role") throw SchemaError("matrix", "matrix " + name + " must start with role = ...");
    static const std::map<std::string, MatrixRole> roles{{"density", MatrixRole::density},
                                                         {"projection", MatrixRole::projection},
                                                         {"vector", MatrixRole::vector},
                                                         {"unitary", MatrixRole::unitary},
                                                         {"operator", MatrixRole::op}};
    auto role = roles.find(v);
    if (role == roles.end()) throw SchemaError("matrix", "unknown role '" + v + "'");
    if (s.body.size() - 1 != rows)
      throw SchemaError("matrix", "matrix " + name + " declares " + std::to_string(rows) + " rows but has " +
                                      std::to_string(s.body.size() - 1));

    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const Line& l = s.body[r + 1];
      RowScanner scan(l);
      std::size_t c = 0;
      while (!scan.done()) {
        if (c == cols) throw SyntaxError(l.no, l.text.size(), std::to_string(cols) + " entries");
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c++)) = scan.next();
      }
      if (c != cols) throw SyntaxError(l.no, l.text.size() + 1, std::to_string(cols) + " entries");
    }
    validate_matrix(name, role->second, m);
    doc_.matrices.emplace(name, NamedMatrix{role->second, std::move(m)});
  }

  void validate_matrix(const std::string& name, MatrixRole role, const ComplexMatrix& m) const {
    const double eps = opt_.eps;
    auto fail = [&](const std::string& why) { throw SchemaError("matrix", why + " (" + name + ")"); };
    switch (role) {
      case MatrixRole::density:
        if (m.rows() != m.cols()) fail("density matrix not square");
        if (!is_hermitian(m, eps)) fail("not Hermitian within eps");
        try {
          DensityOperator check(m, eps);
        } catch (const HilbertError& e) {
          fail(e.what());
        }
        break;
      case MatrixRole::projection:
        if (m.rows() != m.cols()) fail("projection not square");
        if (!is_hermitian(m, eps)) fail("not Hermitian within eps");
        try {
          Projection check(m, eps);
        } catch (const HilbertError& e) {
          fail(e.what());
        }
        break;
      case MatrixRole::vector:
        if (m.cols() != 1) fail("vector must have one column");
        if (std::abs(m.norm() - 1.0) > eps) fail("vector not normalized within eps");
        break;
      case MatrixRole::unitary:
        if (m.rows() != m.cols()) fail("unitary not square");
        if (!is_unitary(m, eps)) fail("not unitary within eps");
        break;
      case MatrixRole::op:
        break;
    }
  }

  void devices_section(const Section& s) {
    lecce::LabWorld w;
    std::vector<std::string> ideal;
    bool has_ideal = false;
    std::set<std::string> keys;
    for (const auto& l : s.body) {
      auto [k, v] = key_value(l);
      if (!keys.insert(k).second) throw SchemaError("devices", "key '" + k + "' appears twice");
      if (k == "preparing") w.preparing = label_list(v, l, "devices");
      else if (k == "registering") w.registering = label_list(v, l, "devices");
      else if (k == "ideal") ideal = label_list(v, l, "devices"), has_ideal = true;
      else throw SchemaError("devices", "unknown key '" + k + "'");
    }
    if (w.preparing.empty()) throw SchemaError("devices", "no preparing devices");
    if (w.registering.empty()) throw SchemaError("devices", "no registering devices");
    require_unique(w.preparing, "devices");
    require_unique(w.registering, "devices");
    w.ideal.assign(w.registering.size(), !has_ideal);
    for (const auto& d : ideal) {
      auto it = std::find(w.registering.begin(), w.registering.end(), d);
      if (it == w.registering.end()) throw SchemaError("devices", "ideal device '" + d + "' is not registering");
      w.ideal[static_cast<std::size_t>(it - w.registering.begin())] = true;
    }
    doc_.world = std::move(w);
  }

  void lab_section(const Section& s) {
    if (!doc_.world) throw SchemaError("lab", "requires a [devices] section");
    if (s.args.size() != 1 || !valid_label(s.args[0])) throw SyntaxError(s.line, 1, "[lab ID]");
    auto& w = *doc_.world;
    for (const auto& other : w.labs)
      if (other.id == s.args[0]) throw SchemaError("lab", "lab " + s.args[0] + " defined twice");
    lecce::Laboratory lab{s.args[0], {}};
    std::set<std::string> ids;
    for (const auto& l : s.body) {
      auto words = split_ws(l.text);
      if (words.size() < 2) throw SyntaxError(l.no, first_col(l.text), "object preparer outcomes...");
      lecce::PhysicalObject obj;
      obj.id = words[0];
      if (!valid_label(obj.id)) throw SyntaxError(l.no, first_col(l.text), "object id");
      if (!ids.insert(obj.id).second) throw SchemaError("lab", "object " + obj.id + " listed twice in lab " + lab.id);
      if (words[1] != "-") {
        std::size_t start = 0;
        while (true) {
          const auto comma = words[1].find(',', start);
          const std::string name = words[1].substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          auto it = std::find(w.preparing.begin(), w.preparing.end(), name);
          if (it == w.preparing.end()) throw SchemaError("lab", "unknown preparing device '" + name + "'");
          obj.preparers.push_back(static_cast<std::size_t>(it - w.preparing.begin()));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      obj.outcomes.assign(w.registering.size(), false);
      std::vector<bool> given(w.registering.size(), false);
      for (std::size_t i = 2; i < words.size(); ++i) {
        const auto eq = words[i].find('=');
        if (eq == std::string::npos) throw SyntaxError(l.no, first_col(l.text), "device=yes|no");
        const std::string dev = words[i].substr(0, eq), val = words[i].substr(eq + 1);
        auto it = std::find(w.registering.begin(), w.registering.end(), dev);
        if (it == w.registering.end()) throw SchemaError("lab", "unknown registering device '" + dev + "'");
        const auto r = static_cast<std::size_t>(it - w.registering.begin());
        if (given[r]) throw SchemaError("lab", "outcome of " + dev + " given twice for object " + obj.id);
        if (val != "yes" && val != "no") throw SyntaxError(l.no, first_col(l.text), "yes or no");
        given[r] = true;
        obj.outcomes[r] = val == "yes";
      }
      for (std::size_t r = 0; r < given.size(); ++r)
        if (!given[r])
          throw SchemaError("lab", "object " + obj.id + " lacks an outcome for " + w.registering[r]);
      lab.objects.push_back(std::move(obj));
    }
    w.labs.push_back(std::move(lab));
  }

  void finish() {
    switch (doc_.kind) {
      case DocKind::lattice:
      case DocKind::sps:
        if (!doc_.lattice) throw SchemaError("lattice", "missing section");
        if (doc_.kind == DocKind::sps && !doc_.sps) throw SchemaError("states", "missing section");
        break;
      case DocKind::hilbert:
        if (!doc_.hilbert) throw SchemaError("hilbert", "missing section");
        for (const auto* ref : {&doc_.hilbert->state, &doc_.hilbert->unitary})
          if (!ref->empty() && doc_.includes.empty() && !doc_.matrices.count(*ref))
            throw SchemaError("hilbert", "unknown matrix '" + *ref + "'");
        break;
      case DocKind::compound:
        if (!doc_.compound) throw SchemaError("compound", "missing section");
        if (doc_.includes.empty())
          for (const auto& names : {doc_.compound->whole_states, doc_.compound->part_properties})
            for (const auto& n : names)
              if (!doc_.matrices.count(n)) throw SchemaError("compound", "unknown matrix '" + n + "'");
        break;
      case DocKind::labworld:
        if (!doc_.world) throw SchemaError("devices", "missing section");
        std::sort(doc_.world->labs.begin(), doc_.world->labs.end(),
                  [](const auto& a, const auto& b) { return a.id < b.id; });
        break;
    }
  }

  ParseOptions opt_;
  std::vector<Section> sections_;
  ModelDocument doc_;
};

void write_names(std::ostream& os, const std::vector<std::string>& names) {
  for (const auto& n : names) os << ' ' << n;
}

void write_dims(std::ostream& os, const std::vector<std::size_t>& dims) {
  os << "dims =";
  for (auto d : dims) os << ' ' << d;
  os << '\n';
}

}  // namespace

ModelDocument parse_model(std::string_view text, ParseOptions options) {
  return Parser(text, options).run();
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, p);
}

std::string format_complex(Complex z) {
  std::string out = format_real(z.real());
  if (z.imag() != 0.0) {
    out += z.imag() < 0 ? '-' : '+';
    out += format_real(std::abs(z.imag()));
    out += 'i';
  }
  return out;
}

std::string serialize_model(const ModelDocument& doc) {
  std::ostringstream os;
  os << "[meta]\nkind = " << to_string(doc.kind) << '\n';
  if (!doc.name.empty()) os << "name = " << doc.name << '\n';
  if (!doc.description.empty()) os << "description = " << doc.description << '\n';

  if (doc.lattice) {
    os << "\n[lattice]\nelements =";
    write_names(os, doc.lattice->elements);
    os << '\n';
    if (!doc.lattice->order.empty()) {
      os << "\n[order]\n";
      for (auto [a, b] : doc.lattice->order)
        os << doc.lattice->elements[a] << " < " << doc.lattice->elements[b] << '\n';
    }
  }
  if (doc.sps) {
    os << "\n[states]\n";
    for (std::size_t i = 0; i < doc.sps->states.size(); ++i) os << (i ? " " : "") << doc.sps->states[i];
    os << '\n';
    if (!doc.sps->states.empty()) {
      os << "\n[actuality]\n";
      for (std::size_t p = 0; p < doc.sps->states.size(); ++p) {
        os << doc.sps->states[p] << " :";
        for (auto a : doc.sps->actual[p]) os << ' ' << doc.lattice->elements[a];
        os << '\n';
      }
    }
  }
  if (doc.hilbert) {
    os << "\n[hilbert]\n";
    write_dims(os, doc.hilbert->dims);
    if (!doc.hilbert->state.empty()) os << "state = " << doc.hilbert->state << '\n';
    if (!doc.hilbert->unitary.empty()) os << "unitary = " << doc.hilbert->unitary << '\n';
  }
  if (doc.compound) {
    os << "\n[compound]\n";
    write_dims(os, doc.compound->dims);
    os << "whole_states =";
    write_names(os, doc.compound->whole_states);
    os << "\npart_properties =";
    write_names(os, doc.compound->part_properties);
    os << '\n';
  }
  if (!doc.includes.empty()) {
    os << "\n[include]\n";
    for (const auto& p : doc.includes) os << p << '\n';
  }
  for (const auto& [name, m] : doc.matrices) {
    os << "\n[matrix " << name << ' ' << m.value.rows() << ' ' << m.value.cols() << "]\nrole = " << to_string(m.role)
       << '\n';
    for (Eigen::Index r = 0; r < m.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.value.cols(); ++c) os << (c ? " " : "") << format_complex(m.value(r, c));
      os << '\n';
    }
  }
  if (doc.world) {
    const auto& w = *doc.world;
    os << "\n[devices]\npreparing =";
    write_names(os, w.preparing);
    os << "\nregistering =";
    write_names(os, w.registering);
    os << "\nideal =";
    for (std::size_t r = 0; r < w.registering.size(); ++r)
      if (w.ideal[r]) os << ' ' << w.registering[r];
    os << '\n';
    std::vector<const lecce::Laboratory*> labs;
    for (const auto& lab : w.labs) labs.push_back(&lab);
    std::sort(labs.begin(), labs.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const auto* lab : labs) {
      os << "\n[lab " << lab->id << "]\n";
      for (const auto& obj : lab->objects) {
        os << obj.id << ' ';
        if (obj.preparers.empty()) os << '-';
        for (std::size_t i = 0; i < obj.preparers.size(); ++i) os << (i ? "," : "") << w.preparing[obj.preparers[i]];
        for (std::size_t r = 0; r < w.registering.size(); ++r)
          os << ' ' << w.registering[r] << '=' << (obj.outcomes[r] ? "yes" : "no");
        os << '\n';
      }
    }
  }
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void merge_includes(ModelDocument& doc, const std::filesystem::path& base, ParseOptions options,
                    std::vector<std::filesystem::path>& stack) {
  for (const auto& rel : doc.includes) {
    const auto path = std::filesystem::weakly_canonical(base / rel);
    if (std::find(stack.begin(), stack.end(), path) != stack.end())
      throw SchemaError("include", "include cycle through " + rel);
    if (stack.size() > 16) throw SchemaError("include", "includes nested too deeply");
    ModelDocument inner;
    try {
      inner = parse_model(read_file(path), options);
    } catch (const SyntaxError& e) {
      throw SchemaError("include", rel + ": " + e.what());
    }
    if (inner.kind != DocKind::hilbert && inner.kind != DocKind::compound)
      throw SchemaError("include", rel + " is not a hilbert or compound document");
    stack.push_back(path);
    merge_includes(inner, path.parent_path(), options, stack);
    stack.pop_back();
    for (auto& [name, m] : inner.matrices) {
      auto [it, fresh] = doc.matrices.emplace(name, m);
      if (!fresh) throw SchemaError("include", "matrix " + name + " is defined more than once");
    }
  }
}

const NamedMatrix& matrix_ref(const ModelDocument& doc, const std::string& name, const std::string& section) {
  auto it = doc.matrices.find(name);
  if (it == doc.matrices.end()) throw SchemaError(section, "unknown matrix '" + name + "'");
  return it->second;
}

DensityOperator as_density(const NamedMatrix& m, const std::string& name, double eps) {
  switch (m.role) {
    case MatrixRole::vector:
      return DensityOperator::pure(StateVector(m.value.col(0), std::nullopt, eps));
    case MatrixRole::density:
      return DensityOperator(m.value, eps);
    default:
      throw SchemaError("matrix", name + " is neither a vector nor a density matrix");
  }
}

}  // namespace

ModelDocument load_model(const std::filesystem::path& path, ParseOptions options) {
  ModelDocument doc = parse_model(read_file(path), options);
  if (!doc.includes.empty()) {
    std::vector<std::filesystem::path> stack{std::filesystem::weakly_canonical(path)};
    merge_includes(doc, path.parent_path(), options, stack);
  }
  return doc;
}

FiniteLattice to_lattice(const ModelDocument& doc) {
  if (!doc.lattice) throw SchemaError("lattice", "document has no lattice");
  const auto& names = doc.lattice->elements;
  try {
    return build_lattice(names.size(), doc.lattice->order, names);
  } catch (const NotAPartialOrder& e) {
    throw SchemaError("order", "cycle through " + names[e.first] + " and " + names[e.second]);
  } catch (const NotALattice& e) {
    throw SchemaError("order", names[e.first] + " and " + names[e.second] + " have no unique " +
                                   (e.missing_meet ? "greatest lower bound" : "least upper bound"));
  }
}

StatePropertySystem to_sps(const ModelDocument& doc) {
  FiniteLattice L = to_lattice(doc);
  if (!doc.sps) return build_sps(std::move(L), 0, {});
  const auto& body = *doc.sps;
  ActualityTable table(body.states.size(), std::vector<bool>(L.size(), false));
  for (std::size_t p = 0; p < body.states.size(); ++p)
    for (auto a : body.actual[p]) table[p][a] = true;
  return build_sps(std::move(L), body.states.size(), table, body.states);
}

FactorDims doc_factor_dims(const ModelDocument& doc) {
  const std::vector<std::size_t>* dims = nullptr;
  if (doc.hilbert) dims = &doc.hilbert->dims;
  else if (doc.compound) dims = &doc.compound->dims;
  else throw SchemaError("hilbert", "document has no dims");
  if (dims->size() != 2) throw SchemaError("hilbert", "a bipartite operation needs dims = dA dB");
  return {(*dims)[0], (*dims)[1]};
}

StateVector doc_state_vector(const ModelDocument& doc) {
  if (!doc.hilbert || doc.hilbert->state.empty()) throw SchemaError("hilbert", "no state given");
  const auto& m = matrix_ref(doc, doc.hilbert->state, "hilbert");
  if (m.role != MatrixRole::vector) throw SchemaError("hilbert", "state " + doc.hilbert->state + " is not a vector");
  std::optional<FactorDims> dims;
  if (doc.hilbert->dims.size() == 2) dims = FactorDims{doc.hilbert->dims[0], doc.hilbert->dims[1]};
  const std::size_t total = dims ? dims->total() : doc.hilbert->dims[0];
  if (static_cast<std::size_t>(m.value.rows()) != total)
    throw SchemaError("hilbert", "state dimension does not match dims");
  return StateVector(m.value.col(0), dims);
}

DensityOperator doc_density(const ModelDocument& doc, double eps) {
  if (!doc.hilbert || doc.hilbert->state.empty()) throw SchemaError("hilbert", "no state given");
  const auto& m = matrix_ref(doc, doc.hilbert->state, "hilbert");
  std::size_t total = 1;
  for (auto d : doc.hilbert->dims) total *= d;
  if (static_cast<std::size_t>(m.value.rows()) != total)
    throw SchemaError("hilbert", "state dimension does not match dims");
  return as_density(m, doc.hilbert->state, eps);
}

ComplexMatrix doc_unitary(const ModelDocument& doc) {
  if (!doc.hilbert || doc.hilbert->unitary.empty()) throw SchemaError("hilbert", "no unitary given");
  const auto& m = matrix_ref(doc, doc.hilbert->unitary, "hilbert");
  if (m.role != MatrixRole::unitary) throw SchemaError("hilbert", doc.hilbert->unitary + " is not a unitary");
  return m.value;
}

CompoundInputs to_compound(const ModelDocument& doc, double eps) {
  if (!doc.compound) throw SchemaError("compound", "document has no compound section");
  CompoundInputs out;
  out.dims = doc_factor_dims(doc);
  for (const auto& name : doc.compound->whole_states) {
    const auto& m = matrix_ref(doc, name, "compound");
    if (static_cast<std::size_t>(m.value.rows()) != out.dims.total())
      throw SchemaError("compound", "whole state " + name + " has the wrong dimension");
    out.whole_names.push_back(name);
    out.whole_states.push_back(as_density(m, name, eps));
  }
  for (const auto& name : doc.compound->part_properties) {
    const auto& m = matrix_ref(doc, name, "compound");
    if (m.role != MatrixRole::projection) throw SchemaError("compound", name + " is not a projection");
    if (static_cast<std::size_t>(m.value.rows()) != out.dims.a)
      throw SchemaError("compound", "part property " + name + " has the wrong dimension");
    out.part_names.push_back(name);
    out.part_properties.emplace_back(m.value, eps);
  }
  return out;
}

}  // namespace oql::io
