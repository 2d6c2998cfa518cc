#include "oql/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "oql/axioms.hpp"
#include "oql/hilbert.hpp"
#include "oql/lecce.hpp"
#include "oql/model_io.hpp"
#include "oql/report.hpp"
#include "oql/subentity.hpp"

namespace oql::cli {

namespace {

using report::Json;
using report::Report;

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Loaded {
  io::ModelDocument doc;
  std::string bytes;
};

Loaded load(const std::string& path, double eps) {
  Loaded l;
  l.bytes = io::read_file(path);
  l.doc = io::load_model(path, io::ParseOptions{eps});
  return l;
}

void expect_kind(const io::ModelDocument& doc, std::initializer_list<io::DocKind> kinds, const std::string& cmd) {
  for (auto k : kinds)
    if (doc.kind == k) return;
  throw InputError(cmd + " cannot use a " + io::to_string(doc.kind) + " document");
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

std::string fmt(double v) { return io::format_real(v); }

std::string matrix_text(const ComplexMatrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? "  " : "") + io::format_complex(m(r, c));
    out += '\n';
  }
  return out;
}

std::vector<std::string> element_labels(const FiniteLattice& L, const ElementSet& xs) {
  std::vector<std::string> out;
  for (auto x : xs) out.push_back(L.label(x));
  return out;
}

Report check_axioms(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::lattice, io::DocKind::sps}, "check-axioms");
  const StatePropertySystem s = io::to_sps(in.doc);
  const auto verdicts = run_battery(s);

  Report r;
  r.command = "check-axioms";
  r.input_digest = report::input_digest({in.bytes});
  std::ostringstream h;
  h << "model " << (in.doc.name.empty() ? path : in.doc.name) << ": " << s.lattice().size() << " properties, "
    << s.num_states() << " states\n"
    << "convention: " << covering_law_convention << "\n";
  bool all = true;
  for (const auto& v : verdicts) {
    r.verdicts.push_back(report::verdict_json(v));
    all = all && v.passed();
    h << "  " << report::status_name(v.status) << "  " << axiom_name(v.axiom);
    if (!v.note.empty()) h << ": " << v.note;
    h << '\n';
    for (const auto& d : v.details) h << "      " << d << '\n';
  }
  r.machine["model"] = in.doc.name;
  r.machine["convention"] = covering_law_convention;
  r.machine["elements"] = s.lattice().labels();
  r.machine["states"] = s.state_labels();
  r.machine["all_pass"] = all;
  r.exit_code = all ? exit_pass : exit_negative;
  r.human = h.str();
  return r;
}

Report sps_check(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::sps}, "sps-check");
  Report r;
  r.command = "sps-check";
  r.input_digest = report::input_digest({in.bytes});
  std::ostringstream h;
  r.machine["model"] = in.doc.name;

  std::optional<FiniteLattice> L;
  try {
    L = io::to_lattice(in.doc);
  } catch (const io::SchemaError& e) {
    if (e.section != "order") throw;
    r.machine["lattice"] = false;
    r.machine["problem"] = e.what();
    r.verdicts.push_back({{"check", "lattice"}, {"status", "fail"}, {"note", e.what()}});
    r.human = std::string("property order is not a lattice: ") + e.what() + "\n";
    r.exit_code = exit_negative;
    return r;
  }
  r.machine["lattice"] = true;
  const auto& body = *in.doc.sps;
  ActualityTable table(body.states.size(), std::vector<bool>(L->size(), false));
  for (std::size_t p = 0; p < body.states.size(); ++p)
    for (auto a : body.actual[p]) table[p][a] = true;

  const auto violations = definition1_violations(*L, table);
  Json vs = Json::array();
  for (const auto& v : violations) {
    Json j;
    j["state"] = body.states[v.state];
    j["kind"] = v.kind == Def1Violation::Kind::top_not_actual ? "top_not_actual"
                : v.kind == Def1Violation::Kind::bottom_actual ? "bottom_actual"
                                                                : "meet_closure";
    j["family"] = element_labels(*L, v.family);
    vs.push_back(j);
    h << "  violation at state " << body.states[v.state] << ": " << j["kind"].get<std::string>() << '\n';
  }
  const bool ok = violations.empty();
  r.verdicts.push_back({{"check", "state_property_system"}, {"status", ok ? "pass" : "fail"}});
  r.machine["violations"] = vs;
  if (ok) {
    const auto s = io::to_sps(in.doc);
    Json xi = Json::object();
    for (StateIndex p = 0; p < s.num_states(); ++p) {
      xi[s.state_label(p)] = element_labels(s.lattice(), s.xi(p));
      h << "  xi(" << s.state_label(p) << ") = {";
      const auto names = element_labels(s.lattice(), s.xi(p));
      for (std::size_t i = 0; i < names.size(); ++i) h << (i ? ", " : "") << names[i];
      h << "}, meet " << s.lattice().label(s.state_meet(p)) << '\n';
    }
    r.machine["xi"] = xi;
  }
  r.human = std::string(ok ? "state property system conditions hold\n" : "state property system conditions fail\n") +
            h.str();
  r.exit_code = ok ? exit_pass : exit_negative;
  return r;
}

Report schmidt_cmd(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::hilbert}, "schmidt");
  const auto dims = io::doc_factor_dims(in.doc);
  const StateVector psi = io::doc_state_vector(in.doc);
  const SchmidtForm sf = schmidt(psi, dims, eps);
  const auto reduced = partial_trace(DensityOperator::pure(psi), dims, Factor::A);

  Report r;
  r.command = "schmidt";
  r.input_digest = report::input_digest({in.bytes});
  Json left = Json::array(), right = Json::array();
  for (const auto& v : sf.left_basis) left.push_back(vector_json(v));
  for (const auto& v : sf.right_basis) right.push_back(vector_json(v));
  const bool entangled = sf.rank() > 1;
  r.machine["dims"] = {dims.a, dims.b};
  r.machine["rank"] = sf.rank();
  r.machine["coefficients"] = sf.coefficients;
  r.machine["left_basis"] = left;
  r.machine["right_basis"] = right;
  r.machine["entangled"] = entangled;
  r.machine["reduced_purity"] = reduced.purity();
  r.verdicts.push_back({{"check", "schmidt"}, {"status", "pass"}, {"rank", sf.rank()}});

  std::ostringstream h;
  h << "Schmidt rank " << sf.rank() << (entangled ? " (entangled)" : " (product)") << "\ncoefficients:";
  for (double c : sf.coefficients) h << ' ' << fmt(c);
  h << "\nreduced purity " << fmt(reduced.purity()) << '\n';
  r.human = h.str();
  r.exit_code = exit_pass;
  return r;
}

Report ptrace_cmd(const std::string& path, const std::string& keep, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::hilbert}, "ptrace");
  const auto dims = io::doc_factor_dims(in.doc);
  const DensityOperator w = io::doc_density(in.doc, eps);
  const auto reduced = partial_trace(w, dims, keep == "A" ? Factor::A : Factor::B);

  Report r;
  r.command = "ptrace";
  r.input_digest = report::input_digest({in.bytes});
  r.machine["keep"] = keep;
  r.machine["reduced"] = matrix_json(reduced.matrix());
  r.machine["purity"] = reduced.purity();
  r.verdicts.push_back({{"check", "partial_trace"}, {"status", "pass"}});
  r.human = "reduced operator on factor " + keep + ":\n" + matrix_text(reduced.matrix()) + "purity " +
            fmt(reduced.purity()) + "\n";
  r.exit_code = exit_pass;
  return r;
}

Json witness_json(const StatePropertySystem& part, const StatePropertySystem& whole, const SubentityWitness& w) {
  Json m = Json::object(), n = Json::object();
  for (StateIndex q = 0; q < w.m.size(); ++q) m[whole.state_label(q)] = part.state_label(w.m[q]);
  for (Element a = 0; a < w.n.size(); ++a) n[part.lattice().label(a)] = whole.lattice().label(w.n[a]);
  return {{"m", m}, {"n", n}, {"m_index", w.m}, {"n_index", w.n}};
}

std::string witness_text(const StatePropertySystem& part, const StatePropertySystem& whole, const SubentityWitness& w) {
  std::string out = "  m:";
  for (StateIndex q = 0; q < w.m.size(); ++q) out += " " + whole.state_label(q) + "->" + part.state_label(w.m[q]);
  out += "\n  n:";
  for (Element a = 0; a < w.n.size(); ++a) out += " " + part.lattice().label(a) + "->" + whole.lattice().label(w.n[a]);
  return out + "\n";
}

const char* n_bounds_note = "n is not required to send 0 and I to 0 and I";

Report subentity_search_cmd(const std::string& part_path, const std::string& whole_path, std::size_t budget,
                            double eps) {
  auto pin = load(part_path, eps);
  auto win = load(whole_path, eps);
  expect_kind(pin.doc, {io::DocKind::sps}, "subentity-search");
  expect_kind(win.doc, {io::DocKind::sps}, "subentity-search");
  const auto part = io::to_sps(pin.doc);
  const auto whole = io::to_sps(win.doc);

  Report r;
  r.command = "subentity-search";
  r.input_digest = report::input_digest({pin.bytes, win.bytes});
  r.machine["budget"] = budget;
  r.machine["note"] = n_bounds_note;
  SearchStats stats;
  try {
    const auto w = search_witness(part, whole, budget, &stats);
    r.machine["nodes"] = stats.nodes;
    if (w) {
      const auto check = verify_witness(part, whole, *w);
      r.machine["found"] = true;
      r.machine["witness"] = witness_json(part, whole, *w);
      r.machine["verified"] = check.ok;
      r.verdicts.push_back({{"check", "subentity_witness"}, {"status", check.ok ? "pass" : "fail"}});
      r.human = "witness found after " + std::to_string(stats.nodes) + " nodes\n" + witness_text(part, whole, *w) +
                "verification: " + check.message + "\nnote: " + n_bounds_note + "\n";
      r.exit_code = check.ok ? exit_pass : exit_negative;
    } else {
      r.machine["found"] = false;
      r.verdicts.push_back({{"check", "subentity_witness"}, {"status", "fail"}});
      r.human = "no witness exists (exhaustive search, " + std::to_string(stats.nodes) + " nodes)\nnote: " +
                n_bounds_note + "\n";
      r.exit_code = exit_negative;
    }
  } catch (const BudgetExhausted& e) {
    r.machine["nodes"] = e.nodes;
    r.machine["found"] = nullptr;
    r.verdicts.push_back({{"check", "subentity_witness"}, {"status", "budget_exhausted"}});
    r.human = std::string(e.what()) + "\n";
    r.exit_code = exit_budget;
  }
  return r;
}

Report subentity_quantum_cmd(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::compound}, "subentity-quantum");
  const auto inputs = io::to_compound(in.doc, eps);
  const auto built = build_completed_model(inputs.dims, inputs.whole_states, inputs.part_properties, eps,
                                           inputs.whole_names, inputs.part_names);
  const auto check = verify_witness(built.part.sps, built.whole.sps, built.witness);
  const auto model = make_completed_model(inputs.dims, inputs.whole_states, inputs.part_properties);
  const auto canon = canonical_witness_check(model, eps);

  Report r;
  r.command = "subentity-quantum";
  r.input_digest = report::input_digest({in.bytes});
  r.machine["part_states"] = built.part.sps.state_labels();
  r.machine["part_properties"] = built.part.sps.lattice().labels();
  r.machine["whole_properties"] = built.whole.sps.lattice().labels();
  r.machine["witness"] = witness_json(built.part.sps, built.whole.sps, built.witness);
  r.machine["verified"] = check.ok;
  r.machine["max_born_gap"] = canon.max_born_gap;
  r.verdicts.push_back({{"check", "canonical_witness"}, {"status", check.ok && canon.ok ? "pass" : "fail"}});

  std::ostringstream h;
  h << "completed model, dims " << inputs.dims.a << " x " << inputs.dims.b << ", " << built.part_states.size()
    << " part states\ncanonical witness (m = partial trace, n = P (x) I):\n"
    << witness_text(built.part.sps, built.whole.sps, built.witness) << "verification: " << check.message
    << "\nmax |Tr(W (P (x) I)) - Tr(Tr_B(W) P)| = " << fmt(canon.max_born_gap) << '\n';
  r.human = h.str();
  r.exit_code = check.ok && canon.ok ? exit_pass : exit_negative;
  return r;
}

std::string fraction_text(const lecce::Fraction& f) {
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

Report lecce_cmd(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::labworld}, "lecce-build");
  const auto& w = *in.doc.world;

  Report r;
  r.command = "lecce-build";
  r.input_digest = report::input_digest({in.bytes});
  std::ostringstream h;

  const auto validation = lecce::validate_world(w);
  Json fv = Json::array();
  for (const auto& v : validation.frequency_violations) {
    fv.push_back({{"preparing", w.preparing[v.preparing]},
                  {"registering", w.registering[v.registering]},
                  {"labs", {w.labs[v.lab_a].id, w.labs[v.lab_b].id}},
                  {"frequencies", {fraction_text(v.freq_a), fraction_text(v.freq_b)}}});
    h << "  frequency of " << w.registering[v.registering] << " on " << w.preparing[v.preparing] << ": "
      << fraction_text(v.freq_a) << " in lab " << w.labs[v.lab_a].id << " vs " << fraction_text(v.freq_b)
      << " in lab " << w.labs[v.lab_b].id << '\n';
  }
  for (const auto& s : validation.structural) h << "  " << s << '\n';
  r.machine["frequency_violations"] = fv;
  r.machine["structural"] = validation.structural;
  if (!validation.valid()) {
    r.verdicts.push_back({{"check", "world_valid"}, {"status", "fail"}});
    r.human = "world is invalid\n" + h.str();
    r.exit_code = exit_negative;
    return r;
  }
  r.verdicts.push_back({{"check", "world_valid"}, {"status", "pass"}});

  const auto built = lecce::build_lecce_sps(w);
  const auto partition = lecce::check_partition_property(w, built.states);
  auto names = [](const std::vector<std::string>& all, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(all[i]);
    return out;
  };
  Json states = Json::array(), props = Json::array(), effects = Json::array();
  for (const auto& s : built.states) states.push_back(names(w.preparing, s.members));
  for (const auto& p : built.effects.properties) props.push_back(names(w.registering, p.members));
  for (const auto& e : built.effects.effects) effects.push_back(names(w.registering, e));
  Json only = Json::array();
  for (auto [a, b] : built.effects.frequency_only_pairs) only.push_back({w.registering[a], w.registering[b]});
  r.machine["states"] = states;
  r.machine["properties"] = props;
  r.machine["effects"] = effects;
  r.machine["frequency_only_pairs"] = only;
  r.machine["certainly_true"] = built.domains.certainly_true;
  r.machine["certainly_yes"] = built.domains.certainly_yes;
  r.machine["partition_ok"] = partition.ok;
  r.machine["partition_problems"] = partition.problems;
  r.machine["synthetic_bottom"] = built.synthetic_bottom;
  r.machine["synthetic_top"] = built.synthetic_top;
  r.machine["lattice"] = built.lattice ? Json(built.lattice->labels()) : Json(nullptr);
  r.machine["sps"] = built.sps.has_value();
  r.machine["notes"] = built.notes;
  r.verdicts.push_back({{"check", "partition"}, {"status", partition.ok ? "pass" : "fail"}});
  r.verdicts.push_back({{"check", "state_property_system"}, {"status", built.sps ? "pass" : "fail"}});

  h << built.states.size() << " states, " << built.effects.properties.size() << " properties, "
    << built.effects.effects.size() << " effects\n";
  for (std::size_t i = 0; i < built.states.size(); ++i) h << "  state " << states[i].dump() << '\n';
  for (std::size_t i = 0; i < built.effects.properties.size(); ++i) h << "  property " << props[i].dump() << '\n';
  for (const auto& p : partition.problems) h << "  partition: " << p << '\n';
  if (built.lattice) {
    h << "property lattice:";
    for (const auto& l : built.lattice->labels()) h << ' ' << l;
    h << '\n';
  }
  for (const auto& n : built.notes) h << "note: " << n << '\n';
  h << (built.sps ? "state property system built\n" : "no state property system\n");
  r.human = h.str();
  r.exit_code = built.sps && partition.ok ? exit_pass : exit_negative;
  return r;
}

Report decompose_cmd(const std::string& path, std::size_t parts, std::size_t samples, std::uint64_t seed, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::hilbert}, "decompose");
  const DensityOperator w = io::doc_density(in.doc, eps);
  const auto ds = decompositions_sample(w, parts, samples, seed, eps);
  const double recon_tol = Tolerance{}.eps_recon;

  Report r;
  r.command = "decompose";
  r.input_digest = report::input_digest({in.bytes});
  Json arr = Json::array();
  double worst = 0.0;
  std::ostringstream h;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const double err = max_abs_diff(reconstruct(ds[k]), w.matrix());
    worst = std::max(worst, err);
    Json terms = Json::array();
    h << "sample " << k << ":";
    for (const auto& t : ds[k]) {
      terms.push_back({{"weight", t.weight}, {"vector", vector_json(t.vector)}});
      h << ' ' << fmt(t.weight);
    }
    h << "  (reconstruction error " << fmt(err) << ")\n";
    arr.push_back({{"terms", terms}, {"reconstruction_error", err}});
  }
  const bool ok = worst <= recon_tol;
  r.machine["parts"] = parts;
  r.machine["samples"] = samples;
  r.machine["seed"] = seed;
  r.machine["rank"] = eigendecomposition(w, eps).size();
  r.machine["decompositions"] = arr;
  r.machine["max_reconstruction_error"] = worst;
  r.verdicts.push_back({{"check", "reconstruction"}, {"status", ok ? "pass" : "fail"}});
  r.human = h.str();
  r.exit_code = ok ? exit_pass : exit_negative;
  return r;
}

Report evolve_cmd(const std::string& path, double eps) {
  auto in = load(path, eps);
  expect_kind(in.doc, {io::DocKind::hilbert}, "evolve");
  const auto dims = io::doc_factor_dims(in.doc);
  const StateVector psi = io::doc_state_vector(in.doc);
  const ComplexMatrix u = io::doc_unitary(in.doc);
  const auto change = reduced_evolution(psi, u, dims, eps);
  const bool changed = std::abs(change.after - change.before) > eps;

  Report r;
  r.command = "evolve";
  r.input_digest = report::input_digest({in.bytes});
  r.machine["purity_before"] = change.before;
  r.machine["purity_after"] = change.after;
  r.machine["purity_changed"] = changed;
  r.verdicts.push_back({{"check", "reduced_evolution"}, {"status", "pass"}});
  r.human = "reduced purity " + fmt(change.before) + " -> " + fmt(change.after) +
            (changed ? " (reduced evolution is not unitary)\n" : " (unchanged)\n");
  r.exit_code = exit_pass;
  return r;
}

double default_eps() {
  const char* env = std::getenv("SUBENTITY_LAB_EPS");
  if (!env || !*env) return Tolerance{}.eps;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0.0) || v >= 1.0) throw InputError(std::string("invalid SUBENTITY_LAB_EPS '") + env + "'");
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks finite quantum-logic models: axiom batteries, subentity witnesses, Hilbert-space operations"};
  app.name("oqlcheck");
  app.require_subcommand(1);

  std::optional<double> eps_flag;
  std::string format = "human";
  std::string out_path;
  app.add_option("--eps", eps_flag, "numerical tolerance (default 1e-9 or SUBENTITY_LAB_EPS)")
      ->check(CLI::Range(1e-300, 0.5));
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--out", out_path, "write the report to a file");

  std::string file, part_file, keep = "A";
  std::size_t budget = 10'000'000, parts = 2, samples = 1;
  std::uint64_t seed = 0;

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  auto* c_axioms = add("check-axioms", "run the eight-axiom battery on a lattice or sps file");
  c_axioms->add_option("file", file)->required();
  auto* c_sps = add("sps-check", "check the state property system conditions");
  c_sps->add_option("file", file)->required();
  auto* c_schmidt = add("schmidt", "Schmidt decomposition of a bipartite state");
  c_schmidt->add_option("file", file)->required();
  auto* c_ptrace = add("ptrace", "partial trace of a bipartite state");
  c_ptrace->add_option("file", file)->required();
  c_ptrace->add_option("--keep", keep, "factor to keep")->check(CLI::IsMember({"A", "B"}));
  auto* c_search = add("subentity-search", "search for a subentity witness between two sps files");
  c_search->add_option("part", part_file)->required();
  c_search->add_option("whole", file)->required();
  c_search->add_option("--budget", budget, "search node budget")->check(CLI::PositiveNumber);
  auto* c_quantum = add("subentity-quantum", "canonical witness of a completed compound model");
  c_quantum->add_option("file", file)->required();
  auto* c_lecce = add("lecce-build", "build the operational state property system of a lab world");
  c_lecce->add_option("file", file)->required();
  auto* c_decompose = add("decompose", "sample convex decompositions of a density operator");
  c_decompose->add_option("file", file)->required();
  c_decompose->add_option("--parts", parts, "number of pure terms")->check(CLI::PositiveNumber);
  c_decompose->add_option("--samples", samples, "number of decompositions")->check(CLI::PositiveNumber);
  c_decompose->add_option("--seed", seed, "random seed");
  auto* c_evolve = add("evolve", "reduced purity before and after a unitary");
  c_evolve->add_option("file", file)->required();

  std::vector<std::string> argv_store{"oqlcheck"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "oqlcheck: " << e.what() << "\n";
    return exit_input_error;
  }

  try {
    const double eps = eps_flag ? *eps_flag : default_eps();
    Report r;
    if (c_axioms->parsed()) r = check_axioms(file, eps);
    else if (c_sps->parsed()) r = sps_check(file, eps);
    else if (c_schmidt->parsed()) r = schmidt_cmd(file, eps);
    else if (c_ptrace->parsed()) r = ptrace_cmd(file, keep, eps);
    else if (c_search->parsed()) r = subentity_search_cmd(part_file, file, budget, eps);
    else if (c_quantum->parsed()) r = subentity_quantum_cmd(file, eps);
    else if (c_lecce->parsed()) r = lecce_cmd(file, eps);
    else if (c_decompose->parsed()) r = decompose_cmd(file, parts, samples, seed, eps);
    else r = evolve_cmd(file, eps);

    const std::string text = format == "machine" ? report::render_machine(r) : report::render_human(r);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!(f << text)) throw InputError("cannot write " + out_path);
    }
    return r.exit_code;
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    // Anything that escapes a command is a problem with its inputs.
    err << "oqlcheck: " << e.what() << "\n";
    return exit_input_error;
  }
}

}  // namespace oql::cli
