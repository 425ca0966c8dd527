#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bpbkit/bpb.hpp"
#include "bpbkit/c0.hpp"
#include "bpbkit/generate.hpp"
#include "bpbkit/op.hpp"
#include "bpbkit/oracle.hpp"

namespace bpbkit {

using Json = nlohmann::json;

// Numbers in instance and report files are decimal strings with 17
// significant digits, which round-trips doubles exactly, so a report can be
// re-verified bit-for-bit from the file alone.

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

inline double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0') || errno == ERANGE)
    throw ParseError("bad numeric literal: '" + s + "'");
  return v;
}

enum class InstanceKind { PairL1, OperatorL1, OperatorC0 };

inline std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::PairL1: return "pair-l1";
    case InstanceKind::OperatorL1: return "operator-l1";
    case InstanceKind::OperatorC0: return "operator-c0";
  }
  return "?";
}

inline InstanceKind kind_from_string(const std::string& s) {
  if (s == "pair-l1") return InstanceKind::PairL1;
  if (s == "operator-l1") return InstanceKind::OperatorL1;
  if (s == "operator-c0") return InstanceKind::OperatorC0;
  throw ParseError("unknown instance kind: '" + s + "'");
}

inline std::string to_string(FieldMode f) {
  return f == FieldMode::Real ? "real" : "complex";
}

inline FieldMode field_from_string(const std::string& s) {
  if (s == "real") return FieldMode::Real;
  if (s == "complex") return FieldMode::Complex;
  throw ParseError("unknown field mode: '" + s + "'");
}

namespace detail {

inline Json to_json(Cx z) {
  return Json::array({format_double(z.real()), format_double(z.imag())});
}

inline Cx cx_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError("scalar must be a [re, im] pair of strings");
  return Cx(parse_double(j[0].get<std::string>()),
            parse_double(j[1].get<std::string>()));
}

inline Json coords_to_json(const std::vector<Cx>& v) {
  Json a = Json::array();
  for (Cx z : v) a.push_back(to_json(z));
  return a;
}

inline std::vector<Cx> coords_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("coordinate list must be an array");
  std::vector<Cx> v;
  v.reserve(j.size());
  for (const Json& e : j) v.push_back(cx_from_json(e));
  return v;
}

/// Matrices are serialized as rows: element [k][j] of the file is entry(k, j).
inline Json matrix_to_json(const L1Operator& t) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < t.n; ++k) {
    Json row = Json::array();
    for (std::size_t j = 0; j < t.n; ++j) row.push_back(to_json(t.entry(k, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline L1Operator matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be an array of rows");
  std::size_t n = j.size();
  L1Operator t(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Json& row = j[k];
    if (!row.is_array() || row.size() != n)
      throw ParseError("matrix must be square");
    for (std::size_t col = 0; col < n; ++col)
      t.entry(k, col) = cx_from_json(row[col]);
  }
  return t;
}

inline Json index_set_to_json(const IndexSet& s) {
  Json a = Json::array();
  for (std::size_t j : s.members) a.push_back(j + 1);  // 1-based in files
  return a;
}

inline IndexSet index_set_from_json(const Json& j) {
  std::vector<std::size_t> m;
  for (const Json& e : j) {
    std::size_t v = e.get<std::size_t>();
    if (v == 0) throw ParseError("index sets in files are 1-based");
    m.push_back(v - 1);
  }
  return IndexSet(std::move(m));
}

}  // namespace detail

/// On-disk problem instance; the x/phi carriers depend on kind (for
/// operator-c0 the vector is sup-normed and the functional is the l1 list).
struct Instance {
  InstanceKind kind = InstanceKind::PairL1;
  FieldMode field = FieldMode::Complex;
  std::size_t n = 0;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::vector<Cx> x;
  std::vector<Cx> phi;
  std::optional<L1Operator> T;
};

inline Json to_json(const Instance& inst) {
  Json j;
  j["format"] = "bpbkit-instance-v1";
  j["kind"] = to_string(inst.kind);
  j["field"] = to_string(inst.field);
  j["n"] = inst.n;
  j["epsilon"] = format_double(inst.epsilon);
  if (inst.delta) j["delta"] = format_double(*inst.delta);
  if (inst.seed) j["seed"] = *inst.seed;
  j["x"] = detail::coords_to_json(inst.x);
  j["phi"] = detail::coords_to_json(inst.phi);
  if (inst.T) j["T"] = detail::matrix_to_json(*inst.T);
  return j;
}

inline Instance instance_from_json(const Json& j) {
  try {
    Instance inst;
    if (j.value("format", "") != "bpbkit-instance-v1")
      throw ParseError("not a bpbkit-instance-v1 document");
    inst.kind = kind_from_string(j.at("kind").get<std::string>());
    inst.field = field_from_string(j.at("field").get<std::string>());
    inst.n = j.at("n").get<std::size_t>();
    inst.epsilon = parse_double(j.at("epsilon").get<std::string>());
    if (j.contains("delta"))
      inst.delta = parse_double(j.at("delta").get<std::string>());
    if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
    inst.x = detail::coords_from_json(j.at("x"));
    inst.phi = detail::coords_from_json(j.at("phi"));
    if (j.contains("T")) inst.T = detail::matrix_from_json(j.at("T"));
    if (inst.n < 1) throw ParseError("n must be >= 1");
    if (inst.x.size() != inst.n || inst.phi.size() != inst.n)
      throw ParseError("coordinate lists do not match n");
    if (inst.kind != InstanceKind::PairL1) {
      if (!inst.T) throw ParseError("operator instance lacks T");
      if (inst.T->n != inst.n) throw ParseError("matrix does not match n");
    }
    if (inst.field == FieldMode::Real) {
      auto all_real = [](const std::vector<Cx>& v) {
        for (Cx z : v)
          if (z.imag() != 0.0) return false;
        return true;
      };
      if (!all_real(inst.x) || !all_real(inst.phi) ||
          (inst.T && !all_real(inst.T->entries)))
        throw ParseError("real-field instance has nonzero imaginary parts");
    }
    return inst;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << body;
}

inline Instance make_instance(const PairInstance& p) {
  Instance inst;
  inst.kind = InstanceKind::PairL1;
  inst.field = p.field;
  inst.n = p.x.size();
  inst.epsilon = p.epsilon;
  inst.delta = p.delta;
  inst.seed = p.seed;
  inst.x = p.x.coords;
  inst.phi = p.phi.coords;
  return inst;
}

inline Instance make_instance(const OperatorInstance& p) {
  Instance inst;
  inst.kind = InstanceKind::OperatorL1;
  inst.field = p.field;
  inst.n = p.x.size();
  inst.epsilon = p.epsilon;
  inst.delta = p.delta;
  inst.seed = p.seed;
  inst.x = p.x.coords;
  inst.phi = p.phi.coords;
  inst.T = p.T;
  return inst;
}

inline Instance make_instance(const C0Instance& p) {
  Instance inst;
  inst.kind = InstanceKind::OperatorC0;
  inst.field = p.field;
  inst.n = p.x.size();
  inst.epsilon = p.epsilon;
  inst.delta = p.delta;
  inst.seed = p.seed;
  inst.x = p.x.coords;
  inst.phi = p.phi.coords;
  inst.T = p.T;
  return inst;
}

inline Json verdict_to_json(const Verdict& v) {
  Json j;
  j["all_pass"] = v.all_pass;
  Json conds = Json::array();
  for (const Condition& c : v.conditions) {
    Json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["value"] = format_double(c.value);
    conds.push_back(std::move(e));
  }
  j["conditions"] = std::move(conds);
  return j;
}

inline Json pair_witnesses_to_json(const PairWitnesses& w) {
  Json j;
  j["P"] = detail::index_set_to_json(w.P);
  if (w.A) j["A"] = detail::index_set_to_json(*w.A);
  j["M"] = format_double(w.M);
  return j;
}

/// Self-contained run report: the instance echo plus everything needed to
/// re-verify the run from the file alone.
inline Json build_pair_report(const Instance& inst, const std::string& op_name,
                              const PairCorrection& corr, const Verdict& verdict,
                              double tol, double timing_ms,
                              std::uint64_t seed) {
  Json j;
  j["format"] = "bpbkit-report-v1";
  j["operation"] = op_name;
  j["tol"] = format_double(tol);
  j["instance"] = to_json(inst);
  j["outputs"]["x0"] = detail::coords_to_json(corr.x0.coords);
  j["outputs"]["phi0"] = detail::coords_to_json(corr.phi0.coords);
  j["distances"]["x"] = format_double(corr.dist_x);
  j["distances"]["phi"] = format_double(corr.dist_phi);
  j["attainment"] = detail::to_json(corr.attainment);
  j["witnesses"] = pair_witnesses_to_json(corr.witnesses);
  j["verdict"] = verdict_to_json(verdict);
  j["timing_ms"] = format_double(timing_ms);
  j["seed"] = seed;
  return j;
}

inline Json build_operator_report(const Instance& inst,
                                  const std::string& op_name,
                                  const OperatorCorrection& corr,
                                  const Verdict& verdict, double tol,
                                  double timing_ms, std::uint64_t seed) {
  Json j;
  j["format"] = "bpbkit-report-v1";
  j["operation"] = op_name;
  j["tol"] = format_double(tol);
  j["instance"] = to_json(inst);
  j["outputs"]["x0"] = detail::coords_to_json(corr.x0.coords);
  j["outputs"]["phi0"] = detail::coords_to_json(corr.phi0.coords);
  j["outputs"]["T0"] = detail::matrix_to_json(corr.T0);
  j["distances"]["x"] = format_double(corr.dist_x);
  j["distances"]["phi"] = format_double(corr.dist_phi);
  j["distances"]["T"] = format_double(corr.dist_T);
  // Norm and numerical radius of the difference coincide on l1 (numerical
  // index 1); both are reported.
  if (inst.T)
    j["distances"]["nu_T"] =
        format_double(numerical_radius_l1(*inst.T - corr.T0));
  j["attainment"] = detail::to_json(corr.attainment);
  j["nu_T0"] = format_double(corr.nu_T0);
  Json w;
  w["P"] = detail::index_set_to_json(corr.replaced_columns);
  w["constants"]["slack"] = format_double(corr.constants.slack);
  w["constants"]["mu"] = format_double(corr.constants.mu);
  w["constants"]["mask_radius"] = format_double(corr.constants.mask_radius);
  w["constants"]["snap_radius"] = format_double(corr.constants.snap_radius);
  Json cols = Json::array();
  for (const ColumnSurgery& cs : corr.column_log) {
    Json e;
    e["j"] = cs.column + 1;
    e["a"] = detail::to_json(cs.a);
    e["z"] = detail::coords_to_json(cs.z.coords);
    cols.push_back(std::move(e));
  }
  w["columns"] = std::move(cols);
  if (corr.normalization != 1.0)
    w["normalization"] = format_double(corr.normalization);
  j["witnesses"] = std::move(w);
  j["verdict"] = verdict_to_json(verdict);
  j["timing_ms"] = format_double(timing_ms);
  j["seed"] = seed;
  return j;
}

inline Json build_c0_report(const Instance& inst, const C0Correction& corr,
                            const Verdict& verdict, double tol,
                            double timing_ms, std::uint64_t seed) {
  Json j;
  j["format"] = "bpbkit-report-v1";
  j["operation"] = "nr_correct_c0";
  j["tol"] = format_double(tol);
  j["instance"] = to_json(inst);
  j["outputs"]["x0"] = detail::coords_to_json(corr.x0.coords);
  j["outputs"]["phi0"] = detail::coords_to_json(corr.phi0.coords);
  j["outputs"]["T0"] = detail::matrix_to_json(corr.S);
  j["distances"]["x"] = format_double(corr.dist_x);
  j["distances"]["phi"] = format_double(corr.dist_phi);
  j["distances"]["T"] = format_double(corr.dist_T);
  j["attainment"] = detail::to_json(corr.attainment);
  j["nu_T0"] = format_double(corr.nu_S);
  j["witnesses"]["P"] = detail::index_set_to_json(corr.dual.replaced_columns);
  j["witnesses"]["constants"]["mu"] = format_double(corr.dual.constants.mu);
  j["verdict"] = verdict_to_json(verdict);
  j["timing_ms"] = format_double(timing_ms);
  j["seed"] = seed;
  return j;
}

/// Re-runs the appropriate verifier on a report document, using only what the
/// file contains. Returns the fresh verdict; callers compare it with the
/// stored one.
inline Verdict reverify_report(const Json& report) {
  try {
    if (report.value("format", "") != "bpbkit-report-v1")
      throw ParseError("not a bpbkit-report-v1 document");
    const Instance inst = instance_from_json(report.at("instance"));
    const std::string op = report.at("operation").get<std::string>();
    const double tol = parse_double(report.at("tol").get<std::string>());
    const Json& out = report.at("outputs");

    if (op == "bpb_first" || op == "bpb_first_modulus" || op == "bpb_second") {
      PairCorrection corr;
      corr.x0 = L1Vector(detail::coords_from_json(out.at("x0")));
      corr.phi0 = LinfFunctional(detail::coords_from_json(out.at("phi0")));
      corr.epsilon = inst.epsilon;
      corr.modulus = op == "bpb_first_modulus";
      corr.construction =
          op == "bpb_second" ? Construction::Second : Construction::First;
      const Json& w = report.at("witnesses");
      corr.witnesses.P = detail::index_set_from_json(w.at("P"));
      if (w.contains("A"))
        corr.witnesses.A = detail::index_set_from_json(w.at("A"));
      corr.witnesses.M = parse_double(w.at("M").get<std::string>());
      return verify_pair_correction(L1Vector(inst.x), LinfFunctional(inst.phi),
                                    corr, inst.epsilon, tol);
    }
    if (op == "nr_correct_l1" || op == "nr_correct_l1_modulus") {
      OperatorCorrection corr;
      corr.x0 = L1Vector(detail::coords_from_json(out.at("x0")));
      corr.phi0 = LinfFunctional(detail::coords_from_json(out.at("phi0")));
      corr.T0 = detail::matrix_from_json(out.at("T0"));
      corr.epsilon = inst.epsilon;
      corr.modulus = op == "nr_correct_l1_modulus";
      const Json& w = report.at("witnesses");
      corr.replaced_columns = detail::index_set_from_json(w.at("P"));
      corr.constants.mu =
          parse_double(w.at("constants").at("mu").get<std::string>());
      for (const Json& e : w.at("columns")) {
        ColumnSurgery cs;
        cs.column = e.at("j").get<std::size_t>() - 1;
        cs.a = detail::cx_from_json(e.at("a"));
        cs.z = L1Vector(detail::coords_from_json(e.at("z")));
        corr.column_log.push_back(std::move(cs));
      }
      return verify_operator_correction(*inst.T, L1Vector(inst.x),
                                        LinfFunctional(inst.phi), corr,
                                        inst.epsilon, tol);
    }
    if (op == "nr_correct_c0") {
      C0Correction corr;
      corr.x0 = C0Vector(detail::coords_from_json(out.at("x0")));
      corr.phi0 = L1Vector(detail::coords_from_json(out.at("phi0")));
      corr.S = detail::matrix_from_json(out.at("T0"));
      return verify_c0_correction(*inst.T, C0Vector(inst.x), L1Vector(inst.phi),
                                  corr, inst.epsilon, tol);
    }
    throw ParseError("unknown operation in report: '" + op + "'");
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace bpbkit
