#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bpbkit/instance.hpp"

namespace bpbkit::cli {

// Process exit contract shared by every subcommand:
//   0  all postconditions verified
//   1  verification failure
//   2  hypothesis / parse / domain error
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitError = 2;

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

inline void emit_json(const Json& j, const std::string& out_path,
                      std::ostream& out) {
  std::string body = j.dump(2);
  body.push_back('\n');
  if (out_path.empty())
    out << body;
  else
    write_text_file(out_path, body);
}

}  // namespace detail

struct CorrectOptions {
  std::string instance_path;
  std::string construction = "first";  // pair-l1 dispatch: first | second
  bool modulus = false;
  bool force = false;
  bool normalize = false;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string output_path;  // empty -> stdout
};

/// Runs the correction an instance asks for, verifies every postcondition
/// independently, and writes the self-contained run report.
inline int run_correct(const CorrectOptions& o, std::ostream& out,
                       std::ostream& err) {
  try {
    Instance inst = load_instance(o.instance_path);
    const auto t0 = std::chrono::steady_clock::now();
    double normalized_from = 0.0;

    Json report;
    bool all_pass = false;
    if (inst.kind == InstanceKind::PairL1) {
      L1Vector x(inst.x);
      LinfFunctional phi(inst.phi);
      CorrectionOptions copts{o.tol, o.force};
      PairCorrection corr;
      std::string op_name;
      if (o.construction == "second") {
        if (o.modulus)
          throw DomainError("--modulus applies to the first construction only");
        corr = bpb_second(x, phi, inst.epsilon, copts);
        op_name = "bpb_second";
      } else if (o.construction == "first") {
        corr = o.modulus ? bpb_first_modulus(x, phi, inst.epsilon, copts)
                         : bpb_first(x, phi, inst.epsilon, copts);
        op_name = o.modulus ? "bpb_first_modulus" : "bpb_first";
      } else {
        throw DomainError("unknown construction '" + o.construction + "'");
      }
      Verdict v = verify_pair_correction(x, phi, corr, inst.epsilon, o.tol);
      report = build_pair_report(inst, op_name, corr, v, o.tol,
                                 detail::ms_since(t0), o.seed);
      all_pass = v.all_pass;
    } else if (inst.kind == InstanceKind::OperatorL1) {
      if (o.normalize) {
        double nu = numerical_radius_l1(*inst.T);
        if (std::abs(nu - 1.0) > o.tol && nu != 0.0) {
          inst.T = scaled(*inst.T, Cx(1.0 / nu, 0.0));
          normalized_from = nu;
        }
      }
      L1Vector x(inst.x);
      LinfFunctional phi(inst.phi);
      OperatorOptions oopts{o.tol, o.force, /*normalize=*/false};
      OperatorCorrection corr =
          o.modulus ? nr_correct_l1_modulus(*inst.T, x, phi, inst.epsilon, oopts)
                    : nr_correct_l1(*inst.T, x, phi, inst.epsilon, oopts);
      Verdict v = verify_operator_correction(*inst.T, x, phi, corr,
                                             inst.epsilon, o.tol, 2000, o.seed);
      report = build_operator_report(
          inst, o.modulus ? "nr_correct_l1_modulus" : "nr_correct_l1", corr, v,
          o.tol, detail::ms_since(t0), o.seed);
      all_pass = v.all_pass;
    } else {
      if (o.normalize) {
        double nu = numerical_radius_c0(*inst.T);
        if (std::abs(nu - 1.0) > o.tol && nu != 0.0) {
          inst.T = scaled(*inst.T, Cx(1.0 / nu, 0.0));
          normalized_from = nu;
        }
      }
      C0Vector x(inst.x);
      L1Vector phi(inst.phi);
      OperatorOptions oopts{o.tol, o.force, /*normalize=*/false};
      C0Correction corr = nr_correct_c0(*inst.T, x, phi, inst.epsilon, oopts);
      Verdict v = verify_c0_correction(*inst.T, x, phi, corr, inst.epsilon, o.tol);
      report = build_c0_report(inst, corr, v, o.tol, detail::ms_since(t0), o.seed);
      all_pass = v.all_pass;
    }
    if (normalized_from != 0.0)
      report["normalized_from_nu"] = format_double(normalized_from);
    detail::emit_json(report, o.output_path, out);
    return all_pass ? kExitOk : kExitVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct GenerateOptions {
  InstanceKind kind = InstanceKind::PairL1;
  std::size_t n = 2;
  double epsilon = 0.5;
  double delta = -1.0;  // < 0 -> half the relevant threshold
  std::uint64_t seed = 0;
  std::size_t count = 1;
  FieldMode field = FieldMode::Complex;
  std::string output_path;  // required when count > 1
};

inline int run_generate(const GenerateOptions& o, std::ostream& out,
                        std::ostream& err) {
  try {
    if (o.n < 1) throw DomainError("n must be >= 1");
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0))
      throw DomainError("epsilon must lie in (0, 1)");
    const double threshold = o.kind == InstanceKind::PairL1
                                 ? bpb_first_slack(o.epsilon)
                                 : nr_slack(o.epsilon);
    double delta = o.delta < 0.0 ? threshold / 2.0 : o.delta;
    if (delta > threshold)
      throw DomainError("delta " + format_double(delta) +
                        " exceeds the theorem threshold " +
                        format_double(threshold) + " for this kind");
    if (o.count > 1 && o.output_path.empty())
      throw DomainError("count > 1 needs --output");

    for (std::size_t i = 0; i < o.count; ++i) {
      std::uint64_t sub = o.count == 1 ? o.seed : derive_seed(o.seed, i);
      Instance inst;
      switch (o.kind) {
        case InstanceKind::PairL1:
          inst = make_instance(generate_pair(o.n, o.epsilon, delta, sub, o.field));
          break;
        case InstanceKind::OperatorL1:
          inst = make_instance(
              generate_operator_l1(o.n, o.epsilon, delta, sub, o.field));
          break;
        case InstanceKind::OperatorC0:
          inst = make_instance(
              generate_operator_c0(o.n, o.epsilon, delta, sub, o.field));
          break;
      }
      if (o.count == 1) {
        detail::emit_json(to_json(inst), o.output_path, out);
      } else {
        std::string base = o.output_path;
        if (base.size() > 5 && base.substr(base.size() - 5) == ".json")
          base = base.substr(0, base.size() - 5);
        char idx[16];
        std::snprintf(idx, sizeof idx, "-%03zu", i);
        std::string path = base + idx + ".json";
        detail::emit_json(to_json(inst), path, out);
        out << path << "\n";
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct SweepOptions {
  std::string kind = "pair-first";  // pair-first | pair-second | operator-l1 |
                                    // operator-c0
  std::size_t n = 4;
  std::vector<double> epsilons;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  FieldMode field = FieldMode::Complex;
  std::string output_path;  // empty -> stdout
};

/// One CSV row per (epsilon, trial): the theorem threshold for the kind, the
/// realized distances and their worst ratio to epsilon. Byte-deterministic
/// for a fixed seed; per-trial sub-seeds do not depend on execution order.
inline std::string sweep_csv(const SweepOptions& o) {
  std::string csv =
      "kind,n,epsilon,trial,trial_seed,threshold,dist_x,dist_phi,dist_T,"
      "max_ratio\n";
  for (std::size_t ei = 0; ei < o.epsilons.size(); ++ei) {
    double eps = o.epsilons[ei];
    if (!(eps > 0.0 && eps < 1.0))
      throw DomainError("sweep epsilon must lie in (0, 1)");
    for (std::size_t trial = 0; trial < o.trials; ++trial) {
      std::uint64_t tseed =
          derive_seed(o.seed, (static_cast<std::uint64_t>(ei) << 32) | trial);
      double threshold = 0.0, dx = 0.0, dphi = 0.0, dt = 0.0;
      bool has_dt = false;
      if (o.kind == "pair-first" || o.kind == "pair-second") {
        bool second = o.kind == "pair-second";
        threshold = second ? bpb_second_slack(eps) : bpb_first_slack(eps);
        PairInstance inst =
            generate_pair(o.n, eps, threshold / 2.0, tseed, o.field);
        PairCorrection corr = second ? bpb_second(inst.x, inst.phi, eps)
                                     : bpb_first(inst.x, inst.phi, eps);
        dx = corr.dist_x;
        dphi = corr.dist_phi;
      } else if (o.kind == "operator-l1") {
        threshold = nr_slack(eps);
        OperatorInstance inst =
            generate_operator_l1(o.n, eps, threshold / 2.0, tseed, o.field);
        OperatorCorrection corr = nr_correct_l1(inst.T, inst.x, inst.phi, eps);
        dx = corr.dist_x;
        dphi = corr.dist_phi;
        dt = corr.dist_T;
        has_dt = true;
      } else if (o.kind == "operator-c0") {
        threshold = nr_slack(eps);
        C0Instance inst =
            generate_operator_c0(o.n, eps, threshold / 2.0, tseed, o.field);
        C0Correction corr = nr_correct_c0(inst.T, inst.x, inst.phi, eps);
        dx = corr.dist_x;
        dphi = corr.dist_phi;
        dt = corr.dist_T;
        has_dt = true;
      } else {
        throw DomainError("unknown sweep kind '" + o.kind + "'");
      }
      double worst = std::max(dx, std::max(dphi, dt)) / eps;
      csv += o.kind;
      csv += ',';
      csv += std::to_string(o.n);
      csv += ',';
      csv += format_double(eps);
      csv += ',';
      csv += std::to_string(trial);
      csv += ',';
      csv += std::to_string(tseed);
      csv += ',';
      csv += format_double(threshold);
      csv += ',';
      csv += format_double(dx);
      csv += ',';
      csv += format_double(dphi);
      csv += ',';
      if (has_dt) csv += format_double(dt);
      csv += ',';
      csv += format_double(worst);
      csv += '\n';
    }
  }
  return csv;
}

inline int run_sweep(const SweepOptions& o, std::ostream& out,
                     std::ostream& err) {
  try {
    std::string csv = sweep_csv(o);
    if (o.output_path.empty())
      out << csv;
    else
      write_text_file(o.output_path, csv);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct RadiusOptions {
  std::string instance_path;
  bool oracle = false;
  std::uint64_t resolution = 10000;
  std::uint64_t seed = 0;
};

inline int run_radius(const RadiusOptions& o, std::ostream& out,
                      std::ostream& err) {
  try {
    Instance inst = load_instance(o.instance_path);
    if (!inst.T) throw ParseError("instance contains no operator");
    const bool c0 = inst.kind == InstanceKind::OperatorC0;
    double nu = c0 ? numerical_radius_c0(*inst.T) : numerical_radius_l1(*inst.T);
    out << "nu_closed_form = " << format_double(nu) << "\n";
    if (o.oracle) {
      // For the c0 kind the oracle runs on the adjoint, an l1 operator with
      // the same numerical radius.
      L1Operator t = c0 ? adjoint(*inst.T) : *inst.T;
      OracleReport rep = nr_grid_oracle_l1(t, o.resolution, o.seed);
      out << "oracle_estimate = " << format_double(rep.estimate) << "\n";
      out << "oracle_gap = " << format_double(rep.gap) << "\n";
      out << "oracle_samples = " << rep.samples << "\n";
      out << "oracle_seed = " << rep.seed << "\n";
      if (rep.estimate > nu + 1e-9) return kExitVerifyFailed;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

struct DemoOptions {
  double epsilon = 0.1;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
};

inline int run_demo(const DemoOptions& o, std::ostream& out,
                    std::ostream& err) {
  try {
    double observed = counterexample_demo(o.epsilon, o.samples, o.seed);
    double bound = 2.0 * o.epsilon;
    out << "shift operator on l1^2, pairs within " << format_double(o.epsilon)
        << " of (e1, e2*)\n";
    out << "max_observed_pairing = " << format_double(observed) << "\n";
    out << "bound = " << format_double(bound) << "\n";
    return observed <= bound + 1e-9 ? kExitOk : kExitVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace bpbkit::cli
