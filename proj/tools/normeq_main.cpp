#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <variant>

#include "normeq/cayley.hpp"
#include "normeq/invariant.hpp"
#include "normeq/io.hpp"
#include "normeq/matrix.hpp"
#include "normeq/sb.hpp"
#include "normeq/sigma.hpp"
#include "normeq/spectral.hpp"

namespace {

using normeq::Json;
using normeq::Matrix;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;

int exit_code_for_verdict(const std::string& verdict) {
  if (verdict == "equivalent" || verdict == "pass" || verdict == "concluded-true") {
    return kExitPass;
  }
  return kExitFail;
}

int exit_code_for_error(normeq::ErrorKind kind) {
  switch (kind) {
    case normeq::ErrorKind::cluster_ambiguity:
    case normeq::ErrorKind::guard_tripped:
      return kExitGuard;
    default:
      return kExitInvalid;
  }
}

Json complex_json(normeq::Complex z) {
  return Json{{"im", z.imag()}, {"re", z.real()}};
}

Json label_json(const normeq::AtomLabel& label) {
  return Json{{"im", label.im()}, {"re", label.re()}};
}

Json operator_payload(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  return Json{{"cols", m.cols()}, {"data", std::move(data)}, {"rows", m.rows()}};
}

Matrix load_operator(const std::string& path) {
  return normeq::parse_operator_json(normeq::read_file(path));
}

std::string operator_digest(const Matrix& m) {
  return normeq::digest_hex(normeq::render_operator_json(m));
}

struct CommandContext {
  normeq::ToleranceConfig cfg;
  double sigma_tol = 1e-9;
  std::string format = "json";
  std::string out_path;
};

// Prints the finished document exactly once; nothing reaches stdout before.
int finish(const CommandContext& ctx, const Json& doc, int code) {
  const std::string rendered =
      ctx.format == "text" ? normeq::emit_text(doc) : normeq::emit_json(doc);
  std::fwrite(rendered.data(), 1, rendered.size(), stdout);
  if (!ctx.out_path.empty()) {
    std::ofstream out(ctx.out_path, std::ios::binary);
    out.write(rendered.data(), static_cast<std::streamsize>(rendered.size()));
  }
  return code;
}

int run_normality(const CommandContext& ctx, const std::string& file) {
  const Matrix m = load_operator(file);
  const double defect = normeq::normality_defect(m);
  const double scale = normeq::scale_of(m);
  const double gate = ctx.cfg.normality_tol * scale * scale;
  const std::string verdict = defect <= gate ? "pass" : "fail";
  Json doc{{"command", "normality"},
           {"defects", Json{{"commutator", defect}}},
           {"inputs", Json{{"T", operator_digest(m)}}},
           {"trace", Json{{"gate", gate}, {"scale", scale}}},
           {"verdict", verdict}};
  return finish(ctx, doc, exit_code_for_verdict(verdict));
}

int run_invariants(const CommandContext& ctx, const std::string& file) {
  const Matrix m = load_operator(file);
  const auto decomposition = normeq::decompose(m, ctx.cfg);
  const auto invariant = normeq::abstract_invariant(decomposition);

  Json atoms = Json::array();
  for (const auto& atom : decomposition.atoms) {
    atoms.push_back(Json{{"label", label_json(normeq::AtomLabel::from_rounded(atom.value))},
                         {"multiplicity", atom.multiplicity},
                         {"value", complex_json(atom.value)}});
  }
  Json symbolic = Json::array();
  for (const auto& [label, mult] : invariant.atoms()) {
    symbolic.push_back(Json{{"im", label.im()}, {"mult", mult.to_string()}, {"re", label.re()}});
  }
  const double reconstruction =
      normeq::operator_norm(m - normeq::reconstruct(decomposition));
  Json doc{{"command", "invariants"},
           {"defects", Json{{"normality", normeq::normality_defect(m)},
                            {"reconstruction", reconstruction}}},
           {"inputs", Json{{"T", operator_digest(m)}}},
           {"trace", Json{{"atoms", std::move(atoms)}, {"invariant", std::move(symbolic)}}},
           {"verdict", "pass"}};
  return finish(ctx, doc, kExitPass);
}

int run_equiv(const CommandContext& ctx, const std::string& file1, const std::string& file2) {
  const Matrix m1 = load_operator(file1);
  const Matrix m2 = load_operator(file2);
  const auto d1 = normeq::decompose(m1, ctx.cfg);
  const auto d2 = normeq::decompose(m2, ctx.cfg);
  auto outcome = normeq::witness_unitary(d1, d2, ctx.cfg);

  Json inputs{{"T1", operator_digest(m1)}, {"T2", operator_digest(m2)}};
  if (std::holds_alternative<Matrix>(outcome)) {
    const Matrix& witness = std::get<Matrix>(outcome);
    const double unitarity = normeq::operator_norm(
        witness.adjoint() * witness - Matrix::Identity(m1.rows(), m1.rows()));
    const double intertwining = normeq::operator_norm(witness * m1 - m2 * witness);
    Json pairing = Json::array();
    for (std::size_t i = 0; i < d1.atoms.size(); ++i) {
      pairing.push_back(Json{{"left", complex_json(d1.atoms[i].value)},
                             {"multiplicity", d1.atoms[i].multiplicity},
                             {"right", complex_json(d2.atoms[i].value)}});
    }
    Json doc{{"command", "equiv"},
             {"defects", Json{{"witness-intertwining", intertwining},
                              {"witness-unitarity", unitarity}}},
             {"inputs", std::move(inputs)},
             {"trace", Json{{"pairing", std::move(pairing)}}},
             {"verdict", "equivalent"},
             {"witness", operator_payload(witness)}};
    return finish(ctx, doc, kExitPass);
  }

  const auto& mismatch = std::get<normeq::NotEquivalent>(outcome);
  Json detail{{"atom", complex_json(mismatch.left_value)},
              {"kind", mismatch.kind == normeq::NotEquivalent::Kind::value_mismatch
                           ? "value"
                           : "multiplicity"}};
  if (mismatch.kind == normeq::NotEquivalent::Kind::multiplicity_mismatch) {
    detail["left-multiplicity"] = mismatch.left_multiplicity;
    detail["right-multiplicity"] = mismatch.right_multiplicity;
  } else {
    detail["nearest"] = complex_json(mismatch.right_value);
  }
  Json doc{{"command", "equiv"},
           {"defects", Json::object()},
           {"inputs", std::move(inputs)},
           {"trace", Json{{"mismatch", std::move(detail)}}},
           {"verdict", "not-equivalent"}};
  return finish(ctx, doc, kExitFail);
}

int run_sb(const CommandContext& ctx, const std::string& t1_path, const std::string& t2_path,
           const std::string& u1_path, const std::string& u2_path) {
  const Matrix t1 = load_operator(t1_path);
  const Matrix t2 = load_operator(t2_path);
  const Matrix u1 = load_operator(u1_path);
  const Matrix u2 = load_operator(u2_path);

  Json inputs{{"T1", operator_digest(t1)},
              {"T2", operator_digest(t2)},
              {"U1", operator_digest(u1)},
              {"U2", operator_digest(u2)}};
  auto outcome = normeq::schroeder_bernstein(t1, t2, u1, u2, ctx.cfg);
  if (std::holds_alternative<normeq::Rejection>(outcome)) {
    const auto& rejection = std::get<normeq::Rejection>(outcome);
    Json doc{{"command", "sb"},
             {"defects", Json{{"stage", rejection.defect}}},
             {"inputs", std::move(inputs)},
             {"trace", Json{{"detail", rejection.detail}, {"stage", rejection.stage}}},
             {"verdict", "rejected"}};
    return finish(ctx, doc, kExitFail);
  }

  const auto& result = std::get<normeq::SBResult>(outcome);
  Json defects{{"subspace-v-t", result.subspaces.v.t_defect},
               {"subspace-v-tstar", result.subspaces.v.tstar_defect},
               {"subspace-w-t", result.subspaces.w.t_defect},
               {"subspace-w-tstar", result.subspaces.w.tstar_defect},
               {"u1-adjoint-intertwining", result.u1.adjoint_intertwining_defect},
               {"u1-intertwining", result.u1.intertwining_defect},
               {"u1-isometry", result.u1.isometry_defect},
               {"u2-adjoint-intertwining", result.u2.adjoint_intertwining_defect},
               {"u2-intertwining", result.u2.intertwining_defect},
               {"u2-isometry", result.u2.isometry_defect},
               {"witness-intertwining", result.witness_intertwining_defect},
               {"witness-unitarity", result.witness_unitarity_defect}};
  Json doc{{"command", "sb"},
           {"defects", std::move(defects)},
           {"inputs", std::move(inputs)},
           {"trace", Json{{"stages", Json::array({"certify-U1", "certify-U2", "subspace-V",
                                                  "subspace-W", "witness"})}}},
           {"verdict", "pass"},
           {"witness", operator_payload(result.witness)}};
  return finish(ctx, doc, kExitPass);
}

int run_fuglede(const CommandContext& ctx, const std::string& t1_path,
                const std::string& t2_path, const std::string& s_path) {
  const Matrix t1 = load_operator(t1_path);
  const Matrix t2 = load_operator(t2_path);
  const Matrix s = load_operator(s_path);
  const auto report = normeq::fuglede_defect(t1, t2, s, ctx.cfg);
  const double forward = normeq::operator_norm(s * t1 - t2 * s);
  Json doc{{"command", "fuglede"},
           {"defects", Json{{"adjoint-intertwining", report.defect},
                            {"forward-intertwining", forward}}},
           {"inputs", Json{{"S", operator_digest(s)},
                           {"T1", operator_digest(t1)},
                           {"T2", operator_digest(t2)}}},
           {"trace", Json{{"normal-inputs", report.normal_inputs}}},
           {"verdict", "pass"}};
  return finish(ctx, doc, kExitPass);
}

int run_axioms(const CommandContext& ctx, const std::string& bundle_path) {
  const auto bundle = normeq::load_structure_bundle(bundle_path);
  const auto report = normeq::axiom_defects(bundle.structure);
  const bool pass = normeq::satisfies_sigma(bundle.structure, ctx.sigma_tol);

  Json defects{{"max", report.max_defect}, {"normality", report.normality_defect}};
  for (std::size_t k = 0; k < report.defects.size(); ++k) {
    defects["axiom-" + std::to_string(k + 1)] = report.defects[k];
  }
  Json doc{{"command", "axioms"},
           {"defects", std::move(defects)},
           {"inputs", Json{{"bundle", bundle.digest}}},
           {"trace", Json{{"lipschitz-ok", report.lipschitz_ok},
                          {"norm-P", report.norm_P},
                          {"norm-Q", report.norm_Q},
                          {"norm-T", report.norm_T},
                          {"norm-U", report.norm_U},
                          {"range-projection-reliable", report.range_projection_reliable},
                          {"tol", ctx.sigma_tol}}},
           {"verdict", pass ? "pass" : "fail"}};
  return finish(ctx, doc, pass ? kExitPass : kExitFail);
}

int run_ortho(const CommandContext& ctx, const std::string& sub_path,
              const std::string& sup_path) {
  const auto sub = normeq::load_structure_bundle(sub_path);
  const auto sup = normeq::load_structure_bundle(sup_path);
  if (!sub.embedding) {
    normeq::fail(normeq::ErrorKind::parse_error,
                 "sub bundle manifest needs an 'embedding' member");
  }
  const auto report =
      normeq::orthocomplement_check(sub.structure, *sub.embedding, sup.structure, ctx.cfg);
  const double gate = ctx.cfg.residual_tol;
  const double worst =
      std::max({report.nest_w_in_v, report.nest_v_in_h, report.restriction_defect,
                report.complement_range_defect, report.complement_intertwining_defect});
  Json doc{{"command", "ortho"},
           {"defects", Json{{"complement-intertwining", report.complement_intertwining_defect},
                            {"complement-range", report.complement_range_defect},
                            {"nest-v-in-h", report.nest_v_in_h},
                            {"nest-w-in-v", report.nest_w_in_v},
                            {"restriction", report.restriction_defect}}},
           {"inputs", Json{{"sub", sub.digest}, {"sup", sup.digest}}},
           {"trace", Json{{"gate", gate}}},
           {"verdict", worst <= gate ? "pass" : "fail"}};
  return finish(ctx, doc, worst <= gate ? kExitPass : kExitFail);
}

int run_cayley(const CommandContext& ctx, const std::string& file, bool inverse) {
  const Matrix m = load_operator(file);
  if (inverse) {
    const Matrix t = normeq::inverse_cayley(m, ctx.cfg);
    Json doc{{"command", "cayley"},
             {"defects", Json{{"hermitian", normeq::operator_norm(t - t.adjoint())}}},
             {"inputs", Json{{"V", operator_digest(m)}}},
             {"trace", Json{{"direction", "inverse"}}},
             {"verdict", "pass"},
             {"witness", operator_payload(t)}};
    return finish(ctx, doc, kExitPass);
  }
  const auto pair = normeq::cayley(m, ctx.cfg);
  Json doc{{"command", "cayley"},
           {"defects", Json{{"spectral-map", pair.spectral_map_defect},
                            {"unitarity", pair.unitarity_defect}}},
           {"inputs", Json{{"T", operator_digest(m)}}},
           {"trace", Json{{"direction", "forward"}}},
           {"verdict", "pass"},
           {"witness", operator_payload(pair.v)}};
  return finish(ctx, doc, kExitPass);
}

int run_sandwich(const CommandContext& ctx, const std::string& h_path,
                 const std::string& v_path, const std::string& w_path) {
  const std::string h_text = normeq::read_file(h_path);
  const std::string v_text = normeq::read_file(v_path);
  const std::string w_text = normeq::read_file(w_path);
  const auto h = normeq::parse_invariant_json(h_text);
  const auto v = normeq::parse_invariant_json(v_text);
  const auto w = normeq::parse_invariant_json(w_text);

  Json inputs{{"H", normeq::digest_hex(normeq::render_invariant_json(h))},
              {"V", normeq::digest_hex(normeq::render_invariant_json(v))},
              {"W", normeq::digest_hex(normeq::render_invariant_json(w))}};
  const auto verdict = normeq::sandwich(h, v, w);
  if (verdict.status == normeq::SandwichVerdict::Status::premise_violation) {
    Json trace{{"premise", verdict.failed_premise}};
    if (verdict.violation_atom) trace["atom"] = label_json(*verdict.violation_atom);
    Json doc{{"command", "sandwich"},
             {"defects", Json::object()},
             {"inputs", std::move(inputs)},
             {"trace", std::move(trace)},
             {"verdict", "premise-violation"}};
    return finish(ctx, doc, kExitFail);
  }

  Json squeeze = Json::array();
  for (const auto& row : verdict.trace) {
    squeeze.push_back(Json{{"atom", label_json(row.atom)},
                           {"h", row.h.to_string()},
                           {"v", row.v.to_string()},
                           {"w", row.w.to_string()}});
  }
  const std::string verdict_name = verdict.conclusion ? "concluded-true" : "fail";
  Json doc{{"command", "sandwich"},
           {"defects", Json::object()},
           {"inputs", std::move(inputs)},
           {"trace", Json{{"squeeze", std::move(squeeze)}}},
           {"verdict", verdict_name}};
  return finish(ctx, doc, exit_code_for_verdict(verdict_name));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normeq: unitary-equivalence toolkit for normal operators"};
  app.require_subcommand(1);

  CommandContext ctx;
  app.add_option("--cluster-tol", ctx.cfg.cluster_tol, "eigenvalue clustering radius base");
  app.add_option("--residual-tol", ctx.cfg.residual_tol, "residual gate base");
  app.add_option("--tol", ctx.sigma_tol, "axiom satisfaction tolerance");
  app.add_option("--format", ctx.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", ctx.out_path, "also write the report to this file");

  std::string file1, file2, file3, file4;
  auto* cmd_normality = app.add_subcommand("normality", "commutator defect of an operator");
  cmd_normality->add_option("file", file1)->required();
  auto* cmd_invariants =
      app.add_subcommand("invariants", "spectral decomposition and symbolic invariant");
  cmd_invariants->add_option("file", file1)->required();
  auto* cmd_equiv = app.add_subcommand("equiv", "decide unitary equivalence with a witness");
  cmd_equiv->add_option("file1", file1)->required();
  cmd_equiv->add_option("file2", file2)->required();
  auto* cmd_sb = app.add_subcommand("sb", "two-way intertwining isometry pipeline");
  cmd_sb->add_option("t1", file1)->required();
  cmd_sb->add_option("t2", file2)->required();
  cmd_sb->add_option("u1", file3)->required();
  cmd_sb->add_option("u2", file4)->required();
  auto* cmd_fuglede = app.add_subcommand("fuglede", "adjoint-intertwining defect of S");
  cmd_fuglede->add_option("t1", file1)->required();
  cmd_fuglede->add_option("t2", file2)->required();
  cmd_fuglede->add_option("s", file3)->required();
  auto* cmd_axioms = app.add_subcommand("axioms", "axiom defects of a structure bundle");
  cmd_axioms->add_option("bundle", file1)->required();
  auto* cmd_ortho = app.add_subcommand("ortho", "orthocomplement checks on nested bundles");
  cmd_ortho->add_option("sub", file1)->required();
  cmd_ortho->add_option("sup", file2)->required();
  auto* cmd_cayley = app.add_subcommand("cayley", "Cayley transform of a Hermitian operator");
  bool inverse = false;
  cmd_cayley->add_option("file", file1)->required();
  cmd_cayley->add_flag("--inverse", inverse, "invert a unitary back to Hermitian");
  auto* cmd_sandwich = app.add_subcommand("sandwich", "symbolic squeeze of three invariants");
  cmd_sandwich->add_option("h", file1)->required();
  cmd_sandwich->add_option("v", file2)->required();
  cmd_sandwich->add_option("w", file3)->required();

  std::string command = "none";
  try {
    app.parse(argc, argv);
    if (cmd_normality->parsed()) command = "normality";
    else if (cmd_invariants->parsed()) command = "invariants";
    else if (cmd_equiv->parsed()) command = "equiv";
    else if (cmd_sb->parsed()) command = "sb";
    else if (cmd_fuglede->parsed()) command = "fuglede";
    else if (cmd_axioms->parsed()) command = "axioms";
    else if (cmd_ortho->parsed()) command = "ortho";
    else if (cmd_cayley->parsed()) command = "cayley";
    else if (cmd_sandwich->parsed()) command = "sandwich";

    ctx.cfg.validate();
    if (command == "normality") return run_normality(ctx, file1);
    if (command == "invariants") return run_invariants(ctx, file1);
    if (command == "equiv") return run_equiv(ctx, file1, file2);
    if (command == "sb") return run_sb(ctx, file1, file2, file3, file4);
    if (command == "fuglede") return run_fuglede(ctx, file1, file2, file3);
    if (command == "axioms") return run_axioms(ctx, file1);
    if (command == "ortho") return run_ortho(ctx, file1, file2);
    if (command == "cayley") return run_cayley(ctx, file1, inverse);
    if (command == "sandwich") return run_sandwich(ctx, file1, file2, file3);
    return kExitInvalid;
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    Json doc{{"command", command},
             {"error", Json{{"kind", "usage"}, {"message", e.what()}}},
             {"verdict", "error"}};
    return finish(ctx, doc, kExitInvalid);
  } catch (const normeq::Error& e) {
    Json doc{{"command", command},
             {"error", Json{{"kind", normeq::to_string(e.kind())}, {"message", e.what()}}},
             {"verdict", "error"}};
    return finish(ctx, doc, exit_code_for_error(e.kind()));
  } catch (const std::exception& e) {
    Json doc{{"command", command},
             {"error", Json{{"kind", "internal"}, {"message", e.what()}}},
             {"verdict", "error"}};
    return finish(ctx, doc, kExitInvalid);
  }
}
