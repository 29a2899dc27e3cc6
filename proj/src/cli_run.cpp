#include "symp/cli.hpp"

#include <cmath>

#include "symp/core_linalg.hpp"
#include "symp/index_cz.hpp"
#include "symp/index_rs.hpp"
#include "symp/kernels.hpp"
#include "symp/normal_form.hpp"
#include "symp/path_json.hpp"
#include "symp/spectral.hpp"

namespace symp {

namespace {

using nlohmann::json;

double round12(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

Mat matrix_input(const json& doc) {
  if (doc.is_object()) {
    if (!doc.contains("matrix")) throw Error(ErrorKind::Parse, "input: expected \"matrix\"");
    return matrix_from_json(doc.at("matrix"));
  }
  return matrix_from_json(doc);
}

json crossings_json(const RsResult& r) {
  json out = json::array();
  for (const auto& c : r.crossings)
    out.push_back({{"t", c.t},
                   {"kernel_dim", c.kernel_dim},
                   {"gamma", matrix_to_json(c.gamma)},
                   {"signature", c.signature},
                   {"regular", c.regular},
                   {"weight", c.endpoint ? "1/2" : "1"}});
  return out;
}

json run_command(const JobRequest& req, const json& doc, std::string& trace) {
  const Tolerances& tol = req.tol;
  const std::string& cmd = req.command;
  json out{{"command", cmd}};
  if (cmd == "cz") {
    const IndexResult r = conley_zehnder(path_from_json(doc, tol), tol, req.seed);
    out["value"] = r.value.str();
    out["diagnostics"] = {{"extension_winding", r.extension_winding},
                          {"endpoint", endpoint_name(r.endpoint)},
                          {"refine_depth", r.refine_depth},
                          {"det_gap", r.det_gap},
                          {"total_winding", r.raw_total},
                          {"total_winding_polar", r.polar_total},
                          {"total_winding_hat", r.hat_total},
                          {"endpoint_perturbed", r.perturbed}};
    trace = trace_csv(r.trace);
  } else if (cmd == "rs" || cmd == "rs2") {
    const Path p = path_from_json(doc, tol);
    const RsResult r = cmd == "rs" ? rs_index(p, tol) : rs2_index(p, tol);
    out["value"] = r.value.str();
    out["diagnostics"] = {{"crossings", crossings_json(r)}, {"notes", r.notes}};
    trace = smin_csv(r.trace);
  } else if (cmd == "maslov") {
    out["value"] = maslov_loop(path_from_json(doc, tol), tol);
  } else if (cmd == "rho") {
    const Mat a = matrix_input(doc);
    require_symplectic(a, tol, "rho");
    const cplx z = rho(a, tol);
    out["value_complex"] = {round12(z.real()), round12(z.imag())};
  } else if (cmd == "normal-form") {
    const NormalFormReport r = normal_form(matrix_input(doc), tol);
    json blocks = json::array();
    for (const auto& b : r.blocks) {
      json jb{{"case", block_case_name(b.kind)}, {"order", b.jordan_order}};
      switch (b.kind) {
        case BlockCase::OffCircleReal: jb["lambda"] = b.lambda; break;
        case BlockCase::OffCircleComplex: jb["r"] = b.r; jb["phi"] = b.phi; break;
        case BlockCase::PlusMinusOne: jb["lambda"] = b.lambda; jb["d"] = b.d; break;
        default: jb["phi"] = b.phi; jb["d"] = b.d;
      }
      blocks.push_back(jb);
    }
    out["value"] = {{"blocks", blocks}, {"basis", matrix_to_json(r.basis)}};
    out["diagnostics"] = {{"residual", r.residual}};
  } else if (cmd == "ext") {
    const ExtensionResult e = extension_winding(matrix_input(doc), tol, req.seed);
    out["value"] = e.winding;
    out["diagnostics"] = {{"endpoint", endpoint_name(e.endpoint)},
                          {"bridge", e.bridge},
                          {"perturbed", e.perturbed}};
    if (!e.note.empty()) out["diagnostics"]["note"] = e.note;
  } else {
    throw Error(ErrorKind::Parse, "unknown command '" + cmd + "'");
  }
  return out;
}

}  // namespace

JobReport run_job(const JobRequest& req) {
  JobReport rep;
  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    rep.exit_code = code;
    rep.trace.clear();
    rep.json = json{{"command", req.command}, {"error", {{"kind", kind}, {"message", msg}}}}.dump();
  };
  try {
    req.tol.validate();
    const json doc = json::parse(req.input_text);
    rep.json = run_command(req, doc, rep.trace).dump();
  } catch (const json::exception& e) {
    fail(1, "parse", e.what());
  } catch (const Error& e) {
    fail(e.kind() == ErrorKind::Parse ? 1 : 2, kind_name(e.kind()), e.what());
  }
  return rep;
}

}  // namespace symp
