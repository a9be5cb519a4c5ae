#include "sgfopt/certificates.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sgfopt {

std::string_view to_string(Lambda3Reading r) {
  return r == Lambda3Reading::as_printed ? "as_printed" : "from_proof";
}

Lambda3Reading lambda3_reading_from_string(std::string_view s) {
  if (s == "as_printed") return Lambda3Reading::as_printed;
  if (s == "from_proof") return Lambda3Reading::from_proof;
  throw FormatError("unknown lambda3 reading `" + std::string(s) + "`");
}

std::string_view to_string(ControlBound b) {
  return b == ControlBound::actual_control ? "actual_control" : "admissible_radius";
}

namespace {

ControlBound control_bound_from_string(std::string_view s) {
  if (s == "actual_control") return ControlBound::actual_control;
  if (s == "admissible_radius") return ControlBound::admissible_radius;
  throw FormatError("unknown control bound `" + std::string(s) + "`");
}

}  // namespace

void CertificateInputs::validate() const {
  if (!(alpha > 0.0 && nu > 0.0 && T > 0.0)) throw PreconditionViolation("certificate: alpha, nu, T must be positive");
  if (!(norm_y0_H3 >= 0.0 && norm_u_L1H1 >= 0.0 && norm_yd_L2Q >= 0.0 && lambda >= 0.0))
    throw PreconditionViolation("certificate: norms and lambda must be nonnegative");
  constants.validate();
}

CertificateInputs certificate_inputs(const ProblemData& pd, const DomainConstants& constants, const Trajectory* u) {
  CertificateInputs ci;
  ci.alpha = pd.alpha();
  ci.nu = pd.nu();
  ci.T = pd.T();
  ci.lambda = pd.lambda();
  ci.norm_y0_H3 = norm_hk(pd.y0(), 3);
  ci.norm_yd_L2Q = norm_l2q(pd.y_d());
  ci.constants = constants;
  if (u) {
    ci.norm_u_L1H1 = norm_l1h1(*u);
    ci.control_bound = ControlBound::actual_control;
  } else {
    ci.norm_u_L1H1 = std::sqrt(pd.T()) * pd.L();
    ci.control_bound = ControlBound::admissible_radius;
  }
  return ci;
}

double alpha_hat(double alpha) { return std::max(1.0 / (2.0 * alpha), 2.0 * alpha); }

double compute_lambda1(const CertificateInputs& ci) {
  const double K = ci.constants.K.value;
  return std::sqrt((1.0 + 4.0 * K * alpha_hat(ci.alpha)) *
                   (ci.norm_y0_H3 * ci.norm_y0_H3 + ci.norm_u_L1H1 * ci.norm_u_L1H1));
}

double compute_lambda2(const CertificateInputs& ci, double l1) {
  const auto& c = ci.constants;
  const double a = ci.alpha, T = ci.T;
  const double C1 = c.C1.value, C2 = c.C2.value;
  const double sq = c.K_tilde.value * ((1.0 + C2 * T * (1.0 + 1.0 / a) * C1 * l1 / a) *
                                           std::exp(C2 * T * (1.0 + (1.0 + 1.0 / a) * C1 * l1)) +
                                       1.0 / (a * ci.nu));
  return std::sqrt(sq);
}

double compute_lambda3(const CertificateInputs& ci, double l1, Lambda3Reading reading) {
  const auto& c = ci.constants;
  const double a = ci.alpha, T = ci.T;
  const double C1 = c.C1.value, C3 = c.C3.value;
  const double E3 = std::exp(C3 * T * C1 * l1 * (1.0 + a) / (a * a));
  const double inner = 1.0 + (2.0 / a) * C3 * T * C1 * l1 * (1.0 + 1.0 / a) * E3;
  const double tail = std::exp(C3 * T * (1.0 + C1 * l1 * (1.0 + 1.0 / a)));
  const double inv_anu = 1.0 / (a * ci.nu);
  const double sq = reading == Lambda3Reading::as_printed ? c.K_tilde.value * (inv_anu * E3 * inner * tail)
                                                          : c.K_tilde.value * (inner * tail + inv_anu * E3);
  return std::sqrt(sq);
}

double compute_lambda3(const CertificateInputs& ci, double l1) { return compute_lambda3(ci, l1, ci.reading); }

double compute_lambda4(const CertificateInputs& ci, double l1) {
  const auto& c = ci.constants;
  const double a = ci.alpha, T = ci.T;
  const double C1 = c.C1.value, C4 = c.C4.value;
  const double E4 = std::exp(C4 * T * C1 * l1 * (1.0 + a) / (a * a));
  const double bracket = (1.0 + (1.0 / a) * C4 * T * C1 * l1 * (1.0 + 1.0 / a) * E4) *
                             std::exp(C4 * T * (1.0 + C1 * l1 * (1.0 + 1.0 / a))) +
                         (1.0 / (a * ci.nu)) * std::exp(C4 * T * C1 * l1 * (1.0 + a) * (1.0 + a) / a);
  const double data = C1 * C1 * l1 * l1 / (a * a) + ci.norm_yd_L2Q * ci.norm_yd_L2Q;
  return std::sqrt(2.0 * c.K_tilde.value * bracket * data);
}

double coercivity_threshold(double K_hat, double lambda3, double lambda4) {
  return 2.0 * K_hat * lambda3 * lambda3 * lambda4;
}

double uniqueness_threshold(double K_hat, double lambda2, double lambda4) {
  return 2.0 * K_hat * lambda2 * lambda2 * lambda4;
}

bool CertificateReport::readings_differ() const { return lambda3 != lambda3_other; }

CertificateReport certify(const CertificateInputs& ci) {
  ci.validate();
  CertificateReport r;
  r.inputs = ci;
  r.lambda1 = compute_lambda1(ci);
  r.lambda2 = compute_lambda2(ci, r.lambda1);
  r.lambda3 = compute_lambda3(ci, r.lambda1, ci.reading);
  r.lambda3_other = compute_lambda3(ci, r.lambda1,
                                    ci.reading == Lambda3Reading::as_printed ? Lambda3Reading::from_proof
                                                                             : Lambda3Reading::as_printed);
  r.lambda4 = compute_lambda4(ci, r.lambda1);
  const double Kh = ci.constants.K_hat.value;
  r.coercivity_threshold = coercivity_threshold(Kh, r.lambda3, r.lambda4);
  r.uniqueness_threshold = uniqueness_threshold(Kh, r.lambda2, r.lambda4);
  r.verdict_second_order = ci.lambda > r.coercivity_threshold;
  r.verdict_uniqueness = ci.lambda > r.uniqueness_threshold;
  r.illustrative = ci.constants.any_default();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> report_fields(const CertificateReport& r) {
  std::vector<std::pair<std::string, std::string>> f;
  const auto& ci = r.inputs;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  f.emplace_back("illustrative", b(r.illustrative));
  f.emplace_back("verdict_second_order", b(r.verdict_second_order));
  f.emplace_back("verdict_uniqueness", b(r.verdict_uniqueness));
  f.emplace_back("lambda", fmt(ci.lambda));
  f.emplace_back("coercivity_threshold", fmt(r.coercivity_threshold));
  f.emplace_back("uniqueness_threshold", fmt(r.uniqueness_threshold));
  f.emplace_back("lambda1", fmt(r.lambda1));
  f.emplace_back("lambda2", fmt(r.lambda2));
  f.emplace_back("lambda3", fmt(r.lambda3));
  f.emplace_back("lambda3_other", fmt(r.lambda3_other));
  f.emplace_back("lambda3_reading", std::string(to_string(ci.reading)));
  f.emplace_back("lambda3_readings_differ", b(r.readings_differ()));
  f.emplace_back("lambda4", fmt(r.lambda4));
  f.emplace_back("alpha", fmt(ci.alpha));
  f.emplace_back("nu", fmt(ci.nu));
  f.emplace_back("T", fmt(ci.T));
  f.emplace_back("norm_y0_H3", fmt(ci.norm_y0_H3));
  f.emplace_back("norm_u_L1H1", fmt(ci.norm_u_L1H1));
  f.emplace_back("norm_u_bound", std::string(to_string(ci.control_bound)));
  f.emplace_back("norm_yd_L2Q", fmt(ci.norm_yd_L2Q));
  ci.constants.for_each([&](const char* name, const DomainConstant& c) {
    f.emplace_back(name, fmt(c.value));
    f.emplace_back(std::string(name) + "_source", std::string(to_string(c.source)));
  });
  return f;
}

}  // namespace

std::string certificate_to_text(const CertificateReport& r) {
  std::ostringstream out;
  if (r.illustrative) out << "# ILLUSTRATIVE: some domain constants are unit defaults, verdicts are not certified\n";
  if (r.readings_differ()) out << "# lambda3 depends on the grouping of its formula; both readings are listed\n";
  for (const auto& [k, v] : report_fields(r)) out << k << " = " << v << '\n';
  return out.str();
}

CertificateReport certificate_from_text(const std::string& text) {
  std::istringstream in(text);
  std::map<std::string, KvEntry> kv;
  for (auto& e : parse_kv(in)) kv[e.key] = e;
  auto get = [&](const std::string& k) -> const KvEntry& {
    auto it = kv.find(k);
    if (it == kv.end()) throw FormatError("certificate: missing key `" + k + "`");
    return it->second;
  };
  auto num = [&](const std::string& k) {
    const auto& e = get(k);
    return parse_double(e.value, k, e.line);
  };
  auto flag = [&](const std::string& k) {
    const auto& v = get(k).value;
    if (v != "true" && v != "false") throw FormatError("certificate: `" + k + "` must be true or false");
    return v == "true";
  };

  CertificateReport r;
  auto& ci = r.inputs;
  ci.alpha = num("alpha");
  ci.nu = num("nu");
  ci.T = num("T");
  ci.lambda = num("lambda");
  ci.norm_y0_H3 = num("norm_y0_H3");
  ci.norm_u_L1H1 = num("norm_u_L1H1");
  ci.norm_yd_L2Q = num("norm_yd_L2Q");
  ci.control_bound = control_bound_from_string(get("norm_u_bound").value);
  ci.reading = lambda3_reading_from_string(get("lambda3_reading").value);
  ci.constants.for_each([&](const char* name, DomainConstant& c) {
    c.value = num(name);
    c.source = constant_source_from_string(get(std::string(name) + "_source").value);
  });
  r.lambda1 = num("lambda1");
  r.lambda2 = num("lambda2");
  r.lambda3 = num("lambda3");
  r.lambda3_other = num("lambda3_other");
  r.lambda4 = num("lambda4");
  r.coercivity_threshold = num("coercivity_threshold");
  r.uniqueness_threshold = num("uniqueness_threshold");
  r.verdict_second_order = flag("verdict_second_order");
  r.verdict_uniqueness = flag("verdict_uniqueness");
  r.illustrative = flag("illustrative");
  return r;
}

std::string certificate_csv(const CertificateReport& r) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [k, v] : report_fields(r)) out << k << ',' << v << '\n';
  return out.str();
}

void write_certificate(const std::filesystem::path& path, const CertificateReport& r) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << certificate_to_text(r);
}

CertificateReport read_certificate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return certificate_from_text(ss.str());
}

// ---------------------------------------------------------------------------

double hessian_quadratic_form(const StateSolution& base, const AdjointState& adj, const Trajectory& w,
                              const ProblemData& pd, double lambda) {
  const TangentState z = solve_linearized(base, w, pd);
  const double h = pd.grid().h();
  double nl = 0.0;
  for (int n = 0; n < pd.m_steps(); ++n)
    nl += inner_l2(adj.rho[n], ScalarField2D(pd.grid(), arakawa_jacobian(z.psi[n].values(), z.q[n].values(), h)));
  return inner_l2q(z.z, z.z) + lambda * inner_l2q(w, w) + 2.0 * pd.dt() * nl;
}

double hessian_quadratic_form(const StateSolution& base, const Trajectory& w, const ProblemData& pd, double lambda) {
  return hessian_quadratic_form(base, solve_adjoint(base, pd), w, pd, lambda);
}

double hessian_mixed_form(const StateSolution& base, const Trajectory& w1, const Trajectory& w2,
                          const ProblemData& pd, double lambda) {
  const TangentState z1 = solve_linearized(base, w1, pd);
  const TangentState z2 = solve_linearized(base, w2, pd);
  const TangentState zz = solve_second(base, z1, z2, pd);
  return inner_l2q(z1.z, z2.z) + lambda * inner_l2q(w1, w2) + inner_l2q(base.y - pd.y_d(), zz.z);
}

// ---------------------------------------------------------------------------

namespace {

BoundCheck make_bound(std::string name, double lhs, double rhs, const CertificateReport& r) {
  return {std::move(name), lhs, rhs, lhs <= rhs, r.illustrative};
}

double linf_h2_sq(const Trajectory& t) {
  const double v = norm_linf_hk(t, 2);
  return v * v;
}

}  // namespace

BoundCheck check_state_bound(const StateSolution& sol, const CertificateReport& r) {
  const double v = norm_linf_hk(sol.y, 3);
  const double C1 = r.inputs.constants.C1.value;
  return make_bound("state_Linf_H3", v * v, C1 * C1 * r.lambda1 * r.lambda1 / (r.inputs.alpha * r.inputs.alpha), r);
}

BoundCheck check_stability_bound(const StateSolution& s1, const StateSolution& s2, const Trajectory& u1,
                                 const Trajectory& u2, const CertificateReport& r) {
  const double du = norm_l2q(u2 - u1);
  return make_bound("stability_Linf_H2", linf_h2_sq(s2.y - s1.y), r.lambda2 * r.lambda2 * du * du, r);
}

BoundCheck check_linearized_bound(const TangentState& z, const Trajectory& w, const CertificateReport& r) {
  const double nw = norm_l2q(w);
  return make_bound("linearized_Linf_H2", linf_h2_sq(z.z), r.lambda3 * r.lambda3 * nw * nw, r);
}

BoundCheck check_adjoint_bound(const AdjointState& adj, const CertificateReport& r) {
  return make_bound("adjoint_Linf_H2", linf_h2_sq(adj.p), r.lambda4 * r.lambda4, r);
}

}  // namespace sgfopt
