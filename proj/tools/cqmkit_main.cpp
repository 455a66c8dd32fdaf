#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqmkit/contextuality.hpp"
#include "cqmkit/dynamics.hpp"
#include "cqmkit/error.hpp"
#include "cqmkit/frobenius.hpp"
#include "cqmkit/hbb.hpp"
#include "cqmkit/hsp.hpp"
#include "cqmkit/json_io.hpp"
#include "cqmkit/mermin.hpp"

namespace {

using namespace cqmkit;

// 0 = checks pass, 1 = a mathematical check failed, 2 = usage/config error
int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Usage:
    case ErrorCode::TooLarge:
    case ErrorCode::BadN:
    case ErrorCode::InvalidSubgroup:
    case ErrorCode::NotApplicable:
      return 2;
    default:
      return 1;
  }
}

struct Output {
  std::string path;
  std::string format = "json";
};

void add_output(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.path, "write the report to this file instead of stdout");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

void write_body(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(path);
  if (!f) raise(ErrorCode::Usage, "cannot write '" + path + "'");
  f << body;
}

void emit(const Output& o, const Json& j, const std::string& text_line,
          const std::string& csv = "") {
  std::string body;
  if (o.format == "json")
    body = j.dump(2) + "\n";
  else if (o.format == "text")
    body = text_line + "\n";
  else {
    if (csv.empty())
      raise(ErrorCode::Usage, "csv output is only available for distribution tables");
    body = csv;
  }
  write_body(o.path, body);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

double model_distance(const EmpiricalModel& a, const EmpiricalModel& b) {
  double d = 0;
  for (std::size_t c = 0; c < a.tables.size(); ++c) {
    std::set<std::vector<long long>> keys;
    for (const auto& [k, v] : a.tables[c]) keys.insert(k);
    for (const auto& [k, v] : b.tables[c]) keys.insert(k);
    for (const auto& k : keys) {
      auto ita = a.tables[c].find(k);
      auto itb = b.tables[c].find(k);
      double fa = ita == a.tables[c].end() ? 0.0 : rat_to_double(ita->second);
      double fb = itb == b.tables[c].end() ? 0.0 : rat_to_double(itb->second);
      d = std::max(d, std::abs(fa - fb));
    }
  }
  return d;
}

struct VerifyArgs {
  std::string theory, group;
  std::string laws = "all";
  Output out;
};

int run_verify(const VerifyArgs& a) {
  const Theory* t = Theory::parse(a.theory);
  FinAbGroup G = FinAbGroup::parse(a.group);
  bool want_frob = a.laws == "all" || a.laws == "frobenius";
  bool want_hopf = a.laws == "all" || a.laws == "hopf";
  bool want_sc = a.laws == "all" || a.laws == "strongcomp";

  Json j;
  j["theory"] = t->spec_string();
  j["group"] = G.spec_string();
  Json checks = Json::array();
  bool all = true;
  std::string first_fail;
  auto push = [&](const std::string& name, bool pass, double residual) {
    Json c;
    c["name"] = name;
    c["pass"] = pass;
    c["residual"] = double_string(residual);
    checks.push_back(c);
    if (!pass && first_fail.empty()) first_fail = name;
    all = all && pass;
  };
  auto push_report = [&](const std::string& prefix, const LawReport& r) {
    for (const auto& c : r.checks) push(prefix + c.name, c.pass, c.residual);
  };
  try {
    CoherentGroupData cg = coherent_group(t, G);
    if (want_frob) {
      push_report("point_", verify_laws(cg.point));
      push_report("group_", verify_laws(cg.group));
    }
    if (want_hopf) push("hopf", verify_hopf(cg), 0);
    if (want_sc) push_report("", verify_strong_complementarity(cg));
    if (a.laws == "all") {
      try {
        auto states = classical_states_of_group_structure(cg);
        push("character_states", true, 0);
      } catch (const Error& e) {
        Json c;
        c["name"] = "character_states";
        c["pass"] = false;
        c["message"] = e.what();
        checks.push_back(c);
        if (first_fail.empty()) first_fail = "character_states";
        all = false;
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Usage) throw;
    Json c;
    c["name"] = "realizable";
    c["pass"] = false;
    c["message"] = e.what();
    checks.push_back(c);
    if (first_fail.empty()) first_fail = "realizable";
    all = false;
  }
  j["checks"] = checks;
  j["all_pass"] = all;
  std::string line = "all_pass=" + bool_str(all);
  if (!all) line += " failed=" + first_fail;
  emit(a.out, j, line);
  return all ? 0 : 1;
}

struct HspArgs {
  std::string theory, group, subgroup;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  Output out;
};

int run_hsp(const HspArgs& a) {
  const Theory* t = Theory::parse(a.theory);
  FinAbGroup G = FinAbGroup::parse(a.group);
  Subgroup H = parse_subgroup(G, a.subgroup);
  HidingFunction hf = make_hiding_function(G, H);
  auto outcomes = run_subroutine(hf, t);
  double residual = theorem_residual(hf, t, outcomes);

  std::vector<DualElement> chis;
  std::size_t k = a.samples;
  if (t->exact()) {
    Scalar zero = Scalar::zero(t);
    for (const auto& o : outcomes)
      if (o.weight.distance(zero) > 0) chis.push_back(o.chi);
    k = chis.size();
  } else {
    if (k == 0)
      k = 3 * static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(G.order()))));
    chis = sample_characters(outcomes, k, a.seed);
  }
  Subgroup rec = reconstruct_subgroup(chis, G);
  bool match = rec == H;
  bool pass = match && residual <= tolerance();

  Json j;
  j["theory"] = t->spec_string();
  j["group"] = G.spec_string();
  Json gens = Json::array();
  for (const auto& g : H.generators()) gens.push_back(g.coords());
  j["subgroup"] = gens;
  j["samples"] = k;
  Json dist = Json::array();
  std::string csv = "b,chi,weight\n";
  for (const auto& o : outcomes) {
    Json row;
    row["b"] = o.b;
    row["chi"] = o.chi.index();
    row["weight"] = o.weight.str();
    dist.push_back(row);
    csv += o.b + "," + std::to_string(o.chi.index()) + "," + o.weight.str() + "\n";
  }
  j["distribution"] = dist;
  Json elems = Json::array();
  for (const auto& g : rec.elements()) elems.push_back(g.coords());
  j["reconstructed_subgroup"] = elems;
  j["match"] = match;
  j["theorem_residual"] = double_string(residual);
  emit(a.out, j, "residual=" + double_string(residual) + " match=" + bool_str(match), csv);
  return pass ? 0 : 1;
}

struct CtxArgs {
  std::string model_path, avn_path;
  bool lhv = false, strong = false, with_signed = false;
  Output out;
};

int run_ctx(const CtxArgs& a) {
  EmpiricalModel em = model_from_json(json_from_file(a.model_path));
  validate_model(em);
  bool all = !a.lhv && !a.strong && !a.with_signed && a.avn_path.empty();

  Json j;
  j["outcome_group"] = em.scenario.outcome_group.spec_string();
  j["contexts"] = em.scenario.contexts.size();
  j["exact"] = em.exact;
  NoSignallingReport ns = check_no_signalling(em);
  Json njs;
  njs["pass"] = ns.pass;
  njs["unnormalized"] = ns.unnormalized;
  njs["violations"] = ns.violations.size();
  njs["max_violation"] = double_string(ns.max_violation);
  j["no_signalling"] = njs;
  std::string line = "no_signalling=" + bool_str(ns.pass);

  if (ns.pass) {
    if (all || a.lhv) {
      auto w = probabilistic_lhv(em);
      Json l;
      l["local"] = w.has_value();
      l["assignments"] = w ? w->size() : 0;
      j["lhv"] = l;
      line += " local=" + bool_str(w.has_value());
    }
    if (all || a.strong) {
      auto s = strong_contextuality(em);
      Json sj;
      sj["strongly_contextual"] = s.strongly_contextual;
      if (s.section) sj["section"] = s.section->value;
      j["strong"] = sj;
      line += " strongly_contextual=" + bool_str(s.strongly_contextual);
    }
    if (all || a.with_signed) {
      auto sg = signed_global_section(em);
      std::size_t negative = 0;
      for (const auto& [ga, w] : sg)
        if (w < 0) ++negative;
      Json gj;
      gj["terms"] = sg.size();
      gj["negative_terms"] = negative;
      j["signed"] = gj;
      line += " signed_terms=" + std::to_string(sg.size());
    }
    if (!a.avn_path.empty()) {
      auto [eqs, module] = avn_equations_from_json(json_from_file(a.avn_path));
      AvnResult r = module ? avn_check(em, eqs, *module) : avn_check(em, eqs);
      Json aj;
      aj["avn"] = r.avn;
      if (r.witness) aj["witness"] = r.witness->value;
      j["avn"] = aj;
      line += " avn=" + bool_str(r.avn);
    }
  }
  emit(a.out, j, line);
  return ns.pass ? 0 : 1;
}

struct MerminArgs {
  std::string spec_path, model_path;
  std::string checks = "all";
  Output out;
};

int run_mermin(const MerminArgs& a) {
  const Theory* t = nullptr;
  MerminArgument arg = argument_from_json(json_from_file(a.spec_path), &t);
  EmpiricalModel analytic = analytic_model(arg);
  if (!a.model_path.empty()) write_body(a.model_path, model_to_json(analytic).dump(2) + "\n");

  Json j;
  j["group"] = arg.K.spec_string();
  j["N"] = arg.N;
  j["variables"] = arg.system.variables;
  j["equations"] = arg.system.rows.size();
  j["contexts"] = analytic.scenario.contexts.size();
  Json beta = Json::array();
  for (const auto& p : arg.beta) {
    Json coords = Json::array();
    for (const auto& r : p) coords.push_back(rat_string(r));
    beta.push_back(coords);
  }
  j["beta"] = beta;

  bool ok = true;
  std::string line;
  bool did_decide = false, contextual = false;
  if (a.checks == "all" || a.checks == "decide") {
    ContextualityDecision d = decide_contextual(arg);
    did_decide = true;
    contextual = d.contextual;
    j["contextual"] = d.contextual;
    if (d.lhv) j["lhv_assignments"] = d.lhv->size();
    line += "contextual=" + bool_str(d.contextual);
  }
  if (a.checks == "all" || a.checks == "strong") {
    auto s = strong_contextuality(analytic);
    j["strongly_contextual"] = s.strongly_contextual;
    if (did_decide && s.strongly_contextual != contextual) ok = false;
    line += std::string(line.empty() ? "" : " ") +
            "strongly_contextual=" + bool_str(s.strongly_contextual);
  }
  if (a.checks == "all" || a.checks == "avn") {
    AvnResult r = avn_certificate(arg);
    j["avn"] = r.avn;
    if (did_decide && r.avn != contextual) ok = false;
    line += std::string(line.empty() ? "" : " ") + "avn=" + bool_str(r.avn);
  }
  if (a.checks == "all") {
    NoSignallingReport ns = check_no_signalling(analytic);
    j["no_signalling"] = ns.pass;
    if (!ns.pass) ok = false;
  }
  if (t && (a.checks == "all" || a.checks == "quantum")) {
    try {
      EmpiricalModel qm = quantum_model(arg, t);
      double dist = model_distance(analytic, qm);
      j["quantum_max_distance"] = double_string(dist);
      if (!(dist <= tolerance())) ok = false;
      line += std::string(line.empty() ? "" : " ") + "quantum_max_distance=" + double_string(dist);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotApplicable) throw;
      j["quantum_skipped"] = e.what();
    }
  }
  j["verdicts_agree"] = ok;
  emit(a.out, j, line + (line.empty() ? "" : " ") + "agree=" + bool_str(ok));
  return ok ? 0 : 1;
}

struct DynArgs {
  std::string spec_path;
  Output out;
};

int run_dyn(const std::string& verb, const DynArgs& a) {
  Json sj = json_from_file(a.spec_path);
  if (verb == "feynman") {
    CyclicCircuit circ = circuit_from_json(sj);
    Mat w1 = feynman_propagator(circ);
    Mat psi0 = Mat::basis_column(Theory::complex_theory(), circ.dim, 0);
    Mat state = history_states(circ, psi0);
    bool ok = verify_feynman(circ, state);
    Json j;
    j["T"] = circ.T;
    j["dim"] = circ.dim;
    j["propagator"] = mat_to_json(w1);
    j["history_check"] = ok;
    emit(a.out, j, "history_check=" + bool_str(ok));
    return ok ? 0 : 1;
  }
  PeriodicRep rep = rep_from_json(sj);
  if (verb == "ergodic") {
    auto projectors = ergodic_projectors(rep);
    Json j;
    j["T"] = rep.T;
    j["dim"] = rep.dim;
    Json ps = Json::array();
    for (const auto& p : projectors) ps.push_back(mat_to_json(p));
    j["projectors"] = ps;
    emit(a.out, j, "projectors=" + std::to_string(projectors.size()));
    return 0;
  }
  if (verb == "stone") {
    auto projectors = ergodic_projectors(rep);
    PeriodicRep back = stone_reconstruct(projectors);
    double residual = back.U1.max_distance(rep.U1);
    bool pass = residual <= tolerance();
    Json j;
    j["T"] = rep.T;
    j["dim"] = rep.dim;
    j["residual"] = double_string(residual);
    j["pass"] = pass;
    emit(a.out, j, "residual=" + double_string(residual) + " pass=" + bool_str(pass));
    return pass ? 0 : 1;
  }
  // clock
  auto ic = internal_clock(rep);
  Json j;
  j["T"] = rep.T;
  j["dim"] = rep.dim;
  j["exists"] = ic.has_value();
  std::string line = "exists=" + bool_str(ic.has_value());
  if (ic) {
    j["T_prime"] = ic->T_prime;
    j["quotient"] = ic->quotient;
    j["time_basis"] = mat_to_json(ic->time_basis);
    line += " T_prime=" + std::to_string(ic->T_prime);
  }
  emit(a.out, j, line);
  return 0;
}

struct HbbArgs {
  std::string spec_path, attack;
  std::size_t rounds = 2000, players = 2;
  double tau = 0.5, eps_max = 0.05;
  std::uint64_t seed = 0;
  Output out;
};

int run_hbb(const HbbArgs& a) {
  MerminArgument arg = argument_from_json(json_from_file(a.spec_path), nullptr);
  ProtocolConfig cfg{std::move(arg), a.players, a.tau, a.eps_max, a.rounds, a.seed};

  Transcript tr;
  Json extra;
  if (a.attack.empty()) {
    tr = run_honest(cfg);
  } else if (a.attack == "noncontextual") {
    auto [t, eve] = run_attack_noncontextual(cfg);
    tr = std::move(t);
    extra["attack"] = "noncontextual";
    extra["eve_decoded"] = eve.decoded;
    extra["eve_all_correct"] = eve.decoded == tr.plaintext;
  } else if (a.attack.rfind("eavesdrop:", 0) == 0) {
    double rate = 0;
    try {
      rate = std::stod(a.attack.substr(10));
    } catch (const std::exception&) {
      raise(ErrorCode::Usage, "bad eavesdrop rate in '" + a.attack + "'");
    }
    tr = eavesdrop_intercept(cfg, rate);
    extra["attack"] = "eavesdrop";
    extra["eavesdrop_rate"] = double_string(rate);
  } else {
    raise(ErrorCode::Usage, "unknown attack '" + a.attack +
                                "' (expected noncontextual or eavesdrop:<rate>)");
  }

  std::size_t secret = tr.plaintext.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < secret; ++i)
    if (tr.decoded[i] == tr.plaintext[i]) ++correct;
  std::string decoded = secret == 0 || correct == 0 ? "none"
                        : correct == secret         ? "ok"
                                                    : "partial";
  char eps_buf[32];
  std::snprintf(eps_buf, sizeof eps_buf, "%.6g", tr.epsilon);
  std::string summary = std::string("verdict=") + (tr.success ? "success" : "failure") +
                        " eps=" + eps_buf + " decoded=" + decoded;

  Json j = transcript_to_json(tr);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  j["decoded_status"] = decoded;
  if (a.out.format == "json") {
    if (!a.out.path.empty())
      write_body(a.out.path, j.dump(2) + "\n");
    else
      std::cout << j.dump(2) << "\n";
  }
  std::cout << summary << "\n";
  return tr.success ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiring quantum toolkit: verification and simulation"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "verify algebraic laws of a coherent group");
  verify->add_option("--theory", va.theory, "scalar theory spec")->required();
  verify->add_option("--group", va.group, "finite abelian group spec, e.g. Z2xZ4")->required();
  verify->add_option("--laws", va.laws, "which law family to check")
      ->check(CLI::IsMember({"all", "frobenius", "hopf", "strongcomp"}));
  add_output(verify, va.out);

  HspArgs ha;
  auto* hsp = app.add_subcommand("hsp", "hidden subgroup subroutine");
  hsp->require_subcommand(1);
  auto* hsp_run = hsp->add_subcommand("run", "simulate and reconstruct");
  hsp_run->add_option("--theory", ha.theory, "scalar theory spec")->required();
  hsp_run->add_option("--group", ha.group, "ambient group")->required();
  hsp_run->add_option("--subgroup", ha.subgroup, "generators, e.g. [(1,1,0),(0,0,1)]")
      ->required();
  hsp_run->add_option("--samples", ha.samples, "character samples (default 3*log2|G|)");
  hsp_run->add_option("--seed", ha.seed, "sampling seed");
  add_output(hsp_run, ha.out);

  CtxArgs ca;
  auto* ctx = app.add_subcommand("ctx", "contextuality analysis of empirical models");
  ctx->require_subcommand(1);
  auto* ctx_check = ctx->add_subcommand("check", "analyze a model file");
  ctx_check->add_option("model", ca.model_path, "empirical model JSON")->required();
  ctx_check->add_flag("--lhv", ca.lhv, "probabilistic LHV feasibility only");
  ctx_check->add_flag("--strong", ca.strong, "strong contextuality only");
  ctx_check->add_flag("--signed", ca.with_signed, "signed global section only");
  ctx_check->add_option("--avn", ca.avn_path, "equation file for an AvN check");
  add_output(ctx_check, ca.out);

  MerminArgs ma;
  auto* mermin = app.add_subcommand("mermin", "generalized multiparty arguments");
  mermin->require_subcommand(1);
  auto* mermin_run = mermin->add_subcommand("run", "build an argument and run its checks");
  mermin_run->add_option("spec", ma.spec_path, "argument spec JSON")->required();
  mermin_run->add_option("--out", ma.model_path, "write the analytic model to this file");
  mermin_run->add_option("--checks", ma.checks, "which analyses to run")
      ->check(CLI::IsMember({"all", "decide", "strong", "avn", "quantum"}));
  mermin_run->add_option("--format", ma.out.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  DynArgs da;
  std::string dyn_verb;
  auto* dyn = app.add_subcommand("dyn", "discrete-periodic dynamics");
  dyn->require_subcommand(1);
  for (const char* verb : {"ergodic", "stone", "feynman", "clock"}) {
    auto* sub = dyn->add_subcommand(verb);
    sub->add_option("--spec", da.spec_path, "representation or circuit JSON")->required();
    add_output(sub, da.out);
    sub->callback([&dyn_verb, verb] { dyn_verb = verb; });
  }

  HbbArgs ba;
  auto* hbb = app.add_subcommand("hbb", "quantum secret sharing protocol");
  hbb->require_subcommand(1);
  auto* hbb_run = hbb->add_subcommand("run", "simulate rounds");
  hbb_run->add_option("spec", ba.spec_path, "argument spec JSON")->required();
  hbb_run->add_option("--rounds", ba.rounds, "number of rounds");
  hbb_run->add_option("--tau", ba.tau, "test-round probability");
  hbb_run->add_option("--players", ba.players, "number of key-holding players");
  hbb_run->add_option("--eps-max", ba.eps_max, "acceptance threshold for the noise parameter");
  hbb_run->add_option("--seed", ba.seed, "round seed");
  hbb_run->add_option("--attack", ba.attack, "noncontextual or eavesdrop:<rate>");
  hbb_run->add_option("--out", ba.out.path, "write the transcript to this file");
  hbb_run->add_option("--format", ba.out.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return run_verify(va);
    if (*hsp_run) return run_hsp(ha);
    if (*ctx_check) return run_ctx(ca);
    if (*mermin_run) return run_mermin(ma);
    if (!dyn_verb.empty()) return run_dyn(dyn_verb, da);
    if (*hbb_run) return run_hbb(ba);
  } catch (const Error& e) {
    int code = exit_for(e.code());
    if (code == 2) {
      std::cerr << "error: " << e.what() << "\n";
    } else {
      Json j;
      Json detail;
      detail["code"] = error_code_name(e.code());
      detail["message"] = e.what();
      j["error"] = detail;
      std::cout << j.dump(2) << "\n";
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
