#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "io.hpp"
#include "random.hpp"
#include "svg.hpp"

namespace corridorlab {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string witness;
  std::string word;
  std::string emit = "jsonl";
  std::size_t cap = kDefaultLengthCap;
  std::size_t inverse_len = 8;
  std::size_t max_k = 64;
  std::size_t steps = 0;
  std::size_t max_area = 40;
  std::size_t max_states = 2'000'000;
  std::size_t n = 0;
  std::size_t budget = 50'000'000;
  std::size_t samples = 200;
  std::size_t max_word = 12;
  std::size_t sample_cap = 200'000;
  std::uint64_t seed = 1;
  bool table = false;
  bool use_conditioned = false;
};

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::size_t cap_from_env(std::size_t fallback) {
  const char* v = std::getenv("CORRIDORLAB_CAP_LEN");
  if (!v || !*v) return fallback;
  std::size_t used = 0;
  unsigned long long cap = 0;
  try {
    cap = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(v).size() || cap == 0) throw UsageError("CORRIDORLAB_CAP_LEN must be a positive integer");
  return static_cast<std::size_t>(cap);
}

inline PositiveAutomorphism load_input(const RunConfig& cfg) {
  return ensure_inverse(load_automorphism(cfg.input), cfg.inverse_len);
}

inline Conditioned conditioned_input(const RunConfig& cfg) {
  auto c = condition(load_input(cfg), cfg.max_k, cfg.cap);
  if (!c) throw NotConditionedError("no power up to " + std::to_string(cfg.max_k) + " is conditioned");
  return std::move(*c);
}

/// Writes to --output when given, else to `out`.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw InputError("cannot write " + cfg.output);
  f << text;
}

inline int run_analyze(const RunConfig& cfg, std::ostream& out) {
  auto phi = load_input(cfg);
  if (cfg.table)
    out << strata_table(phi);
  else
    out << strata_to_json(phi).dump(2) << "\n";
  return 0;
}

inline int run_condition(const RunConfig& cfg, std::ostream& out) {
  auto c = conditioned_input(cfg);
  if (!cfg.output.empty()) save_automorphism(c.phi0, cfg.output);
  out << certificate_to_json(c).dump(2) << "\n";
  return 0;
}

inline int run_constants(const RunConfig& cfg, std::ostream& out) {
  auto c = conditioned_input(cfg);
  const auto B = compute_B(compute_M(c.phi0), compute_M_inv(c.phi0));
  const auto c0 = compute_C0(c.phi0, B.exact());
  const auto ledger = compute_ledger(c.phi0, c0.C0);
  Json j;
  j["k"] = c.certificate.k;
  j["phi0"] = automorphism_to_json(c.phi0);
  j["j_star"] = c0.j_star;
  j["ledger"] = ledger_to_json(ledger);
  out << j.dump(2) << "\n";
  return 0;
}

inline int run_flow(const RunConfig& cfg, std::ostream& out) {
  auto phi = load_input(cfg);
  if (cfg.use_conditioned) phi = conditioned_input(cfg).phi0;
  const Word w = parse_word(cfg.word, phi.alphabet());
  const auto stack = flow_stack(phi, w, cfg.steps, cfg.cap);
  if (cfg.emit == "svg") {
    emit(cfg, out, render_svg(stack, phi.alphabet()));
  } else {
    std::string text;
    for (std::size_t t = 0; t < stack.steps(); ++t) text += corridor_record(stack, t, phi.alphabet()).dump() + "\n";
    emit(cfg, out, text);
  }
  return 0;
}

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto c = conditioned_input(cfg);
  const auto& phi = c.phi0;
  const auto ledger = compute_ledger(phi);
  const std::size_t B = static_cast<std::size_t>(ledger.B.exact());
  std::mt19937_64 rng(cfg.seed);
  std::map<std::string, CheckReport> total;
  auto merge = [&](const std::string& name, const CheckReport& r) {
    auto& t = total[name];
    t.examined += r.examined;
    t.vacuous += r.vacuous;
    t.max_observed = std::max(t.max_observed, r.max_observed);
    for (const auto& v : r.violations) t.fail(v);
  };
  std::size_t pincers = 0, pincer_max_life = 0, pincer_out_of_bound = 0, skipped = 0;
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, cfg.max_word)(rng);
    const std::size_t steps = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, cfg.steps))(rng);
    const Word w = random_reduced_word(rng, phi.rank(), len);
    try {
      const auto s = flow_stack(phi, w, steps, std::min(cfg.cap, cfg.sample_cap));
      merge("bounded_cancellation", check_bounded_cancellation(s, B));
      merge("old_new", check_old_new(s));
      merge("buffer", check_buffer(s));
      merge("colour_contiguity", check_colour_contiguity(s));
      merge("connected_pasts", check_connected_pasts(s));
      merge("stack_identity", check_stack_identity(phi, s));
      for (const auto& p : detect_pincers(s, ledger.T1)) {
        ++pincers;
        pincer_max_life = std::max(pincer_max_life, p.life);
        if (!p.within_bound) ++pincer_out_of_bound;
      }
    } catch (const CapacityError&) {
      ++skipped;
    }
  }
  Json j;
  j["k"] = c.certificate.k;
  j["B"] = ledger.B.to_string();
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["skipped"] = skipped;
  bool ok = pincer_out_of_bound == 0;
  Json checks = Json::object();
  for (const auto& [name, r] : total) {
    Json e;
    e["ok"] = r.ok;
    e["examined"] = r.examined;
    e["max_observed"] = r.max_observed;
    e["vacuous"] = r.vacuous;
    e["violations"] = r.violations;
    checks[name] = e;
    ok = ok && r.ok;
  }
  j["checks"] = checks;
  j["pincers"] = {{"count", pincers}, {"max_life", pincer_max_life}, {"out_of_bound", pincer_out_of_bound}};
  j["ok"] = ok;
  out << j.dump(2) << "\n";
  if (!ok) {
    err << Json{{"code", "violation"}, {"message", "a property check failed"}, {"context", {{"subcommand", "verify"}}}}
               .dump()
        << "\n";
    return 1;
  }
  return 0;
}

inline int run_area(const RunConfig& cfg, std::ostream& out) {
  auto phi = load_input(cfg);
  const Word w = parse_word(cfg.word, presentation_alphabet(phi));
  const auto cert = area(phi, w, cfg.max_area, cfg.max_states, cfg.cap);
  Json j = area_to_json(phi, cert);
  if (cert.status != AreaStatus::NotNullHomotopic) j["corridor_area"] = *corridor_area(phi, w, cfg.cap);
  if (cert.status == AreaStatus::Found) j["replayed"] = replay_witness(phi, w, cert.witness).has_value();
  out << j.dump(2) << "\n";
  return 0;
}

inline int run_dehn_sample(const RunConfig& cfg, std::ostream& out) {
  auto phi = load_input(cfg);
  const auto d = dehn_sample(phi, cfg.n, cfg.budget, cfg.cap);
  out << "n,maxArea,exhaustive\n";
  std::size_t running = 0;
  for (std::size_t len = 1; len <= cfg.n; ++len) {
    running = std::max(running, d.max_area_by_length[len]);
    out << len << "," << running << "," << (d.exhaustive ? "true" : "false") << "\n";
  }
  if (!cfg.witness.empty() && d.argmax) {
    std::ofstream f(cfg.witness, std::ios::binary);
    if (!f) throw InputError("cannot write " + cfg.witness);
    const auto cert = area(phi, *d.argmax, cfg.max_area, cfg.max_states, cfg.cap);
    Json head = area_to_json(phi, cert);
    head.erase("witness");
    head["n"] = cfg.n;
    f << head.dump() << "\n";
    const Alphabet pal = presentation_alphabet(phi);
    for (const auto& s : cert.witness) f << relator_step_to_json(s, pal).dump() << "\n";
  }
  return 0;
}

}  // namespace detail

/// Command-line entry point; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"corridorlab: positive free-group automorphisms, corridors and Dehn areas"};
  app.require_subcommand(1);
  std::optional<std::size_t> cap_flag;
  app.add_option("--cap", cap_flag, "word length cap (overrides CORRIDORLAB_CAP_LEN)")->check(CLI::PositiveNumber);
  app.add_option("--inverse-len", cfg.inverse_len, "longest inverse image searched for")->check(CLI::PositiveNumber);

  auto input = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "automorphism file (TOML or JSON)")->required();
  };
  auto* analyze = app.add_subcommand("analyze", "supports, strata, growth and fastness");
  input(analyze);
  analyze->add_flag("--table", cfg.table, "human-readable table instead of JSON");

  auto* cond = app.add_subcommand("condition", "least conditioned power and its certificate");
  input(cond);
  cond->add_option("-o,--output", cfg.output, "write the conditioned automorphism here");
  cond->add_option("--max-k", cfg.max_k)->check(CLI::PositiveNumber);

  auto* consts = app.add_subcommand("constants", "constant ledger of the conditioned power");
  input(consts);
  consts->add_option("--max-k", cfg.max_k)->check(CLI::PositiveNumber);

  auto* flow = app.add_subcommand("flow", "corridor stack over a word");
  input(flow);
  flow->add_option("-w,--word", cfg.word, "bottom word")->required();
  flow->add_option("-n,--steps", cfg.steps, "number of corridors")->required()->check(CLI::PositiveNumber);
  flow->add_option("--emit", cfg.emit)->check(CLI::IsMember({"jsonl", "svg"}));
  flow->add_option("-o,--output", cfg.output);
  flow->add_flag("--conditioned", cfg.use_conditioned, "use the conditioned power");
  flow->add_option("--max-k", cfg.max_k)->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "randomized corridor property checks");
  input(verify);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  verify->add_option("--max-word", cfg.max_word)->check(CLI::PositiveNumber);
  verify->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);
  verify->add_option("--sample-cap", cfg.sample_cap, "samples whose words outgrow this are skipped")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-k", cfg.max_k)->check(CLI::PositiveNumber);

  auto* ar = app.add_subcommand("area", "minimal area of one word in the mapping torus");
  input(ar);
  ar->add_option("-w,--word", cfg.word, "word over the letters and the stable letter")->required();
  ar->add_option("--max-area", cfg.max_area)->check(CLI::PositiveNumber);
  ar->add_option("--max-states", cfg.max_states)->check(CLI::PositiveNumber);

  auto* ds = app.add_subcommand("dehn-sample", "exhaustive maximal area up to a boundary length");
  input(ds);
  ds->add_option("-n,--length", cfg.n, "maximal boundary length")->required()->check(CLI::PositiveNumber);
  ds->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);
  ds->add_option("--witness", cfg.witness, "JSONL witness for a maximal word");
  ds->add_option("--max-area", cfg.max_area)->check(CLI::PositiveNumber);
  ds->add_option("--max-states", cfg.max_states)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  if (cfg.subcommand == "verify" && cfg.steps == 0) cfg.steps = 5;

  try {
    cfg.cap = cap_flag ? *cap_flag : detail::cap_from_env(kDefaultLengthCap);
  } catch (const detail::UsageError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.subcommand == "analyze") return detail::run_analyze(cfg, out);
    if (cfg.subcommand == "condition") return detail::run_condition(cfg, out);
    if (cfg.subcommand == "constants") return detail::run_constants(cfg, out);
    if (cfg.subcommand == "flow") return detail::run_flow(cfg, out);
    if (cfg.subcommand == "verify") return detail::run_verify(cfg, out, err);
    if (cfg.subcommand == "area") return detail::run_area(cfg, out);
    if (cfg.subcommand == "dehn-sample") return detail::run_dehn_sample(cfg, out);
  } catch (const Error& e) {
    Json context = {{"subcommand", cfg.subcommand}};
    if (!cfg.input.empty()) context["input"] = cfg.input;
    if (auto* c = dynamic_cast<const CapacityError*>(&e)) context["cap"] = c->cap();
    err << Json{{"code", e.code()}, {"message", e.what()}, {"context", context}}.dump() << "\n";
    return 1;
  }
  err << "unknown subcommand\n";
  return 2;
}

}  // namespace corridorlab
