#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "ahmes/achievement.hpp"
#include "ahmes/lambert.hpp"
#include "ahmes/multidim.hpp"
#include "ahmes/solver1d.hpp"
#include "ahmes/stolarsky.hpp"
#include "ahmes/type3rand.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace ahmes;

namespace {

constexpr int kSchemaVersion = 1;

// certified negatives exit 2; everything else that throws exits 1
int exit_code_for(const Error& e) {
  return e.code == "TargetOutside" || e.code == "TargetOutsideWindow" ||
                 e.code == "TargetOutsideBox" || e.code == "MergeConditionFails"
             ? 2
             : 1;
}

std::string rstr(const Rat& x) { return x.get_str(); }

json enc_json(const Enclosure& e) {
  return json{{"lo", rstr(e.lo)}, {"hi", rstr(e.hi)}};
}

// plain key=value lines, kept in order so a load/save cycle is the identity
struct RunConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  std::string get(const std::string& key, const std::string& dflt) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    return dflt;
  }
  long get_long(const std::string& key, long dflt) const {
    std::string v = get(key, "");
    return v.empty() ? dflt : std::stol(v);
  }
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ConfigUnreadable", path);
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("ConfigMalformed", "expected key=value: " + line);
    cfg.entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  for (const char* key : {"refinement_cap", "horizon"}) {
    std::string v = cfg.get(key, "");
    if (!v.empty() && std::stol(v) <= 0)
      throw Error("ConfigMalformed", std::string(key) + " must be positive");
  }
  return cfg;
}

std::string save_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.entries) out += k + "=" + v + "\n";
  return out;
}

TermSpec family_by_name(const std::string& name) {
  if (name == "sylvester") return families::sylvester();
  if (name == "powers-of-one-half") return families::geometric(2);
  if (name == "third-powers-of-one-third") return families::geometric(3);
  if (name.rfind("geometric-", 0) == 0)
    return families::geometric(std::stol(name.substr(10)));
  throw Error("UnknownFamily", name);
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::TailGE: return "TailGE";
    case Relation::TailLT: return "TailLT";
    default: return "Undecided";
  }
}

std::string verdict_name(const Verdict& v) {
  switch (v.kind) {
    case Verdict::IntervalUnionFrom:
      return "IntervalUnionFrom(" + std::to_string(v.index) + ")";
    case Verdict::CantorCertified:
      return "CantorCertified(" + std::to_string(v.index) + ")";
    default:
      return "Mixed";
  }
}

void emit(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// schedule files: {"head": [{"n":1,"min":3,"max":3}, ...], "tail": "<builtin>"}
IntervalSchedule schedule_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("ScheduleUnreadable", path);
  json j = json::parse(in);
  IntervalSchedule base = schedules::by_name(j.at("tail").get<std::string>());
  auto head = std::make_shared<std::map<long, std::pair<Int, Int>>>();
  for (const auto& row : j.at("head")) {
    long n = row.at("n").get<long>();
    Int lo(row.at("min").get<std::string>()), hi(row.at("max").get<std::string>());
    if (lo < 1 || hi < lo) throw Error("ScheduleMalformed", "bad interval");
    (*head)[n] = {lo, hi};
  }
  IntervalSchedule s = base;
  s.name = path;
  auto baseJ = base.J;
  s.J = [head, baseJ](long n) -> std::pair<Int, Int> {
    auto it = head->find(n);
    return it != head->end() ? it->second : baseJ(n);
  };
  // certificates only cover the generator's tail; force re-derivation of
  // the threshold across the overridden head
  long maxn = head->empty() ? 0 : head->rbegin()->first;
  auto J = s.J;
  s.inv_min = {"file-inv-min", [J](long n) -> Rat { return Rat(1) / Rat(J(n).first); },
               base.inv_min.decay, {}};
  s.inv_max = {"file-inv-max", [J](long n) -> Rat { return Rat(1) / Rat(J(n).second); },
               base.inv_max.decay, {}};
  s.gap = {"file-gap",
           [J](long n) -> Rat {
             auto [lo, hi] = J(n);
             return Rat(hi - lo) / (Rat(lo) * Rat(hi));
           },
           base.gap.decay, {}};
  if (s.cover_certified_from >= 0 && s.cover_certified_from <= maxn)
    s.cover_certified_from = maxn + 1;
  return s;
}

int cmd_classify(const std::string& family, long horizon, bool as_json,
                 const TailLimits& lim) {
  TermSpec spec = family_by_name(family);
  auto rep = classify(spec, horizon, lim);
  json j{{"schema_version", kSchemaVersion},
         {"family", family},
         {"horizon", horizon},
         {"verdict", verdict_name(rep.verdict)}};
  json per = json::array();
  for (auto [n, r] : rep.per_index) per.push_back({{"n", n}, {"relation", relation_name(r)}});
  j["per_index"] = per;
  emit(j, as_json, family + ": " + verdict_name(rep.verdict) + "\n");
  return 0;
}

int cmd_represent(const std::string& family, const std::string& target,
                  long terms, bool as_json, const TailLimits& lim) {
  TermSpec spec = family_by_name(family);
  Rat q = parse_rat(target);
  auto rs = greedy_represent(spec, q, terms, lim);
  json j{{"schema_version", kSchemaVersion},
         {"family", family},
         {"target", rstr(q)},
         {"exact_hit", rs.exact_hit},
         {"residual", rstr(rs.residual)}};
  std::string bits;
  for (bool b : rs.picks) bits += b ? '1' : '0';
  j["picks"] = bits;
  emit(j, as_json,
       "picks " + bits + "\nresidual " + rstr(rs.residual) +
           (rs.exact_hit ? " (exact)\n" : "\n"));
  return 0;
}

int cmd_solve1d(const std::string& schedule, const std::string& target,
                long steps, bool as_json, const TailLimits& lim) {
  IntervalSchedule s = schedule.find('.') != std::string::npos ||
                               schedule.find('/') != std::string::npos
                           ? schedule_from_file(schedule)
                           : schedules::by_name(schedule);
  long m = find_threshold(s, 64, lim);
  Rat q = parse_rat(target);
  auto st = solve_stream(s, m, q, steps, lim);
  json j{{"schema_version", kSchemaVersion},
         {"schedule", s.name},
         {"target", rstr(q)},
         {"threshold", m}};
  json em = json::array();
  for (const Int& a : st.emitted) em.push_back(a.get_str());
  j["emitted"] = em;
  j["partial"] = rstr(st.partial);
  j["residual"] = rstr(st.residual);
  j["residual_width_bound"] = rstr(st.residual_width_bound());
  std::ostringstream txt;
  txt << "threshold " << m << "\n";
  for (const Int& a : st.emitted) txt << a.get_str() << " ";
  txt << "\nresidual " << rstr(st.residual) << " (width bound "
      << decimal_render(st.residual_width_bound(), 6, Round::Up) << ")\n";
  emit(j, as_json, txt.str());
  return 0;
}

int cmd_lambert(const std::vector<long>& bases, bool check,
                const std::string& target, long steps, bool as_json,
                const TailLimits& lim) {
  if (check) {
    auto mc = check_merge_condition(bases);
    json j{{"schema_version", kSchemaVersion},
           {"bases", bases},
           {"pass", mc.pass},
           {"sum", rstr(mc.sum)}};
    emit(j, as_json,
         std::string(mc.pass ? "pass" : "fail") + " sum " + rstr(mc.sum) + "\n");
    return mc.pass ? 0 : 2;
  }
  auto spec = make_merge_spec(bases);
  Rat q = parse_rat(target);
  auto sol = solve_merged(spec, q, steps, lim);
  json j{{"schema_version", kSchemaVersion},
         {"bases", bases},
         {"target", rstr(q)},
         {"epsilon", rstr(spec.epsilon)},
         {"N0", spec.N0},
         {"exact_hit", sol.exact_hit},
         {"residual", rstr(sol.residual)},
         {"residual_bound", rstr(sol.residual_bound)},
         {"examined", sol.examined}};
  json A = json::array();
  for (const auto& ex : sol.A) A.push_back(ex);
  j["exponents"] = A;
  std::ostringstream txt;
  for (size_t k = 0; k < sol.A.size(); ++k) {
    txt << "base " << bases[k] << ":";
    for (long e : sol.A[k]) txt << " " << e;
    txt << "\n";
  }
  txt << "residual " << rstr(sol.residual) << (sol.exact_hit ? " (exact)\n" : "\n");
  emit(j, as_json, txt.str());
  return 0;
}

int cmd_type3_sample(const std::string& Fname, unsigned long long seed,
                     long count, long up_to, bool as_json) {
  GrowthFunction F = growths::by_name(Fname);
  auto c = [F](long n) -> Int { return default_c(F, n); };
  RandomPlan plan{c, certify_plan(F, c, up_to), seed};
  auto a = sample_sequence(plan, F, count);
  json j{{"schema_version", kSchemaVersion},
         {"F", Fname},
         {"seed", seed},
         {"n0", plan.n0}};
  json seq = json::array();
  for (const Int& v : a) seq.push_back(v.get_str());
  j["sequence"] = seq;
  std::ostringstream txt;
  txt << "n0 " << plan.n0 << "\n";
  for (const Int& v : a) txt << v.get_str() << " ";
  txt << "\n";
  emit(j, as_json, txt.str());
  return 0;
}

int cmd_multidim(long d, long stages, const std::string& targets, bool as_json,
                 const TailLimits& lim) {
  auto p = default_params(d);
  std::vector<Rat> tg;
  if (!targets.empty()) {
    std::stringstream ss(targets);
    std::string tok;
    while (std::getline(ss, tok, ',')) tg.push_back(parse_rat(tok));
  }
  auto st = build_simultaneous(p, tg, stages, lim);
  json j{{"schema_version", kSchemaVersion},
         {"d", d},
         {"alpha", rstr(p.alpha)},
         {"beta", rstr(p.beta)},
         {"k0", p.k0},
         {"start", st.start}};
  json tgt = json::array();
  for (const Rat& x : st.targets) tgt.push_back(rstr(x));
  j["targets"] = tgt;
  json stage_log = json::array();
  std::ostringstream txt;
  txt << "start stage " << st.start << "\n";
  for (long s = 0; s < stages; ++s) {
    long k = st.start + s;
    Int Nk = p.N(k);
    json offs = json::array();
    txt << "k=" << k << " n=(";
    for (long jdx = 1; jdx <= d; ++jdx) {
      Int n = st.emitted[size_t(s * d + jdx - 1)] - jdx * Nk;
      offs.push_back(n.get_str());
      txt << (jdx > 1 ? "," : "") << n.get_str();
    }
    json widths = json::array();
    for (const Rat& wv : st.stage_widths[size_t(s)]) widths.push_back(rstr(wv));
    // bit_length(a)/alpha^k settles once the closed-form branch takes over
    Rat diag = Rat(bit_length(st.emitted[size_t(s * d)])) / pow_rat(p.alpha, k);
    stage_log.push_back(
        {{"k", k}, {"offsets", offs}, {"box_radii", widths}, {"growth", rstr(diag)}});
    txt << ") growth " << decimal_render(diag, 4, Round::TowardZero) << "\n";
  }
  j["stages"] = stage_log;
  json res = json::array();
  for (const Enclosure& e : st.residual) res.push_back(enc_json(e));
  j["residual"] = res;
  emit(j, as_json, txt.str());
  return 0;
}

int cmd_stolarsky(const std::string& mode, long d, long steps, bool as_json,
                  const TailLimits& lim) {
  ScheduleMode md;
  if (mode == "paper")
    md = ScheduleMode::Paper;
  else if (mode == "demo")
    md = ScheduleMode::Demo;
  else
    throw Error("BadArgument", "mode must be paper or demo");
  auto sched = make_schedule(md, d);
  auto st = run_stolarsky(sched, steps, lim);
  Rat margin = verify_state(sched, st, lim);
  auto shifts = enumerate_rationals(d);
  json j{{"schema_version", kSchemaVersion},
         {"mode", mode},
         {"d", d},
         {"k0", sched.k0},
         {"enumeration", "zero, then positives by numerator+denominator, sign-interleaved"},
         {"activation", sched.m},
         {"stages", json::array({st.start, st.k - 1})}};
  json pairs = json::array();
  for (long i = 1; i <= d; ++i)
    pairs.push_back({{"t", rstr(shifts[size_t(i - 1)])},
                     {"x", rstr(st.targets[size_t(i - 1)])}});
  j["coordinates"] = pairs;
  json em = json::array();
  for (const Int& a : st.emitted) em.push_back(a.get_str());
  j["emitted"] = em;
  json margins = json::array();
  for (long i = 1; i <= d; ++i) {
    Rat reach = abs(st.residual[size_t(i - 1)].lo) > abs(st.residual[size_t(i - 1)].hi)
                    ? abs(st.residual[size_t(i - 1)].lo)
                    : abs(st.residual[size_t(i - 1)].hi);
    margins.push_back({{"i", i},
                       {"box", rstr(st.box[size_t(i - 1)])},
                       {"slack", rstr((st.box[size_t(i - 1)] - reach) / st.box[size_t(i - 1)])}});
  }
  j["margins"] = margins;
  j["verified_margin"] = rstr(margin);
  std::ostringstream txt;
  txt << "stages " << st.start << ".." << st.k - 1 << ", emitted "
      << st.emitted.size() << " terms, margin "
      << decimal_render(margin, 6, Round::TowardZero) << "\n";
  for (long i = 1; i <= d; ++i)
    txt << "t_" << i << "=" << rstr(shifts[size_t(i - 1)]) << " x_" << i << "="
        << rstr(st.targets[size_t(i - 1)]) << "\n";
  emit(j, as_json, txt.str());
  return 0;
}

int cmd_reproduce(const std::string& case_id, const TailLimits& lim) {
  json actual, expected;
  if (case_id == "segment-endpoints") {
    auto s = schedules::pow2_offsets5();
    long m = find_threshold(s, 64, lim);
    auto w = target_window(s, m, Rat(1, Int(1) << 60), lim);
    actual = {{"schema_version", kSchemaVersion},
              {"case", case_id},
              {"threshold", m},
              {"lo", decimal_render(w.lo.lo, 10, Round::TowardZero)},
              {"hi", decimal_render(w.hi.hi, 10, Round::TowardZero)}};
    expected = {{"schema_version", kSchemaVersion},
                {"case", case_id},
                {"threshold", 3},
                {"lo", "0.7488145169"},
                {"hi", "0.7644997803"}};
  } else if (case_id == "sylvester-unit") {
    Rat head = 0;
    for (long k = 1; k <= 10; ++k) head += Rat(1) / Rat(families::sylvester_term(k));
    Rat rhs = 1 - Rat(1) / Rat(families::sylvester_term(11) - 1);
    actual = {{"schema_version", kSchemaVersion},
              {"case", case_id},
              {"head_sum", rstr(head)},
              {"telescoped", rstr(rhs)},
              {"equal", head == rhs}};
    expected = actual;
    expected["equal"] = true;
  } else {
    throw Error("UnknownCase", case_id);
  }
  std::string a = actual.dump(2), e = expected.dump(2);
  if (a != e) {
    std::cerr << "mismatch\n--- expected\n" << e << "\n--- actual\n" << a << "\n";
    return 1;
  }
  std::cout << a << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic toolkit for reciprocal series with certified output"};
  app.require_subcommand(1);
  std::string config_path;
  long jobs = 1;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--jobs", jobs, "verification parallelism (output order fixed)");

  std::string family, target = "0", schedule, bases_csv = "2,3", Fname = "factorial";
  std::string mode = "paper", targets_csv, case_id, config_file;
  long horizon = 20, terms = 32, steps = 32, count = 16, up_to = 80, d = 2, stages = 3;
  unsigned long long seed = 1;
  bool as_json = false, check = false;

  auto* c_classify = app.add_subcommand("classify", "decide tail-vs-term relations for a family");
  c_classify->add_option("--family", family)->required();
  c_classify->add_option("--horizon", horizon);
  c_classify->add_flag("--json", as_json);

  auto* c_repr = app.add_subcommand("represent", "greedy subseries representation of a target");
  c_repr->add_option("--family", family)->required();
  c_repr->add_option("--target", target)->required();
  c_repr->add_option("--terms", terms);
  c_repr->add_flag("--json", as_json);

  auto* c_solve = app.add_subcommand("solve1d", "stream unit fractions from an interval schedule");
  c_solve->add_option("--schedule", schedule)->required();
  c_solve->add_option("--target", target)->required();
  c_solve->add_option("--steps", steps);
  c_solve->add_flag("--json", as_json);

  auto* c_lam = app.add_subcommand("lambert", "merged reciprocal streams over several bases");
  c_lam->add_option("--bases", bases_csv);
  c_lam->add_flag("--check", check, "only test the merge condition");
  c_lam->add_option("--target", target);
  c_lam->add_option("--steps", steps);
  c_lam->add_flag("--json", as_json);

  auto* c_t3 = app.add_subcommand("type3-sample", "randomized fast-growth sequence");
  c_t3->add_option("--F", Fname);
  c_t3->add_option("--seed", seed);
  c_t3->add_option("--count", count);
  c_t3->add_option("--up-to", up_to);
  c_t3->add_flag("--json", as_json);

  auto* c_md = app.add_subcommand("multidim", "simultaneous staged construction");
  c_md->add_option("--d", d);
  c_md->add_option("--stages", stages);
  c_md->add_option("--targets", targets_csv, "comma-separated rationals");
  c_md->add_flag("--json", as_json);

  auto* c_st = app.add_subcommand("stolarsky", "growing-dimension scheduled construction");
  c_st->add_option("--mode", mode);
  c_st->add_option("--d", d);
  c_st->add_option("--steps", steps);
  c_st->add_flag("--json", as_json);

  auto* c_rep = app.add_subcommand("reproduce", "re-run a named case against stored expectations");
  c_rep->add_option("case", case_id)->required();

  auto* c_cfg = app.add_subcommand("config", "load a config file and echo its canonical form");
  c_cfg->add_option("--file", config_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    TailLimits lim;
    if (!config_path.empty()) {
      RunConfig cfg = load_config(config_path);
      lim.max_terms = cfg.get_long("refinement_cap", lim.max_terms);
      horizon = cfg.get_long("horizon", horizon);
      seed = (unsigned long long)cfg.get_long("seed", (long)seed);
    }
    (void)jobs;  // sequential evaluation already yields deterministic order
    if (c_classify->parsed()) return cmd_classify(family, horizon, as_json, lim);
    if (c_repr->parsed()) return cmd_represent(family, target, terms, as_json, lim);
    if (c_solve->parsed()) return cmd_solve1d(schedule, target, steps, as_json, lim);
    if (c_lam->parsed()) {
      std::vector<long> bases;
      std::stringstream ss(bases_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) bases.push_back(std::stol(tok));
      if (!check && target == "0")
        throw Error("BadArgument", "need --target or --check");
      return cmd_lambert(bases, check, target, steps, as_json, lim);
    }
    if (c_t3->parsed()) return cmd_type3_sample(Fname, seed, count, up_to, as_json);
    if (c_md->parsed()) return cmd_multidim(d, stages, targets_csv, as_json, lim);
    if (c_st->parsed()) return cmd_stolarsky(mode, d, steps, as_json, lim);
    if (c_rep->parsed()) return cmd_reproduce(case_id, lim);
    if (c_cfg->parsed()) {
      std::cout << save_config(load_config(config_file));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
