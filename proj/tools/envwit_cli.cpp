#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "envwit/envwit.hpp"

using nlohmann::json;
using namespace envwit;

namespace {

struct Common {
  std::string protocol = "basis";
  int dE = 1;
  int dS = 2;
  bool dE_given = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--protocol", c.protocol, "TOML protocol file or the built-in 'basis'");
  cmd->add_option("--dE", c.dE, "environment dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--dS", c.dS, "probe dimension of the built-in protocol")->check(CLI::PositiveNumber);
}

MeasurementProtocol make_protocol(const Common& c, int dE) {
  if (c.protocol == "basis") return basis_protocol(dE, c.dS);
  MeasurementProtocol p = load_protocol(c.protocol);
  return dE == p.d_E() ? p : p.with_environment(dE);
}

MeasurementProtocol make_protocol(const Common& c) {
  if (c.protocol != "basis" && !c.dE_given) return load_protocol(c.protocol);
  return make_protocol(c, c.dE);
}

OutcomeSequence parse_seq(const std::string& s, const MeasurementProtocol& p) {
  return OutcomeSequence::parse(s, p.alphabet_size());
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    save_text(path, j.dump(2) + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Environment-dimension witnesses from sequence statistics"};
  app.require_subcommand(1);

  // bound
  Common bc;
  std::vector<std::string> b_seqs;
  int b_N = 0, b_jobs = 1, b_iters = 200000;
  bool b_ppt = false, b_dense = false, b_no_short = false, b_verbose = false;
  double b_eps = 1e-7, b_time = 0.0;
  std::string b_out, b_cache;
  auto* bound = app.add_subcommand("bound", "upper bound on the sequence probability for a given d_E");
  add_common(bound, bc);
  bound->add_option("--seq", b_seqs, "outcome sequence(s)")->required();
  bound->add_option("--N", b_N, "hierarchy level (default: sequence length)");
  bound->add_flag("--ppt", b_ppt, "add PPT constraints (full-space representation)");
  bound->add_flag("--sparse,!--dense", [&](std::int64_t n) { b_dense = n < 0; }, "use the sparse reduction (default)");
  bound->add_flag("--no-short-circuit", b_no_short, "solve even when the bound is trivially 1");
  bound->add_option("--eps", b_eps, "solver tolerance");
  bound->add_option("--max-iters", b_iters, "solver iteration cap");
  bound->add_option("--time-limit", b_time, "solver time limit in seconds");
  bound->add_option("--jobs", b_jobs, "parallel sequences")->check(CLI::PositiveNumber);
  bound->add_option("--cache", b_cache, "JSON bound cache");
  bound->add_option("--out", b_out, "write JSON here instead of stdout");
  bound->add_flag("--verbose", b_verbose);

  // certify
  Common cc;
  std::string c_seq, c_cache, c_out;
  double c_obs = 0.0;
  int c_max = 2, c_N = 0;
  bool c_ppt = false;
  std::vector<std::string> c_given;
  auto* certify = app.add_subcommand("certify", "lower-bound d_E from an observed sequence probability");
  add_common(certify, cc);
  certify->add_option("--seq", c_seq)->required();
  certify->add_option("--observed", c_obs, "observed probability")->required()->check(CLI::Range(0.0, 1.0));
  certify->add_option("--max-dE", c_max, "largest d_E to bound")->check(CLI::PositiveNumber);
  certify->add_option("--N", c_N, "hierarchy level (default: sequence length)");
  certify->add_flag("--ppt", c_ppt);
  certify->add_option("--bound", c_given, "known safe bound as d=value (repeatable)");
  certify->add_option("--cache", c_cache);
  certify->add_option("--out", c_out);

  // analytic / dc
  std::string a_seq, d_seq;
  auto* analytic = app.add_subcommand("analytic", "closed-form maximum for d_E = 1");
  analytic->add_option("--seq", a_seq)->required();
  auto* dc = app.add_subcommand("dc", "deterministic complexity");
  dc->add_option("--seq", d_seq)->required();

  // search
  Common sc;
  std::string s_seq, s_warm, s_unitary, s_out;
  std::uint64_t s_seed = 0;
  int s_restarts = 64, s_iters = 4000, s_threads = 1;
  auto* search = app.add_subcommand("search", "gradient-ascent lower bound over unitaries");
  add_common(search, sc);
  search->add_option("--seq", s_seq)->required();
  search->add_option("--seed", s_seed)->required();
  search->add_option("--restarts", s_restarts)->check(CLI::PositiveNumber);
  search->add_option("--max-iters", s_iters)->check(CLI::PositiveNumber);
  search->add_option("--threads", s_threads)->check(CLI::PositiveNumber);
  search->add_option("--warm-start", s_warm, "TOML unitary used as the first restart");
  search->add_option("--save-unitary", s_unitary, "write the best unitary as TOML");
  search->add_option("--out", s_out);

  // export
  Common ec;
  std::string e_seq, e_out;
  int e_N = 0;
  bool e_ppt = false, e_sparse = false;
  auto* exp = app.add_subcommand("export", "write the relaxation as SDPA sparse data");
  add_common(exp, ec);
  exp->add_option("--seq", e_seq)->required();
  exp->add_option("--N", e_N);
  exp->add_flag("--ppt", e_ppt);
  exp->add_flag("--sparse", e_sparse, "export the reduced problem");
  exp->add_option("--out", e_out, ".dat-s path")->required();

  CLI11_PARSE(app, argc, argv);
  bc.dE_given = bound->count("--dE") > 0;
  sc.dE_given = search->count("--dE") > 0;
  ec.dE_given = exp->count("--dE") > 0;

  try {
    if (bound->parsed()) {
      const MeasurementProtocol proto = make_protocol(bc);
      std::optional<BoundCache> cache;
      if (!b_cache.empty()) cache.emplace(b_cache);
      std::vector<json> results(b_seqs.size());
      auto run = [&](std::size_t k) {
        BoundRequest req{proto, parse_seq(b_seqs[k], proto)};
        req.N = b_N > 0 ? b_N : req.seq.length();
        req.ppt = b_ppt;
        req.sparse = !b_dense;
        req.short_circuit = !b_no_short;
        req.solve.eps_abs = req.solve.eps_rel = b_eps;
        req.solve.max_iters = b_iters;
        req.solve.time_limit_s = b_time;
        req.solve.verbose = b_verbose;
        json j = to_json(compute_bound(req, cache ? &*cache : nullptr));
        j["sequence"] = req.seq.str();
        j["d_E"] = proto.d_E();
        j["d_S"] = proto.d_S();
        results[k] = std::move(j);
      };
      const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(b_jobs), b_seqs.size());
      if (jobs <= 1) {
        for (std::size_t k = 0; k < b_seqs.size(); ++k) run(k);
      } else {
        std::vector<std::thread> pool;
        std::vector<std::string> errors(jobs);
        for (std::size_t t = 0; t < jobs; ++t)
          pool.emplace_back([&, t] {
            try {
              for (std::size_t k = t; k < b_seqs.size(); k += jobs) run(k);
            } catch (const std::exception& e) {
              errors[t] = e.what();
            }
          });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
          if (!e.empty()) throw std::runtime_error(e);
      }
      emit(results.size() == 1 ? results.front() : json(results), b_out);
    } else if (certify->parsed()) {
      std::map<int, double> given;
      for (const std::string& g : c_given) {
        const auto eq = g.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--bound expects d=value, got '" + g + "'");
        given[std::stoi(g.substr(0, eq))] = std::stod(g.substr(eq + 1));
      }
      std::optional<BoundCache> cache;
      if (!c_cache.empty()) cache.emplace(c_cache);
      json bounds = json::array();
      int certified = 0;
      for (int d = 1; d <= c_max; ++d) {
        const MeasurementProtocol proto = make_protocol(cc, d);
        const OutcomeSequence seq = parse_seq(c_seq, proto);
        json b{{"d_E", d}};
        double safe = 1.0;
        if (given.count(d)) {
          safe = given[d];
          b["source"] = "given";
        } else if (d == 1 && cc.protocol == "basis") {
          const AnalyticBound a = omega_one(seq);
          safe = a.real;
          b["source"] = "analytic";
          b["exact"] = a.str();
        } else {
          BoundRequest req{proto, seq};
          req.N = c_N > 0 ? c_N : seq.length();
          req.ppt = c_ppt;
          const BoundReport rep = compute_bound(req, cache ? &*cache : nullptr);
          if (!rep.result.has_value()) {
            b["source"] = "solver";
            b["status"] = to_string(rep.result.status);
            bounds.push_back(b);
            continue;
          }
          safe = rep.result.safe_value;
          b["source"] = rep.result.solver == "analytic" ? "trivial" : "solver";
        }
        b["safe_value"] = safe;
        b["violated"] = c_obs > safe;
        if (c_obs > safe) certified = d;
        bounds.push_back(b);
      }
      json out{{"schema_version", kJsonSchemaVersion}, {"sequence", c_seq}, {"observed", c_obs}, {"bounds", bounds}};
      if (certified > 0) {
        out["result"] = "certified";
        out["min_d_E"] = certified + 1;
      } else {
        out["result"] = "inconclusive";
      }
      emit(out, c_out);
    } else if (analytic->parsed()) {
      const OutcomeSequence seq = OutcomeSequence::parse(a_seq);
      const AnalyticBound a = omega_one(seq);
      json q = json::array();
      for (const Rational& r : a.per_symbol_probs) q.push_back(r.str());
      emit({{"schema_version", kJsonSchemaVersion}, {"sequence", seq.str()}, {"omega_one", a.str()}, {"value", a.real},
            {"per_symbol_probs", q}},
           "");
    } else if (dc->parsed()) {
      const OutcomeSequence seq = OutcomeSequence::parse(d_seq);
      emit({{"schema_version", kJsonSchemaVersion}, {"sequence", seq.str()}, {"dc", deterministic_complexity(seq)}}, "");
    } else if (search->parsed()) {
      const MeasurementProtocol proto = make_protocol(sc);
      const OutcomeSequence seq = parse_seq(s_seq, proto);
      SearchConfig cfg;
      cfg.seed = s_seed;
      cfg.restarts = s_restarts;
      cfg.max_iters = s_iters;
      cfg.threads = s_threads;
      if (!s_warm.empty()) cfg.warm_start = load_unitary(s_warm);
      const SearchResult r = maximize_probability(proto, seq, cfg);
      if (!s_unitary.empty()) save_text(s_unitary, unitary_to_toml(r.unitary, seq.str(), r.value));
      json j{{"schema_version", kJsonSchemaVersion}, {"sequence", seq.str()}, {"d_E", proto.d_E()},
             {"value", r.value}, {"restarts", r.restarts_used}, {"converged", r.converged}, {"seed", s_seed}};
      if (!s_unitary.empty()) j["unitary_file"] = s_unitary;
      emit(j, s_out);
    } else if (exp->parsed()) {
      const MeasurementProtocol proto = make_protocol(ec);
      const OutcomeSequence seq = parse_seq(e_seq, proto);
      const int N = e_N > 0 ? e_N : seq.length();
      const RelaxationSpec spec{proto, seq, N, e_ppt, e_ppt ? Representation::full_space : Representation::symmetric};
      RealSdp p = realify(build_relaxation(spec));
      json j{{"schema_version", kJsonSchemaVersion}, {"sequence", seq.str()}, {"N", N}, {"ppt", e_ppt}};
      if (e_sparse) {
        if (p.blocks.size() != 1) throw InvalidArgument("--sparse export needs a single-block problem");
        auto red = reduce_problem(p);
        j["reduction"] = to_json(make_report(red));
        p = std::move(red.reduced);
      }
      export_sdpa(p, e_out);
      j["file"] = e_out;
      j["blocks"] = p.blocks.size();
      j["constraints"] = p.constraints.size();
      j["realify_mode"] = to_string(p.realify_mode);
      emit(j, "");
    }
  } catch (const envwit::Error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
