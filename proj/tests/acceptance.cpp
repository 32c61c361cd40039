#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>

#include "oracles.hpp"

using namespace envwit;

namespace {

int failures = 0;

void report(int id, const std::string& verdict, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, verdict.c_str(), detail.c_str());
  std::fflush(stdout);
  if (verdict == "FAIL") ++failures;
}

void report(int id, bool ok, const std::string& detail) { report(id, std::string(ok ? "PASS" : "FAIL"), detail); }

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

BoundReport bound(const std::string& seq, int d_E, int N, bool ppt = false, bool sparse = true, double eps = 1e-7) {
  BoundRequest req{basis_protocol(d_E), OutcomeSequence::parse(seq), N, ppt};
  req.sparse = sparse;
  req.short_circuit = false;
  req.solve.eps_abs = req.solve.eps_rel = eps;
  return compute_bound(req);
}

// Guards a criterion body so that an exception becomes a FAIL line.
void run(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

int dc_oracle(const std::vector<int>& out) {
  const int L = static_cast<int>(out.size());
  std::vector<int> label(static_cast<std::size_t>(L), 0);
  int best = L;
  std::function<void(int, int)> rec = [&](int k, int classes) {
    if (classes >= best) return;
    if (k == L) {
      for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j) {
          if (label[i] != label[j]) continue;
          if (out[i] != out[j]) return;
          if (j + 1 < L && label[i + 1] != label[j + 1]) return;
        }
      best = classes;
      return;
    }
    for (int c = 0; c <= classes; ++c) {
      label[k] = c;
      rec(k + 1, std::max(classes, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const bool extended = argc > 1 && std::strcmp(argv[1], "--extended") == 0;
  double safe_n3 = 2.0;
  double gd_d2 = -1.0;

  run(1, [&] {
    const std::pair<const char*, Rational> goldens[] = {
        {"00", Rational(1)},         {"000", Rational(1)},        {"01", Rational(1, 4)},
        {"001", Rational(4, 27)},    {"010", Rational(4, 27)},    {"011", Rational(4, 27)},
        {"0001", Rational(27, 256)}, {"0111", Rational(27, 256)}, {"00101", Rational(108, 3125)}};
    bool ok = true;
    std::string detail;
    for (const auto& [s, want] : goldens) {
      const AnalyticBound b = omega_one(OutcomeSequence::parse(s));
      ok = ok && b.value == want;
      detail += std::string(s) + "=" + b.str() + " ";
    }
    ok = ok && omega_one(OutcomeSequence::parse("00101")).real == 0.03456;
    report(1, ok, detail);
  });

  run(2, [&] {
    struct Row {
      const char* seq;
      int N;
      bool ppt;
    };
    const Row rows[] = {{"00", 2, true},  {"00", 3, false},  {"01", 2, true},  {"01", 3, false},
                        {"000", 3, true}, {"000", 4, false}, {"001", 3, true}, {"001", 4, false},
                        {"010", 3, true}, {"010", 4, false}, {"011", 3, true}, {"011", 4, false}};
    bool ok = true;
    std::string detail;
    for (const Row& r : rows) {
      const double want = omega_one(OutcomeSequence::parse(r.seq)).real;
      const BoundReport b = bound(r.seq, 1, r.N, r.ppt);
      const bool hit = b.result.has_value() && std::abs(b.result.value - want) <= 1e-3;
      ok = ok && hit;
      detail += std::string(r.seq) + (r.ppt ? "+ppt" : "") + " N=" + std::to_string(r.N) + " " + fmt(b.result.value) + " ";
    }
    report(2, ok, detail);
  });

  run(3, [&] {
    const BoundReport b = bound("001", 2, 3);
    safe_n3 = b.result.safe_value;
    const bool ok = b.result.has_value() && std::abs(b.result.value - 0.683477) <= 5e-3 && b.reduction && b.reduction->exact;
    report(3, ok, "001 d_E=2 N=3 value " + fmt(b.result.value) + " safe " + fmt(b.result.safe_value) + " target 0.683477, " +
                      fmt(b.result.wall_time_s, 1) + " s");
  });

  if (!extended) {
    report(4, std::string("SKIP"), "extended run; pass --extended");
  } else {
    run(4, [&] {
      struct Row {
        const char* seq;
        double want;
      };
      const Row rows[] = {{"001", 0.521219}, {"0010", 0.512220}, {"0011", 0.487058}};
      bool ok = true;
      std::string detail;
      for (const Row& r : rows) {
        const BoundReport b = bound(r.seq, 2, 4, false, true, 1e-5);
        const bool hit = b.result.has_value() && std::abs(b.result.value - r.want) <= 5e-3;
        ok = ok && hit;
        detail += std::string(r.seq) + " " + fmt(b.result.value) + " (target " + fmt(r.want) + ", " +
                  fmt(b.result.wall_time_s, 0) + " s) ";
        if (std::string(r.seq) == "001" && b.result.has_value() && b.result.value > safe_n3 + 2e-6) ok = false;
      }
      report(4, ok, detail);
    });
  }

  run(5, [&] {
    bool ok = true;
    std::string detail;
    const std::pair<int, std::pair<std::int64_t, std::int64_t>> table[] = {{3, {3566, 2809}}, {4, {35688, 40441}}};
    for (const auto& [N, want] : table) {
      const RelaxationSpec spec{basis_protocol(2), OutcomeSequence::parse("001"), N, false, Representation::symmetric};
      const SymSpace space(16, N);
      const SymmetricTraceConstraints<double> src(4, N, false);
      const auto r = reduce_with_source(to_sparse_sym<double>(symmetric_objective(spec, space)), src);
      const auto within = [](std::int64_t got, std::int64_t ref) { return std::abs(static_cast<double>(got - ref)) <= 0.2 * ref; };
      ok = ok && within(r.kept_variables, want.first) && within(r.kept_raw_constraints, want.second) && r.exact;
      detail += "N=" + std::to_string(N) + " vars " + std::to_string(r.kept_variables) + "/" + std::to_string(want.first) +
                " cons " + std::to_string(r.kept_raw_constraints) + "/" + std::to_string(want.second) +
                (r.exact ? " exact; " : " inexact; ");
    }
    struct Case {
      const char* seq;
      int d_E, N;
    };
    double worst = 0.0;
    for (const Case& c : {Case{"01", 1, 2}, Case{"01", 1, 3}, Case{"001", 1, 3}, Case{"001", 1, 4}, Case{"010", 1, 4},
                          Case{"011", 1, 4}, Case{"0", 2, 1}, Case{"01", 2, 2}}) {
      const double s = bound(c.seq, c.d_E, c.N, false, true, 1e-8).result.value;
      const double d = bound(c.seq, c.d_E, c.N, false, false, 1e-8).result.value;
      worst = std::max(worst, std::abs(s - d));
    }
    ok = ok && worst <= 1e-5;
    report(5, ok, detail + "max |sparse - dense| " + fmt(worst, 9));
  });

  run(6, [&] {
    const double p = sequence_probability(basis_protocol(3), oracle::witness_unitary(), OutcomeSequence::parse("001"));
    const bool ok = std::abs(p - 1.0) <= 1e-10 && p > safe_n3;
    report(6, ok, "p(001 | d_E=3) = " + fmt(p, 12) + " > d_E=2 safe bound " + fmt(safe_n3));
  });

  run(7, [&] {
    std::string detail;
    bool ok = true;
    // hierarchy monotonicity
    const double eps = 1e-7;
    bool mono = true;
    for (const std::string s : {"01", "001"}) {
      double prev = 2.0;
      for (int N = static_cast<int>(s.size()); N <= 4; ++N) {
        const double v = bound(s, 1, N).result.value;
        mono = mono && v <= prev + 2 * eps;
        prev = v;
      }
    }
    detail += std::string("monotone ") + (mono ? "ok" : "violated");
    ok = ok && mono;
    // sandwich
    SearchConfig cfg;
    cfg.restarts = 8;
    bool sandwich = true;
    for (const std::string s : {"01", "001", "011"}) {
      const double gd = maximize_probability(basis_protocol(1), OutcomeSequence::parse(s), cfg).value;
      sandwich = sandwich && gd <= bound(s, 1, static_cast<int>(s.size())).result.safe_value;
    }
    cfg.restarts = 16;
    cfg.seed = 7;
    gd_d2 = maximize_probability(basis_protocol(2), OutcomeSequence::parse("001"), cfg).value;
    sandwich = sandwich && gd_d2 <= safe_n3;
    detail += std::string(", sandwich ") + (sandwich ? "ok" : "violated");
    ok = ok && sandwich;
    // de Finetti formula
    bool fin = definetti_error_bound(3, 4, 3) == 120.0 / 19.0;
    for (int N = 3; N < 30; ++N) fin = fin && definetti_error_bound(3, 4, N + 1) < definetti_error_bound(3, 4, N);
    detail += std::string(", de Finetti ") + (fin ? "ok" : "wrong");
    ok = ok && fin;
    // DC vs partition oracle
    int dc_bad = 0;
    for (int L = 1; L <= 8; ++L)
      for (const auto& s : oracle::all_strings(2, L))
        if (deterministic_complexity(OutcomeSequence(s, 2)) != dc_oracle(s)) ++dc_bad;
    detail += ", DC mismatches " + std::to_string(dc_bad);
    ok = ok && dc_bad == 0;
    // gradient vs finite differences
    const MeasurementProtocol p2 = basis_protocol(2);
    const OutcomeSequence seq = OutcomeSequence::parse("001");
    const RVector x = random_parameters(4, 5, 0);
    const RVector g = probability_gradient(p2, seq, x);
    RVector fd(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      RVector a = x, b = x;
      a(k) += 1e-6;
      b(k) -= 1e-6;
      fd(k) = (sequence_probability(p2, expi_hermitian(hermitian_from_params(a, 4)), seq) -
               sequence_probability(p2, expi_hermitian(hermitian_from_params(b, 4)), seq)) / 2e-6;
    }
    const double rel = (g - fd).norm() / fd.norm();
    detail += ", gradient rel err " + fmt(rel, 10);
    ok = ok && rel <= 1e-5;
    // symmetric basis vs dense oracle
    double basis_err = 0.0;
    for (int n = 1; n <= 3; ++n) {
      const SymSpace space(4, n);
      const CMatrix v = oracle::symmetric_isometry(space);
      basis_err = std::max(basis_err, max_abs(v * v.adjoint() - CMatrix::Identity(space.size(), space.size())));
      basis_err = std::max(basis_err, max_abs(v.adjoint() * v - oracle::symmetrizer(4, n)));
    }
    detail += ", basis err " + fmt(basis_err, 15);
    ok = ok && basis_err <= 1e-12;
    report(7, ok, detail);
  });

  run(8, [&] {
    SearchConfig cfg;
    cfg.restarts = 64;
    cfg.seed = 7;
    const auto t0 = std::chrono::steady_clock::now();
    const double v2 = maximize_probability(basis_protocol(2), OutcomeSequence::parse("001"), cfg).value;
    const double v3 = maximize_probability(basis_protocol(3), OutcomeSequence::parse("001"), cfg).value;
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(8, v2 >= 0.43 && v3 >= 1.0 - 1e-6,
           "d_E=2 " + fmt(v2) + " (target 0.437341), d_E=3 " + fmt(v3, 9) + ", " + fmt(dt, 1) + " s");
  });

  return failures == 0 ? 0 : 1;
}
