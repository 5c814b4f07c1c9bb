#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairlab/io.hpp"
#include "pairlab/rng.hpp"
#include "pairlab/similarity.hpp"
#include "pairlab/theorem.hpp"

namespace pairlab::cli {

using nlohmann::json;

/// Everything one invocation needs. Defaults match the documented flag
/// defaults; `inputs` holds positional file arguments.
struct RunConfig {
  std::string command;
  std::uint32_t field = 2;
  std::uint32_t n = 1;
  std::uint64_t trials = 10;
  std::uint64_t seed = 0;
  std::string mode = "random";
  std::uint64_t budget = 64;
  bool json_out = false;
  std::string out;
  std::vector<std::string> inputs;
};

inline unsigned worker_count(std::uint64_t trials) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("PAIRLAB_THREADS")) {
    unsigned cap = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (cap >= 1 && cap < hw) hw = cap;
  }
  if (trials < hw) hw = static_cast<unsigned>(trials);
  return hw == 0 ? 1 : hw;
}

/// Run `count` independent trials, possibly in parallel, and return results
/// in trial order. Each trial must depend only on its index (derive per-trial
/// seeds with trial_seed), so output is identical regardless of scheduling.
template <typename R>
std::vector<R> run_trials(std::uint64_t count, const std::function<R(std::uint64_t)>& fn) {
  std::vector<std::optional<R>> slots(count);
  unsigned workers = worker_count(count);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) slots[i] = fn(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::uint64_t i = next.fetch_add(1);
          if (i >= count) return;
          try {
            slots[i] = fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace detail {

inline MatPair read_pair(const std::string& a_path, const std::string& b_path) {
  return MatPair(read_matrix_file(a_path), read_matrix_file(b_path));
}

inline void emit_pair(const RunConfig& cfg, const Mat& a, const Mat& b,
                      std::ostream& out) {
  if (cfg.out.empty()) {
    write_matrix(out, a);
    write_matrix(out, b);
  } else {
    write_matrix_file(a, cfg.out + ".a.txt");
    write_matrix_file(b, cfg.out + ".b.txt");
    out << "wrote " << cfg.out << ".a.txt and " << cfg.out << ".b.txt\n";
  }
}

inline BasePair input_base(const RunConfig& cfg) {
  if (cfg.inputs.size() == 2)
    return BasePair(read_matrix_file(cfg.inputs[0]), read_matrix_file(cfg.inputs[1]));
  Fp f(cfg.field);
  Rng rng(trial_seed(cfg.seed, 0));
  return BasePair(rng.matrix(cfg.n, cfg.n, f), rng.matrix(cfg.n, cfg.n, f));
}

inline json verdict_json(const SimilarityVerdict& v) {
  json j;
  j["similar"] = v.similar();
  j["certified"] = v.certified();
  j["method"] = v.method;
  if (v.outcome == SimilarityVerdict::Outcome::not_similar_probabilistic)
    j["failure_bound"] = v.failure_bound;
  return j;
}

inline json quad_json(const QuadCoeffs& q) {
  return json{{"alpha", q.alpha},   {"beta", q.beta},   {"gamma", q.gamma},
              {"alpha1", q.alpha1}, {"alpha2", q.alpha2},
              {"beta1", q.beta1},   {"beta2", q.beta2}};
}

/// Deterministic instance mix for the theorem and e1 drivers: cycle through
/// identical bases, conjugated bases and independently drawn bases.
inline std::pair<BasePair, BasePair> make_e1_instance(std::uint32_t n, const Fp& f,
                                                      std::uint64_t trial,
                                                      std::uint64_t seed) {
  Rng rng(trial_seed(seed, trial));
  BasePair b1(rng.unipotent(n, f), rng.unipotent(n, f));
  switch (trial % 3) {
    case 0:
      return {b1, b1};
    case 1: {
      Mat x = rng.invertible(n, f);
      Mat xi = x.inverse();
      return {b1, BasePair(xi * b1.m * x, xi * b1.n * x)};
    }
    default:
      return {b1, BasePair(rng.unipotent(n, f), rng.unipotent(n, f))};
  }
}

/// All unipotent n x n matrices over GF(p), by scanning I + nilpotent
/// candidates. Exhaustive-mode driver input; meant for tiny n and p.
inline std::vector<Mat> all_unipotent(std::uint32_t n, const Fp& f) {
  const std::uint32_t p = f.modulus();
  const std::uint64_t cells = std::uint64_t{n} * n;
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < cells; ++i) {
    total *= p;
    if (total > 100'000'000ull)
      throw std::invalid_argument("exhaustive mode: search space too large");
  }
  std::vector<Mat> out;
  Mat in = Mat::identity(n, f);
  for (std::uint64_t code = 0; code < total; ++code) {
    Mat m(n, n, f);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        m.set_raw(i, j, static_cast<std::uint32_t>(c % p));
        c /= p;
      }
    if (is_nilpotent_with_index(m - in, n)) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace detail

inline int cmd_build_p0(const RunConfig& cfg, std::ostream& out) {
  P0Pair p0 = build_p0(detail::input_base(cfg));
  detail::emit_pair(cfg, p0.pair.a, p0.pair.b, out);
  return 0;
}

inline int cmd_build_e1(const RunConfig& cfg, std::ostream& out) {
  MatPair pq = build_e1_pair(detail::input_base(cfg));
  detail::emit_pair(cfg, pq.a, pq.b, out);
  return 0;
}

inline int cmd_check_n23(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 2)
    throw std::invalid_argument("check-n23 needs two matrix files: A B");
  MatPair p = detail::read_pair(cfg.inputs[0], cfg.inputs[1]);
  bool ok = check_n23(p);
  if (cfg.json_out)
    out << json{{"schema", 1}, {"command", "check-n23"}, {"n23", ok}}.dump() << '\n';
  else
    out << "n23: " << (ok ? "true" : "false") << '\n';
  return ok ? 0 : 1;
}

inline int cmd_poly_apply(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 4)
    throw std::invalid_argument("poly-apply needs: A B f.poly g.poly");
  MatPair p = detail::read_pair(cfg.inputs[0], cfg.inputs[1]);
  BivarPoly f = read_poly_file(cfg.inputs[2], p.field());
  BivarPoly g = read_poly_file(cfg.inputs[3], p.field());
  if (!check_admissible(f, g))
    throw std::invalid_argument("poly-apply: (f, g) is not admissible");
  Mat fa = eval_poly_pair(f, p);
  Mat gb = eval_poly_pair(g, p);
  detail::emit_pair(cfg, fa, gb, out);
  return 0;
}

inline int cmd_similar(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 4)
    throw std::invalid_argument("similar needs: A1 B1 A2 B2");
  MatPair p1 = detail::read_pair(cfg.inputs[0], cfg.inputs[1]);
  MatPair p2 = detail::read_pair(cfg.inputs[2], cfg.inputs[3]);
  SimilarityVerdict v = are_similar_pairs(p1, p2, cfg.budget, cfg.seed);
  if (cfg.json_out) {
    json j = detail::verdict_json(v);
    j["schema"] = 1;
    j["command"] = "similar";
    out << j.dump() << '\n';
  } else {
    out << (v.similar() ? "similar" : "not similar") << " (" << v.method;
    if (!v.certified()) out << ", failure bound " << v.failure_bound;
    out << ")\n";
  }
  return v.similar() ? 0 : 1;
}

inline int cmd_poly_similar(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 4)
    throw std::invalid_argument("poly-similar needs: A1 B1 A2 B2");
  MatPair p1 = detail::read_pair(cfg.inputs[0], cfg.inputs[1]);
  MatPair p2 = detail::read_pair(cfg.inputs[2], cfg.inputs[3]);
  PolySimilarityResult r = are_poly_similar(p1, p2, cfg.budget, cfg.seed);
  if (cfg.json_out) {
    json j{{"schema", 1},
           {"command", "poly-similar"},
           {"similar", r.similar},
           {"certified", r.certified},
           {"tuples_checked", r.tuples_checked}};
    if (r.q) j["q"] = detail::quad_json(*r.q);
    out << j.dump() << '\n';
  } else {
    out << (r.similar ? "polynomially similar" : "not polynomially similar")
        << (r.certified ? "" : " (probabilistic)");
    if (r.q) out << " with q=" << r.q->str();
    out << " after " << r.tuples_checked << " tuple(s)\n";
  }
  return r.similar ? 0 : 1;
}

inline int cmd_verify_lemma1(const RunConfig& cfg, std::ostream& out,
                             std::ostream& err) {
  Fp f(cfg.field);
  auto started = std::chrono::steady_clock::now();
  struct TrialOut {
    bool ok;
    QuadCoeffs q;
  };
  std::vector<TrialOut> results = run_trials<TrialOut>(
      cfg.trials, [&](std::uint64_t i) {
        Rng rng(trial_seed(cfg.seed, i));
        BasePair base(rng.matrix(cfg.n, cfg.n, f), rng.matrix(cfg.n, cfg.n, f));
        QuadCoeffs q(rng.nonzero_field_elem(f).value, rng.nonzero_field_elem(f).value,
                     rng.field_elem(f).value, rng.field_elem(f).value,
                     rng.field_elem(f).value, rng.field_elem(f).value,
                     rng.field_elem(f).value, f);
        return TrialOut{verify_lemma1(base, q).ok, q};
      });
  std::uint64_t passed = 0;
  for (std::uint64_t i = 0; i < results.size(); ++i) {
    if (results[i].ok) ++passed;
    if (cfg.json_out)
      out << json{{"schema", 1},
                  {"command", "verify-lemma1"},
                  {"trial", i},
                  {"ok", results[i].ok},
                  {"q", detail::quad_json(results[i].q)}}
                 .dump()
          << '\n';
    else
      out << "trial " << i << ": " << (results[i].ok ? "pass" : "FAIL") << " q="
          << results[i].q.str() << '\n';
  }
  if (!cfg.json_out)
    out << passed << "/" << cfg.trials << " trials passed\n";
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started).count();
  err << "verify-lemma1: " << passed << "/" << cfg.trials << " in " << ms << " ms\n";
  return passed == cfg.trials ? 0 : 1;
}

inline int cmd_verify_theorem(const RunConfig& cfg, std::ostream& out,
                              std::ostream& err) {
  Fp f(cfg.field);
  auto started = std::chrono::steady_clock::now();
  std::vector<std::pair<BasePair, BasePair>> instances;
  if (cfg.mode == "exhaustive") {
    std::vector<Mat> uni = detail::all_unipotent(cfg.n, f);
    for (const Mat& m1 : uni)
      for (const Mat& n1 : uni)
        for (const Mat& m2 : uni)
          for (const Mat& n2 : uni)
            instances.emplace_back(BasePair(m1, n1), BasePair(m2, n2));
  } else if (cfg.mode == "random") {
    for (std::uint64_t i = 0; i < cfg.trials; ++i)
      instances.push_back(detail::make_e1_instance(cfg.n, f, i, cfg.seed));
  } else {
    throw std::invalid_argument("verify-theorem: --mode must be exhaustive or random");
  }

  std::vector<ConverseReport> reports = run_trials<ConverseReport>(
      instances.size(), [&](std::uint64_t i) {
        TheoremInstance inst(instances[i].first, instances[i].second);
        return verify_converse(inst, cfg.budget, trial_seed(cfg.seed, i));
      });

  bool all_ok = true;
  for (std::uint64_t i = 0; i < reports.size(); ++i) {
    const ConverseReport& r = reports[i];
    bool ok = r.implication_ok &&
              (!r.poly.similar ||
               (r.scalar_law_ok && r.trace && r.trace->all_ok() && r.recovered_x));
    all_ok = all_ok && ok;
    if (cfg.json_out) {
      json j{{"schema", 1},
             {"command", "verify-theorem"},
             {"instance", i},
             {"p", cfg.field},
             {"n", cfg.n},
             {"poly_similar", r.poly.similar},
             {"poly_certified", r.poly.certified},
             {"tuples_checked", r.poly.tuples_checked},
             {"base_similar", r.base.similar()},
             {"base_method", r.base.method},
             {"ok", ok}};
      if (r.poly.q) {
        j["q"] = detail::quad_json(*r.poly.q);
        j["scalar_law"] = r.scalar_law_ok;
        j["blocks_ok"] = r.trace && r.trace->all_ok();
        j["base_conjugator_recovered"] = r.recovered_x.has_value();
      }
      out << j.dump() << '\n';
    } else {
      out << "instance " << i << ": poly-similar=" << (r.poly.similar ? "yes" : "no")
          << " base-similar=" << (r.base.similar() ? "yes" : "no")
          << (ok ? "" : "  <-- INCONSISTENT") << '\n';
    }
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started).count();
  err << "verify-theorem: " << reports.size() << " instance(s) in " << ms << " ms\n";
  return all_ok ? 0 : 1;
}

inline int cmd_verify_e1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Fp f(cfg.field);
  auto started = std::chrono::steady_clock::now();
  std::vector<E1WildnessReport> reports = run_trials<E1WildnessReport>(
      cfg.trials, [&](std::uint64_t i) {
        auto [b1, b2] = detail::make_e1_instance(cfg.n, f, i, cfg.seed);
        return verify_e1_wildness(b1, b2, cfg.budget, trial_seed(cfg.seed, i));
      });
  bool all_ok = true;
  for (std::uint64_t i = 0; i < reports.size(); ++i) {
    const E1WildnessReport& r = reports[i];
    all_ok = all_ok && r.iff_ok;
    if (cfg.json_out)
      out << json{{"schema", 1},
                  {"command", "verify-e1"},
                  {"trial", i},
                  {"constructed", detail::verdict_json(r.constructed)},
                  {"base", detail::verdict_json(r.base)},
                  {"ok", r.iff_ok}}
                 .dump()
          << '\n';
    else
      out << "trial " << i << ": constructed=" << (r.constructed.similar() ? "sim" : "not")
          << " base=" << (r.base.similar() ? "sim" : "not")
          << (r.iff_ok ? "" : "  <-- MISMATCH") << '\n';
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started).count();
  err << "verify-e1: " << cfg.trials << " trial(s) in " << ms << " ms\n";
  return all_ok ? 0 : 1;
}

inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
  if (cfg.command == "build-p0") return cmd_build_p0(cfg, out);
  if (cfg.command == "build-e1") return cmd_build_e1(cfg, out);
  if (cfg.command == "check-n23") return cmd_check_n23(cfg, out);
  if (cfg.command == "poly-apply") return cmd_poly_apply(cfg, out);
  if (cfg.command == "similar") return cmd_similar(cfg, out);
  if (cfg.command == "poly-similar") return cmd_poly_similar(cfg, out);
  if (cfg.command == "verify-lemma1") return cmd_verify_lemma1(cfg, out, err);
  if (cfg.command == "verify-theorem") return cmd_verify_theorem(cfg, out, err);
  if (cfg.command == "verify-e1") return cmd_verify_e1(cfg, out, err);
  throw std::invalid_argument("unknown command: " + cfg.command);
}

/// Parse argv-style arguments and run. Exit codes: 0 pass/true, 1 fail/false,
/// 2 usage or input error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"pairlab: exact similarity computations for matrix pairs over GF(p)"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool with_inputs) {
    sub->add_option("--field", cfg.field, "prime field modulus p");
    sub->add_option("--n", cfg.n, "base matrix size");
    sub->add_option("--trials", cfg.trials, "number of trials");
    sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    sub->add_option("--mode", cfg.mode, "instance mode: random | exhaustive");
    sub->add_option("--budget", cfg.budget, "sampling budget for invertibility search");
    sub->add_flag("--json", cfg.json_out, "emit JSON-lines records");
    sub->add_option("--out", cfg.out, "output path prefix");
    if (with_inputs)
      sub->add_option("inputs", cfg.inputs, "input files");
  };

  for (const char* name : {"build-p0", "build-e1", "check-n23", "poly-apply",
                           "similar", "poly-similar", "verify-lemma1",
                           "verify-theorem", "verify-e1"}) {
    CLI::App* sub = app.add_subcommand(name, "");
    add_common(sub, true);
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  std::vector<const char*> argv;
  argv.push_back("pairlab");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    return run_command(cfg, out, err);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pairlab::cli
