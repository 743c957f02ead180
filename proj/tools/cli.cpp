#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "gtop/codec.hpp"
#include "gtop/counterexamples.hpp"
#include "gtop/error.hpp"
#include "gtop/fibonacci.hpp"
#include "gtop/hensel.hpp"

namespace gtop::cli {

namespace {

constexpr int kUsage = 1;

struct Output {
  std::string path;
  std::string format = "text";
  bool recheck = false;
};

void add_output_options(CLI::App* app, Output& o) {
  app->add_option("--out", o.path, "Write the JSON report here (plus <out>.meta.json)");
  app->add_option("--format", o.format, "Console output format")->check(CLI::IsMember({"json", "text"}));
  app->add_flag("--recheck", o.recheck, "Re-verify every embedded witness after the run");
}

void write_file(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) {
    throw PreconditionError("cannot write " + path);
  }
  f << j.dump(2) << "\n";
}

int recheck_doc(const json& doc, std::ostream& out) {
  RecheckSummary r = recheck_json(doc);
  for (const auto& m : r.messages) {
    out << "recheck: " << m << "\n";
  }
  out << "recheck: " << r.witnesses << " witnesses, " << r.failures << " failures\n";
  return r.failures == 0 ? 0 : exit_code(Status::refuted);
}

int emit(VerificationReport& report, const Output& o, double seconds, std::ostream& out) {
  report.set_wall_time(seconds);
  json doc = report.to_json();
  if (!o.path.empty()) {
    write_file(o.path, doc);
    write_file(o.path + ".meta.json", report.meta_json());
  }
  if (o.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& c : doc.at("claims")) {
      out << c.at("status").get<std::string>() << "  " << c.at("id").get<std::string>() << "\n";
    }
    if (!report.summary().empty()) {
      out << "summary: " << report.summary().dump() << "\n";
    }
    out << "status: " << to_string(report.status()) << " (" << report.claims().size() << " claims)\n";
  }
  int code = exit_code(report.status());
  if (o.recheck) {
    int rc = recheck_doc(doc, out);
    if (rc != 0) {
      code = rc;
    }
  }
  return code;
}

template <class F>
int timed(F&& build, const Output& o, std::ostream& out) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport report = build();
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return emit(report, o, s, out);
}

std::size_t positive(const json& b, const char* key, std::size_t fallback, const std::string& where) {
  if (!b.contains(key)) {
    return fallback;
  }
  const json& v = b.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
    throw ParseError(std::string("budget '") + key + "' must be a positive integer", where + "." + key);
  }
  return v.get<std::size_t>();
}

void register_sequences(const json& seqs, const std::string& where) {
  if (!seqs.is_array()) {
    throw ParseError("'sequences' must be an array", where);
  }
  auto& reg = SequenceRegistry::global();
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    std::string loc = where + "[" + std::to_string(i) + "]";
    const json& s = seqs[i];
    if (!s.is_object() || !s.contains("id") || !s.contains("terms") || !s.at("terms").is_array()) {
      throw ParseError("sequence needs 'id' and 'terms'", loc);
    }
    std::string id = s.at("id").get<std::string>();
    std::vector<Int> terms;
    for (std::size_t k = 0; k < s.at("terms").size(); ++k) {
      terms.push_back(int_from_json(s.at("terms")[k], loc + ".terms[" + std::to_string(k) + "]"));
    }
    std::optional<std::size_t> growth;
    if (s.contains("growth_from")) {
      growth = s.at("growth_from").get<std::size_t>();
    }
    if (reg.contains(id)) {
      // Re-registering the same prefix is harmless; anything else is a clash.
      SequencePtr old = reg.get(id);
      bool same = old->length() && *old->length() == terms.size();
      for (std::size_t k = 0; same && k < terms.size(); ++k) {
        same = old->term(k) == terms[k];
      }
      if (!same) {
        throw ParseError("sequence id '" + id + "' is already registered", loc + ".id");
      }
      continue;
    }
    reg.add(make_prefix(id, std::move(terms), growth));
  }
}

}  // namespace

HausdorffConfig parse_hausdorff_config(const json& doc, const std::string& where) {
  if (!doc.is_object()) {
    throw ParseError("config must be an object", where);
  }
  if (doc.contains("sequences")) {
    register_sequences(doc.at("sequences"), where + ".sequences");
  }
  std::optional<Group> grp;
  if (doc.contains("group")) {
    grp = group_from_json(doc.at("group"), where + ".group");
  }
  if (!doc.contains("family")) {
    throw ParseError("missing 'family'", where);
  }
  FilterFamily family = family_from_json(doc.at("family"), grp ? &*grp : nullptr, where + ".family");
  Group fg = family.group();
  if (grp && !(*grp == fg)) {
    throw ParseError("family lives in " + fg.name() + ", config group is " + grp->name(), where + ".group");
  }
  if (!doc.contains("probes") || !doc.at("probes").is_array() || doc.at("probes").empty()) {
    throw ParseError("'probes' must be a non-empty array", where);
  }
  std::vector<Element> probes;
  for (std::size_t i = 0; i < doc.at("probes").size(); ++i) {
    std::string loc = where + ".probes[" + std::to_string(i) + "]";
    Element e = element_from_json(fg, doc.at("probes")[i], loc);
    if (fg.is_identity(e)) {
      throw ParseError("probe is the identity", loc);
    }
    probes.push_back(std::move(e));
  }
  HausdorffBudgets b;
  if (doc.contains("budgets")) {
    const json& bj = doc.at("budgets");
    std::string loc = where + ".budgets";
    if (!bj.is_object()) {
      throw ParseError("'budgets' must be an object", loc);
    }
    b.depth = positive(bj, "depth", b.depth, loc);
    b.n_max = static_cast<unsigned>(positive(bj, "n_max", b.n_max, loc));
    b.max_len = positive(bj, "max_len", b.max_len, loc);
    b.search.max_states = positive(bj, "max_states", b.search.max_states, loc);
    b.search.candidates_per_set = positive(bj, "candidates_per_set", b.search.candidates_per_set, loc);
    b.search.max_nodes = positive(bj, "max_nodes", b.search.max_nodes, loc);
  }
  return {std::move(family), std::move(probes), b};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified computations for group topologies generated by convergent set families", "gtop"};
  app.require_subcommand(1);

  Output o;

  auto* verify = app.add_subcommand("verify", "Verify one of the worked examples");
  verify->require_subcommand(1);
  unsigned gmax = 50, nmax = 5;
  auto* v_sqrt7 = verify->add_subcommand("sqrt7", "Necessary condition for the 3-adic square-root family");
  v_sqrt7->add_option("--gmax", gmax, "Probe g = 1..gmax");
  v_sqrt7->add_option("--nmax", nmax, "Multiplicities n = 1..nmax");
  add_output_options(v_sqrt7, o);

  std::size_t N = 6, m0 = 2, samples = 50;
  unsigned pn_max = 2;
  std::uint64_t seed = 1;
  auto* v_product = verify->add_subcommand("product", "Truncated product of cyclic groups");
  v_product->add_option("--N", N, "Number of factors Z/1 .. Z/N");
  v_product->add_option("--m0", m0, "Level of the first set");
  v_product->add_option("--samples", samples, "Random targets");
  v_product->add_option("--seed", seed, "Seed for the random targets");
  v_product->add_option("--nmax", pn_max, "Check the intersection for n = 1..nmax");
  add_output_options(v_product, o);

  unsigned steps = 10;
  auto* v_interval = verify->add_subcommand("interval", "Radii 2^-k in the rationals");
  v_interval->add_option("--steps", steps, "Smallest radius is 2^-steps");
  add_output_options(v_interval, o);

  unsigned fib_n = 20;
  auto* v_fib = verify->add_subcommand("fibonacci", "Fibonacci words in the free group on x, y");
  v_fib->add_option("--n", fib_n, "Largest index");
  add_output_options(v_fib, o);

  std::string config_path;
  auto* hausdorff = app.add_subcommand("hausdorff", "Run both Hausdorff criteria on a configured family");
  hausdorff->add_option("config", config_path, "Config JSON")->required();
  add_output_options(hausdorff, o);

  std::string p_text = "3", a_text = "7";
  unsigned k = 3;
  auto* hensel = app.add_subcommand("hensel", "Table of lifted square roots");
  hensel->add_option("--p", p_text, "Odd prime");
  hensel->add_option("--a", a_text, "Square modulo p");
  hensel->add_option("--k", k, "Number of levels");
  add_output_options(hensel, o);

  std::string recheck_path;
  auto* recheck = app.add_subcommand("recheck", "Re-verify every witness in a report");
  recheck->add_option("report", recheck_path, "Report JSON")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*v_sqrt7) {
      if (gmax == 0 || nmax == 0) {
        err << "error: --gmax and --nmax must be positive\n" << v_sqrt7->help();
        return kUsage;
      }
      return timed(
          [&] {
            VerificationReport r("sqrt7.necessary");
            r.budgets() = {{"gmax", gmax}, {"nmax", nmax}};
            for (unsigned g = 1; g <= gmax; ++g) {
              for (unsigned n = 1; n <= nmax; ++n) {
                r.merge(verify_sqrt7_necessary(Int(static_cast<std::int64_t>(g)), n));
              }
            }
            return r;
          },
          o, out);
    }
    if (*v_product) {
      if (N == 0 || m0 == 0 || m0 > N || pn_max == 0) {
        err << "error: need 1 <= --m0 <= --N and --nmax >= 1\n" << v_product->help();
        return kUsage;
      }
      return timed(
          [&] {
            std::mt19937_64 rng(seed);
            std::vector<ResidueVector> gs;
            for (std::size_t i = 0; i < samples; ++i) {
              ResidueVector v{std::vector<std::int64_t>(N)};
              for (std::size_t c = 1; c <= N; ++c) {
                v.coords[c - 1] = static_cast<std::int64_t>(rng() % c);
              }
              gs.push_back(std::move(v));
            }
            VerificationReport r("product");
            r.budgets() = {{"N", N}, {"m0", m0}, {"samples", samples}, {"seed", seed}, {"nmax", pn_max}};
            r.merge(verify_product_sum_full(N, m0, std::vector<std::size_t>(m0, N), gs));
            for (unsigned n = 1; n <= pn_max; ++n) {
              r.merge(verify_product_union_small(N, n));
            }
            return r;
          },
          o, out);
    }
    if (*v_interval) {
      if (steps == 0) {
        err << "error: --steps must be positive\n";
        return kUsage;
      }
      return timed([&] { return verify_interval_example(steps); }, o, out);
    }
    if (*v_fib) {
      return timed([&] { return verify_fibonacci(fib_n); }, o, out);
    }
    if (*hausdorff) {
      HausdorffConfig cfg = parse_hausdorff_config(read_json_file(config_path), config_path);
      return timed([&] { return hausdorff_verdict(cfg.family, cfg.probes, cfg.budgets); }, o, out);
    }
    if (*hensel) {
      if (k == 0) {
        err << "error: --k must be at least 1\n" << hensel->help();
        return kUsage;
      }
      Int p = Int::parse(p_text);
      Int a = Int::parse(a_text);
      return timed(
          [&] {
            auto chain = hensel_chain(a, p, k);
            VerificationReport r("hensel");
            r.budgets() = {{"p", p.str()}, {"a", a.str()}, {"k", k}};
            for (std::size_t i = 0; i < chain.size(); ++i) {
              const auto& w = chain[i];
              bool root_ok = mod(w.root * w.root - a, w.modulus).is_zero();
              json cert = {{"root", congruence_witness(w.root, a, w.modulus)}};
              bool lift_ok = true;
              if (i > 0) {
                // The next root reduces to plus or minus the previous one.
                const auto& prev = chain[i - 1];
                Int d = mod(w.root - prev.root, prev.modulus);
                Int s = mod(w.root + prev.root, prev.modulus);
                lift_ok = d.is_zero() || s.is_zero();
                cert["lifts"] = int_to_json(prev.root);
              }
              r.add("hensel/k=" + std::to_string(w.k), root_ok && lift_ok ? Status::verified : Status::refuted,
                    std::move(cert));
              if (o.format == "text") {
                out << "k=" << w.k << "  modulus=" << w.modulus << "  root=" << w.root << "\n";
              }
            }
            return r;
          },
          o, out);
    }
    if (*recheck) {
      return recheck_doc(read_json_file(recheck_path), out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return exit_code(Status::unknown);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

}  // namespace gtop::cli
