// Command-line front end. Everything goes through the C interface; this file
// only parses arguments, picks an output format and maps outcomes to exit
// codes.

#include "tailcmp/tailcmp.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kUsageError = 3;

// Raised for bad input detected by the CLI itself or reported by the library.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tailcmp_status st) {
  if (st != TAILCMP_OK)
    throw UsageError(tailcmp_last_error());
}

struct DistFree {
  void operator()(tailcmp_dist *d) const { tailcmp_dist_free(d); }
};
struct ReportFree {
  void operator()(tailcmp_report *r) const { tailcmp_report_free(r); }
};
struct OptionsFree {
  void operator()(tailcmp_options *o) const { tailcmp_options_free(o); }
};
using DistPtr = std::unique_ptr<tailcmp_dist, DistFree>;
using ReportPtr = std::unique_ptr<tailcmp_report, ReportFree>;
using OptionsPtr = std::unique_ptr<tailcmp_options, OptionsFree>;

struct Common {
  bool json = false;
  bool csv = false;
  std::string precision;
  std::optional<std::uint64_t> cutoff_cap;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
};

void add_common(CLI::App *cmd, Common &c) {
  auto *j = cmd->add_flag("--json", c.json, "Print the full JSON report");
  cmd->add_flag("--csv", c.csv, "Print one CSV row per step or grid point")->excludes(j);
  cmd->add_option("--precision", c.precision,
                  "Width of the e^lambda enclosure as a rational (default 1e-30)");
  cmd->add_option("--cutoff-cap", c.cutoff_cap, "Largest Poisson truncation point (default 65536)");
  cmd->add_option("--seed", c.seed, "Seed for randomized targets");
  cmd->add_option("--jobs", c.jobs, "Worker threads (default $TAILCMP_JOBS, else 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Write output to this file instead of stdout");
}

OptionsPtr make_options(const Common &c) {
  tailcmp_options *raw = nullptr;
  check(tailcmp_options_create(&raw));
  OptionsPtr opts(raw);
  if (!c.precision.empty())
    check(tailcmp_options_set_precision(raw, c.precision.c_str()));
  if (c.cutoff_cap)
    check(tailcmp_options_set_cutoff_cap(raw, *c.cutoff_cap));
  if (c.seed)
    check(tailcmp_options_set_seed(raw, *c.seed));
  check(tailcmp_options_set_jobs(raw, c.jobs));
  return opts;
}

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

Range parse_range(const std::string &text) {
  auto number = [&](const std::string &s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("invalid range '" + text + "'");
    return std::stoull(s);
  };
  const auto dots = text.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = number(text);
  } else {
    r.lo = number(text.substr(0, dots));
    r.hi = number(text.substr(dots + 2));
  }
  if (r.lo > r.hi)
    throw UsageError("empty range '" + text + "'");
  return r;
}

std::string read_source(const std::string &arg) {
  if (arg.empty() || arg[0] != '@')
    return arg;
  std::ifstream in(arg.substr(1));
  if (!in)
    throw UsageError("cannot read " + arg.substr(1));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Distribution given as inline JSON (or @file), a binomial "n,m" or a
// Poisson mean.
struct DistArgs {
  std::string json;
  std::string binomial;
  std::optional<std::uint64_t> poisson;
};

void add_dist_options(CLI::App *cmd, DistArgs &d, const std::string &prefix = "") {
  auto *j = cmd->add_option("--" + prefix + "dist", d.json,
                            R"(Finite distribution {"weights": ["num/den", ...]}, or @file)");
  auto *b = cmd->add_option("--" + prefix + "binomial", d.binomial, "Bin(n, m/n) given as n,m");
  auto *p = cmd->add_option("--" + prefix + "poisson", d.poisson, "Poi(lambda)");
  j->excludes(b)->excludes(p);
  b->excludes(p);
}

DistPtr make_dist(const DistArgs &d, const std::string &what) {
  tailcmp_dist *raw = nullptr;
  if (!d.json.empty()) {
    check(tailcmp_dist_from_json(read_source(d.json).c_str(), &raw));
  } else if (!d.binomial.empty()) {
    const auto comma = d.binomial.find(',');
    if (comma == std::string::npos)
      throw UsageError("--binomial expects n,m");
    const Range n = parse_range(d.binomial.substr(0, comma));
    const Range m = parse_range(d.binomial.substr(comma + 1));
    check(tailcmp_dist_binomial(n.lo, m.lo, &raw));
  } else if (d.poisson) {
    check(tailcmp_dist_poisson(*d.poisson, &raw));
  } else {
    throw UsageError(what + ": no distribution given");
  }
  return DistPtr(raw);
}

std::vector<std::uint64_t> parse_list(const std::string &text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_range(item).lo);
  if (out.empty())
    throw UsageError("empty list");
  return out;
}

const char *tag_name(tailcmp_outcome o) {
  switch (o) {
  case TAILCMP_HOLDS:
    return "Holds";
  case TAILCMP_FAILS:
    return "Fails";
  case TAILCMP_UNRESOLVED:
    break;
  }
  return "Unresolved";
}

// Short human-readable rendering of a report.
std::string summarize(const nlohmann::json &j, tailcmp_outcome outcome) {
  std::ostringstream out;
  if (j.contains("result")) {
    const auto &r = j["result"];
    out << j["spec"]["target"].get<std::string>() << ": " << tag_name(outcome) << " (total "
        << r["total"] << ", holds " << r["holds"] << ", fails " << r["fails"].size()
        << ", unresolved " << r["unresolved"].size() << ")\n";
    for (const auto &f : r["fails"])
      out << "  fails at " << f["params"].dump() << ": " << f.value("witness", nlohmann::json()).dump()
          << '\n';
    for (const auto &u : r["unresolved"])
      out << "  unresolved at " << u["params"].dump() << '\n';
  } else if (j.contains("steps")) {
    std::size_t holds = 0;
    for (const auto &s : j["steps"])
      holds += s["verdict"] == "Holds";
    out << j["theorem"].get<std::string>() << ": " << tag_name(outcome) << " (" << holds << "/"
        << j["steps"].size() << " steps hold)\n";
    for (const auto &s : j["steps"])
      if (s["verdict"] != "Holds")
        out << "  k=" << s["k"] << ": " << s["verdict"].get<std::string>() << '\n';
  } else if (j.contains("conclusion")) {
    out << "s = " << j["s"] << ", m = " << j["m"] << '\n';
    for (const auto &[name, v] : j["hypotheses"].items())
      out << "  " << name << ": " << v["tag"].get<std::string>() << '\n';
    out << "  P(S >= s) = " << j["lhs_tail"].get<std::string>() << '\n'
        << "  P(S + X >= s + m) = " << j["rhs_tail"].get<std::string>() << '\n'
        << "conclusion: " << j["conclusion"]["tag"].get<std::string>() << '\n';
  } else if (j.contains("alpha")) {
    out << "m = " << j["m"] << (j["exact"].get<bool>() ? " (exact)" : " (certified)") << '\n';
    std::size_t i = 1;
    for (const auto &a : j["alpha"])
      out << "  alpha_" << i++ << " = " << (a.is_string() ? a.get<std::string>() : a.dump()) << '\n';
  } else {
    out << j["predicate"].get<std::string>() << ": " << j["tag"].get<std::string>() << '\n';
    if (!j["witness"].is_null())
      out << "  witness: " << j["witness"].dump() << '\n';
  }
  return out.str();
}

int emit(const ReportPtr &report, const Common &c) {
  const tailcmp_outcome outcome = tailcmp_report_outcome(report.get());
  std::string text;
  if (c.json)
    text = std::string(tailcmp_report_json(report.get())) + '\n';
  else if (c.csv)
    text = tailcmp_report_csv(report.get());
  else
    text = summarize(nlohmann::json::parse(tailcmp_report_json(report.get())), outcome);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f || !(f << text))
      throw UsageError("cannot write " + c.out);
  }
  return static_cast<int>(outcome);
}

// `raw` is taken by reference: it must be read after the call that fills it.
ReportPtr take(tailcmp_status st, tailcmp_report *&raw) {
  check(st);
  return ReportPtr(raw);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact verification of tail comparisons for sums of integer random variables"};
  app.set_version_flag("--version", tailcmp_version());
  app.require_subcommand(1);
  app.footer("Exit status: 0 all Holds, 1 some Fails, 2 Unresolved without Fails, 3 usage error.\n"
             "CSV columns: conj1 n,m | conj2 m | cb n,k | teicher k | jogdeo n,m,k |\n"
             "  kane k,lambda_next (or trial,lambdas) | theorem1 trial,s,m | lemma1 trial,m;\n"
             "  each followed by verdict,witness.");

  Common common;
  if (const char *env = std::getenv("TAILCMP_JOBS"); env && *env) {
    try {
      const Range j = parse_range(env);
      if (j.lo != j.hi || j.lo == 0 || j.lo > 4096)
        throw UsageError("");
      common.jobs = static_cast<unsigned>(j.lo);
    } catch (const UsageError &) {
      std::cerr << "error: TAILCMP_JOBS must be a positive integer, got '" << env << "'\n";
      return kUsageError;
    }
  }
  std::function<ReportPtr(tailcmp_options *)> run;

  DistArgs dist;
  for (const char *name : {"check-skew", "check-load", "alpha"}) {
    const std::string n = name;
    auto *cmd = app.add_subcommand(
        n, n == "check-skew"  ? "Unimodality and right-skewness about the mode"
           : n == "check-load" ? "Conditions L1 and L2 on the alpha-sequence"
                               : "Print the alpha-sequence");
    add_dist_options(cmd, dist);
    add_common(cmd, common);
    cmd->callback([&, n] {
      run = [&, n](tailcmp_options *o) {
        DistPtr d = make_dist(dist, n);
        tailcmp_report *r = nullptr;
        if (n == "check-skew")
          return take(tailcmp_check_skew(d.get(), o, &r), r);
        if (n == "check-load")
          return take(tailcmp_check_load(d.get(), o, &r), r);
        return take(tailcmp_alpha(d.get(), o, &r), r);
      };
    });
  }

  DistArgs s_dist, x_dist;
  auto *compare = app.add_subcommand(
      "compare-tails", "Check P(S >= s) >= P(S + X >= s + m) with hypotheses and certificate");
  add_dist_options(compare, s_dist, "s-");
  add_dist_options(compare, x_dist, "x-");
  add_common(compare, common);
  compare->callback([&] {
    run = [&](tailcmp_options *o) {
      DistPtr s = make_dist(s_dist, "S");
      DistPtr x = make_dist(x_dist, "X");
      tailcmp_report *r = nullptr;
      return take(tailcmp_compare_tails(s.get(), x.get(), o, &r), r);
    };
  });

  auto *verify = app.add_subcommand("verify", "Tail-monotonicity inequalities");
  verify->require_subcommand(1);
  std::uint64_t n = 0, m = 0, kmax = 0;
  auto *cb = verify->add_subcommand("cb", "P(Bin(nk,1/n) >= k) is non-increasing in k");
  cb->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cb->add_option("--kmax", kmax)->required()->check(CLI::PositiveNumber);
  add_common(cb, common);
  cb->callback([&] {
    run = [&](tailcmp_options *o) {
      tailcmp_report *r = nullptr;
      return take(tailcmp_verify_cb(n, kmax, o, &r), r);
    };
  });
  auto *teicher = verify->add_subcommand("teicher", "P(Poi(k) >= k) is non-increasing in k");
  teicher->add_option("--kmax", kmax)->required()->check(CLI::PositiveNumber);
  add_common(teicher, common);
  teicher->callback([&] {
    run = [&](tailcmp_options *o) {
      tailcmp_report *r = nullptr;
      return take(tailcmp_verify_teicher(kmax, o, &r), r);
    };
  });
  std::string lambdas;
  std::uint64_t random_count = 0, max_len = 8, lambda_max = 20;
  auto *kane = verify->add_subcommand(
      "kane", "Tail monotonicity along partial sums of independent Poisson variables");
  auto *lam = kane->add_option("--lambdas", lambdas, "Comma-separated Poisson means");
  auto *rnd = kane->add_option("--random", random_count, "Check this many random sequences");
  lam->excludes(rnd);
  kane->add_option("--max-len", max_len, "Longest random sequence")->capture_default_str();
  kane->add_option("--lambda-max", lambda_max, "Largest random mean")->capture_default_str();
  add_common(kane, common);
  kane->callback([&] {
    run = [&](tailcmp_options *o) {
      tailcmp_report *r = nullptr;
      if (random_count > 0)
        return take(tailcmp_prop_kane(random_count, max_len, lambda_max, o, &r), r);
      if (lambdas.empty())
        throw UsageError("verify kane needs --lambdas or --random");
      const auto seq = parse_list(lambdas);
      return take(tailcmp_verify_kane(seq.data(), seq.size(), o, &r), r);
    };
  });
  auto *jogdeo = verify->add_subcommand("jogdeo", "P(Bin(nk,m/n) >= km) is non-increasing in k");
  jogdeo->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  jogdeo->add_option("--m", m)->required()->check(CLI::PositiveNumber);
  jogdeo->add_option("--kmax", kmax)->required()->check(CLI::PositiveNumber);
  add_common(jogdeo, common);
  jogdeo->callback([&] {
    run = [&](tailcmp_options *o) {
      tailcmp_report *r = nullptr;
      return take(tailcmp_verify_jogdeo(n, m, kmax, o, &r), r);
    };
  });

  auto *sweep = app.add_subcommand("sweep", "Search the conjectures' parameter grids");
  sweep->require_subcommand(1);
  std::string m_range;
  std::uint64_t n_max = 0;
  auto *conj1 = sweep->add_subcommand("conj1", "Condition L2 for Bin(n, m/n), 2m < n <= n-max");
  conj1->add_option("--m", m_range, "Range a..b")->required();
  conj1->add_option("--n-max", n_max)->required();
  add_common(conj1, common);
  conj1->callback([&] {
    run = [&](tailcmp_options *o) {
      const Range mr = parse_range(m_range);
      tailcmp_report *r = nullptr;
      return take(tailcmp_sweep_conj1(mr.lo, mr.hi, n_max, o, &r), r);
    };
  });
  auto *conj2 = sweep->add_subcommand("conj2", "Condition L2 for Poi(m)");
  conj2->add_option("--m", m_range, "Range a..b")->required();
  add_common(conj2, common);
  conj2->callback([&] {
    run = [&](tailcmp_options *o) {
      const Range mr = parse_range(m_range);
      tailcmp_report *r = nullptr;
      return take(tailcmp_sweep_conj2(mr.lo, mr.hi, o, &r), r);
    };
  });

  auto *prop = app.add_subcommand("prop", "Randomized property harnesses");
  prop->require_subcommand(1);
  std::uint64_t trials = 1000, support_cap = 0;
  for (const char *name : {"theorem1", "lemma1"}) {
    const std::string pn = name;
    auto *cmd = prop->add_subcommand(
        pn, pn == "theorem1" ? "Random hypothesis-satisfying pairs: conclusion and certificate"
                             : "The alpha-sum identity on random integer-mean distributions");
    cmd->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--support-cap", support_cap,
                    pn == "theorem1" ? "Largest support size (default 30)"
                                     : "Largest support size (default 40)");
    add_common(cmd, common);
    cmd->callback([&, pn] {
      run = [&, pn](tailcmp_options *o) {
        tailcmp_report *r = nullptr;
        if (pn == "theorem1")
          return take(tailcmp_prop_theorem1(trials, support_cap ? support_cap : 30, o, &r), r);
        return take(tailcmp_prop_lemma1(trials, support_cap ? support_cap : 40, o, &r), r);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    OptionsPtr opts = make_options(common);
    ReportPtr report = run(opts.get());
    return emit(report, common);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
