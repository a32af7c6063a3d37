#include "amqlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "amqlab/harness.hpp"
#include "amqlab/report.hpp"

namespace amqlab::cli {

namespace {

constexpr const char* kClassicNote = "historically incorrect approximation";

QuotientFilter make_quotient(const CliConfig& c) {
  unsigned q = 0;
  unsigned r = 0;
  if (c.q && c.r) {
    q = *c.q;
    r = *c.r;
    if (c.p && *c.p != q + r) throw InvalidParameter("--p must equal --q + --r");
  } else if (c.p && c.q) {
    if (*c.q > *c.p) throw InvalidParameter("--q exceeds --p");
    q = *c.q;
    r = *c.p - q;
  } else if (c.p && c.r) {
    if (*c.r > *c.p) throw InvalidParameter("--r exceeds --p");
    r = *c.r;
    q = *c.p - r;
  } else if (c.p) {
    q = *c.p / 2;
    r = *c.p - q;
  } else {
    throw InvalidParameter("quotient structures need --p, or --q and --r");
  }
  return QuotientFilter(q, r);
}

std::uint64_t require_m(const CliConfig& c) {
  if (!c.m) throw InvalidParameter("bloom and counting structures need --m");
  return *c.m;
}

struct Output {
  Json json;
  std::vector<std::vector<std::string>> csv;  // first row is the header

  std::string render(const std::string& format) const {
    if (format == "json") return json.dump(2) + "\n";
    std::string text;
    for (const auto& row : csv) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ',';
        text += row[i];
      }
      text += '\n';
    }
    return text;
  }
};

std::vector<std::uint64_t> l_values(const CliConfig& c) {
  const std::uint64_t last = c.l_max.value_or(c.l);
  if (last < c.l) throw InvalidParameter("--l-max must be at least --l");
  std::vector<std::uint64_t> out;
  for (std::uint64_t l = c.l; l <= last; ++l) out.push_back(l);
  return out;
}

// Classic bound applies to the Bloom family only.
struct Classic {
  std::optional<ExactRational> exact;
  double value = 0.0;
};

std::optional<Classic> classic_for(const BloomParams& params, std::uint64_t l) {
  if (bloom_exact_feasible(params, l)) {
    auto exact = bloom_classic_bound(params, l);
    const double v = to_float(exact);
    return Classic{std::move(exact), v};
  }
  const double miss = std::pow(1.0 - 1.0 / static_cast<double>(params.m), static_cast<double>(params.k * l));
  return Classic{std::nullopt, std::pow(1.0 - miss, static_cast<double>(params.k))};
}
std::optional<Classic> classic_for(const BloomFilter& a, std::uint64_t l) { return classic_for(BloomParams{a.m, a.k}, l); }
std::optional<Classic> classic_for(const CountingBloomFilter& a, std::uint64_t l) {
  return classic_for(BloomParams{a.m, a.k}, l);
}
template <class A>
std::optional<Classic> classic_for(const A&, std::uint64_t) {
  return std::nullopt;
}

std::string exact_cell(const std::optional<ExactRational>& v) { return v ? v->to_string() : ""; }
Json exact_json(const std::optional<ExactRational>& v) { return v ? Json(v->to_string()) : Json(nullptr); }

Json header_json(const std::string& command, const std::string& structure, const ParamList& params) {
  Json j;
  j["command"] = command;
  j["structure"] = structure;
  j["params"] = params_json(params);
  return j;
}

template <class A>
Output cmd_analyze(const A& amq, const CliConfig& c) {
  Output o{header_json("analyze", structure_name(amq), structure_params(amq)), {}};
  o.csv.push_back({"structure", "params", "l", "mode", "exact", "float", "classic_exact", "classic_float", "classic_note"});
  Json rows = Json::array();
  for (auto l : l_values(c)) {
    const auto value = analytic_false_positive(amq, l);
    const auto classic = classic_for(amq, l);
    Json row;
    row["l"] = l;
    row["mode"] = value.exact ? "exact" : "float";
    row["exact"] = exact_json(value.exact);
    row["float"] = value.value;
    if (classic) {
      row["classic_bound"] = {{"exact", exact_json(classic->exact)},
                              {"float", classic->value},
                              {"note", kClassicNote}};
    } else {
      row["classic_bound"] = nullptr;
    }
    rows.push_back(row);
    o.csv.push_back({structure_name(amq), params_cell(structure_params(amq)), std::to_string(l),
                     value.exact ? "exact" : "float", exact_cell(value.exact), format_double(value.value),
                     classic ? exact_cell(classic->exact) : "", classic ? format_double(classic->value) : "",
                     classic ? kClassicNote : ""});
  }
  o.json["rows"] = rows;
  return o;
}

template <class A>
Output cmd_oracle(const A& amq, const CliConfig& c, int& status) {
  Output o{header_json("oracle", structure_name(amq), structure_params(amq)), {}};
  o.csv.push_back({"structure", "params", "l", "oracle_exact", "analytic_exact", "equal"});
  Json rows = Json::array();
  for (auto l : l_values(c)) {
    const auto oracle = oracle_false_positive(amq, l);
    const auto analytic = analytic_false_positive(amq, l);
    const bool equal = analytic.exact && *analytic.exact == oracle;
    if (!equal) status = kCheckFailed;
    rows.push_back({{"l", l},
                    {"oracle_exact", oracle.to_string()},
                    {"analytic_exact", exact_json(analytic.exact)},
                    {"equal", equal}});
    o.csv.push_back({structure_name(amq), params_cell(structure_params(amq)), std::to_string(l), oracle.to_string(),
                     exact_cell(analytic.exact), equal ? "true" : "false"});
  }
  o.json["rows"] = rows;
  return o;
}

std::vector<std::string> report_cells(const SimulationReport& r) {
  return {r.structure,
          params_cell(r.params),
          std::to_string(r.l),
          std::to_string(r.trials),
          std::to_string(r.seed),
          std::to_string(r.successes),
          format_double(r.estimate),
          format_double(r.ci_low),
          format_double(r.ci_high),
          exact_cell(r.analytic.exact),
          format_double(r.analytic.value),
          format_double(r.z),
          std::to_string(r.aborted_trials)};
}

template <class A>
Output cmd_simulate(const A& amq, const CliConfig& c, int& status) {
  Output o;
  o.csv.push_back({"structure", "params", "l", "trials", "seed", "successes", "estimate", "ci_low", "ci_high",
                   "analytic_exact", "analytic_float", "z", "aborted_trials"});
  Json reports = Json::array();
  for (auto l : l_values(c)) {
    const auto report = estimate_fp(amq, l, c.trials, c.seed, c.z);
    if (!report.analytic_within()) status = kCheckFailed;
    reports.push_back(to_json(report));
    o.csv.push_back(report_cells(report));
  }
  o.json = c.l_max ? reports : reports.front();
  return o;
}

template <class A>
Output cmd_compare(const A& amq, const CliConfig& c, int& status) {
  Output o{header_json("compare", structure_name(amq), structure_params(amq)), {}};
  o.json["trials"] = c.trials;
  o.json["seed"] = c.seed;
  o.json["z"] = c.z;
  o.csv.push_back({"structure", "params", "l", "analytic_exact", "analytic_float", "classic_float", "estimate",
                   "ci_low", "ci_high", "within"});
  Json rows = Json::array();
  for (auto l : l_values(c)) {
    const auto report = estimate_fp(amq, l, c.trials, c.seed, c.z);
    const auto classic = classic_for(amq, l);
    const bool within = report.analytic_within();
    if (!within) status = kCheckFailed;
    rows.push_back({{"l", l},
                    {"analytic_exact", exact_json(report.analytic.exact)},
                    {"analytic_float", report.analytic.value},
                    {"classic_float", classic ? Json(classic->value) : Json(nullptr)},
                    {"classic_note", classic ? Json(kClassicNote) : Json(nullptr)},
                    {"estimate", report.estimate},
                    {"ci_low", report.ci_low},
                    {"ci_high", report.ci_high},
                    {"aborted_trials", report.aborted_trials},
                    {"within", within}});
    o.csv.push_back({report.structure, params_cell(report.params), std::to_string(l),
                     exact_cell(report.analytic.exact), format_double(report.analytic.value),
                     classic ? format_double(classic->value) : "", format_double(report.estimate),
                     format_double(report.ci_low), format_double(report.ci_high), within ? "true" : "false"});
  }
  o.json["rows"] = rows;
  return o;
}

LawReport from_nfn(const NfnReport& nfn) {
  LawReport law{"no false negatives"};
  law.status = nfn.status;
  law.checked = nfn.trials - nfn.rejected;
  law.rejected = nfn.rejected;
  law.counterexample = nfn.counterexample;
  return law;
}

template <class A>
void structure_laws(const A& amq, const CliConfig& c, std::vector<LawReport>& laws) {
  AmqMapWitness<A, A> identity{amq, amq, [](const typename A::State& s) { return s; }};
  auto law = check_amq_map(identity, c.trials, c.seed);
  law.law = "amq map (identity)";
  laws.push_back(std::move(law));
}

void structure_laws(const CountingBloomFilter& cf, const CliConfig& c, std::vector<LawReport>& laws) {
  const BloomFilter bf(cf.m, cf.k);
  auto map_law = check_amq_map(counting_to_bloom(cf, bf), c.trials, c.seed);
  map_law.law = "amq map (counting -> bloom)";
  laws.push_back(std::move(map_law));
  auto trace = check_trace_equivalence(cf, bf, [](const CountingState& s) { return cf_to_bloom(s); }, c.l,
                                       c.trials, c.seed);
  trace.law = "trace equivalence (counting -> bloom)";
  laws.push_back(std::move(trace));
  laws.push_back(check_removal_law(cf, c.trials, c.seed));
  laws.push_back(check_counter_increment_law(cf, c.trials, c.seed));
}

template <class Inner>
void blocked_laws(const BlockedAmq<Inner>& amq, const CliConfig& c, std::vector<LawReport>& laws) {
  if constexpr (std::is_same_v<Inner, CountingBloomFilter>) {
    const BlockedAmq<BloomFilter> target(amq.blocks, BloomFilter(amq.inner.m, amq.inner.k));
    auto to_bloom = [](const BlockedState<CountingState>& s) {
      BlockedState<BloomState> out;
      for (const auto& b : s.blocks) out.blocks.push_back(cf_to_bloom(b));
      return out;
    };
    AmqMapWitness<BlockedAmq<Inner>, BlockedAmq<BloomFilter>> witness{amq, target, to_bloom};
    auto map_law = check_amq_map(witness, c.trials, c.seed);
    map_law.law = "amq map (blocked-counting -> blocked-bloom)";
    laws.push_back(std::move(map_law));
    auto trace = check_trace_equivalence(amq, target, to_bloom, c.l, c.trials, c.seed);
    trace.law = "trace equivalence (blocked-counting -> blocked-bloom)";
    laws.push_back(std::move(trace));
  } else {
    structure_laws<BlockedAmq<Inner>>(amq, c, laws);
  }
  if (amq.blocks == 1) {
    auto trace = check_trace_equivalence(
        amq, amq.inner, [](const typename BlockedAmq<Inner>::State& s) { return s.blocks.front(); }, c.l,
        c.trials, c.seed);
    trace.law = "trace equivalence (single block -> inner)";
    laws.push_back(std::move(trace));
  }
}

template <class A>
void extra_laws(const A& amq, const CliConfig& c, std::vector<LawReport>& laws) {
  structure_laws(amq, c, laws);
}
template <class Inner>
void extra_laws(const BlockedAmq<Inner>& amq, const CliConfig& c, std::vector<LawReport>& laws) {
  blocked_laws(amq, c, laws);
}

template <class A>
Output cmd_conformance(const A& amq, const CliConfig& c, int& status) {
  std::vector<LawReport> laws;
  laws.push_back(check_insertion_validity(amq, c.trials, c.seed));
  laws.push_back(check_query_preservation(amq, c.trials, c.seed));
  laws.push_back(from_nfn(c.inject_fault
                              ? check_no_false_negatives(amq, c.l, c.trials, c.seed, ClearStateFault<A>{amq})
                              : check_no_false_negatives(amq, c.l, c.trials, c.seed)));
  extra_laws(amq, c, laws);

  Output o{header_json("conformance", structure_name(amq), structure_params(amq)), {}};
  o.json["l"] = c.l;
  o.json["trials"] = c.trials;
  o.json["seed"] = c.seed;
  o.csv.push_back({"structure", "params", "law", "status", "checked", "rejected", "detail"});
  Json rows = Json::array();
  for (const auto& law : laws) {
    if (law.status == CheckStatus::kFail) status = kCheckFailed;
    rows.push_back({{"law", law.law},
                    {"status", to_string(law.status)},
                    {"checked", law.checked},
                    {"rejected", law.rejected},
                    {"detail", law.counterexample}});
    std::string detail = law.counterexample;
    for (auto& ch : detail) {
      if (ch == ',') ch = ';';
    }
    o.csv.push_back({structure_name(amq), params_cell(structure_params(amq)), law.law, to_string(law.status),
                     std::to_string(law.checked), std::to_string(law.rejected), detail});
  }
  o.json["laws"] = rows;
  return o;
}

}  // namespace

AnyAmq make_structure(const CliConfig& c) {
  const auto& s = c.structure;
  if (s == "bloom") return BloomFilter(require_m(c), c.k);
  if (s == "counting") return CountingBloomFilter(require_m(c), c.k, c.bound);
  if (s == "quotient") return make_quotient(c);
  if (s == "blocked-bloom") return BlockedAmq<BloomFilter>(c.blocks, BloomFilter(require_m(c), c.k));
  if (s == "blocked-counting") {
    return BlockedAmq<CountingBloomFilter>(c.blocks, CountingBloomFilter(require_m(c), c.k, c.bound));
  }
  if (s == "blocked-quotient") return BlockedAmq<QuotientFilter>(c.blocks, make_quotient(c));
  throw InvalidParameter("unknown structure: " + s);
}

std::string run_command(const CliConfig& c, int& status) {
  if (c.trials < 1) throw InvalidParameter("--trials must be at least 1");
  if (!(c.z > 0)) throw InvalidParameter("--z must be positive");
  status = kOk;
  const auto amq = make_structure(c);
  const Output out = std::visit(
      [&](const auto& a) -> Output {
        if (c.command == "analyze") return cmd_analyze(a, c);
        if (c.command == "oracle") return cmd_oracle(a, c, status);
        if (c.command == "simulate") return cmd_simulate(a, c, status);
        if (c.command == "compare") return cmd_compare(a, c, status);
        if (c.command == "conformance") return cmd_conformance(a, c, status);
        throw InvalidParameter("unknown command: " + c.command);
      },
      amq);
  return out.render(c.format);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated analysis of approximate membership query structures"};
  app.require_subcommand(1);
  CliConfig config;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "closed-form false-positive table (with the classic bound for Bloom filters)"},
      {"oracle", "exhaustive-enumeration check of the closed forms"},
      {"simulate", "seeded Monte-Carlo false-positive estimate"},
      {"compare", "closed form vs classic bound vs Monte-Carlo, per l"},
      {"conformance", "randomized checks of the interface laws"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--structure", config.structure, "structure")
        ->required()
        ->check(CLI::IsMember({"bloom", "counting", "quotient", "blocked-bloom", "blocked-counting",
                               "blocked-quotient"}));
    sub->add_option("--m", config.m, "bits / counters per filter (per block when blocked)");
    sub->add_option("--k", config.k, "hash functions")->capture_default_str();
    sub->add_option("--p", config.p, "quotient filter hash width (q + r)");
    sub->add_option("--q", config.q, "quotient bits");
    sub->add_option("--r", config.r, "remainder bits");
    sub->add_option("--blocks", config.blocks, "blocks of a blocked structure")->capture_default_str();
    sub->add_option("--bound", config.bound, "counter bound of counting filters")->capture_default_str();
    sub->add_option("--l", config.l, "insert count (start of range with --l-max)")->capture_default_str();
    sub->add_option("--l-max", config.l_max, "last insert count of the range");
    sub->add_option("--trials", config.trials, "Monte-Carlo trials / law scenarios")->capture_default_str();
    sub->add_option("--seed", config.seed, "base seed")->envname("AMQ_SEED")->capture_default_str();
    sub->add_option("--z", config.z, "interval width in sigmas")->capture_default_str();
    sub->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", config.out, "output path (default stdout)");
    if (name == "conformance") {
      sub->add_flag("--inject-fault", config.inject_fault,
                    "clear the filter before the final query (harness sensitivity fixture)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  config.command = app.get_subcommands().front()->get_name();

  std::string rendered;
  int status = kOk;
  try {
    rendered = run_command(config, status);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const EnumerationTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kResourceGuard;
  } catch (const InfeasibleExact& e) {
    err << "error: " << e.what() << "\n";
    return kResourceGuard;
  }

  if (config.out.empty()) {
    out << rendered;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << config.out << "\n";
      return kUsage;
    }
    file << rendered;
  }
  return status;
}

}  // namespace amqlab::cli
