#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <optional>
#include <sstream>

#include "boxlab/averages.hpp"
#include "boxlab/box_measure.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/magic.hpp"
#include "boxlab/random.hpp"
#include "boxlab/seminorm.hpp"
#include "verify.hpp"

namespace boxlab::cli {

namespace {

using io::json;

struct Common {
  std::vector<std::size_t> order;  // 1-based as typed
  unsigned threads = 1;
  std::size_t cap = 10'000'000;
};

void add_common(CLI::App* sub, Common& c, bool with_order = true) {
  if (with_order) {
    sub->add_option("--order", c.order, "Transform indices 1..d, comma separated (default: all)")
        ->delimiter(',');
  }
  sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--cap", c.cap, "Support-size cap")->envname("BOXLAB_CAP")->check(CLI::PositiveNumber);
}

std::vector<std::size_t> resolve_order(const FiniteSystem& sys, const std::vector<std::size_t>& typed) {
  std::vector<std::size_t> order;
  if (typed.empty()) {
    for (std::size_t i = 0; i < sys.dimension(); ++i) order.push_back(i);
  } else {
    for (auto t : typed) {
      if (t == 0) throw PreconditionError("transform indices start at 1");
      order.push_back(t - 1);
    }
  }
  check_order(sys, order);
  return order;
}

FiniteSystem load_system(const std::string& path) {
  return FiniteSystem::from_raw(io::parse_system(io::read_json_file(path)));
}

Observable load_observable(const std::string& path, std::size_t n) {
  Observable f = io::parse_observable(io::read_json_file(path));
  if (f.size() != n) {
    throw PreconditionError("observable " + path + " has " + std::to_string(f.size()) + " values, expected " +
                            std::to_string(n));
  }
  return f;
}

json rationals(std::span<const Rational> v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw io::ParseError("interval must be start:length, got " + text);
  try {
    std::size_t used = 0;
    const std::int64_t start = std::stoll(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string tail = text.substr(colon + 1);
    const std::int64_t length = std::stoll(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(text);
    return Interval(start, length);
  } catch (const std::logic_error&) {
    throw io::ParseError("interval must be start:length, got " + text);
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void print_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

int cmd_validate(const std::string& path, std::ostream& out) {
  const RawSystem raw = io::parse_system(io::read_json_file(path));
  ValidationReport report;
  try {
    report = validate_system(raw);
  } catch (const StructuralError& e) {
    report.violations.push_back(e.what());
  }
  print_json(out, {{"valid", report.ok()}, {"violations", report.violations}});
  return report.ok() ? kOk : kInvalid;
}

int cmd_box_measure(const std::string& path, const Common& c, std::ostream& out) {
  const FiniteSystem sys = load_system(path);
  const auto order = resolve_order(sys, c.order);
  const SparseCubeMeasure box = build_box_measure(sys, order, {c.cap, c.threads});
  json doc = io::to_json(box);
  doc["order"] = io::order_to_json(order);
  print_json(out, doc);
  return kOk;
}

int cmd_seminorm(const std::string& system_path, const std::string& obs_path, const std::string& method,
                 bool inject_fault, const Common& c, std::ostream& out, std::ostream& err) {
  const FiniteSystem sys = load_system(system_path);
  const auto order = resolve_order(sys, c.order);
  const Observable f = load_observable(obs_path, sys.size());
  const ComputeOptions opts{c.cap, c.threads};

  std::vector<std::pair<std::string, SeminormValue>> values;
  if (method == "measure" || method == "all") values.emplace_back("measure", seminorm_pow(sys, order, f, opts));
  if (method == "oracle" || method == "all") {
    SeminormValue v = seminorm_oracle_pow(sys, order, f, c.threads);
    if (inject_fault) v.pow += 1;
    values.emplace_back("oracle", std::move(v));
  }
  if (method == "recursion" || method == "all") values.emplace_back("recursion", seminorm_recursion_pow(sys, order, f));

  if (values.size() == 1) {
    json doc = io::to_json(values.front().second);
    doc["method"] = values.front().first;
    print_json(out, doc);
    return kOk;
  }
  json methods = json::object();
  bool agree = true;
  for (const auto& [name, v] : values) {
    methods[name] = io::to_json(v);
    agree = agree && v.pow == values.front().second.pow;
  }
  print_json(out, {{"d", order.size()}, {"order", io::order_to_json(order)}, {"methods", methods}, {"agree", agree}});
  if (!agree) {
    err << "seminorm methods disagree\n";
    return kInconsistent;
  }
  return kOk;
}

int cmd_gowers(std::size_t modulus, unsigned degree, const std::string& obs_path, bool cross_check,
               bool inject_fault, const Common& c, std::ostream& out, std::ostream& err) {
  if (modulus == 0 || degree == 0) throw PreconditionError("modulus and degree must be positive");
  const Observable f = load_observable(obs_path, modulus);
  Rational g = gowers_norm_pow(modulus, degree, f);
  if (inject_fault) g += 1;
  json doc = {{"N", modulus}, {"d", degree}, {"gowers_pow", to_string(g)},
              {"root_approx", to_decimal(root_of_power(g, degree))}};
  if (!cross_check) {
    print_json(out, doc);
    return kOk;
  }
  const std::vector<std::int64_t> steps(degree, 1);
  const FiniteSystem sys = FiniteSystem::cyclic(modulus, steps);
  std::vector<std::size_t> order(degree);
  for (unsigned i = 0; i < degree; ++i) order[i] = i;
  const SeminormValue box = seminorm_pow(sys, order, f, {c.cap, c.threads});
  const bool agree = box.pow == g;
  doc["box_pow"] = to_string(box.pow);
  doc["agree"] = agree;
  print_json(out, doc);
  if (!agree) {
    err << "gowers norm and box seminorm disagree\n";
    return kInconsistent;
  }
  return kOk;
}

int cmd_average(const std::string& system_path, const std::vector<std::string>& obs_paths,
                const std::vector<std::string>& intervals, bool limit_only, const std::string& format,
                std::ostream& out) {
  const FiniteSystem sys = load_system(system_path);
  if (obs_paths.size() != sys.dimension()) {
    throw PreconditionError("expected " + std::to_string(sys.dimension()) + " observables, got " +
                            std::to_string(obs_paths.size()));
  }
  std::vector<Observable> fs;
  for (const auto& p : obs_paths) fs.push_back(load_observable(p, sys.size()));
  std::vector<Interval> parsed;
  for (const auto& s : intervals) parsed.push_back(parse_interval(s));
  if (parsed.empty() && !limit_only) throw io::ParseError("give --interval start:length or --limit");

  const AverageResult limit = multi_average_limit(sys, fs);
  std::vector<std::pair<AverageResult, ConvergenceCheck>> rows;
  for (const auto& iv : parsed) rows.emplace_back(multi_average(sys, fs, iv), convergence_check(sys, fs, iv));

  if (format == "csv") {
    out << "start,length,l2_norm_sq,distance_sq,bound,within_bound";
    for (std::size_t x = 0; x < sys.size(); ++x) out << ",f" << x;
    out << '\n';
    auto values = [&](const Observable& f) {
      for (const auto& v : f.values()) out << ',' << csv_field(to_string(v));
      out << '\n';
    };
    out << "limit," << limit.interval.length << ',' << csv_field(to_string(limit.l2_norm_sq)) << ",0,0,true";
    values(limit.values);
    for (const auto& [avg, conv] : rows) {
      out << avg.interval.start << ',' << avg.interval.length << ',' << csv_field(to_string(avg.l2_norm_sq)) << ','
          << csv_field(to_string(conv.distance_sq)) << ',' << csv_field(to_string(conv.bound)) << ','
          << (conv.holds ? "true" : "false");
      values(avg.values);
    }
    return kOk;
  }

  json doc;
  doc["limit"] = {{"period", limit.interval.length},
                  {"values", rationals(limit.values.values())},
                  {"l2_norm_sq", to_string(limit.l2_norm_sq)}};
  json arr = json::array();
  for (const auto& [avg, conv] : rows) {
    arr.push_back({{"start", avg.interval.start},
                   {"length", avg.interval.length},
                   {"values", rationals(avg.values.values())},
                   {"l2_norm_sq", to_string(avg.l2_norm_sq)},
                   {"distance_sq", to_string(conv.distance_sq)},
                   {"bound", to_string(conv.bound)},
                   {"within_bound", conv.holds}});
  }
  doc["intervals"] = arr;
  print_json(out, doc);
  return kOk;
}

int cmd_magic(const std::string& system_path, const std::optional<std::string>& obs_path, std::uint64_t seed,
              std::size_t draws, const Common& c, std::ostream& out) {
  const FiniteSystem sys = load_system(system_path);
  const auto order = resolve_order(sys, c.order);
  const ComputeOptions opts{c.cap, c.threads};
  const StarSystem star = build_star_system(sys, order, opts);
  const SparseCubeMeasure star_box = star_box_measure(star, opts);
  const Partition wstar = wstar_partition(star);

  std::vector<Observable> Fs;
  if (obs_path) {
    Fs.push_back(load_observable(*obs_path, star.size()));
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < draws; ++i) {
      const Observable G = random_observable(rng, star.size());
      Fs.push_back(G - star_conditional_expectation(star, G, wstar));
    }
  }
  json checks = json::array();
  bool all = true;
  for (std::size_t i = 0; i < Fs.size(); ++i) {
    const MagicResult r = magic_check(star, star_box, Fs[i]);
    all = all && r.holds;
    checks.push_back({{"index", i},
                      {"expectation_is_zero", r.expectation_is_zero},
                      {"star_pow", to_string(r.star_pow)},
                      {"holds", r.holds}});
  }
  json doc = {{"order", io::order_to_json(order)},
              {"carrier_size", star.size()},
              {"star_box_size", star_box.size()},
              {"wstar_cells", wstar.cell_count()},
              {"checks", checks},
              {"all_hold", all}};
  if (!obs_path) doc["seed"] = seed;
  print_json(out, doc);
  return all ? kOk : kPropertyFailed;
}

int cmd_verify(const std::string& system_path, std::uint64_t seed, std::size_t draws, const std::string& fault,
               const std::string& format, const Common& c, std::ostream& out) {
  const FiniteSystem sys = load_system(system_path);
  VerifyConfig config;
  config.order = resolve_order(sys, c.order);
  config.seed = seed;
  config.draws = draws;
  config.threads = c.threads;
  config.cap = c.cap;
  config.inject_fault = fault;
  const auto report = run_verify(sys, config);
  const bool ok = std::none_of(report.begin(), report.end(), [](const auto& p) { return p.status == "FAIL"; });

  if (format == "json") {
    json props = json::array();
    for (const auto& p : report) {
      json row = {{"name", p.name}, {"status", p.status}, {"draws", p.draws}};
      if (!p.note.empty()) row["note"] = p.note;
      if (p.counterexample) row["counterexample"] = *p.counterexample;
      props.push_back(row);
    }
    print_json(out, {{"seed", seed},
                     {"draws", draws},
                     {"order", io::order_to_json(config.order)},
                     {"properties", props},
                     {"passed", ok}});
  } else {
    out << "seed=" << seed << " draws=" << draws << " points=" << sys.size()
        << " order=" << io::order_to_json(config.order).dump() << '\n';
    for (const auto& p : report) {
      out << p.status << ' ' << p.name;
      if (p.status == "SKIP") {
        out << " (" << p.note << ")";
      } else {
        out << " draws=" << p.draws;
      }
      if (p.counterexample) out << " draw=" << *p.failing_draw << " counterexample=" << p.counterexample->dump();
      out << '\n';
    }
    out << (ok ? "all properties hold" : "property failures") << '\n';
  }
  return ok ? kOk : kPropertyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact box measures, box seminorms and multiple ergodic averages on finite systems", "boxlab"};
  app.require_subcommand(1);

  std::string system_path, obs_path, method = "measure", format = "json", verify_format = "text", fault;
  std::vector<std::string> obs_paths, intervals;
  std::optional<std::string> magic_obs;
  std::size_t modulus = 0, draws = 100;
  unsigned degree = 0;
  std::uint64_t seed = 0;
  bool cross_check = false, limit_only = false, inject = false;
  Common common;

  auto* validate = app.add_subcommand("validate", "Check a system file");
  validate->add_option("system", system_path)->required();

  auto* box = app.add_subcommand("box-measure", "Print the box measure");
  box->add_option("system", system_path)->required();
  add_common(box, common);

  auto* semi = app.add_subcommand("seminorm", "Box seminorm of an observable");
  semi->add_option("system", system_path)->required();
  semi->add_option("observable", obs_path)->required();
  semi->add_option("--method", method)->check(CLI::IsMember({"measure", "oracle", "recursion", "all"}));
  semi->add_flag("--inject-fault", inject)->group("");
  add_common(semi, common);

  auto* gowers = app.add_subcommand("gowers", "Gowers U^d norm on Z/N");
  gowers->add_option("observable", obs_path)->required();
  gowers->add_option("--modulus,-N", modulus)->required();
  gowers->add_option("--degree,-d", degree)->required();
  gowers->add_flag("--cross-check", cross_check, "Compare with the box seminorm of the shift system");
  gowers->add_flag("--inject-fault", inject)->group("");
  add_common(gowers, common, false);

  auto* average = app.add_subcommand("average", "Multiple ergodic averages");
  average->add_option("system", system_path)->required();
  average->add_option("observables", obs_paths, "One observable per transform")->required();
  average->add_option("--interval", intervals, "start:length, repeatable");
  average->add_flag("--limit", limit_only, "Only the exact limit");
  average->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* magic = app.add_subcommand("magic-check", "Check a box extension is magic");
  magic->add_option("system", system_path)->required();
  magic->add_option("--observable", magic_obs, "Function on the carrier");
  magic->add_option("--seed", seed);
  magic->add_option("--draws", draws)->check(CLI::PositiveNumber);
  add_common(magic, common);

  auto* verify = app.add_subcommand("verify", "Run every property suite");
  verify->add_option("system", system_path)->required();
  verify->add_option("--seed", seed);
  verify->add_option("--draws", draws)->check(CLI::PositiveNumber);
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--inject-fault", fault)->group("");
  add_common(verify, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(system_path, out);
    if (box->parsed()) return cmd_box_measure(system_path, common, out);
    if (semi->parsed()) return cmd_seminorm(system_path, obs_path, method, inject, common, out, err);
    if (gowers->parsed()) return cmd_gowers(modulus, degree, obs_path, cross_check, inject, common, out, err);
    if (average->parsed()) return cmd_average(system_path, obs_paths, intervals, limit_only, format, out);
    if (magic->parsed()) return cmd_magic(system_path, magic_obs, seed, draws, common, out);
    if (verify->parsed()) return cmd_verify(system_path, seed, draws, fault, verify_format, common, out);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ResourceError& e) {
    err << "resource cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kParse;
}

}  // namespace boxlab::cli
