#include "relfix/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "relfix/automorphism.hpp"
#include "relfix/enumerate.hpp"
#include "relfix/fixlab.hpp"
#include "relfix/parse.hpp"
#include "relfix/suites.hpp"

#ifndef RELFIX_VERSION
#define RELFIX_VERSION "0.0.0"
#endif

namespace relfix {

namespace {

struct InputError : Error {
  using Error::Error;
};

std::string rational_text(Rational q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(std::string const& text) {
  try {
    auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      auto n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(n);
    }
    auto num = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(text);
    auto rest = text.substr(slash + 1);
    auto den = std::stoll(rest, &used);
    if (used != rest.size() || den <= 0) throw std::invalid_argument(text);
    return Rational(num, den);
  } catch (std::logic_error const&) {
    throw InputError("not a rational number: '" + text + "'");
  }
}

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// What one subcommand leaves behind: a report document or plain text. `spec`
// points into the session.
struct Outcome {
  std::vector<ProbeReport> reports;
  std::optional<std::string> text;
  GroupSpec const* spec = nullptr;
};

class Session {
 public:
  explicit Session(RunConfig const& config) : config_(config) {}

  GroupFile const& file() {
    if (!file_) {
      if (config_.group_path.empty()) throw InputError("--group is required");
      file_ = parse_group_file(read_file(config_.group_path));
    }
    return *file_;
  }
  GroupSpec const& spec() { return file().spec; }

  MetricOptions metric_options() const {
    MetricOptions o;
    o.bfs_radius_cap = config_.bfs_radius_cap;
    o.search_state_cap = config_.state_cap;
    return o;
  }

  // NAME from the group file, or inner:WORD for conjugation by WORD.
  Automorphism const& phi() {
    if (phi_) return *phi_;
    if (config_.aut.empty()) throw InputError("--aut is required");
    std::string const inner = "inner:";
    if (config_.aut.rfind(inner, 0) == 0) {
      phi_ = Automorphism::inner(spec(), word(config_.aut.substr(inner.size())), metric_options());
      return *phi_;
    }
    auto const* def = file().find(config_.aut);
    if (!def) {
      std::string known;
      for (auto const& d : file().automorphisms) known += (known.empty() ? "" : ", ") + d.name;
      throw InputError("no automorphism '" + config_.aut + "' (known: " + known + ")");
    }
    phi_ = Automorphism::from_definition(spec(), *def, metric_options());
    return *phi_;
  }

  // Metrics of phi when one is named, so adjoined conjugators count.
  Metrics const& metrics() {
    if (!config_.aut.empty()) return phi().metrics();
    if (!metrics_) metrics_.emplace(spec(), metric_options());
    return *metrics_;
  }

  NormalForm word(std::string const& text) { return spec().normal_form(parse_word(text, spec())); }

  std::uint64_t seed() const {
    if (!config_.seed) throw InputError("--seed is required for sampled runs");
    return *config_.seed;
  }

  SuiteConfig suite_config() const {
    SuiteConfig s;
    s.window = config_.window;
    s.seed = seed();
    s.samples = config_.samples;
    s.fix.label_cap = config_.label_cap;
    s.bgen_p = config_.bgen_p;
    return s;
  }

  FixlabOptions fix_options() const {
    FixlabOptions o;
    o.label_cap = config_.label_cap;
    o.seed = config_.seed.value_or(0);
    return o;
  }

 private:
  RunConfig const& config_;
  std::optional<GroupFile> file_;
  std::optional<Automorphism> phi_;
  std::optional<Metrics> metrics_;
};

Outcome run(Session& s, RunConfig const& cfg, std::vector<std::string> const& words) {
  Outcome out;
  auto const& cmd = cfg.command;
  auto need_words = [&](std::size_t lo, std::size_t hi) {
    if (words.size() < lo || words.size() > hi) {
      throw InputError(cmd + " takes " + std::to_string(lo) +
                       (hi == lo ? "" : " to " + std::to_string(hi)) + " --word argument(s)");
    }
  };
  // One or two words: (1, g) or (g, h).
  auto endpoints = [&]() -> std::pair<NormalForm, NormalForm> {
    need_words(1, 2);
    if (words.size() == 1) return {s.spec().identity(), s.word(words[0])};
    return {s.word(words[0]), s.word(words[1])};
  };

  if (cmd == "nf") {
    need_words(1, 1);
    out.text = s.spec().format(s.word(words[0]));
  } else if (cmd == "mul") {
    need_words(1, SIZE_MAX);
    auto g = s.spec().identity();
    for (auto const& w : words) g = s.spec().multiply(g, s.word(w));
    out.text = s.spec().format(g);
  } else if (cmd == "dist") {
    auto [g, h] = endpoints();
    auto& m = s.metrics();
    out.text = std::to_string(cfg.suites.front() == "x" ? m.x_distance(g, h) : m.rel_distance(g, h));
  } else if (cmd == "geodesic") {
    auto [g, h] = endpoints();
    auto& m = s.metrics();
    std::string text;
    if (cfg.threshold == 1) {
      for (auto const& p : geodesic_labelings(m, g, h, cfg.label_cap)) {
        text += (text.empty() ? "" : "\n") + format_path(s.spec(), p);
      }
    } else {
      text = format_path(s.spec(), canonical_geodesic(m, g, h));
    }
    out.text = text;
  } else if (cmd == "aut check") {
    auto const& phi = s.phi();
    ProbeReport r;
    r.check = "aut_check";
    r.params = Json{{"aut", phi.name()}};
    r.samples = phi.base_spec().generator_count();
    r.estimates["S"] = phi.S();
    r.details["A"] = rational_text(quasigeodesic_constant_A(1, 0, phi.S()));
    Json extras = Json::array();
    for (auto const& x : phi.spec().extra_x_elements()) extras.push_back(phi.base_spec().format(x));
    r.details["extra_x_elements"] = extras;
    Json periph = Json::array();
    auto const& base = phi.base_spec();
    for (FactorId f : base.peripheral_factors()) {
      auto const& img = phi.peripheral_map(f);
      periph.push_back(Json{{"factor", base.factor(f).name},
                            {"target", base.factor(img->target).name},
                            {"conjugator", base.format(img->conjugator)}});
    }
    r.details["peripheral_map"] = periph;
    out.reports.push_back(std::move(r));
  } else if (cmd == "fix enumerate") {
    auto fixed = enumerate_fixed(s.phi(), cfg.window);
    ProbeReport r;
    r.check = "fix_enumerate";
    r.params = Json{{"window", {{"syl", cfg.window.max_syllables}, {"coord", cfg.window.max_factor_length}}}};
    r.samples = window_size(s.spec(), cfg.window);
    r.estimates["fixed"] = static_cast<std::int64_t>(fixed.elements.size());
    Json elements = Json::array();
    for (auto const& g : fixed.elements) elements.push_back(s.spec().format(g));
    r.details["elements"] = elements;
    out.reports.push_back(std::move(r));
  } else if (cmd == "fix qc-profile") {
    out.reports.push_back(quasiconvexity_profile(s.phi(), cfg.window, cfg.label_cap));
  } else if (cmd == "fix induced") {
    out.reports.push_back(induced_peripherals(s.phi(), cfg.window, cfg.threshold).report);
  } else if (cmd == "verify") {
    auto suites = cfg.suites;
    if (suites.empty()) suites = {"all"};
    auto config = s.suite_config();
    for (auto const& name : suites) {
      auto const& known = suite_names();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw InputError("unknown suite '" + name + "'");
      }
    }
    for (auto const& name : suites) {
      for (auto& r : run_suite(name, s.phi(), config)) out.reports.push_back(std::move(r));
    }
  } else if (cmd == "probe bcp" || cmd == "probe qgclose") {
    auto& m = s.metrics();
    bool bcp = cmd == "probe bcp";
    auto pairs = bcp ? sample_labeling_pairs(m, cfg.window, cfg.samples, s.seed())
                     : sample_quasigeodesic_pairs(m, cfg.window, cfg.samples, s.seed());
    auto r = bcp ? bcp_probe(m, pairs, cfg.kappa, cfg.c, cfg.k)
                 : qg_close_probe(m, pairs, cfg.kappa, cfg.c, cfg.k);
    r.seed = s.seed();
    out.reports.push_back(std::move(r));
  } else if (cmd == "probe rho") {
    auto& m = s.metrics();
    auto r = projection_rho_probe(m, sample_rho(m, cfg.window, cfg.samples, s.seed()));
    r.seed = s.seed();
    out.reports.push_back(std::move(r));
  } else if (cmd == "probe eta") {
    auto const& phi = s.phi();
    auto config = s.suite_config();
    auto eps = image_bcp(phi, config);
    Coord t = central_threshold(phi.S(), eps.estimates.at("epsilon"), cfg.e);
    auto fixed = enumerate_fixed(phi, cfg.window);
    auto r = proj_eta_probe(phi, fixed_triangles(phi, fixed, config.fix), cfg.e, t);
    r.seed = s.seed();
    r.details["epsilon0"] = eps.estimates.at("epsilon");
    out.reports.push_back(std::move(eps));
    out.reports.push_back(std::move(r));
  } else if (cmd == "probe mu") {
    auto r = fixed_proximity_probe(s.phi(), cfg.window, cfg.theta);
    r.seed = s.seed();
    out.reports.push_back(std::move(r));
  } else if (cmd == "probe xi") {
    auto r = fine_midpoint_probe(s.phi(), cfg.window, cfg.e, cfg.r, s.fix_options());
    r.seed = s.seed();
    out.reports.push_back(std::move(r));
  } else {
    throw InputError("unknown command '" + cmd + "'");
  }
  out.spec = &s.spec();
  return out;
}

}  // namespace

char const* tool_version() { return RELFIX_VERSION; }

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["group"] = group_path;
  j["aut"] = aut;
  j["window"] = Json{{"syl", window.max_syllables}, {"coord", window.max_factor_length}};
  j["suites"] = suites;
  j["samples"] = samples;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["bfs_radius_cap"] = bfs_radius_cap;
  j["state_cap"] = state_cap;
  j["label_cap"] = label_cap;
  j["threshold"] = threshold;
  j["kappa"] = rational_text(kappa);
  j["c"] = rational_text(c);
  j["k"] = k;
  j["e"] = e;
  j["r"] = r;
  j["theta"] = theta;
  j["bgen_p"] = bgen_p;
  return j;
}

std::string group_digest(GroupSpec const& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : spec.canonical_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json emit_report(RunConfig const& config, GroupSpec const& spec,
                 std::vector<ProbeReport> const& reports) {
  Json j;
  j["tool_version"] = tool_version();
  j["config"] = config.to_json();
  j["group_digest"] = group_digest(spec);
  j["per_check"] = Json::array();
  for (auto const& r : reports) j["per_check"].push_back(to_json(r));
  return j;
}

std::string emit_csv(std::vector<ProbeReport> const& reports) {
  std::ostringstream os;
  bool ladder = !reports.empty() && std::all_of(reports.begin(), reports.end(), [](auto const& r) {
    return r.check == "qc_profile";
  });
  if (ladder) {
    os << "syl,coord,fixed,pairs,sigma\n";
    for (auto const& r : reports) {
      for (auto const& step : r.details.at("ladder")) {
        os << step["window"]["syl"] << ',' << step["window"]["coord"] << ',' << step["fixed"] << ','
           << step["pairs"] << ',' << step["sigma"] << '\n';
      }
    }
    return os.str();
  }
  os << "check,samples,violations,vacuous,estimate,value\n";
  for (auto const& r : reports) {
    auto violations = r.details.value("violation_count", r.violations.size());
    auto row = [&](std::string const& key, std::string const& value) {
      os << r.check << ',' << r.samples << ',' << violations << ',' << (r.vacuous ? 1 : 0) << ','
         << key << ',' << value << '\n';
    };
    if (r.estimates.empty()) row("", "");
    for (auto const& [key, value] : r.estimates) row(key, std::to_string(value));
  }
  return os.str();
}

int run_command(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<std::string> words;
  std::string metric = "rel";
  std::uint64_t seed = 0;
  std::string kappa = "1";
  std::string c = "0";
  bool all_labelings = false;

  CLI::App app{"Fixed subgroups of automorphisms of free products"};
  app.name("relfix");
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  // Options shared by every leaf command.
  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group_path, "Group file")->required();
    sub->add_option("--aut", cfg.aut, "Automorphism name, or inner:WORD");
    sub->add_option("--syl", cfg.window.max_syllables, "Window: max syllables")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--coord", cfg.window.max_factor_length, "Window: max factor coordinate")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "Sampling seed");
    sub->add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
    sub->add_option("--cap", cfg.label_cap, "Geodesic labeling cap")->check(CLI::PositiveNumber);
    sub->add_option("--bfs-cap", cfg.bfs_radius_cap, "X-ball radius cap")->check(CLI::PositiveNumber);
    sub->add_option("--state-cap", cfg.state_cap, "Relative search state cap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  std::vector<std::pair<CLI::App*, std::string>> leaves;
  auto leaf = [&](CLI::App* parent, std::string const& name, std::string const& path,
                  std::string const& help) {
    auto* sub = parent->add_subcommand(name, help);
    common(sub);
    leaves.emplace_back(sub, path);
    return sub;
  };

  leaf(&app, "nf", "nf", "Normal form of a word")->add_option("--word", words)->required();
  leaf(&app, "mul", "mul", "Product of words")->add_option("--word", words)->required();
  auto* dist = leaf(&app, "dist", "dist", "Distance from 1 to g, or from g to h");
  dist->add_option("--word", words)->required();
  dist->add_option("--metric", metric)->check(CLI::IsMember({"rel", "x"}));
  auto* geo = leaf(&app, "geodesic", "geodesic", "Relative geodesic from 1 to g, or g to h");
  geo->add_option("--word", words)->required();
  geo->add_flag("--all", all_labelings, "Every geodesic labeling, up to --cap");

  auto* aut = app.add_subcommand("aut", "Automorphism checks")->require_subcommand(1);
  leaf(aut, "check", "aut check", "Validate an automorphism and report S, A and extras");

  auto* fix = app.add_subcommand("fix", "Fixed subgroup")->require_subcommand(1);
  leaf(fix, "enumerate", "fix enumerate", "Fixed elements of the window");
  leaf(fix, "qc-profile", "fix qc-profile", "sigma-hat ladder");
  leaf(fix, "induced", "fix induced", "Induced peripheral structure")
      ->add_option("--threshold", cfg.threshold, "Minimum nontrivial intersection");

  auto* verify = leaf(&app, "verify", "verify", "Run verification suites");
  verify->add_option("--suite", cfg.suites, "Comma-separated suite names")->delimiter(',');
  verify->add_option("--bgen-p", cfg.bgen_p, "Generator length bound for bgen (default: sample max)");

  auto* probe = app.add_subcommand("probe", "Constant probes")->require_subcommand(1);
  for (auto name : {"bcp", "qgclose", "rho", "eta", "mu", "xi"}) {
    auto* sub = leaf(probe, name, std::string("probe ") + name, std::string(name) + " estimate");
    std::string n = name;
    if (n == "bcp" || n == "qgclose") {
      sub->add_option("--kappa", kappa, "Quasigeodesic multiplicative constant");
      sub->add_option("--c", c, "Quasigeodesic additive constant");
      sub->add_option("--k", cfg.k, "Endpoint distance")->check(CLI::NonNegativeNumber);
    }
    if (n == "eta" || n == "xi") sub->add_option("--e", cfg.e, "Fineness E")->check(CLI::NonNegativeNumber);
    if (n == "xi") sub->add_option("--r", cfg.r, "Radius R")->check(CLI::NonNegativeNumber);
    if (n == "mu") sub->add_option("--theta", cfg.theta, "Displacement bound")->check(CLI::NonNegativeNumber);
  }

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && !app.get_subcommand_no_throw(args[0])) {
    err << "relfix: unknown subcommand '" << args[0] << "'\n";
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (CLI::CallForHelp const&) {
    out << app.help();
    return 0;
  } catch (CLI::CallForAllHelp const&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (CLI::CallForVersion const&) {
    out << tool_version() << '\n';
    return 0;
  } catch (CLI::ParseError const& e) {
    // Help on a subcommand surfaces here too.
    if (e.get_exit_code() == 0) {
      for (auto const& [sub, path] : leaves) {
        if (sub->parsed()) out << sub->help();
      }
      return 0;
    }
    err << "relfix: " << e.what() << '\n';
    return 2;
  }

  for (auto const& [sub, path] : leaves) {
    if (sub->parsed()) {
      cfg.command = path;
      if (sub->count("--seed")) cfg.seed = seed;
    }
  }
  if (cfg.command == "dist") cfg.suites = {metric};
  if (cfg.command == "geodesic") cfg.threshold = all_labelings ? 1 : 0;

  try {
    cfg.kappa = parse_rational(kappa);
    cfg.c = parse_rational(c);
    Session session(cfg);
    auto outcome = run(session, cfg, words);
    std::string payload;
    if (outcome.text) {
      payload = *outcome.text + "\n";
    } else if (cfg.format == "csv") {
      payload = emit_csv(outcome.reports);
    } else {
      payload = emit_report(cfg, *outcome.spec, outcome.reports).dump(2) + "\n";
    }
    if (cfg.out.empty()) {
      out << payload;
    } else {
      std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file || !(file << payload) || !file.flush()) {
        throw InputError("cannot write '" + cfg.out + "'");
      }
    }
    bool violations = std::any_of(outcome.reports.begin(), outcome.reports.end(),
                                  [](ProbeReport const& r) { return !r.ok(); });
    return violations ? 1 : 0;
  } catch (CapExceeded const& e) {
    err << "relfix: cap exceeded (" << e.parameter() << "): " << e.what() << '\n';
    return 2;
  } catch (Error const& e) {
    err << "relfix: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace relfix
