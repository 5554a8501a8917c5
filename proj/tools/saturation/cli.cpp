#include "saturation/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "saturation/crc.hpp"
#include "saturation/dataset.hpp"
#include "saturation/error.hpp"
#include "saturation/planner.hpp"
#include "saturation/plot.hpp"
#include "saturation/report.hpp"
#include "saturation/service/http.hpp"
#include "saturation/service/store.hpp"
#include "saturation/survival.hpp"


namespace saturation::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string input_format = "wide";
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
  std::string coding = "table5";
  std::string ci = "log";
  std::string format = "csv";
  std::string out;
  std::vector<std::string> methods;
  std::string listen = "127.0.0.1:8080";
  std::string data_dir = "sessions";
};

// A failure tied to an input file; printed as "<path>: <detail>".
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename Fn>
auto with_path(const std::string& path, Fn fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void require_inputs(const RunConfig& c, std::size_t n) {
  if (c.inputs.size() != n)
    throw CLI::ValidationError("--input", "format '" + c.input_format + "' needs " + std::to_string(n) +
                                              " --input path(s)");
}

ElicitationMatrix load_matrix(const RunConfig& c) {
  if (c.input_format == "wide") {
    require_inputs(c, 1);
    return with_path(c.inputs[0], [&] { return parse_wide(read_file(c.inputs[0])); });
  }
  if (c.input_format == "long") {
    require_inputs(c, 2);
    auto manifest = read_file(c.inputs[0]);
    auto elicitations = read_file(c.inputs[1]);
    return with_path(c.inputs[0] + " + " + c.inputs[1],
                     [&] { return parse_long(manifest, elicitations); });
  }
  throw CLI::ValidationError("--input-format", "'" + c.subcommand + "' needs wide or long input");
}

std::vector<std::size_t> parse_pattern_line(std::string_view line, std::size_t line_no, bool binary) {
  auto first = line.find_first_not_of(" \t");
  auto last = line.find_last_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  line = line.substr(first, last - first + 1);
  if (line.size() >= 2 && line.front() == '(' && line.back() == ')') line = line.substr(1, line.size() - 2);
  try {
    return parse_counts_line(line, binary);
  } catch (const DataError& e) {
    throw DataError(e.reason(), line_no, e.column());
  }
}

InterviewSequence load_sequence(const RunConfig& c) {
  if (c.input_format == "grouped") {
    require_inputs(c, 1);
    if (!c.seed) throw CLI::ValidationError("--seed", "grouped input requires --seed for imputation");
    auto groups = with_path(c.inputs[0], [&] { return parse_grouped(read_file(c.inputs[0])); });
    return impute_grouped(groups, Seed{*c.seed});
  }
  if (c.input_format == "sequence") {
    require_inputs(c, 1);
    auto text = read_file(c.inputs[0]);
    return with_path(c.inputs[0], [&] {
      std::istringstream lines(text);
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
        auto counts = parse_pattern_line(line, line_no, false);
        return InterviewSequence(std::move(counts));
      }
      throw DataError("no interviews");
    });
  }
  return derive_sequence(load_matrix(c));
}

std::vector<ProjectionMethod> projection_methods(const RunConfig& c) {
  if (c.methods.empty()) return {ProjectionMethod::extrapolation(), ProjectionMethod::rule_completion(3)};
  std::vector<ProjectionMethod> methods;
  for (const auto& m : c.methods) {
    auto parsed = ProjectionMethod::parse(m);
    if (!parsed) throw CLI::ValidationError("--method", "unknown method '" + m + "'");
    methods.push_back(*parsed);
  }
  return methods;
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out, const Environment& env) {
  if (c.out.empty() || c.out == "-") {
    out << content;
    return;
  }
  fs::path path(c.out);
  if (path.is_relative()) {
    if (auto it = env.find("SATURATION_OUT_DIR"); it != env.end() && !it->second.empty()) {
      fs::create_directories(it->second);
      path = fs::path(it->second) / path;
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError(path.string() + ": cannot open for writing");
  file << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void check_format(const RunConfig& c, std::initializer_list<std::string_view> allowed) {
  for (auto f : allowed)
    if (c.format == f) return;
  std::string list;
  for (auto f : allowed) list += (list.empty() ? "" : ", ") + std::string(f);
  throw CLI::ValidationError("--format", "'" + c.subcommand + "' supports " + list);
}

int cmd_describe(const RunConfig& c, std::ostream& out, const Environment& env) {
  check_format(c, {"csv", "json", "text"});
  auto matrix = load_matrix(c);
  auto stats = descriptive_stats(matrix);
  if (c.format == "json")
    emit(c, dump(report::to_json(stats, matrix)), out, env);
  else if (c.format == "text")
    emit(c, report::describe_text(stats, matrix), out, env);
  else
    emit(c, report::describe_csv(stats, matrix), out, env);
  return 0;
}

int cmd_km(const RunConfig& c, std::ostream& out, std::ostream& err, const Environment& env) {
  check_format(c, {"csv", "json", "svg", "text"});
  KmOptions options;
  options.alpha = c.alpha;
  options.coding = *parse_event_coding(c.coding);
  options.transform = *parse_ci_transform(c.ci);
  auto sequence = load_sequence(c);
  auto curve = km_estimate(sequence, options);
  auto summary = saturation_summary(curve);

  if (c.format == "json") {
    json doc{{"sequence", report::to_json(sequence)},
             {"km", report::to_json(curve)},
             {"summary", report::to_json(summary)}};
    json type1 = json::array();
    for (const auto& rule : {StoppingRule::first_zero(), StoppingRule::consecutive_zero(3),
                             StoppingRule::ten_plus_three()})
      type1.push_back(report::to_json(type1_assess(sequence, rule)));
    doc["type1"] = std::move(type1);
    emit(c, dump(doc), out, env);
  } else if (c.format == "text") {
    emit(c, report::curve_text(curve, summary), out, env);
  } else {
    emit(c, c.format == "svg" ? plot::km_svg(curve, summary) : report::curve_csv(curve), out, env);
    err << report::summary_text(summary);
  }
  return 0;
}

int cmd_crc(const RunConfig& c, std::ostream& out, const Environment& env) {
  check_format(c, {"csv", "json", "text"});
  auto matrix = load_matrix(c);
  auto series = per_interview_series(matrix);
  if (c.format == "json")
    emit(c, dump(report::to_json(series)), out, env);
  else if (c.format == "text")
    emit(c, report::crc_text(series), out, env);
  else
    emit(c, report::crc_csv(series), out, env);
  return 0;
}

int cmd_plan(const RunConfig& c, std::ostream& out, const Environment& env) {
  check_format(c, {"csv", "json", "text"});
  if (c.inputs.size() != 1) throw CLI::ValidationError("--input", "plan needs one scenario batch file");
  auto methods = projection_methods(c);
  KmOptions options;
  options.alpha = c.alpha;
  options.coding = *parse_event_coding(c.coding);
  options.transform = *parse_ci_transform(c.ci);

  auto text = read_file(c.inputs[0]);
  std::vector<ScenarioRow> rows;
  with_path(c.inputs[0], [&] {
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
      auto pattern = parse_pattern_line(line, line_no, true);
      rows.push_back(scenario_eval(pattern, options, methods));
    }
    return 0;
  });

  if (c.format == "json") {
    json doc = json::array();
    for (const auto& r : rows) doc.push_back(report::to_json(r));
    emit(c, dump(doc), out, env);
  } else if (c.format == "text") {
    emit(c, report::scenarios_text(rows, methods), out, env);
  } else {
    emit(c, report::scenarios_csv(rows, methods), out, env);
  }
  return 0;
}

int cmd_impute(const RunConfig& c, std::ostream& out, const Environment& env) {
  check_format(c, {"csv", "json"});
  RunConfig grouped = c;
  grouped.input_format = "grouped";
  auto sequence = load_sequence(grouped);
  emit(c, c.format == "json" ? dump(report::to_json(sequence)) : report::sequence_csv(sequence), out, env);
  return 0;
}

int cmd_serve(const RunConfig& c, std::ostream& err) {
  auto colon = c.listen.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected host:port");
  auto host = c.listen.substr(0, colon);
  int port = std::stoi(c.listen.substr(colon + 1));
  service::SessionStore store(c.data_dir);
  err << "serving on " << host << ":" << port << " (data in " << c.data_dir << ")\n";
  if (!service::serve(store, host, port)) {
    err << "error: cannot listen on " << c.listen << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

Environment process_environment() {
  Environment env;
  for (const char* key : {"SATURATION_ALPHA", "SATURATION_OUT_DIR", "SATURATION_LISTEN", "SATURATION_DATA_DIR"})
    if (const char* v = std::getenv(key)) env[key] = v;
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  RunConfig config;
  if (auto it = env.find("SATURATION_ALPHA"); it != env.end()) {
    try {
      config.alpha = std::stod(it->second);
    } catch (const std::exception&) {
      err << "error: SATURATION_ALPHA is not a number: " << it->second << "\n";
      return 2;
    }
  }
  if (auto it = env.find("SATURATION_LISTEN"); it != env.end()) config.listen = it->second;
  if (auto it = env.find("SATURATION_DATA_DIR"); it != env.end()) config.data_dir = it->second;

  CLI::App app{"Interview saturation analysis: Kaplan-Meier, capture-recapture and stopping rules",
               "saturation"};
  app.require_subcommand(1);

  auto add_common = [&config](CLI::App* sub, bool with_format) {
    sub->add_option("--input,-i", config.inputs, "Input file(s); long format takes manifest then elicitations")
        ->required();
    if (with_format)
      sub->add_option("--format,-f", config.format, "Output format")->capture_default_str();
    sub->add_option("--out,-o", config.out, "Output file (default: stdout)");
  };
  auto add_alpha = [&config](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Two-sided CI level")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0).description("(0, 1)"));
    sub->add_option("--coding", config.coding, "Event coding: table5 (new code = event) or prose")
        ->capture_default_str()
        ->check(CLI::IsMember({"table5", "prose"}));
    sub->add_option("--ci", config.ci, "CI transform")->capture_default_str()->check(CLI::IsMember({"log", "plain"}));
  };

  auto* describe = app.add_subcommand("describe", "Descriptive statistics of marked and recaptured codes");
  add_common(describe, true);
  describe->add_option("--input-format", config.input_format)->capture_default_str()->check(CLI::IsMember({"wide", "long"}));

  auto* km = app.add_subcommand("km", "Kaplan-Meier probability of not being saturated");
  add_common(km, true);
  add_alpha(km);
  km->add_option("--input-format", config.input_format)
      ->capture_default_str()
      ->check(CLI::IsMember({"wide", "long", "grouped", "sequence"}));
  km->add_option("--seed", config.seed, "Seed for grouped-count imputation");

  auto* crc = app.add_subcommand("crc", "Capture-recapture estimates after each interview");
  add_common(crc, true);
  crc->add_option("--input-format", config.input_format)->capture_default_str()->check(CLI::IsMember({"wide", "long"}));

  auto* plan = app.add_subcommand("plan", "Evaluate hypothetical 0/1 interview patterns");
  add_common(plan, true);
  add_alpha(plan);
  plan->add_option("--method", config.methods, "extrapolation | rule_completion:<k> (repeatable)");

  auto* impute = app.add_subcommand("impute", "Expand grouped counts to a per-interview sequence");
  add_common(impute, true);
  impute->add_option("--seed", config.seed, "Random seed")->required();

  auto* serve = app.add_subcommand("serve", "Run the session HTTP service");
  serve->add_option("--listen", config.listen, "host:port")->capture_default_str();
  serve->add_option("--data-dir", config.data_dir, "Session log directory")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    err << "error: alpha must lie in (0, 1)\n";
    return 2;
  }

  try {
    if (config.subcommand == "describe") return cmd_describe(config, out, env);
    if (config.subcommand == "km") return cmd_km(config, out, err, env);
    if (config.subcommand == "crc") return cmd_crc(config, out, env);
    if (config.subcommand == "plan") return cmd_plan(config, out, env);
    if (config.subcommand == "impute") return cmd_impute(config, out, env);
    if (config.subcommand == "serve") return cmd_serve(config, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace saturation::cli
