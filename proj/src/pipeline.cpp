#include "masc/pipeline.hpp"

#include <ostream>

#include "json_util.hpp"
#include "masc/error.hpp"

namespace masc {

namespace fs = std::filesystem;

RunConfig default_run_config() {
  RunConfig c;
  auto data = data_dir();
  c.registry = data / "registry.json";
  c.api_model = data / "api_model.json";
  c.template_app = data / "template-app";
  return c;
}

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
  const std::string subject = "config";
  detail::check_keys(
      j,
      {"registry", "api_model", "project", "template_app", "scope", "mode", "operators", "cases", "out_dir", "drift",
       "compile_command", "compile_timeout", "max_variants", "body_op", "condition_mode", "in_place", "reports",
       "group_by", "summary_format", "jobs", "dry_run"},
      subject);
  if (j.contains("registry"))
    c.registry = detail::get_string(j, "registry", subject);
  if (j.contains("api_model"))
    c.api_model = detail::get_string(j, "api_model", subject);
  if (j.contains("project"))
    c.project = fs::path(detail::get_string(j, "project", subject));
  if (j.contains("template_app"))
    c.template_app = detail::get_string(j, "template_app", subject);
  if (j.contains("scope")) {
    auto s = parse_scope(detail::get_string(j, "scope", subject));
    if (!s)
      throw ValidationError(subject, "scope must be main, similarity or exhaustive");
    c.scope = *s;
  }
  if (j.contains("mode")) {
    auto m = parse_seed_mode(detail::get_string(j, "mode", subject));
    if (!m)
      throw ValidationError(subject, "mode must be bulk or isolated");
    c.mode = *m;
  }
  if (j.contains("operators"))
    c.operators = detail::get_strings(j, "operators", subject);
  if (j.contains("cases"))
    c.cases = detail::get_strings(j, "cases", subject);
  if (j.contains("out_dir"))
    c.out_dir = detail::get_string(j, "out_dir", subject);
  if (j.contains("drift"))
    c.drift = detail::get_int(j, "drift", c.drift, subject);
  if (j.contains("compile_command"))
    c.compile_command = detail::get_string(j, "compile_command", subject);
  if (j.contains("compile_timeout"))
    c.compile_timeout = detail::get_int(j, "compile_timeout", c.compile_timeout, subject);
  if (j.contains("max_variants"))
    c.max_variants = detail::get_int(j, "max_variants", c.max_variants, subject);
  if (j.contains("body_op"))
    c.body_op = require_operator(detail::get_string(j, "body_op", subject));
  if (j.contains("condition_mode")) {
    auto m = parse_condition_mode(detail::get_string(j, "condition_mode", subject));
    if (!m)
      throw ValidationError(subject, "condition_mode must be generic or context");
    c.condition_mode = *m;
  }
  if (j.contains("in_place"))
    c.in_place = detail::get_bool(j, "in_place", c.in_place, subject);
  if (j.contains("reports")) {
    const auto& r = j["reports"];
    const std::string rs = "config.reports";
    detail::check_keys(r, {"report", "baseline", "format", "column_map", "rules", "root"}, rs);
    ReportInput in;
    in.report = detail::get_string(r, "report", rs);
    if (r.contains("baseline"))
      in.baseline = fs::path(detail::get_string(r, "baseline", rs));
    in.format = detail::get_string_or(r, "format", in.format, rs);
    if (r.contains("column_map"))
      in.column_map = fs::path(detail::get_string(r, "column_map", rs));
    if (r.contains("rules"))
      in.rules = detail::get_strings(r, "rules", rs);
    in.root = detail::get_string_or(r, "root", "", rs);
    c.reports = std::move(in);
  }
  if (j.contains("group_by"))
    c.group_by = detail::get_string(j, "group_by", subject);
  if (j.contains("summary_format"))
    c.summary_format = detail::get_string(j, "summary_format", subject);
  if (j.contains("jobs"))
    c.jobs = detail::get_int(j, "jobs", c.jobs, subject);
  if (j.contains("dry_run"))
    c.dry_run = detail::get_bool(j, "dry_run", c.dry_run, subject);
}

namespace {

void require_path(const fs::path& p, const std::string& what) {
  if (!fs::exists(p))
    throw ValidationError(what, "path does not exist: " + p.string());
}

} // namespace

void validate(const RunConfig& c) {
  require_path(c.registry, "registry");
  require_path(c.api_model, "api_model");
  if (c.project) {
    if (!fs::is_directory(*c.project))
      throw ValidationError("project", "not a directory: " + c.project->string());
  } else if (c.scope != Scope::main) {
    throw ValidationError("project", "a project is required for the " + to_string(c.scope) + " scope");
  } else {
    require_path(c.template_app, "template_app");
  }
  if (c.out_dir.empty())
    throw ValidationError("out_dir", "must not be empty");
  if (c.drift < 0)
    throw ValidationError("drift", "must be >= 0");
  if (c.max_variants < 0)
    throw ValidationError("max_variants", "must be >= 0");
  if (c.jobs < 1)
    throw ValidationError("jobs", "must be >= 1");
  if (c.compile_timeout < 1)
    throw ValidationError("compile_timeout", "must be >= 1");
  for (const auto& op : c.operators)
    if (op != "BASE" && !parse_operator(op))
      throw ValidationError("operators", "unknown operator '" + op + "'");
  if (!parse_group_by(c.group_by))
    throw ValidationError("group_by", "must be operator, case, cluster or scope");
  if (c.summary_format != "text" && c.summary_format != "csv")
    throw ValidationError("summary_format", "must be text or csv");
  if (c.reports) {
    require_path(c.reports->report, "reports.report");
    if (c.reports->baseline)
      require_path(*c.reports->baseline, "reports.baseline");
    if (c.reports->format != "sarif" && c.reports->format != "csv")
      throw ValidationError("reports.format", "must be sarif or csv");
    if (c.reports->column_map)
      require_path(*c.reports->column_map, "reports.column_map");
    if (c.mode != SeedMode::bulk)
      throw ValidationError("reports", "report analysis needs bulk mode (one mutated copy)");
  }
}

Mutant find_mutant(const Registry& registry, const ApiModel& model, std::string_view id, const OperatorConfig& config) {
  auto text = std::string(id);
  auto first = text.find('.');
  auto last = text.rfind('.');
  if (first == std::string::npos || first == last)
    throw NotFoundError("malformed mutant id '" + text + "'");
  const auto& misuse = registry.at(text.substr(0, first));
  auto op_part = text.substr(first + 1, last - first - 1);
  if (op_part == "base") {
    auto base = base_instantiation(misuse, model);
    if (base.id == text)
      return base;
    throw NotFoundError("unknown mutant '" + text + "'");
  }
  OperatorConfig uncapped = config;
  uncapped.max_variants = 0;
  auto dash = op_part.find('-');
  auto op = parse_operator(op_part.substr(0, dash));
  if (!op)
    throw NotFoundError("unknown operator in mutant id '" + text + "'");
  if (dash != std::string::npos) {
    auto body = parse_operator(op_part.substr(dash + 1));
    if (!body)
      throw NotFoundError("unknown body operator in mutant id '" + text + "'");
    uncapped.body_op = body;
  }
  uncapped.condition_mode.reset();
  try {
    for (auto& m : apply_operator(*op, misuse, model, uncapped))
      if (m.id == text)
        return m;
  } catch (const InapplicableOperatorError&) {
  }
  throw NotFoundError("unknown mutant '" + text + "'");
}

std::vector<SeedLocation> locations_for(
    const Mutant& mutant,
    Scope scope,
    const SourceModel& model,
    const Registry& registry,
    const ApiModel& api_model) {
  switch (scope) {
    case Scope::main:
      return locations_main(model);
    case Scope::similarity:
      return locations_similarity(model, registry.at(mutant.case_id), &api_model);
    case Scope::exhaustive: {
      PlacementKinds kinds;
      for (auto k : {LocationKind::method_body_start, LocationKind::statement_in_conditional, LocationKind::class_body,
                     LocationKind::anonymous_inner_body})
        if (mutant.glue.placement_kinds.count(k))
          kinds.insert(k);
      return locations_exhaustive(model, kinds);
    }
  }
  return {};
}

int run_pipeline(const RunConfig& config, std::ostream& log) {
  Registry registry;
  ApiModel api_model;
  std::vector<Mutant> mutants;
  try {
    validate(config);
    registry = load_registry(config.registry);
    api_model = load_api_model(config.api_model);
    OperatorConfig op_config;
    op_config.max_variants = config.max_variants;
    op_config.body_op = config.body_op;
    op_config.condition_mode = config.condition_mode;
    GenerationFilter filter;
    filter.case_ids = config.cases;
    filter.include_base = config.operators.empty();
    for (const auto& op : config.operators) {
      if (op == "BASE")
        filter.include_base = true;
      else
        filter.operators.push_back(require_operator(op));
    }
    mutants = generate_mutants(registry, api_model, op_config, filter);
    // "BASE" alone: an empty operator list would mean every operator.
    if (!config.operators.empty() && filter.operators.empty())
      std::erase_if(mutants, [](const Mutant& m) { return m.op.has_value(); });
  } catch (const Error& e) {
    log << "validation: " << e.what() << "\n";
    return exit_validation;
  }
  log << "generate: " << mutants.size() << " mutants\n";

  auto project = config.project.value_or(config.template_app);
  std::vector<SeedRequest> requests;
  SourceModel source;
  try {
    source = scan(project, &api_model, config.jobs);
    for (const auto& d : source.diagnostics)
      log << "scan: " << to_string(d) << "\n";
    for (const auto& m : mutants)
      for (auto& loc : locations_for(m, config.scope, source, registry, api_model))
        requests.push_back({&m, std::move(loc), config.scope});
  } catch (const Error& e) {
    log << "seeding: " << e.what() << "\n";
    return exit_seeding;
  }
  log << "scan: " << source.files.size() << " files, " << requests.size() << " planned insertions\n";
  if (config.dry_run) {
    log << "dry-run: " << mutants.size() << " mutants x locations = " << requests.size() << " insertions\n";
    return exit_ok;
  }

  auto copies_dir = config.out_dir / "copies";
  auto log_path = config.out_dir / "mutation_log.jsonl";
  SeedResult seeded;
  try {
    fs::remove_all(copies_dir);
    SeedOptions options;
    options.mode = config.mode;
    options.out_dir = copies_dir;
    options.in_place = config.in_place;
    options.jobs = config.jobs;
    seeded = seed(source, requests, options);
    for (const auto& d : seeded.diagnostics)
      log << "seed: " << to_string(d) << "\n";
    emit_log(seeded.records, log_path);
    log << "seed: " << seeded.records.size() << " records in " << seeded.copies.size() << " copies -> "
        << log_path.string() << "\n";

    bool clean = true;
    for (const auto& copy : seeded.copies) {
      auto check = check_syntax(copy);
      for (const auto& e : check.errors)
        log << "check: " << copy.filename().string() << "/" << to_string(e) << "\n";
      clean = clean && check.ok;
    }
    if (!clean) {
      log << "check: syntax errors in mutated copies\n";
      return exit_seeding;
    }
    if (config.compile_command) {
      for (const auto& copy : seeded.copies) {
        auto result = compile_check(copy, *config.compile_command, std::chrono::seconds(config.compile_timeout));
        if (result.exit_status != 0) {
          log << "compile: " << copy.string() << " exited " << result.exit_status << "\n" << result.output;
          return exit_seeding;
        }
      }
      log << "compile: all copies compiled\n";
    }
  } catch (const Error& e) {
    log << "seeding: " << e.what() << "\n";
    return exit_seeding;
  } catch (const fs::filesystem_error& e) {
    log << "seeding: " << e.what() << "\n";
    return exit_seeding;
  }

  if (!config.reports)
    return exit_ok;
  try {
    const auto& in = *config.reports;
    auto root = in.root.empty() ? fs::absolute(copies_dir / "bulk").generic_string() : in.root;
    auto read = [&](const fs::path& p) {
      if (in.format == "sarif")
        return parse_sarif(p, root);
      auto columns = in.column_map ? load_column_map(*in.column_map) : ColumnMap{};
      return parse_tabular(p, columns, root);
    };
    auto mutated = read(in.report);
    for (const auto& d : mutated.diagnostics)
      log << "analyze: " << to_string(d) << "\n";
    auto findings = mutated.findings;
    std::set<std::string> rules(in.rules.begin(), in.rules.end());
    if (!rules.empty())
      findings = filter_rules(findings, rules);
    if (in.baseline) {
      auto base = read(*in.baseline).findings;
      if (!rules.empty())
        base = filter_rules(base, rules);
      findings = baseline_diff(findings, base, config.drift);
    }
    auto report = match(findings, seeded.records, config.drift);
    detail::write_file(config.out_dir / "kill_report.json", to_json(report).dump(2) + "\n");
    auto rows = summarize(report, *parse_group_by(config.group_by), &registry);
    auto table = config.summary_format == "csv" ? format_summary_csv(rows, config.group_by)
                                                : format_summary_text(rows, config.group_by);
    detail::write_file(config.out_dir / (config.summary_format == "csv" ? "summary.csv" : "summary.txt"), table);
    log << table;
  } catch (const Error& e) {
    log << "analysis: " << e.what() << "\n";
    return exit_analysis;
  }
  return exit_ok;
}

} // namespace masc
