// Command-line front end: taxonomy, api-model, generate, scan, seed, check,
// minimize, analyze and run.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "masc/error.hpp"
#include "masc/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string registry;
  std::string api_model;
  bool json = false;
  int jobs = 1;
};

masc::Registry registry_from(const Globals& g) {
  return masc::load_registry(g.registry.empty() ? masc::data_dir() / "registry.json" : fs::path(g.registry));
}

masc::ApiModel model_from(const Globals& g) {
  return masc::load_api_model(g.api_model.empty() ? masc::data_dir() / "api_model.json" : fs::path(g.api_model));
}

std::vector<masc::Operator> operators_from(const std::vector<std::string>& names, bool& include_base) {
  std::vector<masc::Operator> ops;
  include_base = names.empty();
  for (const auto& n : names) {
    if (n == "BASE" || n == "base")
      include_base = true;
    else
      ops.push_back(masc::require_operator(n));
  }
  return ops;
}

std::vector<masc::Mutant> generate(
    const masc::Registry& registry,
    const masc::ApiModel& model,
    const std::vector<std::string>& cases,
    const std::vector<std::string>& operators,
    const masc::OperatorConfig& config) {
  masc::GenerationFilter filter;
  filter.case_ids = cases;
  filter.operators = operators_from(operators, filter.include_base);
  auto mutants = masc::generate_mutants(registry, model, config, filter);
  if (!operators.empty() && filter.operators.empty())
    std::erase_if(mutants, [](const masc::Mutant& m) { return m.op.has_value(); });
  return mutants;
}

masc::Scope scope_from(const std::string& text) {
  auto s = masc::parse_scope(text);
  if (!s)
    throw masc::ValidationError("--scope", "expected main, similarity or exhaustive");
  return *s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation analysis for crypto-API misuse detectors"};
  app.set_version_flag("--version", std::string(MASC_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--registry", g.registry, "Misuse-case registry (JSON)");
  app.add_option("--api-model", g.api_model, "API model (JSON)");
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--jobs", g.jobs, "Worker bound")->check(CLI::PositiveNumber);

  // taxonomy list
  auto* taxonomy = app.add_subcommand("taxonomy", "Inspect the misuse-case registry");
  taxonomy->require_subcommand(1);
  auto* tax_list = taxonomy->add_subcommand("list", "List misuse cases");
  std::string tax_cluster, tax_operator, tax_kind;
  bool tax_selected = false;
  tax_list->add_option("--cluster", tax_cluster, "Only this cluster");
  tax_list->add_option("--operator", tax_operator, "Only cases taking this operator");
  tax_list->add_option("--kind", tax_kind, "restrictive or flexible");
  tax_list->add_flag("--selected", tax_selected, "Only selected cases");

  // api-model show
  auto* api = app.add_subcommand("api-model", "Inspect the API model");
  api->require_subcommand(1);
  auto* api_show = api->add_subcommand("show", "Show API specs and their glue");
  std::string api_name;
  api_show->add_option("name", api_name, "Qualified API type (all when omitted)");

  // generate
  auto* gen = app.add_subcommand("generate", "Instantiate mutants from the registry");
  std::vector<std::string> gen_cases, gen_ops;
  int gen_max = 3;
  std::string gen_body, gen_condition, gen_out;
  gen->add_option("--cases", gen_cases, "Case ids (default: every selected case)")->delimiter(',');
  gen->add_option("--operators", gen_ops, "OP1..OP12 and/or BASE")->delimiter(',');
  gen->add_option("--max-variants", gen_max, "Variants per operator and case (0 = all)");
  gen->add_option("--body-op", gen_body, "OP7, OP8 or OP9 for OP10-OP12");
  gen->add_option("--condition", gen_condition, "generic or context");
  gen->add_option("--out", gen_out, "Write JSON to this file");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "List seed locations in a project");
  std::string scan_project, scan_scope = "exhaustive", scan_case;
  scan_cmd->add_option("--project", scan_project, "Java project root")->required();
  scan_cmd->add_option("--scope", scan_scope, "main, similarity or exhaustive");
  scan_cmd->add_option("--case", scan_case, "Case whose API similarity scope follows");

  // seed
  auto* seed_cmd = app.add_subcommand("seed", "Seed mutants into project copies");
  std::string seed_project, seed_scope = "exhaustive", seed_mode = "bulk", seed_out, seed_log;
  std::vector<std::string> seed_cases, seed_ops;
  int seed_max = 3;
  bool seed_in_place = false;
  seed_cmd->add_option("--project", seed_project, "Java project root")->required();
  seed_cmd->add_option("--scope", seed_scope, "main, similarity or exhaustive");
  seed_cmd->add_option("--cases", seed_cases, "Case ids (default: every selected case)")->delimiter(',');
  seed_cmd->add_option("--operators", seed_ops, "OP1..OP12 and/or BASE")->delimiter(',');
  seed_cmd->add_option("--mode", seed_mode, "bulk or isolated");
  seed_cmd->add_option("--out", seed_out, "Directory for the copies (must be empty)")->required();
  seed_cmd->add_option("--log", seed_log, "Mutation log path (default OUT/mutation_log.jsonl)");
  seed_cmd->add_option("--max-variants", seed_max, "Variants per operator and case (0 = all)");
  seed_cmd->add_flag("--in-place", seed_in_place, "Rewrite existing call arguments (similarity scope)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Syntax-check (and optionally compile) a mutated copy");
  std::string check_copy, check_compile;
  int check_timeout = 300;
  check_cmd->add_option("--copy", check_copy, "Mutated copy to check")->required();
  check_cmd->add_option("--compile-cmd", check_compile, "Shell command; {} becomes the copy path");
  check_cmd->add_option("--timeout", check_timeout, "Compile timeout in seconds");

  // minimize
  auto* min_cmd = app.add_subcommand("minimize", "Write a single-mutant app");
  std::string min_mutant, min_out, min_template;
  min_cmd->add_option("--mutant", min_mutant, "Mutant id, e.g. des-cipher.op4.1")->required();
  min_cmd->add_option("--out", min_out, "Directory for the app")->required();
  min_cmd->add_option("--template", min_template, "Template app (default: bundled)");

  // analyze
  auto* an = app.add_subcommand("analyze", "Match detector findings against a mutation log");
  std::string an_log, an_report, an_baseline, an_format = "sarif", an_map, an_out, an_root, an_group = "operator",
                                               an_table = "text";
  std::vector<std::string> an_rules;
  int an_drift = 3;
  an->add_option("--log", an_log, "Mutation log (JSONL)")->required();
  an->add_option("--report", an_report, "Detector report on the mutated copy")->required();
  an->add_option("--baseline", an_baseline, "Detector report on the original project");
  an->add_option("--report-format", an_format, "sarif or csv");
  an->add_option("--column-map", an_map, "Column map for csv reports");
  an->add_option("--drift", an_drift, "Line window for matching (default 3)");
  an->add_option("--rules", an_rules, "Rule ids to keep")->delimiter(',');
  an->add_option("--root", an_root, "Path prefix stripped from report paths");
  an->add_option("--out", an_out, "KillReport JSON path")->required();
  an->add_option("--group-by", an_group, "operator, case, cluster or scope");
  an->add_option("--format", an_table, "Summary table: text or csv");

  // run
  auto* run_cmd = app.add_subcommand("run", "Full pipeline from a config file and flags");
  std::string run_config, run_project, run_scope, run_mode, run_out, run_report, run_baseline, run_report_format;
  std::vector<std::string> run_cases, run_ops;
  bool run_dry = false;
  run_cmd->add_option("--config", run_config, "JSON run configuration; flags override it");
  run_cmd->add_option("--project", run_project, "Java project root");
  run_cmd->add_option("--scope", run_scope, "main, similarity or exhaustive");
  run_cmd->add_option("--mode", run_mode, "bulk or isolated");
  run_cmd->add_option("--cases", run_cases, "Case ids (default: every selected case)")->delimiter(',');
  run_cmd->add_option("--operators", run_ops, "OP1..OP12 and/or BASE")->delimiter(',');
  run_cmd->add_option("--out", run_out, "Output root");
  run_cmd->add_option("--report", run_report, "Detector report on the bulk copy");
  run_cmd->add_option("--baseline", run_baseline, "Detector report on the original project");
  run_cmd->add_option("--report-format", run_report_format, "sarif or csv");
  run_cmd->add_flag("--dry-run", run_dry, "Print planned counts without writing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : masc::exit_usage;
  }

  int stage = masc::exit_validation;
  try {
    if (*tax_list) {
      auto registry = registry_from(g);
      masc::CaseFilter filter;
      if (!tax_cluster.empty())
        filter.cluster = tax_cluster;
      if (!tax_operator.empty())
        filter.op = masc::require_operator(tax_operator);
      if (!tax_kind.empty()) {
        filter.api_kind = masc::parse_api_kind(tax_kind);
        if (!filter.api_kind)
          throw masc::ValidationError("--kind", "expected restrictive or flexible");
      }
      filter.selected_only = tax_selected;
      auto cases = masc::list_cases(registry, filter);
      if (g.json) {
        auto out = json::array();
        for (const auto* c : cases) {
          auto ops = json::array();
          for (auto op : c->applicable_operators)
            ops.push_back(masc::to_string(op));
          auto tags = json::array();
          for (auto t : c->threat_tags)
            tags.push_back(masc::to_string(t));
          out.push_back({{"id", c->id},
                         {"cluster", c->cluster},
                         {"api_kind", masc::to_string(c->api_kind)},
                         {"target_api", c->target_api},
                         {"insecure_arguments", c->insecure_arguments},
                         {"operators", ops},
                         {"threat_tags", tags},
                         {"selected", c->selected},
                         {"description", c->description}});
        }
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto* c : cases) {
          std::string ops;
          for (auto op : c->applicable_operators)
            ops += (ops.empty() ? "" : ",") + masc::to_string(op);
          std::cout << c->id << "\t" << c->cluster << "\t" << masc::to_string(c->api_kind) << "\t" << ops
                    << (c->selected ? "" : "\t(not selected)") << "\n";
        }
      }
      return 0;
    }

    if (*api_show) {
      auto model = model_from(g);
      std::vector<const masc::ApiSpec*> specs;
      if (api_name.empty())
        for (const auto& s : model.apis())
          specs.push_back(&s);
      else
        specs.push_back(&masc::lookup(model, api_name));
      auto out = json::array();
      for (const auto* s : specs) {
        auto form = s->kind == masc::ApiKind::restrictive ? masc::SnippetForm::statement : masc::SnippetForm::declaration;
        auto glue = masc::glue_for(model, *s, form);
        if (g.json) {
          out.push_back({{"name", s->qualified_name},
                         {"kind", masc::to_string(s->kind)},
                         {"form", masc::to_string(form)},
                         {"glue", masc::to_json(glue)}});
        } else {
          std::cout << s->qualified_name << " (" << masc::to_string(s->kind) << ", " << masc::to_string(form)
                    << " form)\n";
          for (const auto& i : glue.imports)
            std::cout << "  import " << i << "\n";
          if (glue.try_catch)
            for (const auto& e : *glue.try_catch)
              std::cout << "  catch " << e << "\n";
          for (const auto& stub : glue.stub_methods)
            std::cout << "  stub " << stub.method.signature_text() << "\n";
        }
      }
      if (g.json)
        std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*gen) {
      auto registry = registry_from(g);
      auto model = model_from(g);
      masc::OperatorConfig config;
      config.max_variants = gen_max;
      if (!gen_body.empty())
        config.body_op = masc::require_operator(gen_body);
      if (!gen_condition.empty()) {
        config.condition_mode = masc::parse_condition_mode(gen_condition);
        if (!config.condition_mode)
          throw masc::ValidationError("--condition", "expected generic or context");
      }
      auto mutants = generate(registry, model, gen_cases, gen_ops, config);
      auto out = json::array();
      for (const auto& m : mutants)
        out.push_back(masc::to_json(m));
      if (!gen_out.empty()) {
        std::ofstream(gen_out) << out.dump(2) << "\n";
        std::cerr << "generate: " << mutants.size() << " mutants -> " << gen_out << "\n";
      } else if (g.json) {
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& m : mutants)
          std::cout << "// " << m.id << " [" << m.operator_label() << "]\n" << masc::snippet_text(m) << "\n\n";
      }
      return 0;
    }

    if (*scan_cmd) {
      auto model = model_from(g);
      auto scope = scope_from(scan_scope);
      stage = masc::exit_seeding;
      auto source = masc::scan(scan_project, &model, g.jobs);
      for (const auto& d : source.diagnostics)
        std::cerr << "scan: " << masc::to_string(d) << "\n";
      std::vector<masc::SeedLocation> locations;
      if (scope == masc::Scope::main) {
        locations = masc::locations_main(source);
      } else if (scope == masc::Scope::similarity) {
        if (scan_case.empty())
          throw masc::ValidationError("--case", "similarity scope needs a case");
        auto registry = registry_from(g);
        locations = masc::locations_similarity(source, registry.at(scan_case), &model);
      } else {
        masc::PlacementKinds kinds{masc::LocationKind::method_body_start, masc::LocationKind::statement_in_conditional,
                                   masc::LocationKind::class_body, masc::LocationKind::anonymous_inner_body};
        if (!scan_case.empty()) {
          auto registry = registry_from(g);
          if (registry.at(scan_case).api_kind == masc::ApiKind::restrictive) {
            kinds.erase(masc::LocationKind::class_body);
            kinds.erase(masc::LocationKind::anonymous_inner_body);
          }
        }
        locations = masc::locations_exhaustive(source, kinds);
      }
      if (g.json) {
        auto out = json::array();
        for (const auto& l : locations)
          out.push_back(masc::to_json(l));
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& l : locations)
          std::cout << l.file << ":" << l.anchor.line << ":" << l.anchor.column << "\t" << masc::to_string(l.kind)
                    << "\t" << l.enclosing_class << "\t" << l.enclosing_method.value_or("") << "\n";
      }
      return 0;
    }

    if (*seed_cmd) {
      auto registry = registry_from(g);
      auto model = model_from(g);
      auto scope = scope_from(seed_scope);
      auto mode = masc::parse_seed_mode(seed_mode);
      if (!mode)
        throw masc::ValidationError("--mode", "expected bulk or isolated");
      masc::OperatorConfig config;
      config.max_variants = seed_max;
      auto mutants = generate(registry, model, seed_cases, seed_ops, config);
      stage = masc::exit_seeding;
      auto source = masc::scan(seed_project, &model, g.jobs);
      for (const auto& d : source.diagnostics)
        std::cerr << "scan: " << masc::to_string(d) << "\n";
      std::vector<masc::SeedRequest> requests;
      for (const auto& m : mutants)
        for (auto& loc : masc::locations_for(m, scope, source, registry, model))
          requests.push_back({&m, std::move(loc), scope});
      masc::SeedOptions options;
      options.mode = *mode;
      options.out_dir = seed_out;
      options.in_place = seed_in_place;
      options.jobs = g.jobs;
      auto result = masc::seed(source, requests, options);
      for (const auto& d : result.diagnostics)
        std::cerr << "seed: " << masc::to_string(d) << "\n";
      auto log_path = seed_log.empty() ? fs::path(seed_out) / "mutation_log.jsonl" : fs::path(seed_log);
      masc::emit_log(result.records, log_path);
      std::cerr << "seed: " << result.records.size() << " records, " << result.copies.size() << " copies -> "
                << log_path.string() << "\n";
      if (g.json)
        std::cout << json{{"records", result.records.size()},
                          {"copies", result.copies.size()},
                          {"diagnostics", result.diagnostics.size()},
                          {"log", log_path.string()}}
                         .dump()
                  << "\n";
      return 0;
    }

    if (*check_cmd) {
      stage = masc::exit_seeding;
      auto result = masc::check_syntax(check_copy);
      for (const auto& e : result.errors)
        std::cerr << "check: " << masc::to_string(e) << "\n";
      json out{{"ok", result.ok}, {"errors", result.errors.size()}};
      int status = result.ok ? 0 : masc::exit_seeding;
      auto command = check_compile.empty() ? masc::default_compile_command() : std::optional(check_compile);
      if (command) {
        auto compiled = masc::compile_check(check_copy, *command, std::chrono::seconds(check_timeout));
        out["compile_exit_status"] = compiled.exit_status;
        std::cerr << compiled.output;
        if (compiled.exit_status != 0)
          status = masc::exit_seeding;
      }
      if (g.json)
        std::cout << out.dump() << "\n";
      else
        std::cout << (status == 0 ? "ok" : "failed") << "\n";
      return status;
    }

    if (*min_cmd) {
      auto registry = registry_from(g);
      auto model = model_from(g);
      auto mutant = masc::find_mutant(registry, model, min_mutant);
      stage = masc::exit_seeding;
      auto template_dir = min_template.empty() ? masc::data_dir() / "template-app" : fs::path(min_template);
      auto records = masc::generate_minimal_app(mutant, model, template_dir, min_out);
      auto check = masc::check_syntax(min_out);
      for (const auto& e : check.errors)
        std::cerr << "check: " << masc::to_string(e) << "\n";
      std::cerr << "minimize: " << mutant.id << " -> " << min_out << "\n";
      if (g.json)
        std::cout << masc::to_json(records.front()).dump() << "\n";
      return check.ok ? 0 : masc::exit_seeding;
    }

    if (*an) {
      auto group = masc::parse_group_by(an_group);
      if (!group)
        throw masc::ValidationError("--group-by", "expected operator, case, cluster or scope");
      if (an_table != "text" && an_table != "csv")
        throw masc::ValidationError("--format", "expected text or csv");
      if (an_format != "sarif" && an_format != "csv")
        throw masc::ValidationError("--report-format", "expected sarif or csv");
      stage = masc::exit_analysis;
      auto records = masc::load_log(an_log);
      auto read = [&](const std::string& path) {
        if (an_format == "sarif")
          return masc::parse_sarif(path, an_root);
        auto columns = an_map.empty() ? masc::ColumnMap{} : masc::load_column_map(an_map);
        return masc::parse_tabular(path, columns, an_root);
      };
      auto mutated = read(an_report);
      for (const auto& d : mutated.diagnostics)
        std::cerr << "analyze: " << masc::to_string(d) << "\n";
      std::set<std::string> rules(an_rules.begin(), an_rules.end());
      auto findings = rules.empty() ? mutated.findings : masc::filter_rules(mutated.findings, rules);
      if (!an_baseline.empty()) {
        auto base = read(an_baseline).findings;
        if (!rules.empty())
          base = masc::filter_rules(base, rules);
        findings = masc::baseline_diff(findings, base, an_drift);
      }
      auto report = masc::match(findings, records, an_drift);
      std::ofstream(an_out) << masc::to_json(report).dump(2) << "\n";
      std::optional<masc::Registry> registry;
      if (*group == masc::GroupBy::cluster)
        registry = registry_from(g);
      auto rows = masc::summarize(report, *group, registry ? &*registry : nullptr);
      if (g.json) {
        auto out = json::array();
        for (const auto& r : rows)
          out.push_back({{"group", r.group},
                         {"total", r.total},
                         {"killed", r.killed},
                         {"unkilled", r.unkilled},
                         {"kill_ratio", r.kill_ratio}});
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << (an_table == "csv" ? masc::format_summary_csv(rows, an_group)
                                        : masc::format_summary_text(rows, an_group));
      }
      return 0;
    }

    if (*run_cmd) {
      auto config = masc::default_run_config();
      if (!g.registry.empty())
        config.registry = g.registry;
      if (!g.api_model.empty())
        config.api_model = g.api_model;
      if (!run_config.empty()) {
        std::ifstream in(run_config);
        if (!in)
          throw masc::IoError("cannot read " + run_config);
        json j;
        try {
          in >> j;
        } catch (const json::parse_error& e) {
          throw masc::ParseError(run_config + ": " + e.what());
        }
        masc::apply_config_json(config, j);
      }
      if (!run_project.empty())
        config.project = fs::path(run_project);
      if (!run_scope.empty())
        config.scope = scope_from(run_scope);
      if (!run_mode.empty()) {
        auto m = masc::parse_seed_mode(run_mode);
        if (!m)
          throw masc::ValidationError("--mode", "expected bulk or isolated");
        config.mode = *m;
      }
      if (!run_cases.empty())
        config.cases = run_cases;
      if (!run_ops.empty())
        config.operators = run_ops;
      if (!run_out.empty())
        config.out_dir = run_out;
      if (!run_report.empty()) {
        if (!config.reports)
          config.reports = masc::ReportInput{};
        config.reports->report = run_report;
      }
      if (!run_baseline.empty() && config.reports)
        config.reports->baseline = fs::path(run_baseline);
      if (!run_report_format.empty() && config.reports)
        config.reports->format = run_report_format;
      if (app.get_option("--jobs")->count())
        config.jobs = g.jobs;
      config.dry_run = config.dry_run || run_dry;
      return masc::run_pipeline(config, std::cerr);
    }
  } catch (const masc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return stage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return stage;
  }
  return masc::exit_usage;
}
