#include "masc/seeder.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <fcntl.h>
#include <future>
#include <map>
#include <poll.h>
#include <regex>
#include <sys/wait.h>
#include <unistd.h>

#include "json_util.hpp"
#include "masc/digest.hpp"
#include "masc/error.hpp"

#ifndef MASC_DATA_DIR
#define MASC_DATA_DIR "data"
#endif

namespace masc {

namespace fs = std::filesystem;

std::string to_string(Scope scope) {
  switch (scope) {
    case Scope::main:
      return "main";
    case Scope::similarity:
      return "similarity";
    case Scope::exhaustive:
      return "exhaustive";
  }
  return "exhaustive";
}

std::optional<Scope> parse_scope(std::string_view text) {
  if (text == "main")
    return Scope::main;
  if (text == "similarity")
    return Scope::similarity;
  if (text == "exhaustive")
    return Scope::exhaustive;
  return std::nullopt;
}

std::string to_string(SeedMode mode) {
  return mode == SeedMode::bulk ? "bulk" : "isolated";
}

std::optional<SeedMode> parse_seed_mode(std::string_view text) {
  if (text == "bulk")
    return SeedMode::bulk;
  if (text == "isolated")
    return SeedMode::isolated;
  return std::nullopt;
}

nlohmann::json to_json(const MutationRecord& r) {
  return nlohmann::json{
      {"mutant_id", r.mutant_id},
      {"case_id", r.case_id},
      {"operator_id", r.operator_id},
      {"scope", r.scope},
      {"file", r.file},
      {"class", r.class_name},
      {"method", r.method},
      {"start_line", r.start_line},
      {"end_line", r.end_line},
      {"digest", r.digest},
      {"output_copy", r.output_copy},
  };
}

MutationRecord record_from_json(const nlohmann::json& j) {
  const std::string subject = "mutation record";
  detail::check_keys(
      j,
      {"mutant_id", "case_id", "operator_id", "scope", "file", "class", "method", "start_line", "end_line", "digest",
       "output_copy"},
      subject);
  MutationRecord r;
  r.mutant_id = detail::get_string(j, "mutant_id", subject);
  r.case_id = detail::get_string(j, "case_id", subject);
  r.operator_id = detail::get_string(j, "operator_id", subject);
  r.scope = detail::get_string(j, "scope", subject);
  r.file = detail::get_string(j, "file", subject);
  r.class_name = detail::get_string(j, "class", subject);
  r.method = detail::get_string(j, "method", subject);
  for (auto [key, target] : {std::pair{"start_line", &r.start_line}, std::pair{"end_line", &r.end_line}}) {
    const auto& v = detail::required(j, key, subject);
    if (!v.is_number_integer())
      throw ValidationError(subject, std::string("field '") + key + "' must be an integer");
    *target = v.get<int>();
  }
  r.digest = detail::get_string(j, "digest", subject);
  r.output_copy = detail::get_string(j, "output_copy", subject);
  if (r.start_line < 1 || r.end_line < r.start_line)
    throw ValidationError(subject, "bad line span for " + r.mutant_id);
  return r;
}

namespace {

struct Edit {
  std::size_t begin = 0;
  std::size_t end = 0; // == begin for insertions
  std::string text;
  /// Per-record content ranges inside `text`.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> contents; // (record slot, from, to)
  int order = 0;
};

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

/// Replaces identifier tokens equal to a key (not preceded by '.') with the
/// mapped text, leaving literals and comments alone.
std::string rewrite_identifiers(const std::string& code, const std::map<std::string, std::string>& names) {
  if (names.empty())
    return code;
  std::string out;
  std::size_t i = 0;
  char last_significant = 0;
  while (i < code.size()) {
    char c = code[i];
    if (c == '"' || c == '\'') {
      auto j = i + 1;
      while (j < code.size() && code[j] != c)
        j += code[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, code.size());
      out.append(code, i, j - i);
      i = j;
      last_significant = c;
      continue;
    }
    if (c == '/' && i + 1 < code.size() && (code[i + 1] == '/' || code[i + 1] == '*')) {
      auto j = code[i + 1] == '/' ? code.find('\n', i) : code.find("*/", i + 2);
      j = j == std::string::npos ? code.size() : (code[i + 1] == '/' ? j : j + 2);
      out.append(code, i, j - i);
      i = j;
      continue;
    }
    if (is_identifier_char(c) && !std::isdigit(static_cast<unsigned char>(c))) {
      auto j = i;
      while (j < code.size() && is_identifier_char(code[j]))
        ++j;
      auto word = code.substr(i, j - i);
      auto it = names.find(word);
      out += (it != names.end() && last_significant != '.') ? it->second : word;
      last_significant = 'a';
      i = j;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c)))
      last_significant = c;
    out += c;
    ++i;
  }
  return out;
}

/// Appends `_k` to every generated identifier so helpers never collide
/// within a copy.
std::string suffix_fresh_names(const std::string& code, int k) {
  static const std::regex fresh(R"(\b((?:masc|Masc)[A-Z]\w*\d+)\b)");
  return std::regex_replace(code, fresh, "$1_" + std::to_string(k));
}

bool mentions_identifier(const std::string& code, const std::string& name) {
  for (auto pos = code.find(name); pos != std::string::npos; pos = code.find(name, pos + 1)) {
    bool left = pos == 0 || !is_identifier_char(code[pos - 1]);
    auto end = pos + name.size();
    bool right = end == code.size() || !is_identifier_char(code[end]);
    if (left && right)
      return true;
  }
  return false;
}

std::string indent_block(const std::string& block, const std::string& indent) {
  std::string out;
  std::size_t start = 0;
  while (start <= block.size()) {
    auto end = block.find('\n', start);
    if (end == std::string::npos)
      end = block.size();
    auto line = block.substr(start, end - start);
    if (!line.empty())
      out += indent + line;
    out += '\n';
    start = end + 1;
  }
  return out;
}

std::string simple_name_of(const std::string& qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string::npos ? qualified : qualified.substr(dot + 1);
}

struct FileRecord {
  std::size_t slot = 0;
  MutationRecord record;
};

struct FileOutcome {
  std::vector<FileRecord> records;
  std::vector<Diagnostic> diagnostics;
  std::optional<std::string> text;
};

struct PendingItem {
  std::size_t slot = 0; // position in the overall request order
  const SeedRequest* request = nullptr;
  int k = 0;
};

std::size_t import_offset(const SourceFile& file) {
  const auto& src = file.tree->source();
  std::size_t after = std::string::npos;
  for (auto child : named_children(file.tree->root())) {
    auto type = node_type(child);
    if (type == "import_declaration" || type == "package_declaration")
      after = ts_node_end_byte(child);
  }
  if (after == std::string::npos)
    return 0;
  auto nl = src.find('\n', after);
  return nl == std::string::npos ? src.size() : nl + 1;
}

FileOutcome seed_file(
    const SourceModel& model,
    const SourceFile& file,
    const std::vector<PendingItem>& items,
    const std::string& copy_id,
    bool in_place) {
  FileOutcome outcome;
  const auto& src = file.tree->source();

  std::map<std::string, std::string> explicit_imports; // simple -> fqn
  std::set<std::string> wildcard_packages;
  for (const auto& imp : file.imports) {
    if (imp.ends_with(".*"))
      wildcard_packages.insert(imp.substr(0, imp.size() - 2));
    else
      explicit_imports[simple_name_of(imp)] = imp;
  }
  std::set<std::string> local_names;
  for (const auto& t : file.declared_types)
    local_names.insert(simple_name_of(t));
  for (const auto& other : model.files)
    if (other.package == file.package)
      for (const auto& t : other.declared_types)
        if (package_of(t) == file.package)
          local_names.insert(simple_name_of(t));

  std::map<std::string, std::string> added_imports; // simple -> fqn
  std::vector<Edit> edits;
  std::vector<std::string> helpers;
  std::set<int> claimed_lines;
  int order = 0;

  for (const auto& item : items) {
    const auto& request = *item.request;
    const auto& mutant = *request.mutant;
    const auto& loc = request.location;
    if (!mutant.glue.placement_kinds.count(loc.kind)) {
      outcome.diagnostics.push_back(
          {file.path, loc.anchor.line,
           mutant.id + ": " + to_string(mutant.form) + "-form mutant cannot be placed at a " + to_string(loc.kind) +
               " location; skipped"});
      continue;
    }

    bool rewrite = in_place && loc.usage_argument && mutant.inline_argument;

    std::map<std::string, std::string> qualify;
    std::vector<std::string> needed;
    for (const auto& fqn : mutant.glue.imports) {
      auto simple = simple_name_of(fqn);
      // A rewritten argument sits in existing code; only its own types matter.
      if (rewrite && !mentions_identifier(*mutant.inline_argument, simple))
        continue;
      auto exp = explicit_imports.find(simple);
      if (exp != explicit_imports.end() && exp->second == fqn)
        continue;
      auto added = added_imports.find(simple);
      bool clash = (exp != explicit_imports.end()) || local_names.count(simple) ||
                   (added != added_imports.end() && added->second != fqn);
      if (clash) {
        qualify[simple] = fqn;
        outcome.diagnostics.push_back(
            {file.path, loc.anchor.line,
             mutant.id + ": simple name " + simple + " is taken; using " + fqn + " fully qualified"});
        continue;
      }
      if (package_of(fqn) == file.package || wildcard_packages.count(package_of(fqn)))
        continue;
      needed.push_back(fqn);
    }

    auto prepare = [&](const std::string& code) { return suffix_fresh_names(rewrite_identifiers(code, qualify), item.k); };

    if (rewrite) {
      const auto& range = *loc.usage_argument;
      int first = 1 + static_cast<int>(std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(range.begin), '\n'));
      int last = first + static_cast<int>(std::count(
                             src.begin() + static_cast<std::ptrdiff_t>(range.begin),
                             src.begin() + static_cast<std::ptrdiff_t>(range.end), '\n'));
      bool taken = false;
      for (int l = first; l <= last; ++l)
        taken = taken || claimed_lines.count(l);
      if (taken) {
        outcome.diagnostics.push_back(
            {file.path, first, mutant.id + ": usage on this line was already rewritten; skipped"});
        continue;
      }
      for (int l = first; l <= last; ++l)
        claimed_lines.insert(l);
      Edit e;
      e.begin = range.begin;
      e.end = range.end;
      e.text = prepare(*mutant.inline_argument);
      e.contents.emplace_back(item.slot, 0, e.text.size());
      e.order = order++;
      edits.push_back(std::move(e));
    } else {
      auto block = prepare(render_body(mutant));
      auto offset = loc.anchor.offset;
      auto line_start = offset == 0 ? std::string::npos : src.rfind('\n', offset - 1);
      line_start = line_start == std::string::npos ? 0 : line_start + 1;
      auto line_end = src.find('\n', offset);
      auto only_ws = [&](std::size_t a, std::size_t b) {
        for (auto i = a; i < b; ++i)
          if (!std::isspace(static_cast<unsigned char>(src[i])))
            return false;
        return true;
      };
      Edit e;
      std::string lead;
      if (only_ws(line_start, offset)) {
        e.begin = line_start;
      } else if (only_ws(offset, line_end == std::string::npos ? src.size() : line_end)) {
        e.begin = line_end == std::string::npos ? src.size() : line_end + 1;
        if (line_end == std::string::npos)
          lead = "\n";
      } else {
        e.begin = offset;
        lead = "\n";
      }
      e.end = e.begin;
      auto body = indent_block(block, loc.indent);
      e.text = lead + body;
      e.contents.emplace_back(item.slot, lead.size(), lead.size() + body.size() - 1);
      e.order = order++;
      edits.push_back(std::move(e));
    }

    for (const auto& fqn : needed)
      added_imports[simple_name_of(fqn)] = fqn;
    for (const auto& helper : mutant.snippet.helper_declarations)
      helpers.push_back(prepare(helper));

    MutationRecord r;
    r.mutant_id = mutant.id;
    r.case_id = mutant.case_id;
    r.operator_id = mutant.operator_label();
    r.scope = to_string(request.scope);
    r.file = file.path;
    r.class_name = loc.enclosing_class;
    r.method = loc.enclosing_method.value_or("");
    r.output_copy = copy_id;
    outcome.records.push_back({item.slot, std::move(r)});
  }

  if (outcome.records.empty())
    return outcome;

  if (!added_imports.empty()) {
    std::set<std::string> sorted;
    for (const auto& [simple, fqn] : added_imports)
      sorted.insert(fqn);
    Edit e;
    e.begin = e.end = import_offset(file);
    if (e.begin > 0 && src[e.begin - 1] != '\n')
      e.text = "\n";
    for (const auto& fqn : sorted)
      e.text += "import " + fqn + ";\n";
    if (e.begin == 0)
      e.text += "\n";
    e.order = -1;
    edits.push_back(std::move(e));
  }
  if (!helpers.empty()) {
    Edit e;
    e.begin = e.end = src.size();
    e.text = (src.empty() || src.back() == '\n') ? "" : "\n";
    for (const auto& helper : helpers)
      e.text += "\n" + helper + "\n";
    e.order = order++;
    edits.push_back(std::move(e));
  }

  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return std::tie(a.begin, a.order) < std::tie(b.begin, b.order);
  });

  std::string out;
  out.reserve(src.size() + 1024);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> spans; // slot -> output byte range
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    if (e.begin < cursor)
      throw Error("overlapping edits in " + file.path);
    out.append(src, cursor, e.begin - cursor);
    auto base = out.size();
    out += e.text;
    for (const auto& [slot, from, to] : e.contents)
      spans[slot] = {base + from, base + to};
    cursor = e.end;
  }
  out.append(src, cursor, std::string::npos);

  std::vector<std::size_t> line_starts{0};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] == '\n')
      line_starts.push_back(i + 1);
  auto line_of = [&](std::size_t pos) {
    return static_cast<int>(std::upper_bound(line_starts.begin(), line_starts.end(), pos) - line_starts.begin());
  };
  for (auto& fr : outcome.records) {
    auto [from, to] = spans.at(fr.slot);
    fr.record.start_line = line_of(from);
    fr.record.end_line = line_of(to == from ? from : to - 1);
    auto a = line_starts[static_cast<std::size_t>(fr.record.start_line - 1)];
    auto b = static_cast<std::size_t>(fr.record.end_line) < line_starts.size()
                 ? line_starts[static_cast<std::size_t>(fr.record.end_line)] - 1
                 : out.size();
    fr.record.digest = sha256_hex(std::string_view(out).substr(a, b - a));
  }
  outcome.text = std::move(out);
  return outcome;
}

struct CopyOutcome {
  std::vector<FileRecord> records; // sorted by slot
  std::vector<Diagnostic> diagnostics;
};

/// Seeds `items` into an existing project copy at `dir`.
CopyOutcome seed_into(
    const SourceModel& model,
    const std::vector<PendingItem>& items,
    const fs::path& dir,
    const std::string& copy_id,
    bool in_place,
    int jobs) {
  std::map<std::string, std::vector<PendingItem>> per_file;
  CopyOutcome result;
  for (const auto& item : items) {
    if (!model.find_file(item.request->location.file)) {
      result.diagnostics.push_back(
          {item.request->location.file, item.request->location.anchor.line,
           item.request->mutant->id + ": file is not part of the scanned model; skipped"});
      continue;
    }
    per_file[item.request->location.file].push_back(item);
  }
  std::vector<std::pair<const SourceFile*, const std::vector<PendingItem>*>> work;
  for (const auto& [path, list] : per_file)
    work.emplace_back(model.find_file(path), &list);

  std::vector<FileOutcome> outcomes(work.size());
  auto run = [&](std::size_t i) {
    outcomes[i] = seed_file(model, *work[i].first, *work[i].second, copy_id, in_place);
    if (outcomes[i].text)
      detail::write_file(dir / work[i].first->path, *outcomes[i].text);
  };
  auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), std::max<std::size_t>(1, work.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < work.size(); ++i)
      run(i);
  } else {
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (auto i = w; i < work.size(); i += workers)
          run(i);
      }));
    for (auto& t : tasks)
      t.get();
  }

  for (auto& o : outcomes) {
    for (auto& r : o.records)
      result.records.push_back(std::move(r));
    for (auto& d : o.diagnostics)
      result.diagnostics.push_back(std::move(d));
  }
  std::sort(result.records.begin(), result.records.end(), [](const FileRecord& a, const FileRecord& b) {
    return a.slot < b.slot;
  });
  return result;
}

bool is_within(const fs::path& inner, const fs::path& outer) {
  auto a = fs::weakly_canonical(inner);
  auto b = fs::weakly_canonical(outer);
  auto rel = a.lexically_relative(b);
  return !rel.empty() && *rel.begin() != "..";
}

void fresh_copy(const fs::path& from, const fs::path& to) {
  if (fs::exists(to) && !fs::is_empty(to))
    throw ValidationError(to.string(), "output directory already exists and is not empty");
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive);
}

} // namespace

SeedResult seed(const SourceModel& model, const std::vector<SeedRequest>& requests, const SeedOptions& options) {
  if (options.out_dir.empty())
    throw ValidationError("out_dir", "output directory is required");
  if (is_within(options.out_dir, model.root))
    throw ValidationError(options.out_dir.string(), "output directory must be outside the project");
  for (const auto& r : requests)
    if (!r.mutant)
      throw ValidationError("seed request", "missing mutant");

  std::vector<std::pair<std::string, std::vector<PendingItem>>> copies;
  if (options.mode == SeedMode::bulk) {
    copies.emplace_back("bulk", std::vector<PendingItem>{});
    for (std::size_t i = 0; i < requests.size(); ++i)
      copies.front().second.push_back({i, &requests[i], static_cast<int>(i + 1)});
  } else {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < requests.size(); ++i) {
      const auto& id = requests[i].mutant->id;
      auto [it, fresh] = index.emplace(id, copies.size());
      if (fresh)
        copies.emplace_back(id, std::vector<PendingItem>{});
      auto& list = copies[it->second].second;
      list.push_back({i, &requests[i], static_cast<int>(list.size() + 1)});
    }
  }

  SeedResult result;
  std::vector<CopyOutcome> parts(copies.size());
  auto run = [&](std::size_t c, int file_jobs) {
    auto dir = options.out_dir / copies[c].first;
    fresh_copy(model.root, dir);
    parts[c] = seed_into(model, copies[c].second, dir, copies[c].first, options.in_place, file_jobs);
  };
  auto jobs = std::max(1, options.jobs);
  if (options.mode == SeedMode::bulk || jobs == 1 || copies.size() <= 1) {
    for (std::size_t c = 0; c < copies.size(); ++c)
      run(c, options.mode == SeedMode::bulk ? jobs : 1);
  } else {
    auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), copies.size());
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (auto c = w; c < copies.size(); c += workers)
          run(c, 1);
      }));
    for (auto& t : tasks)
      t.get();
  }

  std::vector<FileRecord> ordered;
  for (std::size_t c = 0; c < copies.size(); ++c) {
    for (auto& r : parts[c].records)
      ordered.push_back(std::move(r));
    for (auto& d : parts[c].diagnostics)
      result.diagnostics.push_back(std::move(d));
    result.copies.push_back(options.out_dir / copies[c].first);
  }
  std::sort(ordered.begin(), ordered.end(), [](const FileRecord& a, const FileRecord& b) { return a.slot < b.slot; });
  for (auto& r : ordered)
    result.records.push_back(std::move(r.record));
  return result;
}

CheckResult check_syntax(const fs::path& copy) {
  if (!fs::is_directory(copy))
    throw NotFoundError("copy not found: " + copy.string());
  CheckResult result;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(copy))
    if (entry.is_regular_file() && entry.path().extension() == ".java")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    JavaTree tree(detail::read_file(path));
    auto rel = fs::relative(path, copy).generic_string();
    for (const auto& issue : tree.syntax_issues())
      result.errors.push_back({rel, issue.line, issue.message});
  }
  result.ok = result.errors.empty();
  return result;
}

CompileResult compile_check(const fs::path& copy, const std::string& command_template, std::chrono::seconds timeout) {
  if (!fs::is_directory(copy))
    throw NotFoundError("copy not found: " + copy.string());
  std::string command;
  for (std::size_t i = 0; i < command_template.size(); ++i) {
    if (command_template.compare(i, 2, "{}") == 0) {
      command += copy.string();
      ++i;
    } else {
      command += command_template[i];
    }
  }

  int fds[2];
  if (pipe(fds) != 0)
    throw IoError("pipe failed");
  pid_t pid = fork();
  if (pid < 0)
    throw IoError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);

  CompileResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  bool timed_out = false;
  char buffer[4096];
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int ready = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0 && errno == EINTR)
      continue;
    if (ready > 0) {
      auto n = read(fds[0], buffer, sizeof buffer);
      if (n <= 0)
        break;
      result.output.append(buffer, static_cast<std::size_t>(n));
    }
  }
  close(fds[0]);
  if (timed_out) {
    kill(-pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    throw TimeoutError("compile command exceeded " + std::to_string(timeout.count()) + " s: " + command);
  }
  int status = 0;
  // The pipe closes before exit; bound the wait the same way.
  while (true) {
    auto r = waitpid(pid, &status, WNOHANG);
    if (r == pid)
      break;
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw TimeoutError("compile command exceeded " + std::to_string(timeout.count()) + " s: " + command);
    }
    usleep(10000);
  }
  result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  if (result.exit_status == 127)
    throw CommandNotFoundError("command not found: " + command);
  return result;
}

std::optional<std::string> default_compile_command() {
  const char* value = std::getenv("MASC_COMPILE_CMD");
  if (!value || !*value)
    return std::nullopt;
  return std::string(value);
}

void emit_log(const std::vector<MutationRecord>& records, const fs::path& path) {
  std::string text;
  for (const auto& r : records)
    text += to_json(r).dump() + "\n";
  detail::write_file(path, text);
}

std::vector<MutationRecord> load_log(const fs::path& path) {
  auto text = detail::read_file(path);
  std::vector<MutationRecord> out;
  std::size_t start = 0;
  int line = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos)
      end = text.size();
    ++line;
    auto content = std::string_view(text).substr(start, end - start);
    start = end + 1;
    if (content.find_first_not_of(" \t\r") == std::string_view::npos)
      continue;
    auto j = detail::parse_json(content, path.string() + ":" + std::to_string(line));
    out.push_back(record_from_json(j));
  }
  return out;
}

std::vector<MutationRecord> generate_minimal_app(
    const Mutant& mutant,
    const ApiModel& model,
    const fs::path& template_dir,
    const fs::path& out_dir) {
  if (!fs::is_directory(template_dir))
    throw NotFoundError("template app not found: " + template_dir.string());
  fresh_copy(template_dir, out_dir);
  auto source = scan(out_dir, &model);

  SeedRequest request;
  request.mutant = &mutant;
  if (mutant.form == SnippetForm::statement) {
    request.location = locations_main(source).front();
    request.scope = Scope::main;
  } else {
    auto bodies = locations_exhaustive(source, {LocationKind::class_body});
    if (bodies.empty())
      throw Error("template app has no class body");
    request.location = bodies.front();
    for (const auto& b : bodies)
      if (b.enclosing_class.ends_with(".Main") || b.enclosing_class == "Main") {
        request.location = b;
        break;
      }
    request.scope = Scope::main;
  }

  std::vector<PendingItem> items{{0, &request, 1}};
  auto result = seed_into(source, items, out_dir, fs::weakly_canonical(out_dir).filename().string(), false, 1);
  if (result.records.size() != 1)
    throw Error("minimal app placement failed for " + mutant.id);
  std::vector<MutationRecord> records{result.records.front().record};
  emit_log(records, out_dir / "mutation_log.jsonl");
  return records;
}

fs::path data_dir() {
  if (const char* env = std::getenv("MASC_DATA_DIR"); env && *env)
    return env;
  return MASC_DATA_DIR;
}

} // namespace masc
