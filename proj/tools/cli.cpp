#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "localfeat/dsl.hpp"
#include "localfeat/emitter.hpp"
#include "localfeat/resolver.hpp"
#include "localfeat/spl_definition.hpp"

namespace localfeat::cli {

namespace {

namespace fs = std::filesystem;

struct IoError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{"cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Located {
  std::string file;
  Diagnostic diag;
};

class Reporter {
 public:
  Reporter(std::ostream& err, std::string format, bool color) : err_(err), format_(std::move(format)), color_(color) {}

  void add(std::string file, Diagnostic d) { items_.push_back({std::move(file), std::move(d)}); }

  void add(const std::string& file, const ParseError& e) {
    add(file, Diagnostic{Severity::error, std::string(to_string(e.code())), e.what(), e.where()});
  }

  std::size_t errors() const {
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(),
                                                  [](const Located& l) { return l.diag.severity == Severity::error; }));
  }
  std::size_t warnings() const { return items_.size() - errors(); }

  void flush() {
    if (format_ == "json") {
      auto arr = nlohmann::json::array();
      for (const auto& [file, d] : items_) {
        arr.push_back({{"file", file},
                       {"line", d.span.line},
                       {"column", d.span.column},
                       {"severity", to_string(d.severity)},
                       {"code", d.code},
                       {"message", d.message}});
      }
      err_ << arr.dump(2) << '\n';
      return;
    }
    for (const auto& [file, d] : items_) {
      std::string severity(to_string(d.severity));
      if (color_) severity = (d.severity == Severity::error ? "\x1b[31m" : "\x1b[33m") + severity + "\x1b[0m";
      err_ << file << ':' << d.span.line << ':' << d.span.column << ": " << severity << '[' << d.code
           << "]: " << d.message << '\n';
    }
  }

 private:
  std::ostream& err_;
  std::string format_;
  bool color_;
  std::vector<Located> items_;
};

std::optional<spl::SplDefinition> load_spl(const std::string& path, Reporter& reporter) {
  auto text = read_file(path);
  try {
    return spl::parse_spl_definition(text);
  } catch (const ParseError& e) {
    reporter.add(path, e);
    return std::nullopt;
  }
}

std::optional<ResolvedProduct> load_and_resolve(const std::string& spec_path, const std::string& spl_path,
                                                Reporter& reporter) {
  auto spec_text = read_file(spec_path);
  auto definition = load_spl(spl_path, reporter);
  std::optional<dsl::ProductSpec> spec;
  try {
    spec = dsl::parse(spec_text);
  } catch (const ParseError& e) {
    reporter.add(spec_path, e);
  }
  if (!definition || !spec) return std::nullopt;
  auto resolved = resolve(*spec, *definition);
  for (const auto& d : resolved.diagnostics) reporter.add(spec_path, d);
  return resolved;
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError{"cannot write '" + tmp.string() + "'"};
    out << content;
    out.flush();
    if (!out) throw IoError{"cannot write '" + tmp.string() + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError{"cannot rename to '" + path.string() + "': " + ec.message()};
  }
}

std::string location(const std::string& file, const Span& s) {
  return file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Local-feature product line compiler: check, resolve and emit GIS product specifications.",
               "localfeat"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string spl_path;
  std::string format = "text";
  std::string out_path;
  std::string element;
  std::string model_name;
  std::size_t max_features = 20;

  auto add_common = [&](CLI::App* cmd, bool with_spec) {
    if (with_spec) cmd->add_option("spec", spec_path, "Product specification (.gis)")->required();
    cmd->add_option("--spl", spl_path, "Product-line definition (.spl)")->required();
    cmd->add_option("--format", format, "Diagnostic format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "Parse and resolve; report diagnostics");
  add_common(check, true);
  auto* emit_cmd = app.add_subcommand("emit", "Write the derivation configuration JSON");
  add_common(emit_cmd, true);
  emit_cmd->add_option("--out", out_path, "Output path (default <product>.derivation.json)");
  auto* explain_cmd = app.add_subcommand("explain", "Show where each effective feature of an element comes from");
  add_common(explain_cmd, true);
  explain_cmd->add_option("element", element, "Qualified element name, e.g. data.Hotel")->required();
  auto* features_cmd = app.add_subcommand("features", "List the features included in the product");
  add_common(features_cmd, true);
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List every valid configuration of a feature model");
  add_common(enumerate_cmd, false);
  enumerate_cmd->add_option("model", model_name, "Feature model (root) name")->required();
  enumerate_cmd->add_option("--max", max_features, "Refuse models with more features than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return usage;
  }

  Reporter reporter(err, format, color);
  try {
    if (check->parsed()) {
      load_and_resolve(spec_path, spl_path, reporter);
      reporter.flush();
      out << reporter.errors() << " errors, " << reporter.warnings() << " warnings\n";
      return reporter.errors() ? diagnostics : ok;
    }

    if (emit_cmd->parsed()) {
      auto resolved = load_and_resolve(spec_path, spl_path, reporter);
      reporter.flush();
      if (!resolved || reporter.errors()) {
        out << reporter.errors() << " errors, " << reporter.warnings() << " warnings; nothing written\n";
        return diagnostics;
      }
      const fs::path target = out_path.empty() ? fs::path(default_output_name(*resolved)) : fs::path(out_path);
      write_atomically(target, emit(*resolved));
      out << target.string() << '\n';
      return ok;
    }

    if (explain_cmd->parsed()) {
      auto resolved = load_and_resolve(spec_path, spl_path, reporter);
      reporter.flush();
      if (!resolved) return diagnostics;
      if (!resolved->multimodel.find_element(element)) {
        err << "error: unknown element '" << element << "'\n";
        return usage;
      }
      auto rows = explain(*resolved, element);
      std::size_t width = 7;
      for (const auto& r : rows) width = std::max(width, r.feature.size());
      auto pad = [&](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
      out << pad("feature", width) << "  " << pad("origin", 18) << "  location\n";
      for (const auto& r : rows) {
        out << pad(r.feature, width) << "  " << pad(std::string(to_string(r.origin)), 18) << "  "
            << location(spec_path, r.span) << '\n';
      }
      return resolved->has_errors() ? diagnostics : ok;
    }

    if (features_cmd->parsed()) {
      auto resolved = load_and_resolve(spec_path, spl_path, reporter);
      reporter.flush();
      if (!resolved) return diagnostics;
      for (const auto& f : resolved->included) out << f << '\n';
      return resolved->has_errors() ? diagnostics : ok;
    }

    if (enumerate_cmd->parsed()) {
      auto definition = load_spl(spl_path, reporter);
      reporter.flush();
      if (!definition) return diagnostics;
      const FeatureModel* model = nullptr;
      if (definition->functional.global().name() == model_name) {
        model = &definition->functional.global();
      } else if (definition->functional.has_local(model_name)) {
        model = &definition->functional.local(model_name);
      } else {
        err << "error: no feature model named '" << model_name << "'\n";
        return usage;
      }
      try {
        auto configs = enumerate_configurations(*model, max_features);
        out << configs.size() << '\n';
        for (const auto& cfg : configs) {
          bool first = true;
          for (const auto& f : cfg) {
            out << (first ? "" : " ") << f;
            first = false;
          }
          out << '\n';
        }
        return ok;
      } catch (const Error& e) {
        err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
        return usage;
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.message << '\n';
    return usage;
  }
  return usage;
}

}  // namespace localfeat::cli
