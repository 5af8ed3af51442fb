#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codazzi/catalog.hpp"
#include "codazzi/conventions.hpp"
#include "codazzi/runner.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    if (comma > pos) out.push_back(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature verification for coordinate-defined Riemannian metrics"};
  app.require_subcommand(1);

  // verify
  std::string manifest_path, only_csv, format = "text", output_path;
  double tol = 0.0;
  CLI::App* verify = app.add_subcommand("verify", "run the checks declared in a manifest");
  verify->add_option("manifest", manifest_path, "manifest file")->required();
  verify->add_option("--only", only_csv, "comma-separated subset of declared checks");
  verify->add_option("--tol", tol, "default tolerance override (per-check 'tol' still wins)");
  verify->add_option("--format", format, "text | records")
      ->check(CLI::IsMember({"text", "records"}));
  verify->add_option("--output", output_path, "write the report to a file instead of stdout");

  // catalog list / emit
  CLI::App* catalog = app.add_subcommand("catalog", "built-in fixture manifests");
  catalog->require_subcommand(1);
  CLI::App* cat_list = catalog->add_subcommand("list", "list built-in manifest names");
  std::string emit_name, emit_path;
  CLI::App* cat_emit = catalog->add_subcommand("emit", "write a built-in manifest to a file");
  cat_emit->add_option("name", emit_name, "catalog entry")->required();
  cat_emit->add_option("path", emit_path, "output file")->required();

  // conventions
  CLI::App* conventions = app.add_subcommand("conventions", "print the sign-convention sheet");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (verify->parsed()) {
      codazzi::Manifest m = codazzi::load_manifest(manifest_path);
      codazzi::RunOptions opt;
      opt.only = split_csv(only_csv);
      opt.tol_override = tol;
      codazzi::VerificationReport rep = codazzi::run_checks(m, opt);
      std::string text = format == "records" ? rep.to_records() : rep.to_text();
      if (output_path.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw codazzi::Error("cannot write to '" + output_path + "'");
        out << text;
      }
      return rep.exit_code();
    }
    if (cat_list->parsed()) {
      for (const std::string& name : codazzi::catalog_list()) std::printf("%s\n", name.c_str());
      return 0;
    }
    if (cat_emit->parsed()) {
      codazzi::catalog_emit(emit_name, emit_path);
      return 0;
    }
    if (conventions->parsed()) {
      std::fputs(codazzi::conventions_text(), stdout);
      return 0;
    }
  } catch (const codazzi::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
