#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tcx::app;
  CLI::App app{"Exact twisted-complex toolkit"};
  std::string command, input, format = "text", out, emit;
  std::optional<std::string> field, name;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("--input", input, "Workspace document")->required();
  app.add_option("--field", field, "Override the base field: q or fp:<prime>");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--out", out, "Write the report to a file instead of stdout");
  app.add_option("--name", name, "Restrict the command to one named object");
  app.add_option("--emit-workspace", emit, "Write the normalized workspace document");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << input << "\n";
    return kInputError;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  Invocation inv{command, buf.str(), field, format == "machine", CommandOptions{name}};
  std::string rendered;
  CommandResult res = invoke(inv, rendered);

  if (!emit.empty() && res.report.value("status", "") != "error") {
    Json ws = serialize_workspace(parse_workspace(inv.input_text, field ? std::optional(tcx::Field::parse(*field))
                                                                        : std::nullopt));
    if (!write_file(emit, ws.dump(2) + "\n")) {
      std::cerr << "cannot write " << emit << "\n";
      return kInputError;
    }
  }
  if (out.empty()) {
    std::cout << rendered;
  } else if (!write_file(out, rendered)) {
    std::cerr << "cannot write " << out << "\n";
    return kInputError;
  }
  return res.exit_code;
}
