#pragma once

#include <optional>
#include <string>
#include <vector>

#include "workspace.hpp"

namespace tcx::app {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2 };

const std::vector<std::string>& command_names();

struct CommandOptions {
  std::optional<std::string> name;  // restrict to one object
};

struct CommandResult {
  Json report;
  int exit_code = kPass;
};

// Runs one command over every applicable object of the workspace. Unknown
// commands and objects of the wrong kind give kInputError.
CommandResult run_command(const Workspace& ws, const std::string& command, const CommandOptions& opts = {});

// Plain-text rendering of a report; one line per scalar field.
std::string render_text(const Json& report);

struct Invocation {
  std::string command;
  std::string input_text;
  std::optional<std::string> field;  // "q" or "fp:<p>"
  bool machine = false;
  CommandOptions options;
};

// Parse, run and render; input errors are reported in the same format.
CommandResult invoke(const Invocation& inv, std::string& rendered);

}  // namespace tcx::app
