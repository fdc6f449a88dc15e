#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistedcx/descent.hpp"
#include "twistedcx/resolution.hpp"

namespace tcx::app {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": " + what),
        line(line),
        col(col),
        reason(what) {}
  int line, col;
  std::string reason;
};

class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string object, std::string reason)
      : std::runtime_error(object + ": " + reason), object(std::move(object)), reason(std::move(reason)) {}
  std::string object, reason;
};

struct NamedComplex {
  std::string name;
  GlobalComplex complex;
};

struct NamedTwisted {
  std::string name;
  TwistedComplex twisted;
  Json spec;  // shorthand spec, or null for explicit data
  std::optional<ResolutionResult> resolution;
};

struct NamedMorphism {
  std::string name;
  std::string source, target;
  Morphism morphism;
  Json spec;  // shorthand spec, or null for explicit data
};

struct Workspace {
  Field field;
  NervePtr nerve;
  std::vector<NamedComplex> presheaves;
  std::vector<NamedTwisted> twisted;
  std::vector<NamedMorphism> morphisms;
  std::vector<std::string> warnings;

  const NamedComplex* find_presheaf(const std::string& name) const;
  const NamedTwisted* find_twisted(const std::string& name) const;
  const NamedMorphism* find_morphism(const std::string& name) const;
};

// A field override replaces the "field" key of the document.
Workspace parse_workspace(const std::string& text, std::optional<Field> field_override = std::nullopt);
Json serialize_workspace(const Workspace& ws);
bool workspace_equal(const Workspace& a, const Workspace& b);

// Face keys are comma-separated labels, e.g. "U,V".
std::string face_key(const CoverNerve& nerve, Face f);
Json matrix_json(const Matrix& m);
Json graded_map_json(const GradedMap& m);
Json dims_json(const GradedSpace& s);

}  // namespace tcx::app
