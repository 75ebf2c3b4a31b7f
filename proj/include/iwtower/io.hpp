#pragma once

// JSON file formats (schema "1") and report serialization.

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "iwtower/cohomology.hpp"
#include "iwtower/kida.hpp"
#include "iwtower/link.hpp"
#include "iwtower/tower.hpp"

namespace iwtower {

using Json = nlohmann::json;
inline constexpr const char* kSchemaVersion = "1";

// Command line values that replace fields of a tower file.
struct Overrides {
  std::optional<unsigned long> p;
  std::optional<int> precision, truncation, levels;
  std::optional<long> oracle_max;
};

struct LinkFile {
  LinkPresentation link;
  std::optional<LaurentPoly> alexander;
  std::string provenance;  // where the entry comes from, free text
};

Json read_json(const std::filesystem::path& path);  // InputError with line/column on bad JSON

// `where` prefixes error messages ("trefoil.json: pd_code[2]: ...").
LinkFile link_from_json(const Json& j, const std::string& where);
LinkFile load_link(const std::filesystem::path& path);

TauMap tau_from_json(const Json& j, unsigned long p, int precision, int components, const std::string& where);
TowerSpec tower_from_json(const Json& j, const std::filesystem::path& dir, const Overrides& o,
                          const std::string& where);
TowerSpec load_tower(const std::filesystem::path& path, const Overrides& o = {});

struct MorphismFile {
  TowerMorphism morphism;
  std::optional<int> lambda_target, lambda_source;  // supplied values
};
MorphismFile load_morphism(const std::filesystem::path& path, const Overrides& o = {});

CyclicGModule module_from_json(const Json& j, const std::string& where);
CyclicGModule load_module(const std::filesystem::path& path);

Json group_json(const AbelianGroup& g);
Json link_report(const LinkFile& f, std::optional<unsigned long> p);
Json tower_report(const TowerReport& r);
Json kida_report(const TowerMorphism& f, const KidaVerdict& v);
Json tate_report(const CyclicGModule& M, int i);

// Plain text renderings of the same reports.
std::string link_text(const Json& report);
std::string tower_text(const Json& report);
std::string kida_text(const Json& report);
std::string tate_text(const Json& report);

}  // namespace iwtower
