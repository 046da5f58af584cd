#pragma once

// Scene files: one strict JSON schema, also reachable from the TOML subset.
// Unknown keys, float literals and version mismatches are Parse errors.

#include "padicwf/bound.hpp"
#include "padicwf/char_sums.hpp"
#include "padicwf/verify.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace padicwf {

inline constexpr int kSceneFormatVersion = 1;

enum class SceneKind { Polynomial, Monomial, Charts, Curve, Map };

const char* to_string(SceneKind kind);

struct BoundSpec {
    int d = 1;
    int q = 0;
    std::vector<ResolutionChart> charts;
};

struct MapSpec {
    int coordinates = 0;
    std::vector<PolynomialMap> pieces;
    int sample_budget = 64;
    std::uint64_t seed = 1;
};

struct OutputSpec {
    std::string path;
    std::string format = "json";  // json | csv
};

struct SceneFile {
    int format_version = kSceneFormatVersion;
    long prime = 0;
    int max_level = 0;
    SceneKind kind = SceneKind::Polynomial;
    std::optional<PolynomialScene> polynomial;
    std::optional<MonomialScene> monomial;
    std::optional<CurveScene> curve;
    std::optional<MapSpec> map;
    /// From a charts scene, or the optional top-level "bound" block.
    std::optional<BoundSpec> bound;
    std::vector<ProbePlanEntry> probes;
    std::optional<OutputSpec> output;

    PrimeContext context() const { return PrimeContext(prime, max_level); }
    /// The evaluable scene; throws InvalidArgument for other kinds.
    AnyScene evaluable() const;
};

/// Validates against the schema; all failures are Error(Parse).
SceneFile scene_from_json(const nlohmann::json& j);

/// Reads JSON, or the TOML subset for a ".toml" extension.
SceneFile load_scene_file(const std::string& path);

/// "k:b1,b2,..." with k the level; "k" alone means base 0. Throws Parse.
ResidueCube parse_cube(const std::string& text, int dim, const PrimeContext& ctx);

/// Comma-separated exact rationals. Throws Parse.
RationalVector parse_rational_list(const std::string& text);

}  // namespace padicwf
