#pragma once

#include "cartanlab/coframe.hpp"
#include "cartanlab/extension.hpp"
#include "cartanlab/groupoid.hpp"
#include "cartanlab/jet.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace cartanlab {

/// Raw input text plus provenance. `label` is the path or "catalog:<name>" as given.
struct SourceText {
    std::string label;
    std::string text;
    std::string sha256;
    std::filesystem::path base_dir;  ///< for resolving relative references
};

std::string sha256_hex(std::string_view data);

/// Reads a file path or a "catalog:<name>" reference. Throws InputError.
SourceText read_source(const std::string& ref, const std::filesystem::path& base_dir = {});

/// Algebra plus the builtin name it came from, if any (needed for "standard" reps).
struct AlgebraInput {
    AlmostLieAlgebra algebra;
    std::optional<std::string> builtin;
};

/// Algebra file:
///   [algebra] name, dim, basis = ["e1", ...]   (or builtin = "hei(3)")
///   [[bracket]] j = 1, k = 2, result = [{ i = 3, coeff = "1" }]
/// Indices are 1-based; omitted pairs are zero; conflicting (j,k)/(k,j) entries are rejected.
AlgebraInput load_algebra(const SourceText& src);

/// Structure-constant TOML for `alg`, loadable by load_algebra.
std::string algebra_to_toml(const AlmostLieAlgebra& alg);

/// Extension file, [extension] table:
///   kind = "semidirect": h_algebra, k_algebra, rep; optional l or r overriding the canonical splitting.
///   kind = "explicit": acting, h_algebra, z_bracket, rep_h, rep_z, rep_v, i, p, optional h_in_acting, l, r.
struct ExtensionInput {
    std::string name;
    CartanTypeExtension cte;
    std::optional<LeftSplitting> left;
    std::optional<RightSplitting> right;
};
ExtensionInput load_extension(const SourceText& src);

/// Pfaffian file, [pfaffian] table: g, rho, l; or builtin = "second_order(n)".
struct PfaffianInput {
    std::string name;
    PfaffianGroupData data;
    std::optional<std::size_t> expected_order;
};
PfaffianInput load_pfaffian(const SourceText& src);

/// Second-order data of a scenario: coframe = theta1, connection = tau1, [connection2] = tau2.
struct SecondOrderInput {
    SecondOrderModel model;
    VForm1 tau2;
};

/// Scenario file: [chart], [coframe] rows, [connection] rows (default zero),
/// [model] h_algebra, k_algebra, rep (or second_order = n), optional [frames] fields.
struct ScenarioInput {
    Scenario scenario;
    std::optional<SecondOrderInput> second_order;
};
ScenarioInput load_scenario(const SourceText& src);

/// Groupoid configuration, [groupoid] table: model, n or k, pairs, tangents, bisections, samples.
struct GroupoidInput {
    ModelKind model = ModelKind::Translations;
    std::size_t param = 2;
    std::size_t pairs = 200;
    std::size_t tangents = 4;
    std::size_t bisections = 20;
    std::size_t samples = 1000;
};
GroupoidInput load_groupoid(const SourceText& src);

/// Kind of a TOML document by its top-level table: "algebra", "extension", "pfaffian", "scenario", "groupoid".
std::string document_kind(const SourceText& src);

}  // namespace cartanlab
