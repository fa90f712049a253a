#pragma once

// Readers for the declarative problem files. Every file is a JSON object
// with "kind" and "version" keys; the grammar of each kind is documented in
// docs/formats.md. Malformed input raises Error(Errc::Parse) or the
// validation code of the owning module.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gerbelab/coeffs.hpp"
#include "gerbelab/connection.hpp"
#include "gerbelab/lifting.hpp"
#include "gerbelab/nerve.hpp"
#include "gerbelab/schwinger.hpp"

namespace gerbelab::io {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex_digest(std::uint64_t digest);

/// A parsed problem file; nested files it references are read through the
/// same loader and their digests appended to `digests`.
struct Document {
  std::filesystem::path path;
  std::string kind;
  Json body;
  std::string digest;
};

/// Reads and checks the kind and version tags. `expected` may be empty.
Document load(const std::filesystem::path& path, std::string_view expected = {});
Document parse(std::string_view text, const std::filesystem::path& origin, std::string_view expected = {});

/// Context for resolving nested file references relative to the parent.
struct Inputs {
  std::vector<std::pair<std::string, std::string>> digests;
  void record(const Document& doc);
};

Nerve read_nerve(const Json& node, const std::filesystem::path& base_dir, Inputs& inputs);
TwistedLocalSystem read_system(const Document& doc, Inputs& inputs);
TransitionData read_transition(const Document& doc, Inputs& inputs);
CentralExtension read_extension(const Document& doc);
/// Lifts for `td` through `ext`; edges not listed use the extension's section.
LiftChoice read_lifts(const Document& doc, const TransitionData& td, const CentralExtension& ext);
LoopPolynomial read_loop(const Document& doc);

/// A sphere bundle description with optional corrupted samples.
struct BundleSpec {
  BundleModel model;
  int grid = 201;
  bool reorthonormalize = false;
  struct Perturbation {
    int chart = 1;
    Point point{};
    double phase = 0.0;
  };
  std::vector<Perturbation> perturbations;
};

BundleSpec read_bundle(const Document& doc);

/// Samples `spec.model` at `points` per axis and applies the perturbations
/// to the grid sample nearest each requested point.
SampledBundle sample_bundle(const BundleSpec& spec, int points);

FiniteGroup read_group(const Json& node);
Automorphism read_automorphism(const Json& node, const FiniteGroup& g);
CoefficientGroup read_coefficients(const Json& node);

}  // namespace gerbelab::io
