#pragma once

#include <nlohmann/json.hpp>

#include <complex>
#include <optional>
#include <string>

#include "selfaffine/density.hpp"
#include "selfaffine/fourier.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/overlap.hpp"
#include "selfaffine/system.hpp"

namespace selfaffine::serialize {

using json = nlohmann::json;

// System input schema, the single source for CLI and tests:
//   { "matrix": [[int]], "digits": [ { "scale": int, "vec": [int] } ] }
json system_to_json(const system::AffineSystem& sys);
system::AffineSystem system_from_json(const json& j);

// Target input schema for the search commands:
//   { "matrix": [[int]], "targets": [[number]], "epsilon": number }
// epsilon may instead be supplied by the caller.
std::pair<intlinalg::ExpandingMatrix, density::TargetTuple> target_from_json(
    const json& j, std::optional<double> epsilon_override);

// Certificates: { "kind": "osc" | "overlap" | "no_overlap" | "singularity", ... }
json certificate_to_json(const overlap::OSCCertificate& cert);
json certificate_to_json(const overlap::OverlapCertificate& cert);
json certificate_to_json(const overlap::NoOverlapProof& proof);
json certificate_to_json(const fourier::SingularityCertificate& cert);

// Classification report skeleton: { branch, certificates[], estimates{},
// status, manifest{} }; estimates and manifest are filled by the caller.
json report_to_json(const overlap::ClassificationReport& report);

json viewport_to_json(const geometry::Viewport& vp);

// Scalars. Integers serialize as JSON numbers when they fit in int64 and as
// decimal strings otherwise; rationals as "num/den" strings; complex values
// as {re, im} decimal strings with 17 significant digits.
json int_to_json(const Int& v);
Int int_from_json(const json& j);
std::string rat_str(const Rat& v);
json complex_to_json(std::complex<double> z);

// File helpers; throw Error(ParseError) with context on failure.
json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& bytes);

}  // namespace selfaffine::serialize
