#pragma once

#include <json.hpp>

#include "orifield/fields.hpp"
#include "orifield/spectral.hpp"
#include "orifield/synth.hpp"
#include "orifield/tensor.hpp"

namespace orifield {

using Json = nlohmann::ordered_json;

/// Field names are listed in docs/schema.md. Parsing errors throw
/// Error(ErrorCode::Format); callback-backed objects cannot be written.

Json to_json(const AnisotropySpec& s);
AnisotropySpec anisotropy_from_json(const Json& j);

Json to_json(const StructureTensord& t);
StructureTensord tensor_from_json(const Json& j);
Json to_json(const OrientationResultd& r);

Json to_json(const ScalarField& f);
ScalarField scalar_field_from_json(const Json& j);

Json to_json(const Deformation& d);
Deformation deformation_from_json(const Json& j);

Json to_json(const FieldModel& m);
FieldModel model_from_json(const Json& j);

Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);

Json to_json(const SynthesisParams& p);
SynthesisParams synthesis_params_from_json(const Json& j);

/// x rounded to 12 significant digits, for stable printed reports.
double round12(double x);

/// Reads a JSON file; Format on I/O or parse errors.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace orifield
