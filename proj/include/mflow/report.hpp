#pragma once

#include "json.hpp"
#include "mflow/mild.hpp"
#include "mflow/morrey.hpp"
#include "mflow/stationary.hpp"

namespace mflow {

using json = nlohmann::json;

json to_json(const GridSpec& g);
json to_json(const MorreyEstimate& e);
json to_json(const DecayReport& r);
json to_json(const HolderFit& f);
json to_json(const ResidualReport& r);
json to_json(const IdentityReport& r);
json to_json(const BootstrapReport& r);
json to_json(const RegularityReport& r);
json to_json(const MhdReport& r);
json to_json(const ContractionFit& f);
json to_json(const UniquenessResult& r);
json to_json(const SmoothingCheck& c);
json picard_summary(const PicardResult& r);  // norms and flags, not the fields

const char* to_string(Verdict v);

}  // namespace mflow
