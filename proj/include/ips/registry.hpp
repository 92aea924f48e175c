#pragma once

#include <map>
#include <string>

#include "ips/functionals.hpp"

namespace ips {

using ParamMap = std::map<std::string, double>;

struct ParamSpec {
    std::string key;
    double def = 0.0;
    double min = -1e300;
    double max = 1e300;
    bool integer = false;
    std::string help;
};

struct ModelEntry {
    std::string name;
    std::string help;
    bool continuum = false;
    std::vector<ParamSpec> params;
};

struct FunctionalEntry {
    std::string name;
    std::string help;
    bool continuum = false;  // evaluates marked point patches
    std::vector<ParamSpec> params;
};

/// Sorted by name.
const std::vector<ModelEntry> &model_registry();
const std::vector<FunctionalEntry> &functional_registry();

const ModelEntry *find_model(const std::string &name);
const FunctionalEntry *find_functional(const std::string &name);

/// Validates keys/ranges against the schema and fills defaults.
/// Throws ConfigError naming the offending key.
ParamMap resolve_params(const std::vector<ParamSpec> &schema, const ParamMap &given,
                        const std::string &context);

JumpModel build_model(const std::string &name, const ParamMap &params);

/// Builds the functional against the model (validates family and that the
/// functional's interaction radius fits inside the model's template).
LocalFunctional build_functional(const std::string &name, const ParamMap &params,
                                 const JumpModel &model);

InitialDistribution build_init(const std::string &name, const JumpModel &model);

/// Stable sorted text listing of both registries with parameter schemas.
std::string registry_listing();

}  // namespace ips
