#pragma once

#include <json.hpp>

#include "co2cast/models.hpp"

namespace co2cast {

nlohmann::ordered_json spec_to_json(const ModelSpec& spec);

/// Persisted form of a fitted model: family, orders or smoothing parameters,
/// coefficients, sigma2, n_obs, aic, plus the history and residual tail the
/// forecaster needs after reloading.
nlohmann::ordered_json model_to_json(const FittedModel& model);

/// Inverse of model_to_json; throws Error{Parse} on a malformed document.
FittedModel model_from_json(const nlohmann::ordered_json& doc);

}  // namespace co2cast
