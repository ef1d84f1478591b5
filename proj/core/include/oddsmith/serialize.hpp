#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oddsmith/dataset.hpp"
#include "oddsmith/featsel.hpp"
#include "oddsmith/metrics.hpp"
#include "oddsmith/models.hpp"
#include "oddsmith/odds.hpp"

namespace oddsmith {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kDatasetFormatVersion = 1;

Json to_json(const Dataset& data);
/// Throws VersionMismatch or InvalidFormat.
Dataset dataset_from_json(const Json& j);

Json to_json(const EncodingMaps& maps);
EncodingMaps encoding_maps_from_json(const Json& j);

Json to_json(const NormalizationParams& params);
NormalizationParams normalization_from_json(const Json& j);

Json to_json(const Hyperparams& hp);
/// Reads {"kind": ..., params...}; absent params keep their defaults.
Hyperparams hyperparams_from_json(const Json& j);
/// Same, for a params object whose kind is already known.
Hyperparams hyperparams_from_json(ModelKind kind, const Json& params);

Json to_json(const TrainedModel& model);
/// Throws VersionMismatch when the stored version differs from
/// kModelFormatVersion, InvalidFormat on structural problems.
TrainedModel model_from_json(const Json& j);

Json to_json(const EvalReport& report);
Json to_json(const FeatureSubset& subset);
FeatureSubset feature_subset_from_json(const Json& j);
Json to_json(const CorrelationMatrix& matrix);
Json to_json(const BacktestReport& report);
Json to_json(const ProbTriple& probs);
Json to_json(const OddsTriple& odds);

/// Reads a whole JSON file; throws Io or InvalidFormat.
Json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace oddsmith
