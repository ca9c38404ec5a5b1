#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oiso/adequacy.hpp"
#include "oiso/classifiers.hpp"
#include "oiso/compactification.hpp"
#include "oiso/example_space.hpp"

namespace oiso::io {

using nlohmann::ordered_json;

inline constexpr const char* kSchema = "oiso/1";
inline constexpr const char* kVersion = "0.1.0";

/// A JSON file read from disk, with the digest of its exact bytes.
struct Input {
    std::string path;
    std::string sha256;
    ordered_json json;
};

std::string sha256_hex(const std::string& bytes);
Input load(const std::string& path);

/// A matrix of JSON numbers or rational strings ("1/3", "0.25"). Exact data
/// is kept when every entry is an integer or a string. Exact mode rejects
/// JSON floats outright.
struct NumericMatrix {
    Eigen::MatrixXd values;
    std::optional<MatrixXq> exact;
};

NumericMatrix parse_matrix(const ordered_json& j, const std::string& what, std::optional<Mode> mode);

/// Inline object or a path relative to base.
std::shared_ptr<const PointSpace> parse_space(const ordered_json& j, const std::filesystem::path& base);
std::shared_ptr<const FunctionFamily> parse_family(const ordered_json& j, const std::filesystem::path& base,
                                                   std::optional<Mode> mode);
OperatorModel parse_operator(const ordered_json& j, const std::filesystem::path& base, std::optional<Mode> mode);
SampledSpace parse_sampled_space(const ordered_json& j, const std::filesystem::path& base);

ordered_json to_json(const Eigen::VectorXd& v);
ordered_json to_json(const Eigen::MatrixXd& m);
ordered_json to_json(const VectorXq& v);
ordered_json to_json(const ExtendedReal& v);
ordered_json to_json(const std::vector<std::size_t>& v);
ordered_json to_json(const Certificate& c);
ordered_json to_json(const Decomposition& d);
ordered_json to_json(const IdentityCheck& c);
ordered_json to_json(const ClassificationReport& r);
ordered_json to_json(const AdequacyReport& r, const FunctionFamily& family);
ordered_json to_json(const CompactPoint& p, const std::vector<Generator>& generators);
ordered_json to_json(const CompactDecomposition& d, const SampledSpace& x, const SampledSpace& y);
ordered_json to_json(const IntervalBox& b);

} // namespace oiso::io
