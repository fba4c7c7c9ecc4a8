#pragma once

#include <string>
#include <variant>

#include "tfnn/builders.hpp"
#include "tfnn/kst.hpp"
#include "tfnn/univariate.hpp"

#include <json.hpp>

namespace tfnn {

using json = nlohmann::json;

json feature_to_json(const FeatureMap& f);
FeatureMap feature_from_json(const json& j);

json net_to_json(const ShallowTFNN& h);
json net_to_json(const DeepTFNN& h);

// A network file holds either flavour, discriminated by the "kind" field.
using AnyNet = std::variant<ShallowTFNN, DeepTFNN>;
AnyNet net_from_json(const json& j);

int net_outputs(const AnyNet& net);
std::vector<double> eval_any(const AnyNet& net, const Point& x);
int any_width(const AnyNet& net);
int any_depth(const AnyNet& net);

json ridge_to_json(const RidgeExpansion& r);
RidgeExpansion ridge_from_json(const json& j);

json report_to_json(const BuildReport& r);

json feature_set_to_json(const OstrandFeatureSet& fs);

// Set files: header line "metric=<name> mesh=<value>", then one point per
// line as comma-separated coordinates.
std::string set_to_text(const SampledCompactSet& s);
SampledCompactSet set_from_text(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

// 17-significant-digit float formatting used by every CSV cell.
std::string fmt17(double v);

}  // namespace tfnn
