#pragma once

#include <string>

#include <json.hpp>

#include "stratum/medium.hpp"

namespace stratum {

/*! \brief Parse {"omega":[re,im],"layers":[{"eps":[re,im],"mu":[re,im]},...],"interfaces":[d0,...]}.
 *
 * Layers are listed top to bottom. Throws ConfigError carrying the offending layer or interface index.
 */
LayerStack parse_stack(const nlohmann::json &doc);
LayerStack load_stack(const std::string &path);

nlohmann::json stack_to_json(const LayerStack &stack);

/*! \brief Complex number as [re, im]. */
nlohmann::json to_json(cplx z);
nlohmann::json to_json(const Mat3 &m);

/*! \brief Serialize; doubles use the shortest form that round-trips. */
std::string dump_json(const nlohmann::json &doc, int indent = 2);

} // namespace stratum
