#include "stratum/stack_io.hpp"

#include <fstream>

namespace stratum {

namespace {

using nlohmann::json;

cplx parse_complex(const json &v, const std::string &what, int index)
{
	if (v.is_number())
		return {v.get<double>(), 0.0};
	if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
		return {v[0].get<double>(), v[1].get<double>()};
	throw ConfigError(what + " must be a number or a [re, im] pair", index);
}

} // namespace

LayerStack parse_stack(const json &doc)
{
	if (!doc.is_object())
		throw ConfigError("stack document must be a JSON object");
	if (!doc.contains("omega"))
		throw ConfigError("stack document is missing \"omega\"");
	if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty())
		throw ConfigError("stack document needs a non-empty \"layers\" array");

	const cplx omega = parse_complex(doc["omega"], "omega", -1);
	std::vector<cplx> eps, mu;
	int idx = 0;
	for (const auto &layer : doc["layers"])
	{
		if (!layer.is_object() || !layer.contains("eps") || !layer.contains("mu"))
			throw ConfigError("layer " + std::to_string(idx) + " needs \"eps\" and \"mu\"", idx);
		eps.push_back(parse_complex(layer["eps"], "eps of layer " + std::to_string(idx), idx));
		mu.push_back(parse_complex(layer["mu"], "mu of layer " + std::to_string(idx), idx));
		idx++;
	}

	std::vector<double> d;
	if (doc.contains("interfaces"))
	{
		if (!doc["interfaces"].is_array())
			throw ConfigError("\"interfaces\" must be an array");
		idx = 0;
		for (const auto &v : doc["interfaces"])
		{
			if (!v.is_number())
				throw ConfigError("interface " + std::to_string(idx) + " must be a number", idx);
			d.push_back(v.get<double>());
			idx++;
		}
	}
	return LayerStack(omega, std::move(eps), std::move(mu), std::move(d));
}

LayerStack load_stack(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open stack file " + path);
	json doc;
	try
	{
		in >> doc;
	}
	catch (const json::parse_error &e)
	{
		throw ConfigError("stack file " + path + " is not valid JSON: " + e.what());
	}
	return parse_stack(doc);
}

json to_json(cplx z)
{
	return json::array({z.real(), z.imag()});
}

json to_json(const Mat3 &m)
{
	json rows = json::array();
	for (int i = 0; i < 3; i++)
	{
		json row = json::array();
		for (int j = 0; j < 3; j++)
			row.push_back(to_json(m(i, j)));
		rows.push_back(row);
	}
	return rows;
}

json stack_to_json(const LayerStack &stack)
{
	json doc;
	doc["omega"] = to_json(stack.omega());
	doc["layers"] = json::array();
	for (int l = 0; l <= stack.L(); l++)
		doc["layers"].push_back({{"eps", to_json(stack.eps(l))}, {"mu", to_json(stack.mu(l))}});
	doc["interfaces"] = stack.interfaces();
	return doc;
}

std::string dump_json(const json &doc, int indent)
{
	// nlohmann writes doubles in shortest round-trip form (at most 17 significant digits).
	return doc.dump(indent);
}

} // namespace stratum
