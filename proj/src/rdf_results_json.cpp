#include <nlohmann/json.hpp>

#include "kif/errors.hpp"
#include "kif/rdf/sparql.hpp"

namespace kif::rdf {

using nlohmann::json;

std::string to_results_json(const ResultSet& r) {
    json bindings = json::array();
    for (const auto& row : r.rows) {
        json b = json::object();
        for (std::size_t i = 0; i < r.variables.size(); ++i) {
            if (!row[i]) continue;
            json cell;
            if (const auto* iri = std::get_if<IriTerm>(&*row[i])) {
                cell = {{"type", "uri"}, {"value", iri->value}};
            } else {
                const auto& l = std::get<Literal>(*row[i]);
                cell = {{"type", "literal"}, {"value", l.lexical}};
                if (!l.language.empty()) cell["xml:lang"] = l.language;
                else if (l.datatype != xsd_string) cell["datatype"] = l.datatype;
            }
            b[r.variables[i]] = std::move(cell);
        }
        bindings.push_back(std::move(b));
    }
    json doc = {{"head", {{"vars", r.variables}}}, {"results", {{"bindings", std::move(bindings)}}}};
    return doc.dump();
}

ResultSet parse_results_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed SPARQL results JSON: ") + e.what());
    }
    try {
        ResultSet r;
        r.variables = doc.at("head").at("vars").get<std::vector<std::string>>();
        for (const auto& b : doc.at("results").at("bindings")) {
            Row row(r.variables.size());
            for (std::size_t i = 0; i < r.variables.size(); ++i) {
                auto it = b.find(r.variables[i]);
                if (it == b.end()) continue;
                const auto type = it->at("type").get<std::string>();
                auto value = it->at("value").get<std::string>();
                if (type == "uri") {
                    row[i] = iri(std::move(value));
                } else if (type == "literal" || type == "typed-literal") {
                    if (auto l = it->find("xml:lang"); l != it->end())
                        row[i] = lang(std::move(value), l->get<std::string>());
                    else if (auto d = it->find("datatype"); d != it->end())
                        row[i] = typed(std::move(value), d->get<std::string>());
                    else
                        row[i] = plain(std::move(value));
                } else if (type == "bnode") {
                    row[i] = iri("urn:bnode:" + value);
                } else {
                    throw Error("unknown binding type '" + type + "'");
                }
            }
            r.rows.push_back(std::move(row));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed SPARQL results JSON: ") + e.what());
    }
}

} // namespace kif::rdf
