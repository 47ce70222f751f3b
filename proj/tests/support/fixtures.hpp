#pragma once
// Model objects from the worked examples, built in code so tests do not
// depend on fixture files.

#include <string>

#include "kif/datamodel.hpp"

namespace kif::test {

Entity wd_item(const std::string& id);
Entity wd_property(const std::string& id);

// Q7286 P166 Q38104 with the prize-money qualifier and the amounts reference.
AnnotatedStatement curie_prize_money();

// Q2270 P2177 solubility statement and its annotation record.
Statement benzene_solubility();
AnnotationRecord benzene_solubility_annotation();

// Q2270 P2067 78.11 dalton, and the PubChem-side mass of CID241.
Statement benzene_mass();
Statement pubchem_mass();

inline const std::string kBenzeneInchi = "InChI=1S/C6H6/c1-2-4-6-5-3-1/h1-6H";

std::string data_path(const std::string& file);

} // namespace kif::test
