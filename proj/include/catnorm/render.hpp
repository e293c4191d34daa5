#pragma once

#include <string>
#include <vector>

#include "catnorm/emitters.hpp"

namespace catnorm {

/// CREATE TABLE statements. Column types come from the domain tag of the
/// object a column is named after; surrogate and foreign-key columns are
/// INTEGER.
std::string render_sql(const RelationalSchema& schema, const CategoryGraph& graph);

/// <!ELEMENT>/<!ATTLIST> text. The root element is written as "root".
std::string render_dtd(const DtdSchema& dtd);

/// Content model of one tag, e.g. "A+B+D+".
std::string content_model(const DtdSchema& dtd, const std::string& tag);

std::string render_property_graph(const PropertyGraphSchema& pg);

std::string render_hybrid(const std::vector<HybridPart>& parts);

}  // namespace catnorm
