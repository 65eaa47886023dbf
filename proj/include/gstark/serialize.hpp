#pragma once

#include <json.hpp>

#include "gstark/selmer.hpp"

namespace gstark {

// nlohmann::json with the default std::map storage keeps keys sorted, which
// is what makes reports byte-stable.
using json = nlohmann::json;

json to_json(const RingSpec& s);
RingSpec ring_spec_from_json(const json& j);

json to_json(const RingElem& e); // flat coefficient array, lex monomial order
RingElem ring_elem_from_json(const RingPtr& ring, const json& j);

json to_json(const RMatrix& m); // rows of coefficient arrays
RMatrix rmatrix_from_json(const RingPtr& ring, const json& j);

json to_json(const IdealRep& i); // canonical basis rows

json to_json(const SelmerInstance& inst);
SelmerInstance instance_from_json(const json& j);

json subset_to_json(Subset s, const SelmerInstance& inst); // prime labels

} // namespace gstark
