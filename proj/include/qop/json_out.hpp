#pragma once

#include "qop/bethe.hpp"

#include <json.hpp>

#include <string>

namespace qop {

using json = nlohmann::ordered_json;

// Byte-stable text: insertion-ordered keys, doubles as %.17g, non-finite values as null.
std::string dump_json(const json &j, int indent = 2);

json to_json(cplx c);  // [re, im]
cplx complex_from_json(const json &j);

// Occupation-block export:
// {"meta": {n, m, L, I, z: [re, im], twists}, "blocks": [{occupation, matrix}]}
// I is 1-based.
json operator_json(const TransferOperator &T);

struct ImportedOperator {
  Grading g;
  int L = 0;
  Subset I;
  cplx z;
  Twists twists;
  MatrixXc matrix;  // dense, zero outside the blocks
};
ImportedOperator operator_from_json(const json &j);

// Records, per-path summaries and per-state path energies. Non-finite path energies are null.
json spectrum_json(const SpectrumReport &rep);
std::string spectrum_csv(const SpectrumReport &rep);

}  // namespace qop
