#pragma once

#include "json.hpp"

#include "fockoplab/dynamics.hpp"

namespace fockoplab::io {

using nlohmann::json;

// Complex values serialize as [re, im]; +infinity as the string "inf".

json to_json(Complex z);
Complex complex_from_json(const json& j);

json to_json(const EntireFunction& f);
EntireFunction function_from_json(const json& j);

json to_json(const FockContext& ctx);
FockContext context_from_json(const json& j);

json to_json(const WeightedCompOp& W);
WeightedCompOp operator_from_json(const json& j);

json to_json(const NormResult& r);
json to_json(const GrowthProfile& p);
json to_json(const Classification& c);
json to_json(const IterateCoeffs& c);
json to_json(const SequenceReport& r);
json to_json(const IsometryReport& r);
json to_json(const AdjointEigenEvidence& e);
json to_json(const LimitEvidence& e);
json to_json(const SupercyclicityVerdict& v);
json to_json(const DecayProfile& p);
json to_json(const MzScanResult& s);

}  // namespace fockoplab::io
