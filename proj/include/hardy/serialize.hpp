#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "hardy/optimizer.hpp"
#include "hardy/verify.hpp"

namespace hardy {

using Json = nlohmann::ordered_json;

Json to_json(const HardyParams& p);
Json to_json(const ResolvedParams& p);
Json to_json(const ConstantReport& r);
Json to_json(const VerificationRecord& r);
Json to_json(const CellSummary& s);
Json to_json(const ProbeResult& r);
Json to_json(const OptimizeResult& r, bool include_witness = false);

VerificationRecord verification_record_from_json(const Json& j);

// One record per line, summary rows, witness dump. All writers are
// deterministic: no timestamps, shortest round-trip float formatting.
void write_campaign_jsonl(std::ostream& os, const CampaignReport& report, const Json& header);
void write_campaign_csv(std::ostream& os, const CampaignReport& report, const Json& header);
void write_witness_csv(std::ostream& os, const LatticeFunction& u);

} // namespace hardy
