#pragma once

#include "tsc/lhopital.hpp"
#include "tsc/qbounds.hpp"

#include <json.hpp>

#include <string>

namespace tsc::report {

/// Canonical machine format is JSON; the table and CSV renderings are
/// derived from the same document.
using Json = nlohmann::ordered_json;

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name);

Json scale_info_json(const TimeScale& ts, int digits);
Json qexp_json(const QContext& ctx, Real x, const QSeriesResult& result, int digits);
Json bound_report_json(const BoundProblem& problem, const BoundReport& report, int digits);
Json chain_report_json(const BoundProblem& problem, const ChainReport& report, int digits);
Json suite_report_json(const SuiteReport& report, int digits);
Json mvt_json(const MvtWitnesses& witnesses, bool sandwichOk, int digits);

std::string render(const Json& doc, Format format);

} // namespace tsc::report
