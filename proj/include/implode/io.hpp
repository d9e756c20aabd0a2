#pragma once

#include "implode/criticality.hpp"
#include "implode/matcher.hpp"
#include "implode/profile.hpp"
#include "implode/verify.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace implode {

// 17 significant digits: round-trips binary64 exactly, '.' decimal point.
std::string fmt17(double x);

nlohmann::json profile_header_json(const GlobalProfile& p);

// '#'-prefixed JSON header line, then CSV columns Z,v,rho_hat,u0_hat,u_hat.
void write_profile_csv(std::ostream& os, const GlobalProfile& p, const std::vector<double>& grid);
nlohmann::json profile_json(const GlobalProfile& p, const std::vector<double>& grid);

nlohmann::json solve_summary_json(const GlobalProfile& p, const MatchResult& mr);

void write_critical_csv(std::ostream& os, const std::vector<CriticalityRow>& rows);
nlohmann::json critical_table_json(const std::vector<CriticalityRow>& rows);

void write_verify_report(std::ostream& os, const std::vector<VerifyCheck>& checks);
nlohmann::json verify_report_json(const std::vector<VerifyCheck>& checks);

// Phase-portrait data: nullcline polylines and unit direction samples.
struct PortraitConfig {
    bool zu_plane = false;  // false -> Z-v plane
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    int n = 25;
};
void write_portrait_csv(std::ostream& os, const ParamSet& ps, const PortraitConfig& cfg);

// Parse "a:b:n" grid specs.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace implode
