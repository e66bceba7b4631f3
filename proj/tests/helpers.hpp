#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "driftlag/data.hpp"
#include "driftlag/date.hpp"

namespace testutil {

inline std::string us_short(driftlag::Date d) {
    const auto iso = d.iso();
    const int y = std::stoi(iso.substr(0, 4)) - 2000;
    const int m = std::stoi(iso.substr(5, 2));
    const int day = std::stoi(iso.substr(8, 2));
    return std::to_string(m) + "/" + std::to_string(day) + "/" + std::to_string(y);
}

struct GlobalRow {
    std::string province;
    std::string country;
    std::vector<std::int64_t> values;
};

inline std::string global_csv(const std::vector<GlobalRow>& rows, driftlag::Date start) {
    std::string out = "Province/State,Country/Region,Lat,Long";
    const std::size_t n = rows.empty() ? 0 : rows.front().values.size();
    for (std::size_t i = 0; i < n; ++i) out += "," + us_short(start + static_cast<int>(i));
    out += "\n";
    for (const auto& r : rows) {
        out += r.province + "," + r.country + ",0.0,0.0";
        for (auto v : r.values) out += "," + std::to_string(v);
        out += "\n";
    }
    return out;
}

struct UsRow {
    std::string county;
    std::string state;
    std::vector<std::int64_t> values;
    std::int64_t population = 0;
};

inline std::string us_csv(const std::vector<UsRow>& rows, driftlag::Date start, bool with_population) {
    std::string out = "UID,iso2,iso3,code3,FIPS,Admin2,Province_State,Country_Region,Lat,Long_,Combined_Key";
    if (with_population) out += ",Population";
    const std::size_t n = rows.empty() ? 0 : rows.front().values.size();
    for (std::size_t i = 0; i < n; ++i) out += "," + us_short(start + static_cast<int>(i));
    out += "\n";
    int uid = 1;
    for (const auto& r : rows) {
        out += std::to_string(uid++) + ",US,USA,840,0," + r.county + "," + r.state + ",US,0,0,\"" + r.county + ", " +
               r.state + ", US\"";
        if (with_population) out += "," + std::to_string(r.population);
        for (auto v : r.values) out += "," + std::to_string(v);
        out += "\n";
    }
    return out;
}

inline std::string meta_header() {
    std::string h = "region";
    for (auto c : driftlag::kRegionMetaColumns) h += "," + std::string(c);
    return h + "\n";
}

inline std::string meta_row(const std::string& region, std::int64_t population, double urban = 0.5) {
    return region + "," + std::to_string(population) + ",100,"+ std::to_string(urban) + ",40000,0.3,4000,500,8.5,2.4\n";
}

}  // namespace testutil
