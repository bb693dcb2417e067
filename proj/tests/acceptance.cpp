// Runs the full law battery at the reference configuration and prints one
// line per criterion. Exit status is nonzero if any criterion fails.

#include "ammfd/battery.hpp"

#include <cstdio>
#include <string>

int main()
{
    ammfd::LawBattery battery{ammfd::LawsConfig{}};
    int failed = 0;
    battery.run_all([&](ammfd::CriterionReport const& r) {
        std::string detail;
        for (auto const& t : r.results) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s%s %.4g <= %.4g", detail.empty() ? "" : "; ", t.description.c_str(),
                          t.statistic, t.threshold);
            detail += buf;
        }
        char timing[64];
        if (r.time_limit > 0.0) {
            std::snprintf(timing, sizeof timing, "%.1f s of %.0f s", r.seconds, r.time_limit);
        } else {
            std::snprintf(timing, sizeof timing, "%.1f s", r.seconds);
        }
        std::printf("%s  criterion %-3s %s | %s | %s\n", r.pass() ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                    detail.c_str(), timing);
        std::fflush(stdout);
        failed += r.pass() ? 0 : 1;
    });
    std::printf("%s: %d criteria failed\n", failed == 0 ? "ALL PASS" : "FAILURES", failed);
    return failed == 0 ? 0 : 1;
}
