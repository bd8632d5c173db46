#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace symtrace {

inline constexpr const char* kVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Deviation };

inline std::string status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Deviation: return "deviation";
    }
    return "?";
}

struct Check {
    std::string id;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
};

/// Outcome of one verification run. A deviation marks an exact computation that contradicts a
/// reference display; it only counts as a failure under strict mode.
struct RunReport {
    std::string version = kVersion;
    int k = 0;
    std::string suite;
    std::vector<Check> checks;

    void add(std::string id, bool ok, std::string detail = {}) {
        checks.push_back({std::move(id), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)});
    }
    /// Pass when the display agrees with the computation, deviation otherwise.
    void display(std::string id, bool agrees, std::string detail) {
        checks.push_back({std::move(id), agrees ? CheckStatus::Pass : CheckStatus::Deviation,
                          agrees ? std::string() : std::move(detail)});
    }

    [[nodiscard]] int count(CheckStatus s) const {
        return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const Check& c) { return c.status == s; }));
    }
    [[nodiscard]] bool passed(bool strict) const {
        return count(CheckStatus::Fail) == 0 && (!strict || count(CheckStatus::Deviation) == 0);
    }
    [[nodiscard]] int exit_status(bool strict) const { return passed(strict) ? 0 : 2; }

    [[nodiscard]] json to_json(bool strict) const {
        json cs = json::array();
        for (const auto& c : checks) cs.push_back({{"id", c.id}, {"status", status_name(c.status)}, {"detail", c.detail}});
        return {{"schema", kSchema},
                {"version", version},
                {"k", k},
                {"suite", suite},
                {"strict_paper", strict},
                {"checks", cs},
                {"summary",
                 {{"pass", count(CheckStatus::Pass)}, {"fail", count(CheckStatus::Fail)}, {"deviation", count(CheckStatus::Deviation)}}},
                {"exit_status", exit_status(strict)}};
    }

    [[nodiscard]] std::string text(bool strict) const {
        std::size_t w = 2;
        for (const auto& c : checks) w = std::max(w, c.id.size());
        std::ostringstream os;
        os << "suite " << suite << "  k=" << k << "  version " << version << "\n";
        for (const auto& c : checks) {
            std::string st = status_name(c.status);
            st.resize(10, ' ');
            std::string id = c.id;
            id.resize(w, ' ');
            os << st << id;
            if (!c.detail.empty()) os << "  " << c.detail;
            os << "\n";
        }
        os << count(CheckStatus::Pass) << " pass, " << count(CheckStatus::Fail) << " fail, " << count(CheckStatus::Deviation)
           << " deviation" << (strict ? " (strict)" : "") << "\n";
        return os.str();
    }
};

}  // namespace symtrace
