#pragma once

#include <string>
#include <utility>
#include <vector>

namespace polycap {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Ordered list of named pass/fail checks. Verification routines never throw
/// on a failed property; they record it here.
struct Report {
    std::vector<Check> checks;

    void add(std::string name, bool passed, std::string detail = {}) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }
    void append(const Report& other, const std::string& prefix = {}) {
        for (const auto& c : other.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
    }
    bool passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
    std::vector<Check> failures() const {
        std::vector<Check> out;
        for (const auto& c : checks) {
            if (!c.passed) out.push_back(c);
        }
        return out;
    }
};

}  // namespace polycap
