#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cyl {

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    }
    return "?";
}

struct LawResult {
    std::string law;
    Status status = Status::Pass;
    std::string witness;  // counterexample on failure, reason when skipped
    std::uint64_t checked = 0;
};

struct Report {
    std::vector<LawResult> results;
    std::map<std::string, std::uint64_t> counters;

    bool ok() const {
        return std::none_of(results.begin(), results.end(), [](auto& r) { return r.status == Status::Fail; });
    }
    LawResult& law(const std::string& name) {
        for (auto& r : results)
            if (r.law == name) return r;
        results.push_back(LawResult{name, Status::Pass, {}, 0});
        return results.back();
    }
    // Counts one check under `name`; the first failure keeps its witness.
    void check(const std::string& name, bool holds, const std::string& witness = {}) {
        auto& r = law(name);
        ++r.checked;
        if (!holds && r.status != Status::Fail) {
            r.status = Status::Fail;
            r.witness = witness;
        }
    }
    void skip(const std::string& name, const std::string& reason) {
        auto& r = law(name);
        if (r.checked == 0) {
            r.status = Status::Skipped;
            r.witness = reason;
        }
    }
    void pass(const std::string& name, std::uint64_t checked = 1) {
        auto& r = law(name);
        r.checked += checked;
    }
    void fail(const std::string& name, const std::string& witness) { check(name, false, witness); }
    void merge(const Report& other, const std::string& prefix = {}) {
        for (auto& r : other.results) {
            auto copy = r;
            copy.law = prefix + r.law;
            results.push_back(std::move(copy));
        }
        for (auto& [k, v] : other.counters) counters[prefix + k] += v;
    }
    const LawResult* find(const std::string& name) const {
        for (auto& r : results)
            if (r.law == name) return &r;
        return nullptr;
    }
};

}  // namespace cyl
