// Acceptance-criterion reporter: collects sub-checks and prints one
// pass/fail line per criterion, while still registering failures with the
// test framework.

#pragma once

#include <cstdio>
#include <string>

#include <doctest.h>

namespace fluxchain::testing {

class Criterion {
public:
    Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {}

    ~Criterion()
    {
        std::printf("criterion %d (%s): %s\n", id_, name_.c_str(),
                    ok_ ? "PASS" : "FAIL");
        std::fflush(stdout);
    }

    void expect(bool condition, const std::string& what)
    {
        if (!condition) {
            ok_ = false;
            std::printf("  [criterion %d] FAILED: %s\n", id_, what.c_str());
            std::fflush(stdout);
        }
        CHECK_MESSAGE(condition, what);
    }

    void note(const std::string& what)
    {
        std::printf("  [criterion %d] %s\n", id_, what.c_str());
        std::fflush(stdout);
    }

    bool ok() const { return ok_; }

private:
    int id_;
    std::string name_;
    bool ok_ = true;
};

inline std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace fluxchain::testing
