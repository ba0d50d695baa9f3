#include <cstdio>
#include <iostream>

#include "suites.hpp"

int main() {
    int failed = 0;
    for (const auto& c : reslab::suites::acceptance_criteria()) {
        const auto o = c.run();
        std::printf("%s | %s | %.1f s (limit %.0f s) | %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.seconds,
                    o.time_limit, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of 9 criteria failed\n", failed);
    return failed ? 1 : 0;
}
