#pragma once

#include <functional>
#include <string>
#include <vector>

namespace reslab::suites {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double time_limit = 0;  // seconds
};

// The nine acceptance criteria, in order.
Outcome stokes();
Outcome vanishing();
Outcome hadamard_u1();
Outcome einstein_hilbert();
Outcome wodzicki();
Outcome parametrix_cross_check();
Outcome normal_form();
Outcome resonance_fit();
Outcome gamma_and_trace_factor();

// Additional suite exposed through `verify`.
Outcome homogeneity();

struct Suite {
    std::string name;
    std::function<Outcome()> run;
};

std::vector<Suite> acceptance_criteria();
// Named suites for the command line: stokes, vanishing, wodzicki, normalform,
// homogeneity, hadamard, eh, parametrix, resonance, gamma.
const std::vector<Suite>& named_suites();

// Runs f, records wall time, and turns exceptions into failures.
Outcome timed(const std::string& name, double limit, const std::function<Outcome()>& f);

}  // namespace reslab::suites
