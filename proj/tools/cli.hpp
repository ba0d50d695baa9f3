#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "reslab/residuecalc.hpp"
#include "reslab/scaledyn.hpp"

namespace reslab::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode { kPass = 0, kUsage = 1, kToleranceFailure = 2 };

// Parses "2", "i", "-i", "0.5+1i", "1e-3i", "0.5-2e-1i".
cplx parse_complex(const std::string& s);

nlohmann::json to_json(cplx v);
nlohmann::json to_json(const ResonanceExpansion& e);
nlohmann::json to_json(const ResidueReport& r);

// Entry point of the `reslab` executable; JSON goes to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reslab::cli
