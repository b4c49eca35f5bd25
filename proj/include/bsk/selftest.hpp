#pragma once

#include <string>
#include <vector>

// Exact symbolic invariants of the poly/s3 layers: structure constants,
// integration by parts, curl self-adjointness, div o curl = 0, orientation.
// Everything here is checked in exact rational arithmetic (or to machine eps
// where floating geometry is involved).

namespace bsk::selftest {

struct Result {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Result> run_all();

bool all_pass(const std::vector<Result>& results);

}  // namespace bsk::selftest
