#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace auctionlab {

// The full verification table: the exact optimum equalities and the property
// batteries, at desk scale. `quick` shrinks sample counts and skips the
// largest search so the table finishes in well under a minute.
struct ReproduceOptions {
    bool quick = false;
    int threads = 0;
    std::string gap_instance_file;  // optional correlated gap-instance input
};

struct CriterionResult {
    std::string name;
    bool pass = false;
    bool vacuous = false;  // conditional criterion with nothing to check
    std::string detail;
    double seconds = 0.0;
};

// Runs every criterion, streaming one line per criterion to `out`.
// Returns the per-criterion results; overall success = all pass.
std::vector<CriterionResult> run_reproduction(const ReproduceOptions& options, std::ostream& out);

}  // namespace auctionlab
