#pragma once

#include <string>

#include "auctionlab/correlated.hpp"
#include "auctionlab/distribution.hpp"
#include "auctionlab/mechanism.hpp"
#include "auctionlab/myerson.hpp"
#include "auctionlab/search.hpp"

namespace auctionlab {

// All readers parse strictly: unknown fields are rejected, rationals are
// exact "num/den" strings (bare integers accepted), "never" is the price
// sentinel. Writers emit deterministic, human-diffable JSON.

DiscreteDistribution parse_distribution(const std::string& text);
std::string serialize_distribution(const DiscreteDistribution& d);

JointDistribution parse_joint(const std::string& text);
std::string serialize_joint(const JointDistribution& j);

// Accepts either a marginal file (replicated `players` times as an iid
// product) or a joint file, detected by shape.
JointDistribution parse_joint_or_product(const std::string& text, int players);

PaymentGrid parse_grid(const std::string& text);
std::string serialize_grid(const PaymentGrid& g);

std::string serialize_morality_report(const MoralityReport& report);
std::string morality_report_csv(const MoralityReport& report);

std::string serialize_search_result(const SearchResult& result, const std::string& mode,
                                    const Rational& alpha, std::int64_t wall_ms = -1);

std::string serialize_lift_trace(const LiftTrace& trace);

std::string serialize_h_report(const HPropertyReport& report);

std::string serialize_gap_instance(const GapInstance& gap);

// Read a whole file / write atomically (tmp + rename).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace auctionlab
