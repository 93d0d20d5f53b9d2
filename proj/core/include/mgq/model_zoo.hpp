#pragma once

#include <map>
#include <string>

#include "mgq/game.hpp"

namespace mgq {

struct ZooParam {
    std::string name;
    Real default_value;
    std::string doc;
};

struct ZooEntry {
    std::string id;
    std::string description;
    std::vector<ZooParam> params;
};

/// Registry of benchmark games, stable across versions.
const std::vector<ZooEntry>& zoo_entries();

/// Instantiate a zoo game by id; unknown ids or params throw invalid_argument.
ContinuousGame make_zoo_game(const std::string& id,
                             const std::map<std::string, Real>& params = {});

/// Human-readable listing with parameter docs (used by `mgq list-models`).
std::string zoo_listing();

// Truncated-normal helpers shared by zoo kernels and tests.
Real norm_cdf(Real t);
Real norm_pdf(Real t);

} // namespace mgq
