#pragma once

#include <string>
#include <vector>

#include "catnorm/schema.hpp"

namespace catnorm::testing {

std::string read_file(const std::string& path);
/// Loads a schema from the test data directory.
Schema load_data(const std::string& name);

/// Closure by repeated single-rule firing; deliberately naive.
AttrSet naive_closure(const AttrSet& seed, const std::vector<FD>& fds);

/// All (source, target) pairs of a graph, rendered "S->T".
std::vector<std::string> arrow_pairs(const CategoryGraph& g);

AttrSet set_of(std::initializer_list<const char*> names);

}  // namespace catnorm::testing

#include <random>

namespace catnorm::testing {

struct RandomSpec {
    int max_objects = 6;
    int max_fds = 8;
    int max_arrows = 6;
};

/// Random valid schema with mixed object kinds and singleton-rhs FDs.
Schema random_schema(std::mt19937& rng, const RandomSpec& spec = {});

/// Random schema around one relationship of 2..max_projections members with
/// 1..3 MVDs in its context.
Schema random_mvd_schema(std::mt19937& rng, int max_projections = 5);

/// Thinness check by counting.
bool is_thin(const CategoryGraph& g);

}  // namespace catnorm::testing
