#pragma once

#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

// Brute-force reference implementations used to check the library.
namespace carmc::testing {

using Edge = std::pair<std::string, std::string>;

/// Every permutation of `nodes` that respects every edge.
std::vector<std::vector<std::string>> all_linear_extensions(
    std::vector<std::string> nodes, const std::vector<Edge>& edges);

bool respects(const std::vector<std::string>& order, const std::vector<Edge>& edges);

/// The and-join network built literally: one column per interleaving of
/// `events`, one cell per prefix, equal cells merged.
struct JoinNetwork {
  std::set<std::set<std::string>> cells;
  /// (from cell, occurring event, to cell)
  std::set<std::tuple<std::set<std::string>, std::string, std::set<std::string>>> links;
};

JoinNetwork enumerate_join_network(std::vector<std::string> events);

}  // namespace carmc::testing
