#pragma once
// Mixed-integer formulations of the ordered median tree location problem.
//
// Every model minimizes
//
//   (1/sum(lambda)) * sum_l lambda_l * d_(l)  +  (1/(p-1)) * (tree cost)
//
// where d_(1) <= ... <= d_(n) are the sorted client allocation costs.  Two
// families are built:
//
//   F1: the tree spans the p facilities (tree cost = sum of its edges);
//   F2: a single tree spans all nodes and contains every client-facility
//       allocation edge; the tree cost is recovered by subtracting the
//       allocation edges from the spanning tree, so the objective carries
//       negative allocation-edge terms.
//
// Sorting is expressed either through position-indexed allocation copies
// (scheme XL: variables xs_l_i_j with linking, fill and ordering rows) or
// through covering counters (scheme U: variables u_l_h over the ladder of
// distinct nonzero cost values, with counting and monotonicity rows).
//
// The abstract requirement "z is a spanning tree" always contributes the
// cardinality row plus edge-domination rows as a placeholder block; a
// concrete realization (MTZ orderings, single-commodity flows with chosen
// or fixed root, rooted-arborescence systems, or lazily separated subtour
// cuts) adds its own variables and rows on top, tagged separately so the
// structural core can be sized independently of the realization.

#include <string>
#include <vector>

#include "omt/covering.hpp"
#include "omt/graph_cuts.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"

namespace omt {

enum class Family { F1, F2 };
enum class SortingScheme { XL, U };
enum class TreeScheme { SUB, MTZ, FLOW1, FLOW2, KM };

struct BuildOptions {
  Family family = Family::F1;
  SortingScheme sorting = SortingScheme::XL;
  TreeScheme tree = TreeScheme::SUB;
  // XL only: replace the n-1 aggregated ordering rows by the stronger
  // staircase family (one row per rank and ladder value).
  bool staircase = false;
  // U only: redundant within-rank chain rows u_{l,h} >= u_{l,h+1}; kept by
  // default but tagged so size accounting excludes them.
  bool redundant_chain = true;
  // F2 only: write "allocate only to open, never from open" as two rows
  // instead of the merged form 2 x_ij <= 1 - x_ii + x_jj.
  bool split_assign_open = false;
  // Decomposition master shape: drop all tree variables and rows and add a
  // nonnegative surrogate mu to the objective (F1 only).
  bool with_mu = false;
};

const char* family_name(Family f);
const char* sorting_name(SortingScheme s);
const char* tree_name(TreeScheme t);
Family parse_family(const std::string& s);
SortingScheme parse_sorting(const std::string& s);
TreeScheme parse_tree(const std::string& s);

// Closed-form size of the structural part (allocation + tree-placeholder +
// sorting; realization machinery excluded).  H is the ladder size, ignored
// for XL.  Matches Model::structural_var_count / core_row_count of a model
// built with default options.
struct SizePrediction {
  long long variables = 0;
  long long constraints = 0;
};
SizePrediction predicted_size(Family family, SortingScheme sorting, int n,
                              int H);

// Build the full model for an instance.  Validates the instance first.
Model build_model(const Instance& inst, const BuildOptions& opts);

// Short identifier like "f1_xl_mtz" used in file names and run records.
std::string scheme_name(const BuildOptions& opts);

// Embed a feasible combinatorial solution as a point of the model: every
// variable of the model receives its value (allocation, tree, sorting
// copies or covering counters, realization orientations/levels/flows, and
// the surrogate for master models).  The point satisfies all rows of the
// model and matches the instance objective exactly.
std::vector<double> lift_solution(const Model& m, const Instance& inst,
                                  const Solution& sol);

// Append a lazily separated row to a model (n is the instance size).
// Subtour form: sum of z inside the subset <= |subset| - 1.
void add_subtour_row(Model& m, int n, const std::vector<int>& subset);
// Connection form: allocations leaving/entering the subset plus tree edges
// across it must be at least one.
void add_connection_row(Model& m, int n, const std::vector<int>& subset);

}  // namespace omt
