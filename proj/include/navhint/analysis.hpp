#ifndef NAVHINT_ANALYSIS_HPP
#define NAVHINT_ANALYSIS_HPP

#include <map>
#include <string>
#include <vector>

#include "navhint/hints.hpp"
#include "navhint/train.hpp"

namespace navhint {

struct AnalysisOptions {
  // A multi-landmark ambiguity clause is TRUE iff all listed landmarks match
  // the claimed category; with any_true, one match suffices.
  bool any_true = false;
};

struct CategoryAccuracy {
  int total = 0;
  int correct = 0;

  double fraction() const { return total == 0 ? 0.0 : double(correct) / total; }
  bool operator==(const CategoryAccuracy&) const = default;
};

struct AmbiguityAccuracy {
  std::map<AmbiguityCategory, CategoryAccuracy> per_category;
  int invalid = 0;  // malformed clauses, counted as false

  double overall() const;
  bool operator==(const AmbiguityAccuracy&) const = default;
};

// {exact phrase, object token} matching x {right action, wrong action}.
struct DistinctiveAccuracy {
  CategoryAccuracy exact_right, exact_wrong;
  CategoryAccuracy object_right, object_wrong;

  bool operator==(const DistinctiveAccuracy&) const = default;
};

struct HintQualityReport {
  double bleu1 = 0, bleu4 = 0;
  AmbiguityAccuracy ambiguity;
  DistinctiveAccuracy distinctive;
  int steps_evaluated = 0;  // steps with a ground-truth target view
  int parse_failures = 0;   // generated hints whose sub clause did not parse

  bool operator==(const HintQualityReport&) const = default;
};

// Corpus BLEU over the sub-instruction clause only; generated hints that fail
// to parse contribute empty candidates.
std::pair<double, double> sub_instruction_bleu(
    const std::vector<GeneratedStep>& steps);

AmbiguityAccuracy ambiguity_accuracy(const std::vector<GeneratedStep>& steps,
                                     const std::vector<Episode>& episodes,
                                     const std::map<std::string, World>& worlds,
                                     const AnalysisOptions& options = {});

DistinctiveAccuracy distinctive_accuracy(
    const std::vector<GeneratedStep>& steps,
    const std::vector<Episode>& episodes,
    const std::map<std::string, World>& worlds);

HintQualityReport analyze_hints(const std::vector<GeneratedStep>& steps,
                                const std::vector<Episode>& episodes,
                                const std::map<std::string, World>& worlds,
                                const AnalysisOptions& options = {});

std::string hint_quality_report_to_json(const HintQualityReport& report);
HintQualityReport hint_quality_report_from_json(const std::string& text);

// Deterministic SVG bar charts of the two accuracy breakdowns.
std::string ambiguity_accuracy_svg(const AmbiguityAccuracy& acc);
std::string distinctive_accuracy_svg(const DistinctiveAccuracy& acc);

}  // namespace navhint

#endif
