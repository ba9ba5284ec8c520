#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "xproject/eval.hpp"

// Brute-force reference implementations of every reported metric, written
// from the definitions without looking at the library code: each number
// comes from a fresh scan over the predictions. Slow on purpose; the point
// is that a second, independent derivation agrees to 1e-12.
namespace testsupport::oracle {

struct ClassNumbers {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ReportNumbers {
  std::map<std::string, ClassNumbers> per_class;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double accuracy = 0.0;
};

ReportNumbers intent_numbers(
    const std::vector<xproject::eval::IntentPrediction>& preds);

ReportNumbers slot_numbers(
    const std::vector<xproject::eval::SlotPrediction>& preds);

// [gold][pred] over the sorted union of labels, same layout the library
// promises.
std::map<std::string, std::map<std::string, std::size_t>> confusion_numbers(
    const std::vector<xproject::eval::IntentPrediction>& preds);

std::array<std::pair<std::size_t, std::size_t>, 10> histogram_numbers(
    const std::vector<xproject::eval::IntentPrediction>& preds);

}  // namespace testsupport::oracle
