#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voteknap {

// One candidate ensemble member: individual accuracy and execution cost.
struct Classifier {
  std::string id;
  double accuracy = 0.0;  // probability of a correct individual decision, in [0,1]
  double time = 0.0;      // execution cost, arbitrary consistent units, >= 0
};

// An ordered, validated pool of candidate members with distinct ids.
// Default construction yields an empty placeholder (for request structs that
// are filled in later); every pool built from data has at least one member.
class ClassifierPool {
 public:
  ClassifierPool() = default;
  explicit ClassifierPool(std::vector<Classifier> members);

  std::size_t size() const { return members_.size(); }
  const Classifier& at(std::size_t i) const { return members_.at(i); }
  const std::vector<Classifier>& members() const { return members_; }

  std::optional<std::size_t> index_of(std::string_view id) const;

  std::vector<double> accuracies() const;
  double total_time() const;

 private:
  std::vector<Classifier> members_;
};

}  // namespace voteknap
