#include "voteknap/classifier.hpp"

#include <unordered_set>

#include "voteknap/errors.hpp"

namespace voteknap {

ClassifierPool::ClassifierPool(std::vector<Classifier> members)
    : members_(std::move(members)) {
  if (members_.empty())
    throw invalid_input_error("pool must contain at least one classifier");
  std::unordered_set<std::string> seen;
  for (const auto& c : members_) {
    if (c.id.empty()) throw invalid_input_error("classifier id must be nonempty");
    if (!seen.insert(c.id).second)
      throw invalid_input_error("duplicate classifier id \"" + c.id + "\"");
    if (!(c.accuracy >= 0.0 && c.accuracy <= 1.0))
      throw invalid_input_error("classifier \"" + c.id + "\": accuracy must lie in [0,1]");
    if (!(c.time >= 0.0))
      throw invalid_input_error("classifier \"" + c.id + "\": time must be nonnegative");
  }
}

std::optional<std::size_t> ClassifierPool::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].id == id) return i;
  return std::nullopt;
}

std::vector<double> ClassifierPool::accuracies() const {
  std::vector<double> out;
  out.reserve(members_.size());
  for (const auto& c : members_) out.push_back(c.accuracy);
  return out;
}

double ClassifierPool::total_time() const {
  double t = 0.0;
  for (const auto& c : members_) t += c.time;
  return t;
}

}  // namespace voteknap
